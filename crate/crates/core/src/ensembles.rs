//! Random linear codes, the layered s-LDPC ensemble, and brute-force code
//! analytics (membership, codeword enumeration, minimum distance, list sizes).
//!
//! An s-LDPC parity-check matrix is a stack of `t = (1-R)s` independent
//! layers. Each layer is `F * P * D`: `D` scales every coordinate by a
//! uniform nonzero field element, `P` permutes coordinates uniformly, and `F`
//! sums consecutive groups of `s` permuted coordinates into one check. So
//! every check touches exactly `s` coordinates and every coordinate appears in
//! exactly one check per layer.

use std::fmt;
use std::sync::OnceLock;

use num_rational::Rational64;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FieldDoc, FieldSpec};
use crate::linalg::{decode_row, encode_row, kernel_basis, FqMatrix, FqVector};
use crate::montecarlo::{self, Estimate, Rng};
use crate::util::{format_rational, parse_rational};

/// Seeds are 64-bit integers fed to [`montecarlo::rng`]; the sampled code is
/// a pure function of the parameters and the seed.
pub type Seed = u64;

/// Largest codeword count the exhaustive routines will enumerate.
pub const CODEWORD_LIMIT: u128 = 1 << 24;

/// Largest ambient space `q^n` scanned by exhaustive [`max_list_size`].
pub const CENTER_LIMIT: u128 = 1 << 24;

#[derive(Debug, Clone, PartialEq)]
pub struct LdpcEnsembleParams {
    field: FieldSpec,
    n: usize,
    s: usize,
    rate: Rational64,
    t: usize,
}

fn check_rate(rate: Rational64) -> Result<()> {
    if rate <= Rational64::zero() || rate >= Rational64::one() {
        return Err(Error::BadRate(format!("rate {} must lie strictly between 0 and 1", format_rational(&rate))));
    }
    Ok(())
}

impl LdpcEnsembleParams {
    pub fn new(field: &FieldSpec, n: usize, s: usize, rate: Rational64) -> Result<Self> {
        check_rate(rate)?;
        if s == 0 || n == 0 || !n.is_multiple_of(s) {
            return Err(Error::DivisibilityViolation(format!(
                "sparsity s = {s} must divide block length n = {n} so each layer has n/s checks"
            )));
        }
        let t = (Rational64::one() - rate) * Rational64::from_integer(s as i64);
        if !t.is_integer() || t <= Rational64::zero() {
            return Err(Error::DivisibilityViolation(format!(
                "layer count t = (1-R)s = {} must be a positive integer (R = {}, s = {s})",
                format_rational(&t),
                format_rational(&rate)
            )));
        }
        Ok(LdpcEnsembleParams { field: field.clone(), n, s, rate, t: t.to_integer() as usize })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn rate(&self) -> Rational64 {
        self.rate
    }

    pub fn rate_f64(&self) -> f64 {
        crate::util::rational_to_f64(&self.rate)
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn checks_per_layer(&self) -> usize {
        self.n / self.s
    }
}

/// Number of parity checks `(1-R)n` of a random linear code; requires `Rn` integral.
pub fn rlc_check_count(n: usize, rate: Rational64) -> Result<usize> {
    check_rate(rate)?;
    let k = rate * Rational64::from_integer(n as i64);
    if !k.is_integer() {
        return Err(Error::BadRate(format!(
            "R * n = {} * {n} must be an integer",
            format_rational(&rate)
        )));
    }
    Ok(n - k.to_integer() as usize)
}

/// One sampled layer. Check `b` is `sum_{j in perm[b*s..(b+1)*s]} scale[j] x_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layer {
    pub perm: Vec<usize>,
    pub scale: Vec<u32>,
}

impl Layer {
    /// Draws a layer: a Fisher–Yates permutation, then one nonzero scale per coordinate.
    pub fn sample(field: &FieldSpec, n: usize, rng: &mut Rng) -> Layer {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        let q = field.q();
        let scale = (0..n).map(|_| rng.random_range(1..q)).collect();
        Layer { perm, scale }
    }

    /// Whether every check of the layer vanishes on all columns of `rows`
    /// (an n x l matrix given row by row).
    pub fn annihilates(&self, field: &FieldSpec, s: usize, rows: &FqMatrix) -> bool {
        let ell = rows.cols();
        let mut acc = vec![0u32; ell];
        for block in self.perm.chunks(s) {
            acc.iter_mut().for_each(|a| *a = 0);
            for &j in block {
                let d = self.scale[j];
                for (a, &v) in acc.iter_mut().zip(rows.row(j)) {
                    *a = field.add(*a, field.mul(d, v));
                }
            }
            if acc.iter().any(|&a| a != 0) {
                return false;
            }
        }
        true
    }

    fn write_rows(&self, h: &mut FqMatrix, row0: usize, s: usize) {
        for (b, block) in self.perm.chunks(s).enumerate() {
            for &j in block {
                h.set(row0 + b, j, self.scale[j]);
            }
        }
    }
}

/// A linear code given by its parity-check matrix.
#[derive(Clone)]
pub struct LinearCode {
    field: FieldSpec,
    n: usize,
    /// Row sparsity for LDPC codes, 0 for random linear codes.
    s: usize,
    rate: Rational64,
    seed: Seed,
    h: FqMatrix,
    sparse_rows: Vec<Vec<(usize, u32)>>,
    k: usize,
    generator: OnceLock<FqMatrix>,
}

impl PartialEq for LinearCode {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.n == other.n
            && self.s == other.s
            && self.rate == other.rate
            && self.seed == other.seed
            && self.h == other.h
    }
}

impl fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LinearCode")
            .field("field", &self.field)
            .field("n", &self.n)
            .field("s", &self.s)
            .field("rate", &format_rational(&self.rate))
            .field("seed", &self.seed)
            .field("k", &self.k)
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
struct CodeDoc {
    field: FieldDoc,
    n: usize,
    s: usize,
    rate: String,
    seed: u64,
    h: Vec<String>,
}

impl LinearCode {
    /// Wraps a parity-check matrix. `s` is recorded as metadata only.
    pub fn from_parity_check(h: FqMatrix, s: usize, rate: Rational64, seed: Seed) -> Self {
        let sparse_rows = (0..h.rows())
            .map(|r| h.row(r).iter().enumerate().filter(|(_, &v)| v != 0).map(|(j, &v)| (j, v)).collect())
            .collect();
        let k = h.cols() - h.rank();
        LinearCode {
            field: h.field().clone(),
            n: h.cols(),
            s,
            rate,
            seed,
            h,
            sparse_rows,
            k,
            generator: OnceLock::new(),
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn rate(&self) -> Rational64 {
        self.rate
    }

    pub fn seed(&self) -> Seed {
        self.seed
    }

    pub fn parity_check(&self) -> &FqMatrix {
        &self.h
    }

    /// Actual dimension `n - rank(H)`; may exceed `Rn`.
    pub fn dimension(&self) -> usize {
        self.k
    }

    /// Columns form a basis of the code.
    pub fn generator(&self) -> &FqMatrix {
        self.generator.get_or_init(|| kernel_basis(&self.h))
    }

    pub fn contains(&self, v: &FqVector) -> Result<bool> {
        if v.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: v.len() });
        }
        Ok(self.contains_raw(v.entries()))
    }

    fn contains_raw(&self, v: &[u32]) -> bool {
        let f = &self.field;
        self.sparse_rows
            .iter()
            .all(|row| row.iter().fold(0, |acc, &(j, c)| f.add(acc, f.mul(c, v[j]))) == 0)
    }

    /// Whether every column of the `n x l` matrix `m` is a codeword.
    pub fn contains_matrix(&self, m: &FqMatrix) -> Result<bool> {
        if m.rows() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: m.rows() });
        }
        Ok(m.columns().iter().all(|c| self.contains_raw(c.entries())))
    }

    /// Number of codewords, `q^k`, if it fits in a `u128`.
    pub fn size(&self) -> Option<u128> {
        (self.field.q() as u128).checked_pow(self.k as u32)
    }

    fn check_enumerable(&self, limit: u128) -> Result<()> {
        match self.size() {
            Some(c) if c <= limit => Ok(()),
            _ => Err(Error::CodeTooLarge { q: self.field.q(), k: self.k }),
        }
    }

    /// F_p-basis of the code: `x^j * g_i` for each generator column `g_i`,
    /// where `x^j` is the field element encoded as `p^j`.
    fn prime_generators(&self) -> Vec<Vec<u32>> {
        let g = self.generator();
        let f = &self.field;
        let mut out = Vec::with_capacity(self.k * f.h() as usize);
        for c in 0..g.cols() {
            let col = g.column(c);
            let mut scalar = 1u32;
            for _ in 0..f.h() {
                out.push(col.entries().iter().map(|&e| f.mul(scalar, e)).collect());
                scalar *= f.p();
            }
        }
        out
    }

    /// Every codeword once, in F_p-odometer order over the message space.
    pub fn enumerate_codewords(&self) -> Result<CodewordIter> {
        self.check_enumerable(CODEWORD_LIMIT)?;
        Ok(CodewordIter::new(self))
    }

    /// Calls `f` on every codeword, including zero, without allocating per word.
    pub fn for_each_codeword<F: FnMut(&[u32])>(&self, limit: u128, mut f: F) -> Result<()> {
        self.check_enumerable(limit)?;
        let mut it = CodewordIter::new(self);
        while let Some(w) = it.advance() {
            f(w);
        }
        Ok(())
    }

    fn binary_generators(&self) -> Vec<Vec<u64>> {
        let words = self.n.div_ceil(64);
        self.prime_generators()
            .into_iter()
            .map(|g| {
                let mut packed = vec![0u64; words];
                for (j, &e) in g.iter().enumerate() {
                    if e != 0 {
                        packed[j / 64] |= 1 << (j % 64);
                    }
                }
                packed
            })
            .collect()
    }

    /// Number of codewords of each Hamming weight `0..=n`.
    pub fn weight_distribution(&self) -> Result<Vec<u64>> {
        self.weight_distribution_with_limit(CODEWORD_LIMIT)
    }

    pub fn weight_distribution_with_limit(&self, limit: u128) -> Result<Vec<u64>> {
        self.check_enumerable(limit)?;
        let mut dist = vec![0u64; self.n + 1];
        if self.field.q() == 2 {
            let gens = self.binary_generators();
            let mut cur = vec![0u64; self.n.div_ceil(64)];
            dist[0] += 1;
            for i in 1u64..(1u64 << gens.len()) {
                let g = &gens[i.trailing_zeros() as usize];
                cur.iter_mut().zip(g).for_each(|(c, x)| *c ^= x);
                dist[cur.iter().map(|w| w.count_ones() as usize).sum::<usize>()] += 1;
            }
        } else {
            self.for_each_codeword(limit, |w| dist[w.iter().filter(|&&e| e != 0).count()] += 1)?;
        }
        Ok(dist)
    }

    /// Relative minimum distance and a nonzero codeword attaining it.
    /// By convention a zero-dimensional code has distance 1 and the zero witness.
    pub fn min_distance(&self) -> Result<(f64, FqVector)> {
        self.min_distance_with_limit(CODEWORD_LIMIT)
    }

    pub fn min_distance_with_limit(&self, limit: u128) -> Result<(f64, FqVector)> {
        self.check_enumerable(limit)?;
        let n = self.n;
        if self.k == 0 {
            return Ok((1.0, FqVector::zeros(&self.field, n)));
        }
        let (best, witness) = if self.field.q() == 2 {
            let gens = self.binary_generators();
            let mut cur = vec![0u64; n.div_ceil(64)];
            let mut best = usize::MAX;
            let mut witness = cur.clone();
            for i in 1u64..(1u64 << gens.len()) {
                let g = &gens[i.trailing_zeros() as usize];
                cur.iter_mut().zip(g).for_each(|(c, x)| *c ^= x);
                let w = cur.iter().map(|w| w.count_ones() as usize).sum::<usize>();
                if w < best {
                    best = w;
                    witness.copy_from_slice(&cur);
                }
            }
            let entries = (0..n).map(|j| ((witness[j / 64] >> (j % 64)) & 1) as u32).collect();
            (best, entries)
        } else {
            let mut best = usize::MAX;
            let mut witness = Vec::new();
            self.for_each_codeword(limit, |w| {
                let wt = w.iter().filter(|&&e| e != 0).count();
                if wt > 0 && wt < best {
                    best = wt;
                    witness = w.to_vec();
                }
            })?;
            (best, witness)
        };
        Ok((best as f64 / n as f64, FqVector::new(&self.field, witness)))
    }

    /// Number of codewords within relative distance `alpha` of `center`.
    pub fn list_size_at(&self, center: &FqVector, alpha: f64) -> Result<usize> {
        if center.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: center.len() });
        }
        let r = radius(self.n, alpha);
        let mut count = 0;
        self.for_each_codeword(CODEWORD_LIMIT, |w| {
            if w.iter().zip(center.entries()).filter(|(a, b)| a != b).count() <= r {
                count += 1;
            }
        })?;
        Ok(count)
    }

    pub fn to_json(&self) -> String {
        let doc = CodeDoc {
            field: self.field.to_doc(),
            n: self.n,
            s: self.s,
            rate: format_rational(&self.rate),
            seed: self.seed,
            h: (0..self.h.rows()).map(|r| encode_row(&self.field, self.h.row(r))).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("code serializes") + "\n"
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: CodeDoc = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let field = FieldSpec::from_doc(&doc.field)?;
        let rate = parse_rational(&doc.rate).ok_or_else(|| Error::Parse(format!("bad rate {:?}", doc.rate)))?;
        let rows = doc.h.iter().map(|r| decode_row(&field, r)).collect::<Result<Vec<_>>>()?;
        let h = if rows.is_empty() { FqMatrix::zeros(&field, 0, doc.n) } else { FqMatrix::from_rows(&field, &rows)? };
        if h.cols() != doc.n {
            return Err(Error::LengthMismatch { expected: doc.n, got: h.cols() });
        }
        Ok(LinearCode::from_parity_check(h, doc.s, rate, doc.seed))
    }
}

/// Largest integer number of errors within relative radius `alpha` of `n`.
pub fn radius(n: usize, alpha: f64) -> usize {
    ((alpha * n as f64) + 1e-9).floor().max(0.0) as usize
}

/// Streams all codewords of a code.
pub struct CodewordIter {
    p: u32,
    field: FieldSpec,
    gens: Vec<Vec<u32>>,
    digits: Vec<u32>,
    cur: Vec<u32>,
    started: bool,
    done: bool,
}

impl CodewordIter {
    fn new(code: &LinearCode) -> Self {
        let gens = code.prime_generators();
        CodewordIter {
            p: code.field.p(),
            field: code.field.clone(),
            digits: vec![0; gens.len()],
            gens,
            cur: vec![0; code.n],
            started: false,
            done: false,
        }
    }

    fn advance(&mut self) -> Option<&[u32]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.cur);
        }
        for (d, g) in self.digits.iter_mut().zip(&self.gens) {
            for (c, &x) in self.cur.iter_mut().zip(g) {
                *c = self.field.add(*c, x);
            }
            *d += 1;
            if *d < self.p {
                return Some(&self.cur);
            }
            // p additions of g cancel, so cur is back where this digit started
            *d = 0;
        }
        self.done = true;
        None
    }
}

impl Iterator for CodewordIter {
    type Item = FqVector;

    fn next(&mut self) -> Option<FqVector> {
        let field = self.field.clone();
        self.advance().map(|w| FqVector::new(&field, w.to_vec()))
    }
}

/// Samples a random linear code: `H` has `(1-R)n` rows with i.i.d. uniform entries.
pub fn sample_rlc(n: usize, rate: Rational64, field: &FieldSpec, seed: Seed) -> Result<LinearCode> {
    let m = rlc_check_count(n, rate)?;
    let h = sample_rlc_parity_check(field, m, n, &mut montecarlo::rng(seed, 0));
    Ok(LinearCode::from_parity_check(h, 0, rate, seed))
}

pub fn sample_rlc_parity_check(field: &FieldSpec, rows: usize, n: usize, rng: &mut Rng) -> FqMatrix {
    let q = field.q();
    let data = (0..rows * n).map(|_| rng.random_range(0..q)).collect();
    FqMatrix::from_data(field, rows, n, data).expect("shape is consistent")
}

/// Samples an s-LDPC code from the layered ensemble.
pub fn sample_ldpc(params: &LdpcEnsembleParams, seed: Seed) -> LinearCode {
    let layers = sample_ldpc_layers(params, &mut montecarlo::rng(seed, 0));
    let h = ldpc_parity_check(params, &layers);
    LinearCode::from_parity_check(h, params.s, params.rate, seed)
}

pub fn sample_ldpc_layers(params: &LdpcEnsembleParams, rng: &mut Rng) -> Vec<Layer> {
    (0..params.t).map(|_| Layer::sample(&params.field, params.n, rng)).collect()
}

pub fn ldpc_parity_check(params: &LdpcEnsembleParams, layers: &[Layer]) -> FqMatrix {
    let m = params.checks_per_layer();
    let mut h = FqMatrix::zeros(&params.field, m * layers.len(), params.n);
    for (i, layer) in layers.iter().enumerate() {
        layer.write_rows(&mut h, i * m, params.s);
    }
    h
}

/// Fraction of sampled s-LDPC codes containing every column of `m` (an
/// `n x l` matrix). Trial `i` samples its `t` layers from stream `i`.
pub fn ldpc_containment_mc(m: &FqMatrix, params: &LdpcEnsembleParams, trials: u64, seed: Seed) -> Result<Estimate> {
    check_rows(m, params.field(), params.n())?;
    Ok(montecarlo::estimate(trials, seed, |rng| {
        (0..params.t).all(|_| Layer::sample(&params.field, params.n, rng).annihilates(&params.field, params.s, m))
    }))
}

/// Fraction of sampled random linear codes containing every column of `m`.
pub fn rlc_containment_mc(m: &FqMatrix, rate: Rational64, trials: u64, seed: Seed) -> Result<Estimate> {
    let n = m.rows();
    let rows = rlc_check_count(n, rate)?;
    let field = m.field().clone();
    Ok(montecarlo::estimate(trials, seed, |rng| {
        sample_rlc_parity_check(&field, rows, n, rng).mul(m).expect("shapes agree").is_zero()
    }))
}

fn check_rows(m: &FqMatrix, field: &FieldSpec, n: usize) -> Result<()> {
    if m.field() != field {
        return Err(Error::FieldMismatch);
    }
    if m.rows() != n {
        return Err(Error::LengthMismatch { expected: n, got: m.rows() });
    }
    Ok(())
}

/// Result of a list-size scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ListSizeResult {
    pub size: usize,
    pub center: FqVector,
    /// False when the centers were sampled, making `size` a lower bound.
    pub exhaustive: bool,
}

/// Every error pattern of weight at most `r`, as (position, value) lists.
fn ball_patterns(n: usize, r: usize, q: u32) -> Vec<Vec<(usize, u32)>> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<Vec<(usize, u32)>> = vec![Vec::new()];
    for _ in 0..r {
        let mut next = Vec::new();
        for pat in &frontier {
            let start = pat.last().map_or(0, |&(j, _)| j + 1);
            for j in start..n {
                for v in 1..q {
                    let mut p = pat.clone();
                    p.push((j, v));
                    next.push(p);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn ball_size(n: usize, r: usize, q: u32) -> u128 {
    (0..=r.min(n))
        .map(|i| {
            let c = (0..i).fold(1u128, |acc, j| acc * (n - j) as u128 / (j + 1) as u128);
            c.saturating_mul((q as u128 - 1).saturating_pow(i as u32))
        })
        .fold(0u128, |a, b| a.saturating_add(b))
}

/// Largest number of codewords in a Hamming ball of relative radius `alpha`.
///
/// With `budget = None` every center in F_q^n is tried (requires q^n within
/// [`CENTER_LIMIT`]). With `Some((samples, seed))` centers are drawn as a
/// random codeword plus a random error of weight exactly the radius, and the
/// answer is a lower bound.
pub fn max_list_size(code: &LinearCode, alpha: f64, budget: Option<(u64, Seed)>) -> Result<ListSizeResult> {
    let f = code.field();
    let n = code.n();
    let q = f.q();
    let r = radius(n, alpha);
    code.check_enumerable(CODEWORD_LIMIT)?;
    let space = (q as u128).checked_pow(n as u32);
    match budget {
        None => {
            let space = space.filter(|&s| s <= CENTER_LIMIT).ok_or(Error::CodeTooLarge { q, k: n })?;
            exhaustive_list_size(code, r, space as usize)
        }
        Some((samples, seed)) => sampled_list_size(code, r, samples, seed),
    }
}

fn exhaustive_list_size(code: &LinearCode, r: usize, space: usize) -> Result<ListSizeResult> {
    let f = code.field();
    let n = code.n();
    let q = f.q() as usize;
    let index = |w: &[u32]| w.iter().rev().fold(0usize, |acc, &e| acc * q + e as usize);
    let mut member = vec![false; space];
    let mut words = Vec::new();
    code.for_each_codeword(CODEWORD_LIMIT, |w| {
        member[index(w)] = true;
        words.push(w.to_vec());
    })?;
    let pows: Vec<usize> = (0..n).map(|i| q.pow(i as u32)).collect();
    let use_ball = ball_size(n, r, q as u32) <= words.len() as u128;
    let patterns = if use_ball { ball_patterns(n, r, q as u32) } else { Vec::new() };

    let count_at = |z: usize| -> usize {
        let digits: Vec<u32> = (0..n).map(|i| ((z / pows[i]) % q) as u32).collect();
        if use_ball {
            patterns
                .iter()
                .filter(|pat| {
                    let mut idx = z;
                    for &(j, v) in pat.iter() {
                        let d = digits[j] as usize;
                        idx = idx - d * pows[j] + f.add(digits[j], v) as usize * pows[j];
                    }
                    member[idx]
                })
                .count()
        } else {
            words
                .iter()
                .filter(|w| w.iter().zip(&digits).filter(|(a, b)| a != b).count() <= r)
                .count()
        }
    };

    let (size, z) = (0..space)
        .into_par_iter()
        .map(|z| (count_at(z), z))
        .reduce(|| (0, usize::MAX), |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });
    let center = (0..n).map(|i| ((z / pows[i]) % q) as u32).collect();
    Ok(ListSizeResult { size, center: FqVector::new(f, center), exhaustive: true })
}

fn sampled_list_size(code: &LinearCode, r: usize, samples: u64, seed: Seed) -> Result<ListSizeResult> {
    let f = code.field().clone();
    let n = code.n();
    let q = f.q();
    let g = code.generator().clone();
    let results = montecarlo::map_trials(samples, seed, |_, rng| {
        let mut z = vec![0u32; n];
        for c in 0..g.cols() {
            let a = rng.random_range(0..q);
            for (j, zj) in z.iter_mut().enumerate() {
                *zj = f.add(*zj, f.mul(a, g.get(j, c)));
            }
        }
        let mut pos: Vec<usize> = (0..n).collect();
        pos.shuffle(rng);
        for &j in pos.iter().take(r) {
            z[j] = f.add(z[j], rng.random_range(1..q));
        }
        let center = FqVector::new(&f, z);
        code.list_size_at(&center, r as f64 / n as f64).map(|s| (s, center))
    });
    let mut best: Option<(usize, FqVector)> = None;
    for res in results {
        let (s, c) = res?;
        if best.as_ref().is_none_or(|(b, _)| s > *b) {
            best = Some((s, c));
        }
    }
    let (size, center) = best.unwrap_or((0, FqVector::zeros(&f, n)));
    Ok(ListSizeResult { size, center, exhaustive: false })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32, h: u32) -> FieldSpec {
        FieldSpec::new(p, h).unwrap()
    }

    fn r(a: i64, b: i64) -> Rational64 {
        Rational64::new(a, b)
    }

    #[test]
    fn params_validation() {
        let f2 = f(2, 1);
        assert!(LdpcEnsembleParams::new(&f2, 6, 3, r(1, 3)).is_ok());
        assert!(matches!(
            LdpcEnsembleParams::new(&f2, 7, 3, r(1, 3)),
            Err(Error::DivisibilityViolation(_))
        ));
        assert!(matches!(
            LdpcEnsembleParams::new(&f2, 6, 3, r(1, 2)),
            Err(Error::DivisibilityViolation(_))
        ));
        assert!(matches!(LdpcEnsembleParams::new(&f2, 6, 3, r(1, 1)), Err(Error::BadRate(_))));
        assert!(matches!(sample_rlc(5, r(1, 2), &f2, 0), Err(Error::BadRate(_))));
    }

    #[test]
    fn ldpc_shape_and_regularity() {
        let f2 = f(2, 1);
        let params = LdpcEnsembleParams::new(&f2, 6, 3, r(1, 3)).unwrap();
        let code = sample_ldpc(&params, 11);
        let h = code.parity_check();
        assert_eq!((h.rows(), h.cols()), (4, 6));
        for i in 0..4 {
            assert_eq!(h.row_vector(i).weight(), 3);
        }
        for j in 0..6 {
            assert_eq!(h.column(j).weight(), 2);
        }
        // binary layers carry no scaling
        assert!(h.data().iter().all(|&e| e <= 1));
    }

    #[test]
    fn rlc_dimension_bounds() {
        let f2 = f(2, 1);
        for seed in 0..20 {
            let c = sample_rlc(4, r(1, 2), &f2, seed).unwrap();
            assert_eq!(c.parity_check().rows(), 2);
            assert!((2..=4).contains(&c.dimension()));
        }
    }

    #[test]
    fn membership_basics() {
        let f3 = f(3, 1);
        let code = sample_rlc(8, r(1, 2), &f3, 5).unwrap();
        assert!(code.contains(&FqVector::zeros(&f3, 8)).unwrap());
        for c in code.generator().columns() {
            assert!(code.contains(&c).unwrap());
        }
        assert!(matches!(code.contains(&FqVector::zeros(&f3, 7)), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn enumeration_counts_and_membership() {
        for field in [f(2, 1), f(3, 1), f(2, 2)] {
            let code = sample_rlc(6, r(1, 2), &field, 3).unwrap();
            let words: Vec<FqVector> = code.enumerate_codewords().unwrap().collect();
            assert_eq!(words.len() as u128, code.size().unwrap());
            let distinct: std::collections::HashSet<_> = words.iter().cloned().collect();
            assert_eq!(distinct.len(), words.len());
            assert!(words.iter().all(|w| code.contains(w).unwrap()));
        }
    }

    #[test]
    fn repetition_and_full_space() {
        let f2 = f(2, 1);
        // parity checks x_0 + x_i for i >= 1 define the repetition code
        let n = 5;
        let rows: Vec<Vec<u32>> = (1..n).map(|i| (0..n).map(|j| (j == 0 || j == i) as u32).collect()).collect();
        let rep = LinearCode::from_parity_check(FqMatrix::from_rows(&f2, &rows).unwrap(), 0, r(1, 5), 0);
        let (d, w) = rep.min_distance().unwrap();
        assert_eq!(d, 1.0);
        assert_eq!(w.weight(), 5);
        let full = LinearCode::from_parity_check(FqMatrix::zeros(&f2, 1, n), 0, r(4, 5), 0);
        assert_eq!(full.min_distance().unwrap().0, 1.0 / n as f64);
    }

    #[test]
    fn min_distance_agrees_with_weight_scan() {
        for field in [f(2, 1), f(3, 1)] {
            for seed in 0..5 {
                let code = sample_rlc(10, r(1, 2), &field, seed).unwrap();
                let (d, w) = code.min_distance().unwrap();
                assert!(code.contains(&w).unwrap());
                assert_eq!(w.weight() as f64 / 10.0, d);
                for c in code.enumerate_codewords().unwrap() {
                    if !c.is_zero() {
                        assert!(c.weight() as f64 / 10.0 >= d);
                    }
                }
            }
        }
    }

    #[test]
    fn list_sizes() {
        let f2 = f(2, 1);
        let h = FqMatrix::from_rows(&f2, &[vec![1, 1, 0], vec![1, 0, 1]]).unwrap();
        let rep3 = LinearCode::from_parity_check(h, 0, r(1, 3), 0);
        assert_eq!(max_list_size(&rep3, 0.0, None).unwrap().size, 1);
        assert_eq!(max_list_size(&rep3, 1.0 / 3.0, None).unwrap().size, 1);
        assert_eq!(max_list_size(&rep3, 1.0, None).unwrap().size, 2);
        let code = sample_rlc(8, r(1, 2), &f2, 1).unwrap();
        assert_eq!(max_list_size(&code, 1.0, None).unwrap().size as u128, code.size().unwrap());
        let sampled = max_list_size(&code, 0.25, Some((50, 3))).unwrap();
        let exact = max_list_size(&code, 0.25, None).unwrap();
        assert!(!sampled.exhaustive && exact.exhaustive);
        assert!(sampled.size <= exact.size);
        assert_eq!(code.list_size_at(&exact.center, 0.25).unwrap(), exact.size);
    }

    #[test]
    fn json_round_trip() {
        for field in [f(2, 1), f(3, 2), f(41, 1)] {
            let params = LdpcEnsembleParams::new(&field, 12, 4, r(1, 2)).unwrap();
            let code = sample_ldpc(&params, 99);
            let s = code.to_json();
            let back = LinearCode::from_json(&s).unwrap();
            assert_eq!(back, code);
            assert_eq!(back.to_json(), s);
        }
    }
}
