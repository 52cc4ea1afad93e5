//! Row distributions over F_q^l and the thresholds they induce for random
//! linear codes.
//!
//! A matrix `M` with `n` rows and `l` columns has row distribution
//! `tau(v) = #{rows equal to v} / n`. A random linear code of rate `R`
//! contains some matrix with row distribution `tau` roughly when `R` exceeds
//! `R*(tau)`, the largest expectation threshold `1 - H_q(tau') / d(tau')` over
//! the distributions `tau'` of `A v` (`v ~ tau`, `A` full rank). The
//! distribution of `A v` depends only on `ker A` up to relabeling, so `R*` is
//! a maximum over subspaces of F_q^l.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::Rational64;
use num_traits::{One, Zero};
use rand::seq::IndexedRandom;
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensembles::{sample_rlc_parity_check, rlc_check_count, LinearCode, CODEWORD_LIMIT};
use crate::error::{Error, Result};
use crate::gf::{FieldDoc, FieldSpec};
use crate::linalg::{decode_row, encode_row, enumerate_subspaces, kernel_basis, FqMatrix};
use crate::montecarlo::{self, Estimate};
use crate::util::{big_factorial, big_ln, rational_to_f64};

/// Cap on `q^l` for routines that scan every dual vector.
pub const DUAL_LIMIT: u64 = 1_000_000;

/// Cap on the support size searched by [`is_bad_list`].
pub const BAD_LIST_SUPPORT_LIMIT: usize = 20;

/// Two thresholds closer than this are treated as equal when choosing a maximizer.
const TIE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct RowDistribution {
    ell: usize,
    field: FieldSpec,
    masses: BTreeMap<Vec<u32>, Rational64>,
}

impl RowDistribution {
    /// Builds a distribution; repeated vectors have their masses added.
    pub fn new(field: &FieldSpec, ell: usize, masses: Vec<(Vec<u32>, Rational64)>) -> Result<Self> {
        let q = field.q();
        let mut map: BTreeMap<Vec<u32>, Rational64> = BTreeMap::new();
        for (v, m) in masses {
            if v.len() != ell {
                return Err(Error::InvalidDistribution(format!("vector {v:?} does not have length {ell}")));
            }
            if v.iter().any(|&e| e >= q) {
                return Err(Error::InvalidDistribution(format!("vector {v:?} is not in F_{q}^{ell}")));
            }
            if m <= Rational64::zero() {
                return Err(Error::InvalidDistribution(format!("mass {m} on {v:?} is not positive")));
            }
            *map.entry(v).or_insert_with(Rational64::zero) += m;
        }
        let total: Rational64 = map.values().copied().sum();
        if total != Rational64::one() {
            return Err(Error::InvalidDistribution(format!("masses sum to {total}, not 1")));
        }
        Ok(RowDistribution { ell, field: field.clone(), masses: map })
    }

    pub fn point_mass(field: &FieldSpec, v: Vec<u32>) -> Result<Self> {
        let ell = v.len();
        Self::new(field, ell, vec![(v, Rational64::one())])
    }

    /// Uniform over all of F_q^l.
    pub fn uniform(field: &FieldSpec, ell: usize) -> Result<Self> {
        let q = field.q() as u64;
        let size = dual_space_size(q, ell)?;
        let m = Rational64::new(1, size as i64);
        Self::new(field, ell, (0..size).map(|x| (index_to_vector(x, q as u32, ell), m)).collect())
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn masses(&self) -> &BTreeMap<Vec<u32>, Rational64> {
        &self.masses
    }

    pub fn mass(&self, v: &[u32]) -> Rational64 {
        self.masses.get(v).copied().unwrap_or_else(Rational64::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.masses.keys()
    }

    pub fn support_size(&self) -> usize {
        self.masses.len()
    }

    pub fn is_point_mass_at_zero(&self) -> bool {
        self.masses.len() == 1 && self.masses.keys().next().is_some_and(|v| v.iter().all(|&e| e == 0))
    }

    /// Whether `n * tau(v)` is an integer for every `v`.
    pub fn fits_length(&self, n: u64) -> bool {
        self.masses.values().all(|m| (*m * Rational64::from_integer(n as i64)).is_integer())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("distribution serializes") + "\n"
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: RowDistributionDoc = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_doc(&doc)
    }

    pub fn to_doc(&self) -> RowDistributionDoc {
        RowDistributionDoc {
            ell: self.ell,
            field: self.field.to_doc(),
            masses: self
                .masses
                .iter()
                .map(|(v, m)| MassDoc { vector: encode_row(&self.field, v), num: *m.numer(), den: *m.denom() })
                .collect(),
        }
    }

    pub fn from_doc(doc: &RowDistributionDoc) -> Result<Self> {
        let field = FieldSpec::from_doc(&doc.field)?;
        let masses = doc
            .masses
            .iter()
            .map(|m| {
                if m.den == 0 {
                    return Err(Error::Parse("zero denominator".into()));
                }
                Ok((decode_row(&field, &m.vector)?, Rational64::new(m.num, m.den)))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(&field, doc.ell, masses)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MassDoc {
    pub vector: String,
    pub num: i64,
    pub den: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowDistributionDoc {
    pub ell: usize,
    pub field: FieldDoc,
    pub masses: Vec<MassDoc>,
}

/// `q^l`, guarded by [`DUAL_LIMIT`].
fn dual_space_size(q: u64, ell: usize) -> Result<u64> {
    let size = q.saturating_pow(ell as u32);
    if size > DUAL_LIMIT {
        return Err(Error::TooManyDualVectors(size));
    }
    Ok(size)
}

pub(crate) fn index_to_vector(mut x: u64, q: u32, ell: usize) -> Vec<u32> {
    let mut v = vec![0; ell];
    for e in v.iter_mut() {
        *e = (x % q as u64) as u32;
        x /= q as u64;
    }
    v
}

/// Empirical distribution of the rows of `m`.
pub fn row_distribution_of(m: &FqMatrix) -> RowDistribution {
    let n = m.rows() as i64;
    let mut counts: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
    for r in 0..m.rows() {
        *counts.entry(m.row(r).to_vec()).or_default() += 1;
    }
    let masses = counts.into_iter().map(|(v, c)| (v, Rational64::new(c, n))).collect();
    RowDistribution { ell: m.cols(), field: m.field().clone(), masses }
}

/// `log_q(num / den)`, exact for powers of two when q is a power of two.
fn log_q_ratio(r: &Rational64, field: &FieldSpec) -> f64 {
    let (num, den) = (*r.numer() as f64, *r.denom() as f64);
    if field.p() == 2 {
        (num.log2() - den.log2()) / field.h() as f64
    } else {
        (num.ln() - den.ln()) / (field.q() as f64).ln()
    }
}

/// `H_q(tau) = -sum tau(v) log_q tau(v)`.
pub fn entropy_q(tau: &RowDistribution) -> f64 {
    -tau.masses.values().map(|m| rational_to_f64(m) * log_q_ratio(m, &tau.field)).sum::<f64>()
}

fn support_matrix(tau: &RowDistribution) -> FqMatrix {
    let rows: Vec<Vec<u32>> = tau.masses.keys().cloned().collect();
    if rows.is_empty() {
        return FqMatrix::zeros(&tau.field, 0, tau.ell);
    }
    FqMatrix::from_rows(&tau.field, &rows).expect("support vectors share a length")
}

/// `d(tau)`, the dimension of the span of the support.
pub fn span_dim(tau: &RowDistribution) -> usize {
    support_matrix(tau).rank()
}

/// Exact `min_{u != 0} Pr_{v ~ tau}[<u, v> != 0]`.
pub fn smoothness_exact(tau: &RowDistribution) -> Result<Rational64> {
    let q = tau.field.q() as u64;
    let size = dual_space_size(q, tau.ell)?;
    let f = &tau.field;
    let support: Vec<(&Vec<u32>, Rational64)> = tau.masses.iter().map(|(v, m)| (v, *m)).collect();
    let mut best = Rational64::one();
    for x in 1..size {
        let u = index_to_vector(x, q as u32, tau.ell);
        let p: Rational64 = support
            .iter()
            .filter(|(v, _)| crate::linalg::dot(f, &u, v) != 0)
            .map(|(_, m)| *m)
            .sum();
        if p < best {
            best = p;
        }
    }
    Ok(best)
}

pub fn smoothness(tau: &RowDistribution) -> Result<f64> {
    smoothness_exact(tau).map(|r| rational_to_f64(&r))
}

/// The distribution of `A v` for `v ~ tau`, where `A` is a full-rank matrix
/// with kernel `kernel` (given by any basis, one vector per row). The rows
/// of `A` are the RREF-derived basis of the annihilator of `kernel`.
pub fn implied_distribution(tau: &RowDistribution, kernel: &FqMatrix) -> Result<RowDistribution> {
    if kernel.cols() != tau.ell {
        return Err(Error::LengthMismatch { expected: tau.ell, got: kernel.cols() });
    }
    let a = annihilator(kernel);
    if a.rows() == 0 {
        return Err(Error::KernelFullSpace);
    }
    let f = &tau.field;
    let mut masses: BTreeMap<Vec<u32>, Rational64> = BTreeMap::new();
    for (v, m) in &tau.masses {
        let image: Vec<u32> = (0..a.rows()).map(|r| crate::linalg::dot(f, a.row(r), v)).collect();
        *masses.entry(image).or_insert_with(Rational64::zero) += *m;
    }
    Ok(RowDistribution { ell: a.rows(), field: f.clone(), masses })
}

/// Rows spanning `{a : <a, w> = 0 for all w in span(kernel)}`.
fn annihilator(kernel: &FqMatrix) -> FqMatrix {
    kernel_basis(kernel).transpose()
}

/// `R^E(tau) = 1 - H_q(tau) / d(tau)`.
pub fn expectation_threshold(tau: &RowDistribution) -> Result<f64> {
    let d = span_dim(tau);
    if d == 0 {
        return Err(Error::DegenerateDistribution);
    }
    Ok(1.0 - entropy_q(tau) / d as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdReport {
    pub expectation_threshold: f64,
    pub rstar: f64,
    /// RREF basis of the maximizing kernel; zero rows means the identity map.
    pub kernel: FqMatrix,
    pub implied: RowDistribution,
}

#[derive(Serialize)]
struct ThresholdReportDoc {
    expectation_threshold: f64,
    rstar: f64,
    kernel: Vec<String>,
    implied: RowDistributionDoc,
}

impl ThresholdReport {
    pub fn to_json_value(&self) -> serde_json::Value {
        let f = self.kernel.field();
        let doc = ThresholdReportDoc {
            expectation_threshold: self.expectation_threshold,
            rstar: self.rstar,
            kernel: (0..self.kernel.rows()).map(|r| encode_row(f, self.kernel.row(r))).collect(),
            implied: self.implied.to_doc(),
        };
        serde_json::to_value(doc).expect("report serializes")
    }
}

/// Maximizes `R^E` over all implied distributions. Kernels containing the
/// whole support produce a point mass at zero, whose threshold is undefined;
/// those are skipped. Ties keep the first kernel in enumeration order
/// (smallest dimension first).
pub fn rstar(tau: &RowDistribution) -> Result<ThresholdReport> {
    let re = expectation_threshold(tau)?;
    let mut best: Option<(f64, FqMatrix, RowDistribution)> = None;
    for kernel in enumerate_subspaces(tau.ell, &tau.field)? {
        if kernel.rows() == tau.ell {
            continue;
        }
        let implied = implied_distribution(tau, &kernel)?;
        let Ok(value) = expectation_threshold(&implied) else {
            continue;
        };
        if best.as_ref().is_none_or(|(b, _, _)| value > b + TIE_EPS) {
            best = Some((value, kernel, implied));
        }
    }
    let (rstar, kernel, implied) = best.expect("the identity kernel is always admissible");
    Ok(ThresholdReport { expectation_threshold: re, rstar, kernel, implied })
}

/// Counting data for matrices with a prescribed row distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct ContainmentCount {
    /// `|M_{n,tau}| = n! / prod_v (tau(v) n)!`.
    pub count: BigUint,
    pub log_q_count: f64,
    /// `log_q` of the expected number of such matrices in a random linear code.
    pub log_q_expected: f64,
    pub expected: f64,
    /// `min(1, expected)`.
    pub union_bound: f64,
}

/// Exact `|M_{n,tau}|` and the first-moment bound on the probability that a
/// random linear code of rate `rate` contains one of them.
pub fn prob_rlc_contains(tau: &RowDistribution, n: u64, rate: f64) -> Result<ContainmentCount> {
    if !tau.fits_length(n) {
        return Err(Error::NotInLtau(n));
    }
    let mut count = big_factorial(n);
    for m in tau.masses.values() {
        let c = (*m * Rational64::from_integer(n as i64)).to_integer() as u64;
        count /= big_factorial(c);
    }
    let lnq = (tau.field.q() as f64).ln();
    let log_q_count = big_ln(&count) / lnq;
    let d = span_dim(tau) as f64;
    let log_q_expected = log_q_count - (1.0 - rate) * d * n as f64;
    let expected = (log_q_expected * lnq).exp();
    Ok(ContainmentCount { count, log_q_count, log_q_expected, expected, union_bound: expected.min(1.0) })
}

/// Whether every matrix with row distribution `tau` has `l` distinct columns
/// lying in a common Hamming ball of relative radius `alpha`. Returns the
/// center as a map from support vectors to center symbols, in support order.
pub fn is_bad_list(tau: &RowDistribution, alpha: f64) -> Result<Option<Vec<u32>>> {
    let size = tau.support_size();
    if size > BAD_LIST_SUPPORT_LIMIT {
        return Err(Error::SupportTooLarge { size, limit: BAD_LIST_SUPPORT_LIMIT });
    }
    let ell = tau.ell;
    let support: Vec<(&Vec<u32>, f64)> = tau.masses.iter().map(|(v, m)| (v, rational_to_f64(m))).collect();
    for j in 0..ell {
        for j2 in j + 1..ell {
            if support.iter().all(|(v, _)| v[j] == v[j2]) {
                return Ok(None);
            }
        }
    }
    // a center symbol outside {v_1..v_l} is never better than one inside
    let candidates: Vec<Vec<u32>> = support
        .iter()
        .map(|(v, _)| {
            let mut c = (*v).clone();
            c.sort_unstable();
            c.dedup();
            c
        })
        .collect();
    let mut dist = vec![0.0f64; ell];
    let mut assign = vec![0u32; size];
    let tol = 1e-12;

    fn search(
        i: usize,
        support: &[(&Vec<u32>, f64)],
        candidates: &[Vec<u32>],
        dist: &mut [f64],
        assign: &mut [u32],
        alpha: f64,
        tol: f64,
    ) -> bool {
        if i == support.len() {
            return true;
        }
        let (v, m) = support[i];
        for &a in &candidates[i] {
            let mut ok = true;
            for (j, d) in dist.iter_mut().enumerate() {
                if v[j] != a {
                    *d += m;
                    ok &= *d <= alpha + tol;
                }
            }
            if ok {
                assign[i] = a;
                if search(i + 1, support, candidates, dist, assign, alpha, tol) {
                    return true;
                }
            }
            for (j, d) in dist.iter_mut().enumerate() {
                if v[j] != a {
                    *d -= m;
                }
            }
        }
        false
    }

    Ok(search(0, &support, &candidates, &mut dist, &mut assign, alpha, tol).then_some(assign))
}

/// Outcome of [`listdec_threshold_search`]. `rstar` upper-bounds the rate at
/// which random linear codes stop being `(alpha, L)`-list-decodable.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdSearchResult {
    pub tau: RowDistribution,
    pub rstar: f64,
    pub report: ThresholdReport,
    pub evaluated: u64,
}

/// Grid denominator for masses explored by the search.
const SEARCH_DENOMINATOR: i64 = 60;

/// Heuristic search for a bad-list distribution over F_q^{L+1} with small
/// `R*`. Each restart grows a distribution from a point mass at zero by
/// moving grid units onto random vectors, then runs unit-transfer local
/// search that keeps the bad-list property. Restarts run in parallel with
/// per-restart streams; the winner is the smallest `R*`, then the
/// lexicographically smallest support.
pub fn listdec_threshold_search(
    field: &FieldSpec,
    alpha: f64,
    list_size: usize,
    support_cap: usize,
    iterations: u64,
    seed: u64,
) -> Result<ThresholdSearchResult> {
    if list_size == 0 {
        return Err(Error::PreconditionViolated("list size L must be at least 1 (l = L + 1 >= 2)".into()));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::OutOfDomain(format!("alpha = {alpha}")));
    }
    let support_cap = support_cap.clamp(2, BAD_LIST_SUPPORT_LIMIT);
    let ell = list_size + 1;
    let q = field.q();
    let space = dual_space_size(q as u64, ell)?;
    let restarts = iterations.clamp(1, 64);
    let steps = (iterations / restarts).max(1);

    let results: Vec<Option<(f64, BTreeMap<Vec<u32>, i64>, u64)>> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = montecarlo::rng(seed, r);
            search_restart(field, ell, alpha, support_cap, space, steps, &mut rng)
        })
        .collect();

    let mut evaluated = 0;
    let mut best: Option<(f64, BTreeMap<Vec<u32>, i64>)> = None;
    for (value, counts, evals) in results.into_iter().flatten() {
        evaluated += evals;
        let better = match &best {
            None => true,
            Some((b, bc)) => value < b - TIE_EPS || ((value - b).abs() <= TIE_EPS && counts.keys().lt(bc.keys())),
        };
        if better {
            best = Some((value, counts));
        }
    }
    let (_, counts) = best.ok_or_else(|| {
        Error::PreconditionViolated(format!("no bad-list distribution found for alpha = {alpha}, L = {list_size}"))
    })?;
    let tau = from_counts(field, ell, &counts);
    let report = rstar(&tau)?;
    Ok(ThresholdSearchResult { rstar: report.rstar, tau, report, evaluated })
}

fn from_counts(field: &FieldSpec, ell: usize, counts: &BTreeMap<Vec<u32>, i64>) -> RowDistribution {
    let masses = counts
        .iter()
        .filter(|(_, &c)| c > 0)
        .map(|(v, &c)| (v.clone(), Rational64::new(c, SEARCH_DENOMINATOR)))
        .collect();
    RowDistribution::new(field, ell, masses).expect("grid counts sum to the denominator")
}

fn evaluate(field: &FieldSpec, ell: usize, counts: &BTreeMap<Vec<u32>, i64>, alpha: f64) -> Option<f64> {
    let tau = from_counts(field, ell, counts);
    is_bad_list(&tau, alpha).ok()??;
    rstar(&tau).ok().map(|r| r.rstar)
}

fn search_restart(
    field: &FieldSpec,
    ell: usize,
    alpha: f64,
    support_cap: usize,
    space: u64,
    steps: u64,
    rng: &mut montecarlo::Rng,
) -> Option<(f64, BTreeMap<Vec<u32>, i64>, u64)> {
    let q = field.q();
    let zero = vec![0u32; ell];
    let mut counts: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
    counts.insert(zero.clone(), SEARCH_DENOMINATOR);
    let mut evals = 0u64;

    // Grow: move a random number of units from zero onto random vectors while
    // the column weights stay within the radius.
    let target = rng.random_range(2..=support_cap);
    let budget = ((alpha * SEARCH_DENOMINATOR as f64) + 1e-9).floor() as i64;
    let mut col_weight = vec![0i64; ell];
    let mut guard = 0;
    while counts.len() < target && guard < 50 {
        guard += 1;
        let v = index_to_vector(rng.random_range(1..space), q, ell);
        if counts.contains_key(&v) {
            continue;
        }
        let room = v
            .iter()
            .zip(&col_weight)
            .filter(|(&e, _)| e != 0)
            .map(|(_, &w)| budget - w)
            .min()
            .unwrap_or(0)
            .min(counts[&zero] - 1);
        if room <= 0 {
            continue;
        }
        let units = rng.random_range(1..=room);
        *counts.get_mut(&zero).expect("zero present") -= units;
        for (j, &e) in v.iter().enumerate() {
            if e != 0 {
                col_weight[j] += units;
            }
        }
        counts.insert(v, units);
    }

    let mut current = evaluate(field, ell, &counts, alpha);
    evals += 1;

    for _ in 0..steps {
        let keys: Vec<Vec<u32>> = counts.keys().cloned().collect();
        let from = keys.choose(rng)?.clone();
        let to = if counts.len() < support_cap && rng.random_bool(0.3) {
            index_to_vector(rng.random_range(0..space), q, ell)
        } else {
            keys.choose(rng)?.clone()
        };
        if from == to {
            continue;
        }
        let mut cand = counts.clone();
        let units = rng.random_range(1..=cand[&from].min(3));
        *cand.get_mut(&from).expect("present") -= units;
        if cand[&from] == 0 {
            cand.remove(&from);
        }
        *cand.entry(to).or_default() += units;
        let value = evaluate(field, ell, &cand, alpha);
        evals += 1;
        let accept = match (value, current) {
            (Some(v), Some(c)) => v <= c + TIE_EPS,
            (Some(_), None) => true,
            _ => false,
        };
        if accept {
            counts = cand;
            current = value;
        }
    }
    current.map(|v| (v, counts, evals))
}

/// Whether `code` contains some matrix whose row distribution is exactly `tau`,
/// i.e. `l` codewords whose stacked rows have composition `n * tau`.
pub fn contains_row_distribution(code: &LinearCode, tau: &RowDistribution) -> Result<bool> {
    let n = code.n() as u64;
    if !tau.fits_length(n) {
        return Err(Error::NotInLtau(n));
    }
    if tau.field != *code.field() {
        return Err(Error::FieldMismatch);
    }
    let target: BTreeMap<Vec<u32>, i64> = tau
        .masses
        .iter()
        .map(|(v, m)| (v.clone(), (*m * Rational64::from_integer(n as i64)).to_integer()))
        .collect();
    let q = code.field().q();

    if tau.ell == 1 {
        let mut want = vec![0i64; q as usize];
        for (v, c) in &target {
            want[v[0] as usize] = *c;
        }
        if q == 2 {
            let dist = code.weight_distribution()?;
            return Ok(dist[want[1] as usize] > 0);
        }
        let mut found = false;
        code.for_each_codeword(CODEWORD_LIMIT, |w| {
            if !found {
                let mut comp = vec![0i64; q as usize];
                for &e in w {
                    comp[e as usize] += 1;
                }
                found = comp == want;
            }
        })?;
        return Ok(found);
    }

    // General l: pick columns one at a time, keeping the partial row
    // composition equal to the marginal of tau on the chosen coordinates.
    let words: Vec<Vec<u32>> = code.enumerate_codewords()?.map(|w| w.into_entries()).collect();
    let marginals: Vec<BTreeMap<Vec<u32>, i64>> = (1..=tau.ell)
        .map(|j| {
            let mut m = BTreeMap::new();
            for (v, c) in &target {
                *m.entry(v[..j].to_vec()).or_default() += c;
            }
            m
        })
        .collect();
    // column j of any witness has the symbol counts of coordinate j under tau
    let candidates: Vec<Vec<&Vec<u32>>> = (0..tau.ell)
        .map(|j| {
            let mut want = vec![0i64; q as usize];
            for (v, c) in &target {
                want[v[j] as usize] += c;
            }
            words
                .iter()
                .filter(|w| {
                    let mut comp = vec![0i64; q as usize];
                    for &e in w.iter() {
                        comp[e as usize] += 1;
                    }
                    comp == want
                })
                .collect()
        })
        .collect();
    let mut rows: Vec<Vec<u32>> = vec![Vec::new(); code.n()];

    fn extend(j: usize, words: &[Vec<&Vec<u32>>], marginals: &[BTreeMap<Vec<u32>, i64>], rows: &mut Vec<Vec<u32>>) -> bool {
        if j == marginals.len() {
            return true;
        }
        for w in &words[j] {
            let mut comp: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
            for (r, &e) in rows.iter().zip(w.iter()) {
                let mut k = r.clone();
                k.push(e);
                *comp.entry(k).or_default() += 1;
            }
            if comp == marginals[j] {
                for (r, &e) in rows.iter_mut().zip(w.iter()) {
                    r.push(e);
                }
                if extend(j + 1, words, marginals, rows) {
                    return true;
                }
                for r in rows.iter_mut() {
                    r.pop();
                }
            }
        }
        false
    }

    Ok(extend(0, &candidates, &marginals, &mut rows))
}

/// Fraction of random linear codes (trial `i` draws its parity-check matrix
/// from stream `i`) that contain a matrix with row distribution `tau`.
pub fn empirical_containment(tau: &RowDistribution, n: usize, rate: Rational64, trials: u64, seed: u64) -> Result<Estimate> {
    let m = rlc_check_count(n, rate)?;
    if !tau.fits_length(n as u64) {
        return Err(Error::NotInLtau(n as u64));
    }
    let outcomes = montecarlo::map_trials(trials, seed, |_, rng| {
        let h = sample_rlc_parity_check(&tau.field, m, n, rng);
        let code = LinearCode::from_parity_check(h, 0, rate, seed);
        contains_row_distribution(&code, tau)
    });
    let mut hits = 0;
    for o in outcomes {
        hits += o? as u64;
    }
    Ok(Estimate::from_counts(hits, trials))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::util::big_binomial;

    fn f2() -> FieldSpec {
        FieldSpec::new(2, 1).unwrap()
    }

    fn r(a: i64, b: i64) -> Rational64 {
        Rational64::new(a, b)
    }

    pub(crate) fn example_tau() -> RowDistribution {
        let q = r(1, 4);
        RowDistribution::new(
            &f2(),
            3,
            vec![(vec![1, 0, 0], q), (vec![0, 1, 0], q), (vec![1, 0, 1], q), (vec![0, 1, 1], q)],
        )
        .unwrap()
    }

    #[test]
    fn validation() {
        let f = f2();
        assert!(RowDistribution::new(&f, 1, vec![(vec![1], r(1, 2))]).is_err());
        assert!(RowDistribution::new(&f, 1, vec![(vec![1], r(0, 1)), (vec![0], r(1, 1))]).is_err());
        assert!(RowDistribution::new(&f, 2, vec![(vec![1], r(1, 1))]).is_err());
        let merged = RowDistribution::new(&f, 1, vec![(vec![1], r(1, 2)), (vec![1], r(1, 2))]).unwrap();
        assert_eq!(merged.support_size(), 1);
    }

    #[test]
    fn row_distribution_examples() {
        let f = f2();
        let z = row_distribution_of(&FqMatrix::zeros(&f, 5, 2));
        assert!(z.is_point_mass_at_zero());
        let rows: Vec<Vec<u32>> = (0..3)
            .flat_map(|_| vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 0, 1], vec![0, 1, 1]])
            .collect();
        let tau = row_distribution_of(&FqMatrix::from_rows(&f, &rows).unwrap());
        assert_eq!(tau, example_tau());
        let id = row_distribution_of(&FqMatrix::identity(&f, 2));
        assert_eq!(id.mass(&[1, 0]), r(1, 2));
        assert_eq!(id.mass(&[0, 1]), r(1, 2));
    }

    #[test]
    fn entropy_and_span() {
        let f = f2();
        let tau = example_tau();
        assert!((entropy_q(&tau) - 2.0).abs() < 1e-12);
        assert_eq!(span_dim(&tau), 3);
        let pm = RowDistribution::point_mass(&f, vec![0, 0]).unwrap();
        assert_eq!(entropy_q(&pm), 0.0);
        assert_eq!(span_dim(&pm), 0);
        let f3 = FieldSpec::new(3, 1).unwrap();
        let u = RowDistribution::uniform(&f3, 2).unwrap();
        assert!((entropy_q(&u) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn smoothness_examples() {
        let tau = example_tau();
        assert_eq!(smoothness_exact(&tau).unwrap(), r(1, 2));
        for (p, ell) in [(2, 2), (3, 2), (5, 1)] {
            let f = FieldSpec::new(p, 1).unwrap();
            let u = RowDistribution::uniform(&f, ell).unwrap();
            assert_eq!(smoothness_exact(&u).unwrap(), r(p as i64 - 1, p as i64));
        }
        let flat = RowDistribution::new(&f2(), 2, vec![(vec![1, 0], r(1, 1))]).unwrap();
        assert_eq!(smoothness_exact(&flat).unwrap(), r(0, 1));
    }

    #[test]
    fn implied_examples() {
        let f = f2();
        let tau = example_tau();
        let k = FqMatrix::from_rows(&f, &[vec![0, 0, 1]]).unwrap();
        let implied = implied_distribution(&tau, &k).unwrap();
        let expect = RowDistribution::new(&f, 2, vec![(vec![1, 0], r(1, 2)), (vec![0, 1], r(1, 2))]).unwrap();
        assert_eq!(implied, expect);
        assert_eq!(span_dim(&implied), 2);
        assert!((expectation_threshold(&implied).unwrap() - 0.5).abs() < 1e-12);
        let trivial = implied_distribution(&tau, &FqMatrix::zeros(&f, 0, 3)).unwrap();
        assert_eq!(trivial, tau);
        assert_eq!(implied_distribution(&tau, &FqMatrix::identity(&f, 3)), Err(Error::KernelFullSpace));
    }

    #[test]
    fn thresholds() {
        let f = f2();
        assert!((expectation_threshold(&example_tau()).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        let pm = RowDistribution::point_mass(&f, vec![1, 0]).unwrap();
        assert_eq!(expectation_threshold(&pm).unwrap(), 1.0);
        assert_eq!(rstar(&pm).unwrap().rstar, 1.0);
        let z = RowDistribution::point_mass(&f, vec![0, 0]).unwrap();
        assert_eq!(expectation_threshold(&z), Err(Error::DegenerateDistribution));
        let f3 = FieldSpec::new(3, 1).unwrap();
        let u = RowDistribution::uniform(&f3, 2).unwrap();
        let rep = rstar(&u).unwrap();
        assert!(rep.rstar.abs() < 1e-12);
        assert_eq!(rep.kernel.rows(), 0);
    }

    #[test]
    fn example_rstar_scan() {
        // The functional v1 + v2 maps all four support vectors to 1, so one
        // implied distribution is a point mass at a nonzero value.
        let rep = rstar(&example_tau()).unwrap();
        assert!((rep.rstar - 1.0).abs() < 1e-12);
        assert_eq!(rep.implied.support_size(), 1);
    }

    #[test]
    fn containment_counts() {
        let f = f2();
        let z = RowDistribution::point_mass(&f, vec![0]).unwrap();
        let c = prob_rlc_contains(&z, 10, 0.5).unwrap();
        assert_eq!(c.count, BigUint::from(1u32));
        assert_eq!(c.union_bound, 1.0);
        let bern = RowDistribution::new(&f, 1, vec![(vec![1], r(1, 5)), (vec![0], r(4, 5))]).unwrap();
        let c = prob_rlc_contains(&bern, 20, 0.1).unwrap();
        assert_eq!(c.count, big_binomial(20, 4));
        let expect = 4845.0 * 2f64.powi(-18);
        assert!((c.expected - expect).abs() / expect < 1e-12);
        assert_eq!(prob_rlc_contains(&bern, 7, 0.1).unwrap_err(), Error::NotInLtau(7));
    }

    #[test]
    fn bad_list_examples() {
        let f = f2();
        let tau = RowDistribution::new(&f, 2, vec![(vec![0, 1], r(1, 2)), (vec![1, 0], r(1, 2))]).unwrap();
        assert!(is_bad_list(&tau, 0.5).unwrap().is_some());
        assert!(is_bad_list(&tau, 0.49).unwrap().is_none());
        assert!(is_bad_list(&tau, 1.0).unwrap().is_some());
        let pm = RowDistribution::point_mass(&f, vec![1, 1]).unwrap();
        assert!(is_bad_list(&pm, 0.9).unwrap().is_none());
    }

    #[test]
    fn search_rejects_zero_list() {
        assert!(matches!(
            listdec_threshold_search(&f2(), 0.1, 0, 6, 10, 0),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let tau = example_tau();
        let s = tau.to_json();
        assert_eq!(RowDistribution::from_json(&s).unwrap(), tau);
    }
}
