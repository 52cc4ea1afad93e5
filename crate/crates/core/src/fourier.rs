//! Fourier analysis over F_q^l and the resulting bound on the probability
//! that a random s-LDPC code contains a fixed matrix.
//!
//! Conventions: `f_hat(y) = q^{-l} sum_x f(x) conj(chi_x(y))` with
//! `chi_x(y) = omega_p^{tr(<x, y>)}`, inverted by `f(x) = sum_y f_hat(y) chi_y(x)`.
//! Under this normalization `P^{*s}(0) = sum_y P_hat(y)^s`, and the
//! probability that `s` i.i.d. samples of `P` sum to zero is
//! `q^{l(s-1)} P^{*s}(0)`.
//!
//! Tables are indexed by the little-endian base-q digits of a vector.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use num_rational::Rational64;
use serde::Serialize;

use crate::ensembles::LdpcEnsembleParams;
use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::gvdistance::layer_zero_prob;
use crate::linalg::FqMatrix;
use crate::rowdist::{index_to_vector, row_distribution_of, smoothness, RowDistribution};
use crate::util::{ln_binomial, ln_factorial, rational_to_f64};

/// Cap on `q^l` for dense tables.
pub const TABLE_LIMIT: u64 = 1_000_000;

/// Imaginary parts above this are treated as a real failure, not round-off.
pub const IMAG_TOL: f64 = 1e-10;

fn table_size(q: u32, ell: usize) -> Result<usize> {
    let size = (q as u64).saturating_pow(ell as u32);
    if size > TABLE_LIMIT {
        return Err(Error::TableTooLarge(size));
    }
    Ok(size as usize)
}

fn vector_index(v: &[u32], q: u32) -> usize {
    v.iter().rev().fold(0usize, |acc, &e| acc * q as usize + e as usize)
}

/// A complex-valued function on F_q^l, stored densely.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexDistribution {
    ell: usize,
    field: FieldSpec,
    values: Vec<Complex64>,
}

impl ComplexDistribution {
    pub fn new(field: &FieldSpec, ell: usize, values: Vec<Complex64>) -> Result<Self> {
        let size = table_size(field.q(), ell)?;
        if values.len() != size {
            return Err(Error::LengthMismatch { expected: size, got: values.len() });
        }
        Ok(ComplexDistribution { ell, field: field.clone(), values })
    }

    /// The probability table of `tau` without any scalar twist.
    pub fn from_row_distribution(tau: &RowDistribution) -> Result<Self> {
        let q = tau.field().q();
        let mut values = vec![Complex64::new(0.0, 0.0); table_size(q, tau.ell())?];
        for (v, m) in tau.masses() {
            values[vector_index(v, q)] += rational_to_f64(m);
        }
        Ok(ComplexDistribution { ell: tau.ell(), field: tau.field().clone(), values })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn at(&self, v: &[u32]) -> Complex64 {
        self.values[vector_index(v, self.field.q())]
    }

    pub fn vector(&self, index: usize) -> Vec<u32> {
        index_to_vector(index as u64, self.field.q(), self.ell)
    }
}

/// Fourier coefficients of a function on F_q^l.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierTable {
    ell: usize,
    field: FieldSpec,
    coefficients: Vec<Complex64>,
}

impl FourierTable {
    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn at(&self, y: &[u32]) -> Complex64 {
        self.coefficients[vector_index(y, self.field.q())]
    }
}

/// `P(x) = sum over (v, lambda) with lambda v = x of tau(v) / (q - 1)`.
pub fn scalar_twist(tau: &RowDistribution) -> Result<ComplexDistribution> {
    let f = tau.field();
    let q = f.q();
    let mut values = vec![Complex64::new(0.0, 0.0); table_size(q, tau.ell())?];
    let share = 1.0 / (q as f64 - 1.0);
    for (v, m) in tau.masses() {
        let m = rational_to_f64(m) * share;
        for lambda in 1..q {
            let x: Vec<u32> = v.iter().map(|&e| f.mul(lambda, e)).collect();
            values[vector_index(&x, q)] += m;
        }
    }
    Ok(ComplexDistribution { ell: tau.ell(), field: f.clone(), values })
}

/// `tr(<x, y>)` for every pair of table indices, row-major in `x`.
fn trace_pairing(field: &FieldSpec, ell: usize, size: usize) -> Vec<u32> {
    let vectors: Vec<Vec<u32>> = (0..size).map(|i| index_to_vector(i as u64, field.q(), ell)).collect();
    let mut out = Vec::with_capacity(size * size);
    for x in &vectors {
        for y in &vectors {
            let ip = x.iter().zip(y).fold(0, |acc, (&a, &b)| field.add(acc, field.mul(a, b)));
            out.push(field.trace_raw(ip));
        }
    }
    out
}

/// Direct `O(q^{2l})` transform.
pub fn fourier_transform(f: &ComplexDistribution) -> Result<FourierTable> {
    let field = &f.field;
    let size = table_size(field.q(), f.ell)?;
    let pairing = trace_pairing(field, f.ell, size);
    let scale = 1.0 / size as f64;
    let coefficients = (0..size)
        .map(|y| {
            let s: Complex64 = (0..size)
                .map(|x| f.values[x] * field.root_of_unity(pairing[x * size + y]).conj())
                .sum();
            s * scale
        })
        .collect();
    Ok(FourierTable { ell: f.ell, field: field.clone(), coefficients })
}

/// `f(x) = sum_y f_hat(y) chi_y(x)`.
pub fn inverse_transform(t: &FourierTable) -> Result<ComplexDistribution> {
    let field = &t.field;
    let size = table_size(field.q(), t.ell)?;
    let pairing = trace_pairing(field, t.ell, size);
    let values = (0..size)
        .map(|x| (0..size).map(|y| t.coefficients[y] * field.root_of_unity(pairing[y * size + x])).sum())
        .collect();
    Ok(ComplexDistribution { ell: t.ell, field: field.clone(), values })
}

/// `sum_y P_hat(y)^s` from precomputed coefficients.
pub fn conv_power_at_zero_from_table(t: &FourierTable, s: u32) -> Result<f64> {
    if s == 0 {
        return Err(Error::OutOfDomain("s must be at least 1".into()));
    }
    let total: Complex64 = t.coefficients.iter().map(|c| c.powu(s)).sum();
    if total.im.abs() > IMAG_TOL {
        return Err(Error::NonRealResult(total.im));
    }
    Ok(total.re)
}

/// `P^{*s}(0) = sum_y P_hat(y)^s`. Errors if the result is not real beyond
/// round-off, which a real-valued `P` never triggers.
pub fn conv_power_at_zero(p: &ComplexDistribution, s: u32) -> Result<f64> {
    conv_power_at_zero_from_table(&fourier_transform(p)?, s)
}

/// `q^{-ls} + q^{-l(s-1)} (1 - q delta / (q-1))^s`, the bound on
/// `P^{*s}(0)` for a delta-smooth twisted distribution and odd `s`.
///
/// `delta` is clamped to `(q-1)/q`: past that point the base goes negative
/// and the inequality fails (a point mass at a nonzero vector is 1-smooth),
/// while every delta-smooth distribution is also `(q-1)/q`-smooth.
pub fn smooth_conv_bound(q: u32, ell: usize, s: u32, delta: f64) -> f64 {
    let qf = q as f64;
    let x = (1.0 - qf * delta / (qf - 1.0)).max(0.0);
    qf.powi(-(ell as i32) * s as i32) + qf.powi(-(ell as i32) * (s as i32 - 1)) * x.powi(s as i32)
}

/// Largest nonzero Fourier coefficient of the scalar twist against its bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientBound {
    pub max_coefficient: f64,
    pub max_imaginary: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Checks `P_hat(y) <= q^{-l} (1 - q delta / (q-1))` for every `y != 0`,
/// where `P` is the scalar twist of `tau`.
pub fn fourier_coefficient_bound(tau: &RowDistribution, delta: f64) -> Result<CoefficientBound> {
    let actual = smoothness(tau)?;
    if actual + 1e-12 < delta {
        return Err(Error::NotSmoothEnough { actual, required: delta });
    }
    let q = tau.field().q();
    let table = fourier_transform(&scalar_twist(tau)?)?;
    let max_imaginary = table.coefficients.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
    if max_imaginary > IMAG_TOL {
        return Err(Error::NonRealResult(max_imaginary));
    }
    let max_coefficient = table.coefficients[1..].iter().map(|c| c.re).fold(f64::NEG_INFINITY, f64::max);
    let qf = q as f64;
    let bound = qf.powi(-(tau.ell() as i32)) * (1.0 - qf * delta / (qf - 1.0));
    Ok(CoefficientBound { max_coefficient, max_imaginary, bound, holds: max_coefficient <= bound + IMAG_TOL })
}

/// Every term of the assembled containment bound, in base-q logarithms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContainBound {
    pub n: usize,
    pub s: usize,
    pub t: usize,
    pub ell: usize,
    pub rate: f64,
    pub eps: f64,
    /// Smoothness of the row distribution of `M`.
    pub delta: f64,
    /// `log_q(q^{l(s-1)} P^{*s}(0))` bounded via smoothness: `log_q(q^{-l} + x^s)`.
    pub block_log: f64,
    /// `(n/s) * block_log`: one layer with i.i.d. rows.
    pub iid_layer_log: f64,
    /// `-log_q Pr[i.i.d. rows reproduce the projective-class counts of M]`.
    pub conditioning_log: f64,
    /// `log_q C(n + K - 1, K - 1)` with `K` projective classes (zero included);
    /// a parameter-free cap on `conditioning_log`.
    pub conditioning_cap_log: f64,
    /// `iid_layer_log + conditioning_log`.
    pub layer_log: f64,
    /// `t * layer_log`; an upper bound on `log_q Pr[M in C]`.
    pub log_q_bound: f64,
    /// `-(1 - eps)(1 - R) l n`.
    pub target_log: f64,
}

/// Canonical representative of the projective class of `v`: first nonzero
/// entry scaled to 1. The zero vector is its own class.
fn projective_class(field: &FieldSpec, v: &[u32]) -> Vec<u32> {
    match v.iter().find(|&&e| e != 0) {
        None => v.to_vec(),
        Some(&lead) => {
            let inv = field.inv(lead).expect("nonzero");
            v.iter().map(|&e| field.mul(inv, e)).collect()
        }
    }
}

/// Counts of rows per projective class, in class order, zero class first if present.
fn class_counts(tau: &RowDistribution, n: usize) -> Result<BTreeMap<Vec<u32>, usize>> {
    if !tau.fits_length(n as u64) {
        return Err(Error::NotInLtau(n as u64));
    }
    let mut counts = BTreeMap::new();
    for (v, m) in tau.masses() {
        let c = (*m * Rational64::from_integer(n as i64)).to_integer() as usize;
        *counts.entry(projective_class(tau.field(), v)).or_insert(0) += c;
    }
    Ok(counts)
}

/// Assembles the bound `t [ (n/s) log_q(q^{-l} + x^s) + conditioning ]`
/// with `x = 1 - q delta / (q-1)` and `delta` the smoothness of `M`.
pub fn ldpc_contain_bound(m: &FqMatrix, params: &LdpcEnsembleParams, eps: f64) -> Result<ContainBound> {
    let n = params.n();
    let s = params.s();
    if s.is_multiple_of(2) {
        return Err(Error::EvenSparsity(s as u64));
    }
    if m.rows() != n {
        return Err(Error::LengthMismatch { expected: n, got: m.rows() });
    }
    if m.field() != params.field() {
        return Err(Error::FieldMismatch);
    }
    let tau = row_distribution_of(m);
    let delta = smoothness(&tau)?;
    if delta <= 0.0 {
        return Err(Error::NotSmooth);
    }
    let q = params.field().q();
    let qf = q as f64;
    let lnq = qf.ln();
    let ell = m.cols();
    let x = (1.0 - qf * delta / (qf - 1.0)).max(0.0);
    let block_log = (qf.powi(-(ell as i32)) + x.powi(s as i32)).ln() / lnq;
    let iid_layer_log = (n / s) as f64 * block_log;

    let counts = class_counts(&tau, n)?;
    let mut ln_prob = ln_factorial(n as u64);
    for &c in counts.values() {
        let p = c as f64 / n as f64;
        ln_prob += c as f64 * p.ln() - ln_factorial(c as u64);
    }
    let conditioning_log = -ln_prob / lnq;
    let classes = (qf.powi(ell as i32) - 1.0) / (qf - 1.0) + 1.0;
    let k = classes.round() as u64;
    let conditioning_cap_log = ln_binomial(n as u64 + k - 1, k - 1) / lnq;

    let layer_log = iid_layer_log + conditioning_log;
    let rate = params.rate_f64();
    Ok(ContainBound {
        n,
        s,
        t: params.t(),
        ell,
        rate,
        eps,
        delta,
        block_log,
        iid_layer_log,
        conditioning_log,
        conditioning_cap_log,
        layer_log,
        log_q_bound: params.t() as f64 * layer_log,
        target_log: -(1.0 - eps) * (1.0 - rate) * ell as f64 * n as f64,
    })
}

/// Support and block-count limits for [`exact_layer_prob`] when `l >= 2`.
pub const EXACT_SUPPORT_LIMIT: usize = 6;
pub const EXACT_BLOCK_LIMIT: usize = 16;

/// Exact probability that one layer annihilates a fixed matrix with row
/// distribution `tau`.
///
/// Rows are grouped by projective class (a row scaled by a uniform nonzero
/// scalar depends only on its class). A DP walks the blocks in order, with
/// state the number of rows of each class not yet placed; a block draws its
/// composition by multivariate hypergeometric sampling and survives with the
/// probability that its scaled rows sum to zero, computed by convolution.
pub fn exact_layer_prob(tau: &RowDistribution, n: usize, s: usize) -> Result<f64> {
    if s == 0 || !n.is_multiple_of(s) {
        return Err(Error::DivisibilityViolation(format!("s = {s} must divide n = {n}")));
    }
    let q = tau.field().q();
    let counts = class_counts(tau, n)?;
    if tau.ell() == 1 {
        let w = counts.iter().filter(|(v, _)| v[0] != 0).map(|(_, &c)| c).sum();
        return layer_zero_prob(q, n, s, w);
    }
    if tau.support_size() > EXACT_SUPPORT_LIMIT || n / s > EXACT_BLOCK_LIMIT {
        return Err(Error::StateSpaceTooLarge(format!(
            "support {} and {} blocks (limits {EXACT_SUPPORT_LIMIT} and {EXACT_BLOCK_LIMIT})",
            tau.support_size(),
            n / s
        )));
    }
    let field = tau.field().clone();
    let classes: Vec<Vec<u32>> = counts.keys().cloned().collect();
    let totals: Vec<usize> = counts.values().copied().collect();
    let size = table_size(q, tau.ell())?;
    let mut zero_sum_cache: HashMap<Vec<usize>, f64> = HashMap::new();

    let mut zero_sum = |k: &[usize]| -> f64 {
        if let Some(&v) = zero_sum_cache.get(k) {
            return v;
        }
        let mut dist = vec![0.0f64; size];
        dist[0] = 1.0;
        let share = 1.0 / (q as f64 - 1.0);
        for (class, &cnt) in classes.iter().zip(k) {
            if class.iter().all(|&e| e == 0) {
                continue;
            }
            let shifts: Vec<Vec<u32>> =
                (1..q).map(|l| class.iter().map(|&e| field.mul(l, e)).collect()).collect();
            for _ in 0..cnt {
                let mut next = vec![0.0f64; size];
                for (i, &p) in dist.iter().enumerate() {
                    if p == 0.0 {
                        continue;
                    }
                    let x = index_to_vector(i as u64, q, classes[0].len());
                    for sh in &shifts {
                        let y: Vec<u32> = x.iter().zip(sh).map(|(&a, &b)| field.add(a, b)).collect();
                        next[vector_index(&y, q)] += p * share;
                    }
                }
                dist = next;
            }
        }
        zero_sum_cache.insert(k.to_vec(), dist[0]);
        dist[0]
    };

    let mut dp: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    dp.insert(totals.clone(), 1.0);
    for b in 0..n / s {
        let remaining = n - b * s;
        let ln_denom = ln_binomial(remaining as u64, s as u64);
        let mut next: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
        for (state, &p) in &dp {
            let mut comps = Vec::new();
            compositions(state, s, &mut Vec::new(), &mut comps);
            for k in comps {
                let ln_w: f64 =
                    state.iter().zip(&k).map(|(&r, &c)| ln_binomial(r as u64, c as u64)).sum::<f64>() - ln_denom;
                let z = zero_sum(&k);
                if z == 0.0 {
                    continue;
                }
                let rest: Vec<usize> = state.iter().zip(&k).map(|(&r, &c)| r - c).collect();
                *next.entry(rest).or_insert(0.0) += p * ln_w.exp() * z;
            }
        }
        dp = next;
    }
    Ok(dp.values().sum())
}

/// All vectors `k <= bound` (componentwise) with `sum k = total`.
fn compositions(bound: &[usize], total: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let i = prefix.len();
    if i == bound.len() {
        if total == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    let rest: usize = bound[i + 1..].iter().sum();
    let lo = total.saturating_sub(rest);
    for c in lo..=bound[i].min(total) {
        prefix.push(c);
        compositions(bound, total - c, prefix, out);
        prefix.pop();
    }
}
