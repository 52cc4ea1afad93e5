//! Distance certificates for the s-LDPC ensemble.
//!
//! A fixed vector of relative weight `lambda` lies in a random s-LDPC code
//! with probability `P_lambda`, and `log_q P_lambda <= phi(lambda) (1-R) n`
//! where
//!
//! ```text
//! Z(beta)         = (1 + (q-1) x^s) / q,          x = 1 - q beta / (q-1)
//! psi(lambda, b)  = s D_q(lambda || b) + log_q Z(b)
//! phi(lambda)     = inf_b psi(lambda, b)
//! ```
//!
//! The infimum is attained at the unique `beta` with `lambda(beta) = lambda`,
//! `lambda(beta) = beta (1 - x^{s-1}) / (1 + (q-1) x^s)`, which is strictly
//! increasing, so `phi` is evaluated by bisection on that equation.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::ensembles::LdpcEnsembleParams;
use crate::error::{Error, Result};
use crate::util::{ln_binomial, log_sum_exp};

/// Tolerance for treating a value as lying on a domain boundary.
const DOMAIN_EPS: f64 = 1e-12;

/// Bisection stops once the bracket is narrower than this.
const BISECTION_TOL: f64 = 1e-15;

/// Tolerance on the certificate precondition `R <= 1 - h_q(delta) - eps`.
const PRECONDITION_EPS: f64 = 1e-9;

fn top(q: u32) -> f64 {
    (q as f64 - 1.0) / q as f64
}

fn log_q(x: f64, q: u32) -> f64 {
    x.ln() / (q as f64).ln()
}

/// `x ln x` with the continuous extension `0 ln 0 = 0`.
fn xlnx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// q-ary entropy `h_q(x) = x log_q(q-1) - x log_q x - (1-x) log_q(1-x)`.
pub fn hq(x: f64, q: u32) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) || q < 2 {
        return Err(Error::OutOfDomain(format!("h_q({x}) with q = {q}")));
    }
    let lnq = (q as f64).ln();
    Ok((x * (q as f64 - 1.0).ln() - xlnx(x) - xlnx(1.0 - x)) / lnq)
}

/// The unique `x` in `[0, 1 - 1/q]` with `h_q(x) = y`.
pub fn hq_inverse(y: f64, q: u32) -> Result<f64> {
    if !(0.0..=1.0).contains(&y) || q < 2 {
        return Err(Error::OutOfDomain(format!("h_q^-1({y}) with q = {q}")));
    }
    if y == 1.0 {
        // h_q is flat at its maximum, so bisection would only resolve ~1e-8
        return Ok(top(q));
    }
    let (mut lo, mut hi) = (0.0, top(q));
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if hq(mid, q)? < y {
            lo = mid;
        } else {
            hi = mid;
        }
        if mid == lo && mid == hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `D_q(lambda || beta)`, the binary KL divergence in base q.
pub fn kl_q(lambda: f64, beta: f64, q: u32) -> f64 {
    let term = |a: f64, b: f64| if a <= 0.0 { 0.0 } else { a * (a / b).ln() };
    (term(lambda, beta) + term(1.0 - lambda, 1.0 - beta)) / (q as f64).ln()
}

fn check_beta(beta: f64, q: u32, what: &str) -> Result<f64> {
    let t = top(q);
    if !(beta > 0.0 && beta <= t + DOMAIN_EPS) {
        return Err(Error::OutOfDomain(format!("{what} = {beta} outside (0, {t}]")));
    }
    Ok(beta.min(t))
}

fn x_of(beta: f64, q: u32) -> f64 {
    (1.0 - q as f64 * beta / (q as f64 - 1.0)).max(0.0)
}

/// Probability that `s` i.i.d. samples of `mu_q(beta)` (zero with
/// probability `1 - beta`, otherwise uniform nonzero) sum to zero.
pub fn zed(beta: f64, q: u32, s: u32) -> Result<f64> {
    let beta = check_beta(beta, q, "beta")?;
    let x = x_of(beta, q);
    Ok((1.0 + (q as f64 - 1.0) * x.powi(s as i32)) / q as f64)
}

/// Probability that `k` i.i.d. uniform nonzero elements of F_q sum to zero:
/// `r_0 = 1`, `r_1 = 0`, `r_k = (1 - r_{k-1}) / (q - 1)`.
pub fn zero_sum_nonzero(k: usize, q: u32) -> f64 {
    let mut r = 1.0;
    for _ in 0..k {
        r = (1.0 - r) / (q as f64 - 1.0);
    }
    r
}

/// `Z(beta)` as the binomial mixture `sum_k C(s,k) beta^k (1-beta)^{s-k} r_k`.
pub fn zed_mixture(beta: f64, q: u32, s: u32) -> f64 {
    (0..=s as usize)
        .map(|k| {
            ln_binomial(s as u64, k as u64).exp()
                * beta.powi(k as i32)
                * (1.0 - beta).powi((s as usize - k) as i32)
                * zero_sum_nonzero(k, q)
        })
        .sum()
}

/// `psi(lambda, beta) = s D_q(lambda || beta) + log_q Z(beta)`.
pub fn psi(lambda: f64, beta: f64, q: u32, s: u32) -> Result<f64> {
    let lambda = check_beta(lambda, q, "lambda")?;
    let beta = check_beta(beta, q, "beta")?;
    Ok(s as f64 * kl_q(lambda, beta, q) + log_q(zed(beta, q, s)?, q))
}

/// The stationary point map `lambda(beta) = beta (1 - x^{s-1}) / (1 + (q-1) x^s)`.
pub fn lambda_of_beta(beta: f64, q: u32, s: u32) -> Result<f64> {
    let beta = check_beta(beta, q, "beta")?;
    Ok(lambda_of_beta_unchecked(beta, q, s))
}

fn lambda_of_beta_unchecked(beta: f64, q: u32, s: u32) -> f64 {
    let x = x_of(beta, q);
    beta * (1.0 - x.powi(s as i32 - 1)) / (1.0 + (q as f64 - 1.0) * x.powi(s as i32))
}

/// `phi(lambda)` together with the minimizing `beta*`.
pub fn phi(lambda: f64, q: u32, s: u32) -> Result<(f64, f64)> {
    let lambda = check_beta(lambda, q, "lambda")?;
    let t = top(q);
    let beta = if (t - lambda).abs() <= DOMAIN_EPS {
        t
    } else {
        let (mut lo, mut hi) = (0.0, t);
        if lambda_of_beta_unchecked(hi, q, s) < lambda {
            return Err(Error::BisectionNoBracket(format!("lambda(beta) never reaches {lambda}")));
        }
        while hi - lo > BISECTION_TOL {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if lambda_of_beta_unchecked(mid, q, s) < lambda {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    Ok((psi(lambda, beta, q, s)?, beta))
}

/// Minimizes `psi(lambda, .)` by golden-section search; an independent
/// route to `phi` used for cross-checking.
pub fn phi_golden(lambda: f64, q: u32, s: u32) -> Result<(f64, f64)> {
    let lambda = check_beta(lambda, q, "lambda")?;
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (1e-300f64.max(lambda * 1e-12), top(q));
    let f = |b: f64| psi(lambda, b, q, s);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    for _ in 0..300 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
    }
    let beta = 0.5 * (a + b);
    Ok((f(beta)?, beta))
}

fn weight_of(lambda: f64, n: usize) -> Result<usize> {
    let w = lambda * n as f64;
    let r = w.round();
    if (w - r).abs() > 1e-9 || r < 0.0 {
        return Err(Error::NonIntegralWeight(w));
    }
    Ok(r as usize)
}

/// `phi(lambda) (1-R) n`, the upper bound on `log_q P_lambda`.
pub fn p_lambda_bound(lambda: f64, params: &LdpcEnsembleParams) -> Result<f64> {
    let n = params.n();
    weight_of(lambda, n)?;
    let (value, _) = phi(lambda, params.field().q(), params.s() as u32)?;
    Ok(value * (1.0 - params.rate_f64()) * n as f64)
}

/// `phi(lambda) (1-R) n + t log_q(n+1)`: the bound of [`p_lambda_bound`]
/// with the factor lost in `Pr[wt v = lambda n] >= q^{-D_q(lambda||beta) n} / (n+1)`
/// restored, which makes it valid at every finite `n`.
pub fn p_lambda_bound_finite(lambda: f64, params: &LdpcEnsembleParams) -> Result<f64> {
    let q = params.field().q();
    Ok(p_lambda_bound(lambda, params)? + params.t() as f64 * log_q((params.n() + 1) as f64, q))
}

/// Largest block count accepted by [`layer_zero_prob`].
pub const MAX_DP_BLOCKS: usize = 64;
/// Largest block size accepted by [`layer_zero_prob`].
pub const MAX_DP_SPARSITY: usize = 16;

/// Exact probability that one layer (n/s checks of size s over a uniformly
/// permuted, uniformly nonzero-scaled coordinate set) annihilates a fixed
/// vector with `w` nonzero coordinates.
pub fn layer_zero_prob(q: u32, n: usize, s: usize, w: usize) -> Result<f64> {
    if s == 0 || !n.is_multiple_of(s) {
        return Err(Error::DivisibilityViolation(format!("s = {s} must divide n = {n}")));
    }
    if w > n {
        return Err(Error::OutOfDomain(format!("weight {w} exceeds length {n}")));
    }
    let blocks = n / s;
    if blocks > MAX_DP_BLOCKS || s > MAX_DP_SPARSITY {
        return Err(Error::StateSpaceTooLarge(format!(
            "n/s = {blocks} blocks of size {s} (limits {MAX_DP_BLOCKS} and {MAX_DP_SPARSITY})"
        )));
    }
    let r: Vec<f64> = (0..=s).map(|k| zero_sum_nonzero(k, q)).collect();
    // dp[m] = probability of reaching the current block with m nonzero
    // coordinates still unplaced and every earlier check satisfied
    let mut dp = vec![0.0; w + 1];
    dp[w] = 1.0;
    for b in 0..blocks {
        let remaining = n - b * s;
        let mut next = vec![0.0; w + 1];
        for (m, &p) in dp.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let denom = ln_binomial(remaining as u64, s as u64);
            for k in 0..=s.min(m) {
                if s - k > remaining - m {
                    continue;
                }
                let hyper =
                    (ln_binomial(m as u64, k as u64) + ln_binomial((remaining - m) as u64, (s - k) as u64) - denom).exp();
                next[m - k] += p * hyper * r[k];
            }
        }
        dp = next;
    }
    Ok(dp[0])
}

/// `log_q P_lambda` computed exactly: one layer by dynamic programming,
/// raised to the power `t`. Returns `-inf` when the probability is zero.
pub fn p_lambda_exact(lambda: f64, params: &LdpcEnsembleParams) -> Result<f64> {
    let n = params.n();
    let w = weight_of(lambda, n)?;
    let q = params.field().q();
    let layer = layer_zero_prob(q, n, params.s(), w)?;
    Ok(params.t() as f64 * log_q(layer, q))
}

/// Parameters of a distance certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GvParams {
    pub q: u32,
    pub s: u32,
    pub rate: f64,
    pub delta: f64,
    pub eps: f64,
}

impl GvParams {
    /// Accepts `0 < delta <= (q-1)/q` and `s >= 2`. The stricter certificate
    /// conditions are checked by [`GvParams::check_certifiable`].
    pub fn new(q: u32, s: u32, rate: f64, delta: f64, eps: f64) -> Result<Self> {
        if q < 2 {
            return Err(Error::OutOfDomain(format!("q = {q}")));
        }
        if s < 2 {
            return Err(Error::OutOfDomain(format!("sparsity s = {s} must be at least 2")));
        }
        if !(delta > 0.0 && delta <= top(q) + DOMAIN_EPS) {
            return Err(Error::OutOfDomain(format!("delta = {delta} outside (0, {}]", top(q))));
        }
        if !(rate > 0.0 && rate < 1.0) {
            return Err(Error::BadRate(format!("rate {rate} must lie strictly between 0 and 1")));
        }
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::OutOfDomain(format!("eps = {eps}")));
        }
        Ok(GvParams { q, s, rate, delta, eps })
    }

    /// `delta < (q-1)/q`, `eps < 1 - h_q(delta)` and `R <= 1 - h_q(delta) - eps`.
    pub fn check_certifiable(&self) -> Result<()> {
        if self.delta >= top(self.q) {
            return Err(Error::PreconditionViolated(format!(
                "delta = {} must be below (q-1)/q = {}",
                self.delta,
                top(self.q)
            )));
        }
        let gap = 1.0 - hq(self.delta, self.q)?;
        if self.eps >= gap {
            return Err(Error::PreconditionViolated(format!("eps = {} must be below 1 - h_q(delta) = {gap}", self.eps)));
        }
        if self.rate > gap - self.eps + PRECONDITION_EPS {
            return Err(Error::PreconditionViolated(format!(
                "rate {} exceeds 1 - h_q(delta) - eps = {}",
                self.rate,
                gap - self.eps
            )));
        }
        Ok(())
    }
}

/// Natural log of the union bound
/// `sum_{i=1}^{delta n} C(n,i) (q-1)^i q^{phi(i/n)(1-R)n}`, unclamped.
pub fn failure_bound_ln(params: &GvParams, n: usize) -> Result<f64> {
    params.check_certifiable()?;
    let q = params.q;
    let lnq = (q as f64).ln();
    let imax = (params.delta * n as f64 + 1e-9).floor() as usize;
    let mut terms = Vec::with_capacity(imax);
    for i in 1..=imax {
        let lambda = i as f64 / n as f64;
        let (ph, _) = phi(lambda, q, params.s)?;
        let exact = ln_binomial(n as u64, i as u64) + i as f64 * (q as f64 - 1.0).ln();
        let entropic = n as f64 * hq(lambda, q)? * lnq;
        terms.push(exact.min(entropic) + ph * (1.0 - params.rate) * n as f64 * lnq);
    }
    Ok(log_sum_exp(&terms))
}

/// Union bound on the probability that a random s-LDPC code of length `n`
/// has relative distance below `delta`, clamped to 1.
pub fn failure_bound(params: &GvParams, n: usize) -> Result<f64> {
    Ok(failure_bound_ln(params, n)?.exp().min(1.0))
}

const S0_ROUNDS: u32 = 10;

/// `ceil(ln(q/eps) / delta)`, doubled until the union bound at `R = 1 -
/// h_q(delta) - eps` shrinks from n = 1000 to n = 2000.
pub fn s0_for_distance(q: u32, delta: f64, eps: f64) -> Result<u64> {
    let s = s0_for_distance_formula(q, delta, eps)?;
    let rate = 1.0 - hq(delta, q)? - eps;
    if rate <= 0.0 {
        return Err(Error::PreconditionViolated(format!("1 - h_q(delta) - eps = {rate} leaves no positive rate")));
    }
    let mut s = s.max(2);
    for _ in 0..S0_ROUNDS {
        let params = GvParams::new(q, s as u32, rate, delta, eps)?;
        if failure_bound_ln(&params, 2000)? < failure_bound_ln(&params, 1000)? {
            return Ok(s);
        }
        s *= 2;
    }
    Err(Error::NoCertifiableS { rounds: S0_ROUNDS, last_s: s / 2 })
}

/// `ceil(ln(q/eps) / delta)` without verification.
pub fn s0_for_distance_formula(q: u32, delta: f64, eps: f64) -> Result<u64> {
    if !(delta > 0.0 && delta < 1.0) || !(eps > 0.0 && eps < 1.0) {
        return Err(Error::OutOfDomain(format!("delta = {delta}, eps = {eps}")));
    }
    Ok(((q as f64 / eps).ln() / delta).ceil() as u64)
}

/// `ceil((b log2 q + log2(q/eps)) / h_q^{-1}(1 - rbar))`.
pub fn s0_main(q: u32, eps: f64, rbar: f64, b: u32) -> Result<u64> {
    if !(eps > 0.0 && eps < 1.0) || !(rbar > 0.0 && rbar < 1.0) {
        return Err(Error::OutOfDomain(format!("eps = {eps}, rbar = {rbar}")));
    }
    let num = b as f64 * (q as f64).log2() + (q as f64 / eps).log2();
    Ok((num / hq_inverse(1.0 - rbar, q)?).ceil() as u64)
}

/// `ceil(l / log_q(1 / (1 - delta / (1 - 1/q))))`.
pub fn s0_fourier(q: u32, ell: u32, delta: f64) -> Result<u64> {
    if !(delta > 0.0 && delta < top(q)) {
        return Err(Error::OutOfDomain(format!("delta = {delta} outside (0, {})", top(q))));
    }
    let denom = log_q(1.0 / (1.0 - delta / top(q)), q);
    Ok((ell as f64 / denom).ceil() as u64)
}

/// One grid point of a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificateRow {
    pub lambda: f64,
    pub beta_star: f64,
    pub psi: f64,
    pub phi: f64,
    /// `phi(lambda) / h_q(lambda)`.
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateHeader {
    pub q: u32,
    pub s: u32,
    pub rate: f64,
    pub delta: f64,
    pub eps: f64,
    pub n: usize,
    /// `None` when the certificate preconditions fail.
    pub failure_bound: Option<f64>,
    pub certified_s: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceCertificate {
    pub header: CertificateHeader,
    pub rows: Vec<CertificateRow>,
}

const CSV_COLUMNS: &str = "lambda,beta_star,psi,phi,alpha";

impl DistanceCertificate {
    /// Evaluates the grid `lambda = i/n` for `i = 1..=floor(delta n)`. The
    /// failure bound and minimal sparsity are filled in only when the
    /// certificate preconditions hold.
    pub fn compute(params: &GvParams, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfDomain("n must be positive".into()));
        }
        let q = params.q;
        let imax = (params.delta * n as f64 + 1e-9).floor() as usize;
        let mut rows = Vec::with_capacity(imax);
        for i in 1..=imax {
            let lambda = i as f64 / n as f64;
            let (value, beta_star) = phi(lambda, q, params.s)?;
            rows.push(CertificateRow {
                lambda,
                beta_star,
                psi: psi(lambda, beta_star, q, params.s)?,
                phi: value,
                alpha: value / hq(lambda, q)?,
            });
        }
        let (failure_bound, certified_s) = match params.check_certifiable() {
            Ok(()) => (
                Some(failure_bound(params, n)?),
                s0_for_distance(q, params.delta, params.eps).ok(),
            ),
            Err(_) => (None, None),
        };
        let header = CertificateHeader {
            q,
            s: params.s,
            rate: params.rate,
            delta: params.delta,
            eps: params.eps,
            n,
            failure_bound,
            certified_s,
        };
        Ok(DistanceCertificate { header, rows })
    }

    /// `# <json header>` on the first line, then CSV.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header = serde_json::to_string(&self.header).expect("header serializes");
        writeln!(out, "# {header}").unwrap();
        writeln!(out, "{CSV_COLUMNS}").unwrap();
        for r in &self.rows {
            writeln!(out, "{},{},{},{},{}", r.lambda, r.beta_star, r.psi, r.phi, r.alpha).unwrap();
        }
        out
    }

    pub fn from_csv(s: &str) -> Result<Self> {
        let mut lines = s.lines();
        let first = lines.next().ok_or_else(|| Error::Parse("empty certificate".into()))?;
        let json = first.strip_prefix("# ").ok_or_else(|| Error::Parse("missing header line".into()))?;
        let header: CertificateHeader = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
        if lines.next() != Some(CSV_COLUMNS) {
            return Err(Error::Parse("missing column line".into()));
        }
        // trailing `#` lines carry annotations and are skipped
        let rows = lines
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| {
                let v: Vec<f64> = l
                    .split(',')
                    .map(|t| t.parse::<f64>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
                    .collect::<Result<_>>()?;
                if v.len() != 5 {
                    return Err(Error::Parse(format!("expected 5 columns, got {}", v.len())));
                }
                Ok(CertificateRow { lambda: v[0], beta_star: v[1], psi: v[2], phi: v[3], alpha: v[4] })
            })
            .collect::<Result<_>>()?;
        Ok(DistanceCertificate { header, rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldSpec;
    use num_rational::Rational64;

    #[test]
    fn entropy_examples() {
        for q in [2, 3, 4, 5] {
            assert!((hq(top(q), q).unwrap() - 1.0).abs() < 1e-12);
        }
        assert_eq!(hq(0.0, 2).unwrap(), 0.0);
        assert!((hq(0.5, 2).unwrap() - 1.0).abs() < 1e-15);
        assert!((hq_inverse(1.0, 2).unwrap() - 0.5).abs() < 1e-12);
        let x = hq_inverse(0.5, 2).unwrap();
        assert!((x - 0.110028).abs() < 1e-6);
        assert!((hq(x, 2).unwrap() - 0.5).abs() < 1e-12);
        assert!(hq(1.5, 2).is_err());
        assert!(hq_inverse(-0.1, 2).is_err());
    }

    #[test]
    fn zed_examples() {
        for q in [2, 3, 5] {
            assert!((zed(top(q), q, 7).unwrap() - 1.0 / q as f64).abs() < 1e-15);
        }
        assert!((zed(0.5, 2, 2).unwrap() - 0.5).abs() < 1e-15);
        assert!(zed(0.0, 2, 3).is_err());
        assert!(zed(0.6, 2, 3).is_err());
    }

    #[test]
    fn r_k_values() {
        assert_eq!(zero_sum_nonzero(0, 3), 1.0);
        assert_eq!(zero_sum_nonzero(1, 3), 0.0);
        assert_eq!(zero_sum_nonzero(2, 3), 0.5);
        assert_eq!(zero_sum_nonzero(2, 2), 1.0);
        assert_eq!(zero_sum_nonzero(3, 2), 0.0);
    }

    #[test]
    fn lambda_of_beta_examples() {
        assert!((lambda_of_beta(0.25, 2, 3).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        for q in [2, 3, 4] {
            assert!((lambda_of_beta(top(q), q, 5).unwrap() - top(q)).abs() < 1e-15);
            assert!(lambda_of_beta(1e-9, q, 5).unwrap() < 1e-12);
        }
    }

    #[test]
    fn psi_and_phi_examples() {
        let l = 0.3;
        assert!((psi(l, l, 3, 4).unwrap() - log_q(zed(l, 3, 4).unwrap(), 3)).abs() < 1e-15);
        assert!((psi(0.5, 0.5, 2, 6).unwrap() + 1.0).abs() < 1e-15);
        for q in [2, 3, 4] {
            let (v, b) = phi(top(q), q, 5).unwrap();
            assert!((v + 1.0).abs() < 1e-12);
            assert_eq!(b, top(q));
        }
        let (v, b) = phi(1.0 / 6.0, 2, 3).unwrap();
        assert!((b - 0.25).abs() < 1e-12);
        let expect = 3.0 * kl_q(1.0 / 6.0, 0.25, 2) + zed(0.25, 2, 3).unwrap().log2();
        assert!((v - expect).abs() < 1e-12);
    }

    #[test]
    fn phi_matches_golden_section() {
        for q in [2, 3, 4] {
            for s in [3, 5, 9] {
                for i in 1..20 {
                    let lambda = top(q) * i as f64 / 20.0;
                    let (a, _) = phi(lambda, q, s).unwrap();
                    let (b, _) = phi_golden(lambda, q, s).unwrap();
                    assert!((a - b).abs() < 1e-9, "q={q} s={s} lambda={lambda}: {a} vs {b}");
                    assert!(a <= b + 1e-12);
                }
            }
        }
    }

    #[test]
    fn layer_dp_trivial_cases() {
        // pairs of ones always cancel in binary checks of size 2
        assert!((layer_zero_prob(2, 4, 2, 4).unwrap() - 1.0).abs() < 1e-15);
        // a single nonzero coordinate can never be cancelled
        assert_eq!(layer_zero_prob(3, 12, 3, 1).unwrap(), 0.0);
        assert_eq!(layer_zero_prob(2, 12, 3, 0).unwrap(), 1.0);
        let f2 = FieldSpec::new(2, 1).unwrap();
        let params = LdpcEnsembleParams::new(&f2, 12, 3, Rational64::new(1, 3)).unwrap();
        assert_eq!(p_lambda_exact(1.0 / 12.0, &params).unwrap(), f64::NEG_INFINITY);
        assert!(matches!(p_lambda_exact(0.1, &params), Err(Error::NonIntegralWeight(_))));
    }

    #[test]
    fn layer_dp_matches_permutation_enumeration() {
        // n = 6, s = 3, three ones: enumerate all 6! placements
        let n = 6;
        let ones = [1u8, 1, 1, 0, 0, 0];
        let mut perm: Vec<usize> = (0..n).collect();
        let mut good = 0u32;
        let mut total = 0u32;
        permute(&mut perm, 0, &mut |p| {
            total += 1;
            let ok = p.chunks(3).all(|b| b.iter().map(|&j| ones[j] as u32).sum::<u32>() % 2 == 0);
            good += ok as u32;
        });
        assert_eq!(total, 720);
        let exact = good as f64 / total as f64;
        assert!((layer_zero_prob(2, 6, 3, 3).unwrap() - exact).abs() < 1e-14);
    }

    fn permute(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == v.len() {
            f(v);
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            permute(v, k + 1, f);
            v.swap(k, i);
        }
    }

    #[test]
    fn failure_bound_behaviour() {
        let delta = hq_inverse(0.5, 2).unwrap();
        let p = GvParams::new(2, 20, 0.4, delta, 0.1).unwrap();
        let a = failure_bound(&p, 1000).unwrap();
        let b = failure_bound(&p, 2000).unwrap();
        assert!(b / a < 1.0, "{a} -> {b}");
        let tiny = GvParams::new(2, 20, 0.4, 1e-6, 0.1).unwrap();
        assert_eq!(failure_bound(&tiny, 1000).unwrap(), 0.0);
        let bad = GvParams::new(2, 20, 0.6, delta, 0.1).unwrap();
        assert!(matches!(failure_bound(&bad, 1000), Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn s0_formulas() {
        assert_eq!(s0_for_distance_formula(2, 0.11, 0.1).unwrap(), 28);
        let expect = ((2.0 + 20f64.log2()) / hq_inverse(0.5, 2).unwrap()).ceil() as u64;
        assert_eq!(s0_main(2, 0.1, 0.5, 2).unwrap(), expect);
        let a = s0_for_distance_formula(2, 0.05, 0.1).unwrap();
        let b = s0_for_distance_formula(2, 0.1, 0.1).unwrap();
        let c = s0_for_distance_formula(2, 0.1, 0.01).unwrap();
        assert!(a >= b && c >= b);
        assert!(s0_fourier(2, 2, 0.25).unwrap() >= 2);
    }

    #[test]
    fn certificate_round_trip() {
        let p = GvParams::new(2, 6, 1.0 / 3.0, 0.5, 0.05).unwrap();
        let cert = DistanceCertificate::compute(&p, 40).unwrap();
        assert_eq!(cert.header.failure_bound, None);
        let last = cert.rows.last().unwrap();
        assert!((last.alpha + 1.0).abs() < 1e-9);
        let csv = cert.to_csv();
        let back = DistanceCertificate::from_csv(&csv).unwrap();
        assert_eq!(back, cert);
        assert_eq!(back.to_csv(), csv);
    }
}
