//! Small numeric helpers shared across modules.

use num_bigint::BigUint;
use num_rational::Rational64;
use num_traits::{One, ToPrimitive, Zero};

/// `ln(n!)`.
pub fn ln_factorial(n: u64) -> f64 {
    statrs::function::factorial::ln_factorial(n)
}

/// `ln C(n, k)`; `-inf` when `k > n`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Numerically stable `ln(sum(exp(x)))`. Returns `-inf` for an empty input.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.iter().map(|&x| (x - m).exp()).sum::<f64>().ln()
}

pub fn log_q(x: f64, q: u32) -> f64 {
    x.ln() / (q as f64).ln()
}

pub fn big_factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * k)
}

pub fn big_binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Natural log of an arbitrarily large unsigned integer.
pub fn big_ln(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn rational_to_f64(r: &Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Parses `"a/b"` or a finite decimal such as `"0.35"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational64> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: i64 = a.trim().parse().ok()?;
        let b: i64 = b.trim().parse().ok()?;
        if b == 0 {
            return None;
        }
        return Some(Rational64::new(a, b));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    if frac_part.len() > 15 {
        return None;
    }
    let den = 10i64.pow(frac_part.len() as u32);
    let ip: i64 = if int_part.is_empty() { 0 } else { int_part.parse().ok()? };
    let fp: i64 = if frac_part.is_empty() { 0 } else { frac_part.parse().ok()? };
    let num = ip.checked_mul(den)?.checked_add(fp)?;
    Some(Rational64::new(if neg { -num } else { num }, den))
}

pub fn format_rational(r: &Rational64) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials_agree() {
        for n in 0..40u64 {
            for k in 0..=n {
                let exact = big_binomial(n, k);
                assert!((big_ln(&exact) - ln_binomial(n, k)).abs() < 1e-9);
            }
        }
        assert_eq!(big_binomial(20, 4), BigUint::from(4845u32));
        assert_eq!(big_factorial(5), BigUint::from(120u32));
    }

    #[test]
    fn big_ln_of_huge_values() {
        let x = big_factorial(1000);
        assert!((big_ln(&x) - ln_factorial(1000)).abs() < 1e-8);
    }

    #[test]
    fn lse() {
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
        let v = log_sum_exp(&[-1000.0, -1000.0]);
        assert!((v - (-1000.0 + 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("1/3"), Some(Rational64::new(1, 3)));
        assert_eq!(parse_rational("0.35"), Some(Rational64::new(7, 20)));
        assert_eq!(parse_rational("2"), Some(Rational64::new(2, 1)));
        assert_eq!(parse_rational(".5"), Some(Rational64::new(1, 2)));
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(format_rational(&Rational64::new(2, 6)), "1/3");
    }
}
