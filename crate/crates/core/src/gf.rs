//! Arithmetic in F_q for prime powers q = p^h up to 2^16.
//!
//! An element is stored as the integer `c_0 + c_1 p + ... + c_{h-1} p^{h-1}`
//! where `c_0 + c_1 x + ... + c_{h-1} x^{h-1}` is its residue modulo the
//! field's defining polynomial. The prime subfield F_p is therefore exactly the
//! range `0..p`.
//!
//! Multiplication goes through log/antilog tables built from a primitive
//! element. Addition is XOR in characteristic 2, reduction mod p for prime
//! fields, and digit-wise otherwise (tabulated when q is small).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u32 = 1 << 16;

const ADD_TABLE_LIMIT: u32 = 1024;

struct Tables {
    p: u32,
    h: u32,
    q: u32,
    /// Monic defining polynomial, low degree first, length h + 1. Empty for h = 1.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Option<Vec<u16>>,
    neg: Vec<u32>,
    trace: Vec<u32>,
    roots: Vec<Complex64>,
}

/// A finite field F_q. Cheap to clone; all tables are shared.
#[derive(Clone)]
pub struct FieldSpec {
    t: Arc<Tables>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.t, &other.t)
            || (self.t.p == other.t.p && self.t.h == other.t.h && self.t.modulus == other.t.modulus)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.t.p)
            .field("h", &self.t.h)
            .field("modulus", &self.t.modulus)
            .finish()
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.t.h == 1 {
            write!(f, "F_{}", self.t.p)
        } else {
            write!(f, "F_{}^{}", self.t.p, self.t.h)
        }
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// --- schoolbook polynomial arithmetic over F_p -------------------------------

fn digits(mut v: u32, p: u32, h: usize) -> Vec<u32> {
    let mut out = vec![0; h];
    for d in out.iter_mut() {
        *d = v % p;
        v /= p;
    }
    out
}

fn undigits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    // p is prime and small, so Fermat is fine.
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

/// Remainder of `a` modulo a nonzero polynomial `b` (both low degree first).
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    let db = b.iter().rposition(|&c| c != 0).expect("division by zero polynomial");
    let lead_inv = inv_mod_p(b[db], p);
    while let Some(dr) = r.iter().rposition(|&c| c != 0) {
        if dr < db {
            break;
        }
        let factor = r[dr] * lead_inv % p;
        let shift = dr - db;
        for (i, &bc) in b.iter().enumerate().take(db + 1) {
            let sub = factor * bc % p;
            r[i + shift] = (r[i + shift] + p - sub) % p;
        }
    }
    r.truncate(db.max(1));
    r
}

fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let h = poly.len() - 1;
    for d in 1..=h / 2 {
        let count = p.pow(d as u32);
        for low in 0..count {
            let mut divisor = digits(low, p, d);
            divisor.push(1);
            if poly_rem(poly, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Lexicographically least monic irreducible polynomial of degree `h` over
/// F_p, comparing coefficients from the highest degree down.
fn least_irreducible(p: u32, h: u32) -> Vec<u32> {
    let hu = h as usize;
    let count = p.pow(h);
    for low in 0..count {
        let mut poly = digits(low, p, hu);
        poly.push(1);
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn schoolbook_mul(a: u32, b: u32, p: u32, modulus: &[u32]) -> u32 {
    if modulus.is_empty() {
        return ((a as u64 * b as u64) % p as u64) as u32;
    }
    let h = modulus.len() - 1;
    let da = digits(a, p, h);
    let db = digits(b, p, h);
    let mut prod = vec![0u32; 2 * h - 1];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let r = poly_rem(&prod, modulus, p);
    let mut out = vec![0; h];
    out[..r.len().min(h)].copy_from_slice(&r[..r.len().min(h)]);
    undigits(&out, p)
}

fn digitwise_add(a: u32, b: u32, p: u32, h: usize) -> u32 {
    let da = digits(a, p, h);
    let db = digits(b, p, h);
    let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
    undigits(&sum, p)
}

impl FieldSpec {
    /// Builds F_{p^h} with the lexicographically least monic irreducible modulus.
    pub fn new(p: u32, h: u32) -> Result<Self> {
        if h < 1 {
            return Err(Error::BadDegree);
        }
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        let q = (p as u64)
            .checked_pow(h)
            .filter(|&q| q <= MAX_FIELD_SIZE as u64)
            .ok_or(Error::FieldTooLarge { p, h })? as u32;
        let modulus = if h == 1 { Vec::new() } else { least_irreducible(p, h) };
        let hu = h as usize;

        let smul = |a: u32, b: u32| schoolbook_mul(a, b, p, &modulus);

        // find a primitive element by brute-force order computation
        let order = q - 1;
        let mut gen = 1;
        if q > 2 {
            gen = (2..q)
                .find(|&g| {
                    let mut x = g;
                    let mut k = 1;
                    while x != 1 {
                        x = smul(x, g);
                        k += 1;
                    }
                    k == order
                })
                .expect("multiplicative group is cyclic");
        }
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..order as usize {
            exp[i] = x;
            exp[i + order as usize] = x;
            log[x as usize] = i as u32;
            x = smul(x, gen);
        }

        let add = if p != 2 && h > 1 && q <= ADD_TABLE_LIMIT {
            let mut tab = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    tab[(a * q + b) as usize] = digitwise_add(a, b, p, hu) as u16;
                }
            }
            Some(tab)
        } else {
            None
        };
        let neg = (0..q)
            .map(|a| {
                let da = digits(a, p, hu);
                undigits(&da.iter().map(|&d| (p - d) % p).collect::<Vec<_>>(), p)
            })
            .collect();

        let roots = (0..p)
            .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / p as f64))
            .collect();

        let mut field = FieldSpec {
            t: Arc::new(Tables {
                p,
                h,
                q,
                modulus,
                exp,
                log,
                add,
                neg,
                trace: Vec::new(),
                roots,
            }),
        };

        // cross-check the log tables against schoolbook multiplication
        {
            let t = &field.t;
            let check = |a: u32, b: u32| {
                assert_eq!(
                    field.mul(a, b),
                    schoolbook_mul(a, b, p, &t.modulus),
                    "log/antilog table disagrees with schoolbook product at {a}*{b}"
                );
            };
            if q <= 256 {
                for a in 0..q {
                    for b in 0..q {
                        check(a, b);
                    }
                }
            } else {
                let mut a = 1u32;
                let mut b = q / 3;
                for _ in 0..4096 {
                    check(a, b);
                    a = (a.wrapping_mul(2_654_435_761) ^ 0x9e37) % q;
                    b = (b.wrapping_mul(40_503).wrapping_add(7)) % q;
                }
            }
        }

        let trace: Vec<u32> = (0..q)
            .map(|a| {
                let mut acc = 0;
                let mut pw = a;
                for _ in 0..h {
                    acc = field.add(acc, pw);
                    pw = field.pow(pw, p as u64);
                }
                debug_assert!(acc < p, "trace must land in the prime subfield");
                acc
            })
            .collect();
        Arc::get_mut(&mut field.t).expect("unique during construction").trace = trace;
        Ok(field)
    }

    pub fn p(&self) -> u32 {
        self.t.p
    }

    pub fn h(&self) -> u32 {
        self.t.h
    }

    pub fn q(&self) -> u32 {
        self.t.q
    }

    /// Monic defining polynomial, lowest degree first; empty for prime fields.
    pub fn modulus(&self) -> &[u32] {
        &self.t.modulus
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let t = &*self.t;
        if t.p == 2 {
            a ^ b
        } else if t.h == 1 {
            let s = a + b;
            if s >= t.p {
                s - t.p
            } else {
                s
            }
        } else if let Some(tab) = &t.add {
            tab[(a * t.q + b) as usize] as u32
        } else {
            digitwise_add(a, b, t.p, t.h as usize)
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.t.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let t = &*self.t;
        t.exp[(t.log[a as usize] + t.log[b as usize]) as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let t = &*self.t;
        let order = t.q - 1;
        Some(t.exp[((order - t.log[a as usize]) % order) as usize])
    }

    pub fn div(&self, a: u32, b: u32) -> Option<u32> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let t = &*self.t;
        let order = (t.q - 1) as u64;
        t.exp[((t.log[a as usize] as u64 * (e % order)) % order) as usize]
    }

    /// Absolute trace to F_p, returned as an integer in `0..p`.
    #[inline]
    pub fn trace_raw(&self, a: u32) -> u32 {
        self.t.trace[a as usize]
    }

    /// `omega_p^k` for `k` in `0..p`.
    #[inline]
    pub fn root_of_unity(&self, k: u32) -> Complex64 {
        self.t.roots[(k % self.t.p) as usize]
    }

    /// The additive character `chi_x(y) = omega_p^{tr(x y)}`.
    pub fn character_raw(&self, x: u32, y: u32) -> Complex64 {
        self.root_of_unity(self.trace_raw(self.mul(x, y)))
    }

    pub fn elem(&self, value: u32) -> FqElement<'_> {
        assert!(value < self.q(), "{value} is not an element of {self}");
        FqElement { value, field: self }
    }

    pub fn zero(&self) -> FqElement<'_> {
        self.elem(0)
    }

    pub fn one(&self) -> FqElement<'_> {
        self.elem(1)
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElement<'_>> + '_ {
        (0..self.q()).map(move |v| FqElement { value: v, field: self })
    }

    /// Product by polynomial multiplication modulo the defining polynomial,
    /// bypassing the log tables.
    pub fn schoolbook_mul(&self, a: u32, b: u32) -> u32 {
        schoolbook_mul(a, b, self.t.p, &self.t.modulus)
    }
}

/// Serialized form of a field: characteristic, degree and defining polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDoc {
    pub p: u32,
    pub h: u32,
    /// Omitted in hand-written input to mean the canonical modulus.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

impl FieldSpec {
    pub fn to_doc(&self) -> FieldDoc {
        FieldDoc { p: self.p(), h: self.h(), modulus: Some(self.modulus().to_vec()) }
    }

    /// Rebuilds a field, rejecting documents whose modulus differs from the
    /// one this library would choose.
    pub fn from_doc(doc: &FieldDoc) -> Result<Self> {
        let f = FieldSpec::new(doc.p, doc.h)?;
        if doc.modulus.as_deref().is_some_and(|m| m != f.modulus()) {
            return Err(Error::Parse(format!(
                "modulus {:?} for {f} differs from the canonical {:?}",
                doc.modulus,
                f.modulus()
            )));
        }
        Ok(f)
    }
}

/// Shorthand for [`FieldSpec::new`].
pub fn field_new(p: u32, h: u32) -> Result<FieldSpec> {
    FieldSpec::new(p, h)
}

/// An element of F_q tied to its field.
#[derive(Clone, Copy)]
pub struct FqElement<'a> {
    value: u32,
    field: &'a FieldSpec,
}

impl<'a> FqElement<'a> {
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn field(&self) -> &'a FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn inv(&self) -> Option<FqElement<'a>> {
        self.field.inv(self.value).map(|v| FqElement { value: v, field: self.field })
    }

    pub fn pow(&self, e: u64) -> FqElement<'a> {
        FqElement { value: self.field.pow(self.value, e), field: self.field }
    }

    fn same_field(&self, other: &Self) {
        assert!(
            std::ptr::eq(self.field, other.field) || self.field == other.field,
            "{}",
            Error::FieldMismatch
        );
    }
}

impl PartialEq for FqElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && self.field == other.field
    }
}

impl Eq for FqElement<'_> {}

impl fmt::Debug for FqElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.value, self.field)
    }
}

impl<'a> Add for FqElement<'a> {
    type Output = FqElement<'a>;
    fn add(self, rhs: Self) -> Self::Output {
        self.same_field(&rhs);
        FqElement { value: self.field.add(self.value, rhs.value), field: self.field }
    }
}

impl<'a> Sub for FqElement<'a> {
    type Output = FqElement<'a>;
    fn sub(self, rhs: Self) -> Self::Output {
        self.same_field(&rhs);
        FqElement { value: self.field.sub(self.value, rhs.value), field: self.field }
    }
}

impl<'a> Mul for FqElement<'a> {
    type Output = FqElement<'a>;
    fn mul(self, rhs: Self) -> Self::Output {
        self.same_field(&rhs);
        FqElement { value: self.field.mul(self.value, rhs.value), field: self.field }
    }
}

impl<'a> Div for FqElement<'a> {
    type Output = FqElement<'a>;
    /// Panics on division by zero.
    fn div(self, rhs: Self) -> Self::Output {
        self.same_field(&rhs);
        let v = self.field.div(self.value, rhs.value).expect("division by zero in F_q");
        FqElement { value: v, field: self.field }
    }
}

impl<'a> Neg for FqElement<'a> {
    type Output = FqElement<'a>;
    fn neg(self) -> Self::Output {
        FqElement { value: self.field.neg(self.value), field: self.field }
    }
}

/// `x + x^p + ... + x^{p^{h-1}}`, an element of the prime subfield.
pub fn trace<'a>(x: FqElement<'a>) -> FqElement<'a> {
    FqElement { value: x.field.trace_raw(x.value), field: x.field }
}

/// `omega_p^{tr(x y)}` with `omega_p = e^{2 pi i / p}`.
pub fn character(x: FqElement<'_>, y: FqElement<'_>) -> Complex64 {
    x.same_field(&y);
    x.field.character_raw(x.value, y.value)
}
