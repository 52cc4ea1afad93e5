//! Dense vectors and matrices over F_q: RREF, rank, kernels and an
//! enumerator over all subspaces of F_q^l.

use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FieldDoc, FieldSpec};

/// Cap on the number of subspaces [`enumerate_subspaces`] will visit.
pub const SUBSPACE_LIMIT: u128 = 1_000_000;

#[derive(Clone, PartialEq, Eq)]
pub struct FqVector {
    field: FieldSpec,
    entries: Vec<u32>,
}

impl Hash for FqVector {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.entries.hash(state);
    }
}

impl fmt::Debug for FqVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.entries)
    }
}

impl FqVector {
    pub fn new(field: &FieldSpec, entries: Vec<u32>) -> Self {
        let q = field.q();
        assert!(entries.iter().all(|&e| e < q), "vector entry outside F_{q}");
        FqVector { field: field.clone(), entries }
    }

    pub fn zeros(field: &FieldSpec, n: usize) -> Self {
        FqVector { field: field.clone(), entries: vec![0; n] }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<u32> {
        self.entries
    }

    pub fn get(&self, i: usize) -> u32 {
        self.entries[i]
    }

    pub fn weight(&self) -> usize {
        self.entries.iter().filter(|&&e| e != 0).count()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    /// Number of coordinates where `self` and `other` differ.
    pub fn distance(&self, other: &FqVector) -> usize {
        self.entries.iter().zip(&other.entries).filter(|(a, b)| a != b).count()
    }

    pub fn dot(&self, other: &FqVector) -> u32 {
        dot(&self.field, &self.entries, &other.entries)
    }
}

#[inline]
pub(crate) fn dot(field: &FieldSpec, a: &[u32], b: &[u32]) -> u32 {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| field.add(acc, field.mul(x, y)))
}

const DIGITS: &[u8; 36] = b"0123456789abcdefghijklmnopqrstuvwxyz";

/// Encodes a row as one character per entry (`0-9a-z`) when q <= 36, and as
/// comma-separated decimals otherwise.
pub fn encode_row(field: &FieldSpec, row: &[u32]) -> String {
    if field.q() <= 36 {
        row.iter().map(|&e| DIGITS[e as usize] as char).collect()
    } else {
        row.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
    }
}

pub fn decode_row(field: &FieldSpec, s: &str) -> Result<Vec<u32>> {
    let q = field.q();
    let parsed: Vec<u32> = if q <= 36 {
        s.chars()
            .map(|c| c.to_digit(36).ok_or_else(|| Error::Parse(format!("bad digit {c:?}"))))
            .collect::<Result<_>>()?
    } else if s.is_empty() {
        Vec::new()
    } else {
        s.split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
            .collect::<Result<_>>()?
    };
    if let Some(&bad) = parsed.iter().find(|&&e| e >= q) {
        return Err(Error::Parse(format!("entry {bad} is not an element of F_{q}")));
    }
    Ok(parsed)
}

/// JSON form of a matrix: field, shape, and rows as digit strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub field: FieldDoc,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<String>,
}

#[derive(Clone, PartialEq, Eq)]
pub struct FqMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FqMatrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl FqMatrix {
    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        FqMatrix { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_data(field: &FieldSpec, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch { expected: rows * cols, got: data.len() });
        }
        let q = field.q();
        if let Some(&bad) = data.iter().find(|&&e| e >= q) {
            return Err(Error::Parse(format!("entry {bad} is not an element of F_{q}")));
        }
        Ok(FqMatrix { field: field.clone(), rows, cols, data })
    }

    /// Builds a matrix from equal-length rows. An empty row list yields a 0x0 matrix.
    pub fn from_rows(field: &FieldSpec, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::LengthMismatch { expected: cols, got: r.len() });
            }
            data.extend_from_slice(r);
        }
        Self::from_data(field, rows.len(), cols, data)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: &FieldSpec, n: usize, cols: &[FqVector]) -> Result<Self> {
        let mut m = Self::zeros(field, n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != n {
                return Err(Error::LengthMismatch { expected: n, got: c.len() });
            }
            for i in 0..n {
                m.set(i, j, c.get(i));
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        debug_assert!(v < self.field.q());
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vector(&self, r: usize) -> FqVector {
        FqVector { field: self.field.clone(), entries: self.row(r).to_vec() }
    }

    pub fn column(&self, c: usize) -> FqVector {
        let entries = (0..self.rows).map(|r| self.get(r, c)).collect();
        FqVector { field: self.field.clone(), entries }
    }

    pub fn columns(&self) -> Vec<FqVector> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> FqMatrix {
        let mut t = FqMatrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &FqMatrix) -> Result<FqMatrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::LengthMismatch { expected: self.cols, got: other.rows });
        }
        let f = &self.field;
        let mut out = FqMatrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let v = f.add(out.get(i, j), f.mul(a, b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &FqVector) -> Result<FqVector> {
        if self.field != v.field {
            return Err(Error::FieldMismatch);
        }
        if v.len() != self.cols {
            return Err(Error::LengthMismatch { expected: self.cols, got: v.len() });
        }
        let entries = (0..self.rows).map(|r| dot(&self.field, self.row(r), &v.entries)).collect();
        Ok(FqVector { field: self.field.clone(), entries })
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &FqMatrix) -> Result<FqMatrix> {
        if self.cols != other.cols {
            return Err(Error::LengthMismatch { expected: self.cols, got: other.cols });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(FqMatrix { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&e| e == 0)
    }

    pub fn rank(&self) -> usize {
        rref(self).1
    }
}

impl FqMatrix {
    pub fn to_doc(&self) -> MatrixDoc {
        MatrixDoc {
            field: self.field.to_doc(),
            rows: self.rows,
            cols: self.cols,
            data: (0..self.rows).map(|r| encode_row(&self.field, self.row(r))).collect(),
        }
    }

    pub fn from_doc(doc: &MatrixDoc) -> Result<Self> {
        let field = FieldSpec::from_doc(&doc.field)?;
        if doc.data.len() != doc.rows {
            return Err(Error::LengthMismatch { expected: doc.rows, got: doc.data.len() });
        }
        let mut data = Vec::with_capacity(doc.rows * doc.cols);
        for r in &doc.data {
            let row = decode_row(&field, r)?;
            if row.len() != doc.cols {
                return Err(Error::LengthMismatch { expected: doc.cols, got: row.len() });
            }
            data.extend(row);
        }
        FqMatrix::from_data(&field, doc.rows, doc.cols, data)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("matrix serializes") + "\n"
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: MatrixDoc = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_doc(&doc)
    }
}

/// Reduced row echelon form. Returns the reduced matrix, the rank and the
/// pivot columns in increasing order.
pub fn rref(m: &FqMatrix) -> (FqMatrix, usize, Vec<usize>) {
    let f = m.field.clone();
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(pr) = (r..a.rows).find(|&i| a.get(i, c) != 0) else {
            continue;
        };
        if pr != r {
            for j in 0..a.cols {
                a.data.swap(pr * a.cols + j, r * a.cols + j);
            }
        }
        let inv = f.inv(a.get(r, c)).expect("pivot is nonzero");
        for j in c..a.cols {
            let v = f.mul(a.get(r, j), inv);
            a.set(r, j, v);
        }
        for i in 0..a.rows {
            if i == r {
                continue;
            }
            let factor = a.get(i, c);
            if factor == 0 {
                continue;
            }
            let nf = f.neg(factor);
            for j in c..a.cols {
                let v = f.add(a.get(i, j), f.mul(nf, a.get(r, j)));
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, r, pivots)
}

/// Basis of `{x : m x = 0}`, returned as the columns of a `cols(m) x (cols(m) - rank)` matrix.
pub fn kernel_basis(m: &FqMatrix) -> FqMatrix {
    let f = &m.field;
    let (r, rank, pivots) = rref(m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = FqMatrix::zeros(f, m.cols, free.len());
    for (j, &fc) in free.iter().enumerate() {
        basis.set(fc, j, 1);
        for (i, &pc) in pivots.iter().enumerate().take(rank) {
            basis.set(pc, j, f.neg(r.get(i, fc)));
        }
    }
    basis
}

/// Gaussian binomial `[l choose m]_q`, or `None` on overflow.
pub fn gaussian_binomial(l: u32, m: u32, q: u32) -> Option<u128> {
    if m > l {
        return Some(0);
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..m {
        num = num.checked_mul(q.checked_pow(l - i)?.checked_sub(1)?)?;
        den = den.checked_mul(q.checked_pow(i + 1)?.checked_sub(1)?)?;
    }
    Some(num / den)
}

/// Total number of subspaces of F_q^l.
pub fn subspace_count(l: u32, q: u32) -> Option<u128> {
    (0..=l).try_fold(0u128, |acc, m| acc.checked_add(gaussian_binomial(l, m, q)?))
}

/// Walks every subspace of F_q^l exactly once, each as its RREF basis
/// (an `m x l` matrix). Order: by dimension, then pivot set
/// lexicographically, then free entries as a little-endian odometer.
pub struct SubspaceIterator {
    field: FieldSpec,
    ell: usize,
    dim: usize,
    pivots: Vec<usize>,
    /// (row, column) positions that are free to take any field value.
    free: Vec<(usize, usize)>,
    counter: Vec<u32>,
    done: bool,
}

impl SubspaceIterator {
    fn new(field: &FieldSpec, ell: usize) -> Self {
        let mut it = SubspaceIterator {
            field: field.clone(),
            ell,
            dim: 0,
            pivots: Vec::new(),
            free: Vec::new(),
            counter: Vec::new(),
            done: false,
        };
        it.reset_free();
        it
    }

    pub fn ambient_dim(&self) -> usize {
        self.ell
    }

    fn reset_free(&mut self) {
        self.free.clear();
        for (i, &p) in self.pivots.iter().enumerate() {
            for c in p + 1..self.ell {
                if !self.pivots.contains(&c) {
                    self.free.push((i, c));
                }
            }
        }
        self.counter = vec![0; self.free.len()];
    }

    fn current(&self) -> FqMatrix {
        let mut m = FqMatrix::zeros(&self.field, self.dim, self.ell);
        for (i, &p) in self.pivots.iter().enumerate() {
            m.set(i, p, 1);
        }
        for (&(r, c), &v) in self.free.iter().zip(&self.counter) {
            m.set(r, c, v);
        }
        m
    }

    fn advance(&mut self) {
        let q = self.field.q();
        for d in self.counter.iter_mut() {
            *d += 1;
            if *d < q {
                return;
            }
            *d = 0;
        }
        // odometer wrapped: next pivot set
        if next_combination(&mut self.pivots, self.ell) {
            self.reset_free();
            return;
        }
        self.dim += 1;
        if self.dim > self.ell {
            self.done = true;
            return;
        }
        self.pivots = (0..self.dim).collect();
        self.reset_free();
    }
}

/// Advances a strictly increasing index list to the next combination of
/// `0..n`; returns false after the last one.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

impl Iterator for SubspaceIterator {
    type Item = FqMatrix;

    fn next(&mut self) -> Option<FqMatrix> {
        if self.done {
            return None;
        }
        let out = self.current();
        self.advance();
        Some(out)
    }
}

/// Every subspace of F_q^l as an RREF basis matrix, guarded by [`SUBSPACE_LIMIT`].
pub fn enumerate_subspaces(ell: usize, field: &FieldSpec) -> Result<SubspaceIterator> {
    let count = subspace_count(ell as u32, field.q()).unwrap_or(u128::MAX);
    if count > SUBSPACE_LIMIT {
        return Err(Error::TooManySubspaces { count, limit: SUBSPACE_LIMIT });
    }
    Ok(SubspaceIterator::new(field, ell))
}
