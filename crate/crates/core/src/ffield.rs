//! Exact linear algebra over `F_p` and small extensions `F_{p^e}`.
//!
//! Field elements are plain `u32` values. For `e = 1` they are the residues
//! `0..p`. For `e > 1` an element is the integer whose base-`p` digits are the
//! coefficients of its representative polynomial modulo a fixed irreducible
//! polynomial, lowest degree first. In particular the prime field embeds as
//! the values `0..p`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field order supported by the log/antilog tables.
pub const MAX_ORDER: u64 = 1 << 16;

/// Characteristic and extension degree of a finite field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
}

impl FieldSpec {
    pub fn new(p: u32, e: u32) -> Self {
        Self { p, e }
    }

    pub fn prime(p: u32) -> Self {
        Self { p, e: 1 }
    }

    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.e)
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A finite field `F_{p^e}` with its arithmetic tables.
#[derive(Debug, Clone)]
pub struct Field {
    spec: FieldSpec,
    q: u32,
    /// Monic irreducible modulus, coefficients low to high, length e + 1.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    inv_p: Vec<u32>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Eq for Field {}

impl Field {
    pub fn new(spec: FieldSpec) -> Result<Self> {
        if !is_prime(spec.p) || spec.e == 0 || spec.order() > MAX_ORDER {
            return Err(Error::InvalidField { p: spec.p, e: spec.e });
        }
        let p = spec.p;
        let q = spec.order() as u32;
        let mut inv_p = vec![0u32; p as usize];
        for a in 1..p {
            inv_p[a as usize] = pow_mod(a, p - 2, p);
        }
        if spec.e == 1 {
            return Ok(Self { spec, q, modulus: vec![0, 1], exp: Vec::new(), log: Vec::new(), inv_p });
        }
        let modulus = find_irreducible(p, spec.e as usize);
        let mut field = Self { spec, q, modulus, exp: Vec::new(), log: Vec::new(), inv_p };
        field.build_tables();
        Ok(field)
    }

    pub fn prime(p: u32) -> Result<Self> {
        Self::new(FieldSpec::prime(p))
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn p(&self) -> u32 {
        self.spec.p
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    fn build_tables(&mut self) {
        let q = self.q;
        for g in 2..q {
            let mut exp = Vec::with_capacity(q as usize - 1);
            let mut x = 1u32;
            let mut primitive = true;
            for k in 0..q - 1 {
                if k > 0 && x == 1 {
                    primitive = false;
                    break;
                }
                exp.push(x);
                x = self.poly_mul(x, g);
            }
            if primitive && x == 1 {
                let mut log = vec![0u32; q as usize];
                for (k, &v) in exp.iter().enumerate() {
                    log[v as usize] = k as u32;
                }
                self.exp = exp;
                self.log = log;
                return;
            }
        }
        unreachable!("the multiplicative group of a finite field is cyclic");
    }

    fn digits(&self, mut a: u32) -> Vec<u32> {
        let p = self.spec.p;
        (0..self.spec.e)
            .map(|_| {
                let d = a % p;
                a /= p;
                d
            })
            .collect()
    }

    fn from_digits(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.spec.p + d)
    }

    /// Multiplication by polynomial arithmetic; only used to build tables.
    fn poly_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.spec.p;
        let e = self.spec.e as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u32; 2 * e];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for k in (e..2 * e).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for (i, &m) in self.modulus.iter().enumerate() {
                let idx = k - e + i;
                prod[idx] = (prod[idx] + (p - c) * m) % p;
            }
        }
        self.from_digits(&prod[..e])
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let p = self.spec.p;
        if self.spec.e == 1 {
            let s = a + b;
            return if s >= p { s - p } else { s };
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.spec.e {
            let d = (a % p + b % p) % p;
            out += d * place;
            place *= p;
            a /= p;
            b /= p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let p = self.spec.p;
        if self.spec.e == 1 {
            return if a == 0 { 0 } else { p - a };
        }
        let mut a = a;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.spec.e {
            let d = a % p;
            out += ((p - d) % p) * place;
            place *= p;
            a /= p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if self.spec.e == 1 {
            return ((a as u64 * b as u64) % self.spec.p as u64) as u32;
        }
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q - 1;
        let k = (self.log[a as usize] + self.log[b as usize]) % n;
        self.exp[k as usize]
    }

    /// Multiplicative inverse. Panics on zero.
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        if self.spec.e == 1 {
            return self.inv_p[a as usize];
        }
        let n = self.q - 1;
        let k = (n - self.log[a as usize]) % n;
        self.exp[k as usize]
    }

    /// Reduces an integer into the prime subfield.
    pub fn from_int(&self, v: i64) -> u32 {
        v.rem_euclid(self.spec.p as i64) as u32
    }

    /// Elements of the field in their canonical integer order.
    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }
}

fn pow_mod(mut b: u32, mut e: u32, m: u32) -> u32 {
    let mut r = 1u64;
    let mut b64 = b as u64 % m as u64;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b64 % m as u64;
        }
        b64 = b64 * b64 % m as u64;
        e >>= 1;
    }
    b = r as u32;
    b
}

/// Remainder of `a` modulo the monic polynomial `m` over `F_p` (coefficients low to high).
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if c != 0 {
            for (i, &mi) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + (p - c) * mi % p) % p;
            }
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

/// First monic irreducible polynomial of degree `e` in lexicographic order of
/// its lower coefficients.
fn find_irreducible(p: u32, e: usize) -> Vec<u32> {
    let count = (p as u64).pow(e as u32);
    for code in 0..count {
        let mut poly = Vec::with_capacity(e + 1);
        let mut c = code;
        for _ in 0..e {
            poly.push((c % p as u64) as u32);
            c /= p as u64;
        }
        poly.push(1);
        if poly[0] == 0 {
            continue;
        }
        let mut reducible = false;
        'deg: for d in 1..=e / 2 {
            for dcode in 0..(p as u64).pow(d as u32) {
                let mut div = Vec::with_capacity(d + 1);
                let mut c = dcode;
                for _ in 0..d {
                    div.push((c % p as u64) as u32);
                    c /= p as u64;
                }
                div.push(1);
                if poly_rem(&poly, &div, p).is_empty() {
                    reducible = true;
                    break 'deg;
                }
            }
        }
        if !reducible {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Dense matrix over a [`Field`], stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl KMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows * cols");
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Self { rows: r, cols: c, data }
    }

    /// Matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, &v) in col.iter().enumerate() {
                m.data[i * m.cols + j] = v;
            }
        }
        m
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
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn mul(&self, other: &Self, f: &Field) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.data[k * other.cols + j];
                    if b != 0 {
                        let idx = i * out.cols + j;
                        out.data[idx] = f.add(out.data[idx], f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32], f: &Field) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| if a == 0 || b == 0 { acc } else { f.add(acc, f.mul(a, b)) })
            })
            .collect()
    }

    pub fn add(&self, other: &Self, f: &Field) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: u32, f: &Field) -> Self {
        let data = self.data.iter().map(|&a| f.mul(a, s)).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    /// `self + s * other`.
    pub fn add_scaled(&mut self, other: &Self, s: u32, f: &Field) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        if s == 0 {
            return;
        }
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            if b != 0 {
                *a = f.add(*a, f.mul(b, s));
            }
        }
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Self { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Self { rows: self.rows, cols, data }
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    ///
    /// Pivots are chosen as the first nonzero entry scanning columns left to
    /// right and rows top to bottom, so the result is fully deterministic.
    pub fn rref_in_place(&mut self, f: &Field) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    self.data.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(self.data[r * cols + c]);
            if inv != 1 {
                for j in c..cols {
                    let idx = r * cols + j;
                    self.data[idx] = f.mul(self.data[idx], inv);
                }
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let factor = self.data[i * cols + c];
                if factor == 0 {
                    continue;
                }
                let nf = f.neg(factor);
                for j in c..cols {
                    let pv = self.data[r * cols + j];
                    if pv != 0 {
                        let idx = i * cols + j;
                        self.data[idx] = f.add(self.data[idx], f.mul(nf, pv));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self, f: &Field) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let piv = m.rref_in_place(f);
        (m, piv)
    }

    pub fn rank(&self, f: &Field) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        // eliminate along the shorter side
        if self.rows > self.cols {
            return self.transpose().rank(f);
        }
        self.rref(f).1.len()
    }

    /// Basis of the right kernel `{v : self * v = 0}`, one vector per free column.
    pub fn kernel_basis(&self, f: &Field) -> Vec<Vec<u32>> {
        let (red, pivots) = self.rref(f);
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(red.get(r, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Some `x` with `self * x = b`, or `None` when a column of `b` lies
    /// outside the column space.
    pub fn solve(&self, b: &Self, f: &Field) -> Result<Option<Self>> {
        if self.rows != b.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve: a has {} rows, b has {}",
                self.rows, b.rows
            )));
        }
        let aug = self.hstack(b);
        let (red, pivots) = aug.rref(f);
        if pivots.iter().any(|&c| c >= self.cols) {
            return Ok(None);
        }
        let mut x = Self::zeros(self.cols, b.cols);
        for (r, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, red.get(r, self.cols + j));
            }
        }
        Ok(Some(x))
    }

    /// Rows spanning the row space, in echelon form.
    pub fn row_space(&self, f: &Field) -> Self {
        let (red, pivots) = self.rref(f);
        let mut data = Vec::with_capacity(pivots.len() * self.cols);
        for r in 0..pivots.len() {
            data.extend_from_slice(red.row(r));
        }
        Self { rows: pivots.len(), cols: self.cols, data }
    }
}

/// An incrementally built subspace of `F^n` kept in reduced echelon form.
#[derive(Debug, Clone)]
pub struct Subspace {
    dim_ambient: usize,
    /// Echelon rows; `pivots[k]` is the pivot column of `rows[k]`.
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn new(dim_ambient: usize) -> Self {
        Self { dim_ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.dim_ambient
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    fn reduce(&self, v: &mut [u32], f: &Field) {
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c == 0 {
                continue;
            }
            let nc = f.neg(c);
            for (x, &r) in v.iter_mut().zip(row) {
                if r != 0 {
                    *x = f.add(*x, f.mul(nc, r));
                }
            }
        }
    }

    pub fn contains(&self, v: &[u32], f: &Field) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w, f);
        w.iter().all(|&x| x == 0)
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[u32], f: &Field) -> bool {
        assert_eq!(v.len(), self.dim_ambient);
        let mut w = v.to_vec();
        self.reduce(&mut w, f);
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(w[pc]);
        for x in w.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            let c = row[pc];
            if c != 0 {
                let nc = f.neg(c);
                for (x, &r) in row.iter_mut().zip(&w) {
                    if r != 0 {
                        *x = f.add(*x, f.mul(nc, r));
                    }
                }
            }
        }
        self.rows.push(w);
        self.pivots.push(pc);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f2() -> Field {
        Field::prime(2).unwrap()
    }

    #[test]
    fn empty_matrix_has_rank_zero() {
        assert_eq!(KMatrix::zeros(0, 0).rank(&f2()), 0);
    }

    #[test]
    fn identity_rank() {
        assert_eq!(KMatrix::identity(3).rank(&f2()), 3);
    }

    #[test]
    fn all_ones_rank_one() {
        let m = KMatrix::from_rows(&[vec![1, 1], vec![1, 1]]);
        assert_eq!(m.rank(&f2()), 1);
    }

    #[test]
    fn kernel_examples() {
        let f = f2();
        assert!(KMatrix::identity(2).kernel_basis(&f).is_empty());
        let k = KMatrix::zeros(2, 3).kernel_basis(&f);
        assert_eq!(k.len(), 3);
        assert_eq!(KMatrix::from_columns(3, &k).rank(&f), 3);
        let k = KMatrix::from_rows(&[vec![1, 1]]).kernel_basis(&f);
        assert_eq!(k, vec![vec![1, 1]]);
    }

    #[test]
    fn solve_examples() {
        let f = f2();
        let b = KMatrix::from_rows(&[vec![1, 0], vec![1, 1]]);
        assert_eq!(KMatrix::identity(2).solve(&b, &f).unwrap(), Some(b.clone()));
        let rhs = KMatrix::from_rows(&[vec![1], vec![0]]);
        assert_eq!(KMatrix::zeros(2, 2).solve(&rhs, &f).unwrap(), None);
        let a = KMatrix::from_rows(&[vec![1, 0], vec![1, 1]]);
        let rhs = KMatrix::from_rows(&[vec![0], vec![1]]);
        assert_eq!(a.solve(&rhs, &f).unwrap(), Some(KMatrix::from_rows(&[vec![0], vec![1]])));
        assert!(a.solve(&KMatrix::zeros(3, 1), &f).is_err());
    }

    #[test]
    fn extension_field_axioms() {
        for (p, e) in [(2, 2), (2, 3), (3, 2), (5, 2)] {
            let f = Field::new(FieldSpec::new(p, e)).unwrap();
            let q = f.order();
            assert_eq!(q, p.pow(e));
            for a in 1..q {
                assert_eq!(f.mul(a, f.inv(a)), 1);
                assert_eq!(f.add(a, f.neg(a)), 0);
            }
            // distributivity on a sample
            for a in 0..q.min(9) {
                for b in 0..q.min(9) {
                    for c in 0..q.min(9) {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
            // prime subfield closed and agrees with mod p arithmetic
            for a in 0..p {
                for b in 0..p {
                    assert_eq!(f.mul(a, b), a * b % p);
                    assert_eq!(f.add(a, b), (a + b) % p);
                }
            }
        }
    }

    #[test]
    fn f4_irreducible_is_x2_x_1() {
        let f = Field::new(FieldSpec::new(2, 2)).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(Field::prime(4).is_err());
        assert!(Field::new(FieldSpec::new(3, 0)).is_err());
    }

    fn arb_matrix() -> impl Strategy<Value = (u32, KMatrix)> {
        (prop::sample::select(vec![2u32, 3, 5]), 0usize..6, 0usize..6).prop_flat_map(|(p, r, c)| {
            prop::collection::vec(0..p, r * c).prop_map(move |d| (p, KMatrix::from_vec(r, c, d)))
        })
    }

    proptest! {
        #[test]
        fn rank_equals_transpose_rank((p, m) in arb_matrix()) {
            let f = Field::prime(p).unwrap();
            prop_assert_eq!(m.rank(&f), m.transpose().rank(&f));
        }

        #[test]
        fn rank_nullity((p, m) in arb_matrix()) {
            let f = Field::prime(p).unwrap();
            let ker = m.kernel_basis(&f);
            prop_assert_eq!(m.rank(&f) + ker.len(), m.cols());
            for v in &ker {
                prop_assert!(m.mul_vec(v, &f).iter().all(|&x| x == 0));
            }
            if !ker.is_empty() {
                prop_assert_eq!(KMatrix::from_columns(m.cols(), &ker).rank(&f), ker.len());
            }
        }

        #[test]
        fn solve_reproduces_rhs((p, m) in arb_matrix(), seed in any::<u64>()) {
            let f = Field::prime(p).unwrap();
            // b = m * x0 is always solvable
            let x0: Vec<u32> = (0..m.cols()).map(|i| ((seed >> (i % 60)) as u32) % p).collect();
            let b = KMatrix::from_columns(m.rows(), &[m.mul_vec(&x0, &f)]);
            let x = m.solve(&b, &f).unwrap().expect("consistent system");
            prop_assert_eq!(m.mul(&x, &f), b);
        }
    }
}
