//! Windowed complexes of free `R`-modules and maps between them.
//!
//! A [`FreeComplex`] stores ranks `b_n` for `lo <= n <= hi` and differentials
//! `d_n : C_n -> C_{n-1}` for `lo < n <= hi`. A [`ChainMap`] of degree `d`
//! stores `mat(n) : source_n -> target_{n+d}` and commutes strictly:
//! `d_tgt * mat(n) = mat(n-1) * d_src`.

use std::fmt::{self, Write as _};
use std::sync::Arc;

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ffield::KMatrix;
use crate::polyring::QuotientRing;

/// Matrix with entries in `R`, each entry a dense staircase vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RMatrix {
    rows: usize,
    cols: usize,
    d: usize,
    data: Vec<u32>,
}

impl RMatrix {
    pub fn zeros(rows: usize, cols: usize, d: usize) -> Self {
        Self { rows, cols, d, data: vec![0; rows * cols * d] }
    }

    pub fn identity(n: usize, d: usize) -> Self {
        let mut m = Self::zeros(n, n, d);
        for i in 0..n {
            m.data[(i * n + i) * d] = 1;
        }
        m
    }

    /// Builds a matrix from entries given as polynomial text.
    pub fn from_strings(ring: &QuotientRing, rows: &[Vec<&str>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c, ring.dim());
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(Error::DimensionMismatch("ragged matrix rows".into()));
            }
            for (j, s) in row.iter().enumerate() {
                m.set(i, j, &ring.parse_element(s)?);
            }
        }
        Ok(m)
    }

    /// Matrix with the given flattened `R^rows` vectors as columns.
    pub fn from_flat_columns(rows: usize, d: usize, cols: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(rows, cols.len(), d);
        for (j, v) in cols.iter().enumerate() {
            assert_eq!(v.len(), rows * d);
            for i in 0..rows {
                m.entry_mut(i, j).copy_from_slice(&v[i * d..(i + 1) * d]);
            }
        }
        m
    }

    /// Reads a matrix back from the vector layout used by [`RMatrix::data`].
    pub fn from_data(rows: usize, cols: usize, d: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols * d);
        Self { rows, cols, d, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ring_dim(&self) -> usize {
        self.d
    }

    /// Entries in row-major order, `d` coordinates each.
    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &[u32] {
        let o = (i * self.cols + j) * self.d;
        &self.data[o..o + self.d]
    }

    #[inline]
    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut [u32] {
        let o = (i * self.cols + j) * self.d;
        &mut self.data[o..o + self.d]
    }

    pub fn set(&mut self, i: usize, j: usize, v: &[u32]) {
        self.entry_mut(i, j).copy_from_slice(v);
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Flattened column `j` as a vector in `k^(rows * d)`.
    pub fn flat_column(&self, j: usize) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.rows * self.d);
        for i in 0..self.rows {
            v.extend_from_slice(self.get(i, j));
        }
        v
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows, self.d);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &Self, ring: &QuotientRing) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols, self.d);
        let mut acc = vec![0u32; self.d];
        for i in 0..self.rows {
            for j in 0..other.cols {
                acc.iter_mut().for_each(|x| *x = 0);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a.iter().all(|&x| x == 0) {
                        continue;
                    }
                    ring.mul_acc(&mut acc, a, other.get(k, j));
                }
                out.set(i, j, &acc);
            }
        }
        out
    }

    pub fn add(&self, other: &Self, ring: &QuotientRing) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = ring.field();
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Self { data, ..*self }
    }

    pub fn sub(&self, other: &Self, ring: &QuotientRing) -> Self {
        self.add(&other.neg(ring), ring)
    }

    pub fn neg(&self, ring: &QuotientRing) -> Self {
        let f = ring.field();
        Self { data: self.data.iter().map(|&a| f.neg(a)).collect(), ..*self }
    }

    pub fn scale(&self, s: u32, ring: &QuotientRing) -> Self {
        let f = ring.field();
        Self { data: self.data.iter().map(|&a| f.mul(a, s)).collect(), ..*self }
    }

    /// Reduction modulo the maximal ideal.
    pub fn constant_part(&self) -> KMatrix {
        let mut m = KMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j)[0]);
            }
        }
        m
    }

    /// First entry with nonzero constant term, scanning row-major.
    pub fn first_unit(&self) -> Option<(usize, usize)> {
        (0..self.rows).flat_map(|i| (0..self.cols).map(move |j| (i, j))).find(|&(i, j)| self.get(i, j)[0] != 0)
    }

    /// The `k`-linear map `k^(cols*d) -> k^(rows*d)` underlying this matrix.
    pub fn flatten(&self, ring: &QuotientRing) -> KMatrix {
        let d = self.d;
        let f = ring.field();
        let mut out = KMatrix::zeros(self.rows * d, self.cols * d);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                for (x, &cx) in e.iter().enumerate() {
                    if cx == 0 {
                        continue;
                    }
                    for b in 0..d {
                        for &(a, c) in ring.mult_entry(x, b) {
                            let (r, col) = (i * d + a, j * d + b);
                            out.set(r, col, f.add(out.get(r, col), f.mul(cx, c)));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn remove_row(&self, r: usize) -> Self {
        let keep: Vec<usize> = (0..self.rows).filter(|&i| i != r).collect();
        self.select(&keep, &(0..self.cols).collect::<Vec<_>>())
    }

    pub fn remove_col(&self, c: usize) -> Self {
        let keep: Vec<usize> = (0..self.cols).filter(|&j| j != c).collect();
        self.select(&(0..self.rows).collect::<Vec<_>>(), &keep)
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len(), self.d);
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j));
            }
        }
        m
    }

    pub fn block_diag(&self, other: &Self) -> Self {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols, self.d);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j));
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m.set(self.rows + i, self.cols + j, other.get(i, j));
            }
        }
        m
    }

    /// Matrix of `X -> self * X` on `X` of shape `self.cols x inner_cols`,
    /// in the vector layout of [`RMatrix::data`].
    pub fn left_mul_operator(&self, inner_cols: usize, ring: &QuotientRing) -> KMatrix {
        let d = self.d;
        let f = ring.field();
        let (out_rows, out_cols) = (self.rows, inner_cols);
        let mut m = KMatrix::zeros(out_rows * out_cols * d, self.cols * inner_cols * d);
        for i in 0..self.cols {
            for j in 0..inner_cols {
                for a in 0..d {
                    let col = (i * inner_cols + j) * d + a;
                    for r in 0..self.rows {
                        let e = self.get(r, i);
                        for (y, &cy) in e.iter().enumerate() {
                            if cy == 0 {
                                continue;
                            }
                            for &(x, c) in ring.mult_entry(y, a) {
                                let row = (r * out_cols + j) * d + x;
                                m.set(row, col, f.add(m.get(row, col), f.mul(cy, c)));
                            }
                        }
                    }
                }
            }
        }
        m
    }

    /// Matrix of `X -> X * self` on `X` of shape `inner_rows x self.rows`.
    pub fn right_mul_operator(&self, inner_rows: usize, ring: &QuotientRing) -> KMatrix {
        let d = self.d;
        let f = ring.field();
        let (out_rows, out_cols) = (inner_rows, self.cols);
        let mut m = KMatrix::zeros(out_rows * out_cols * d, inner_rows * self.rows * d);
        for i in 0..inner_rows {
            for j in 0..self.rows {
                for a in 0..d {
                    let col = (i * self.rows + j) * d + a;
                    for l in 0..self.cols {
                        let e = self.get(j, l);
                        for (y, &cy) in e.iter().enumerate() {
                            if cy == 0 {
                                continue;
                            }
                            for &(x, c) in ring.mult_entry(a, y) {
                                let row = (i * out_cols + l) * d + x;
                                m.set(row, col, f.add(m.get(row, col), f.mul(cy, c)));
                            }
                        }
                    }
                }
            }
        }
        m
    }

    /// Entrywise rendering as polynomials.
    pub fn render(&self, ring: &QuotientRing) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| ring.render_element(self.get(i, j))).collect()).collect()
    }
}

/// Integer, or one of the two infinities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Extended {
    NegInf,
    Finite(i64),
    PosInf,
}

impl Extended {
    pub fn finite(self) -> Option<i64> {
        match self {
            Extended::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn neg(self) -> Self {
        match self {
            Extended::NegInf => Extended::PosInf,
            Extended::PosInf => Extended::NegInf,
            Extended::Finite(v) => Extended::Finite(-v),
        }
    }

    pub fn add(self, n: i64) -> Self {
        match self {
            Extended::Finite(v) => Extended::Finite(v + n),
            other => other,
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::NegInf => write!(f, "-inf"),
            Extended::PosInf => write!(f, "+inf"),
            Extended::Finite(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for Extended {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Extended::Finite(v) => s.serialize_i64(*v),
            Extended::NegInf => s.serialize_str("-inf"),
            Extended::PosInf => s.serialize_str("+inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Extended {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(Extended::Finite(v)),
            Raw::Text(t) if t == "-inf" => Ok(Extended::NegInf),
            Raw::Text(t) if t == "+inf" => Ok(Extended::PosInf),
            Raw::Text(t) => Err(de::Error::custom(format!("expected integer, \"-inf\" or \"+inf\", got {t:?}"))),
        }
    }
}

/// A closed range of homological degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, n: i64) -> bool {
        self.lo <= n && n <= self.hi
    }

    pub fn width(&self) -> i64 {
        self.hi - self.lo
    }

    pub fn shrink(&self, by: i64) -> Self {
        Self { lo: self.lo + by, hi: self.hi - by }
    }

    pub fn intersect(&self, other: &Self) -> Self {
        Self { lo: self.lo.max(other.lo), hi: self.hi.min(other.hi) }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictStatus {
    ExactInWindow,
    Stabilized,
    Inconclusive,
}

/// A degree computed on a finite window, with an honesty label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WindowVerdict {
    pub value: Extended,
    pub status: VerdictStatus,
    pub window: Window,
}

/// Windowed complex of finitely generated free `R`-modules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeComplex {
    ring: Arc<QuotientRing>,
    lo: i64,
    hi: i64,
    ranks: Vec<usize>,
    /// `diffs[k]` is `d_{lo+1+k}`.
    diffs: Vec<RMatrix>,
}

impl FreeComplex {
    /// Checks shapes and `d_{n-1} d_n = 0`.
    pub fn new(ring: Arc<QuotientRing>, lo: i64, ranks: Vec<usize>, diffs: Vec<RMatrix>) -> Result<Self> {
        let c = Self::new_unchecked(ring, lo, ranks, diffs)?;
        for n in c.lo + 2..=c.hi {
            if !c.diff(n - 1).mul(c.diff(n), &c.ring).is_zero() {
                return Err(Error::InvariantBreach(format!("d_{} d_{} != 0", n - 1, n)));
            }
        }
        Ok(c)
    }

    /// Like [`FreeComplex::new`] but only checks shapes.
    pub fn new_unchecked(ring: Arc<QuotientRing>, lo: i64, ranks: Vec<usize>, diffs: Vec<RMatrix>) -> Result<Self> {
        if ranks.is_empty() {
            return Err(Error::DimensionMismatch("a complex needs at least one degree".into()));
        }
        if diffs.len() + 1 != ranks.len() {
            return Err(Error::DimensionMismatch(format!("{} ranks but {} differentials", ranks.len(), diffs.len())));
        }
        let d = ring.dim();
        for (k, m) in diffs.iter().enumerate() {
            if m.rows() != ranks[k] || m.cols() != ranks[k + 1] || m.ring_dim() != d {
                return Err(Error::DimensionMismatch(format!(
                    "d_{} has shape {}x{}, expected {}x{}",
                    lo + 1 + k as i64,
                    m.rows(),
                    m.cols(),
                    ranks[k],
                    ranks[k + 1]
                )));
            }
        }
        let hi = lo + ranks.len() as i64 - 1;
        Ok(Self { ring, lo, hi, ranks, diffs })
    }

    pub fn zero(ring: Arc<QuotientRing>, window: Window) -> Self {
        let len = (window.hi - window.lo + 1).max(1) as usize;
        let d = ring.dim();
        Self { ring, lo: window.lo, hi: window.lo + len as i64 - 1, ranks: vec![0; len], diffs: vec![RMatrix::zeros(0, 0, d); len - 1] }
    }

    pub fn ring(&self) -> &Arc<QuotientRing> {
        &self.ring
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn window(&self) -> Window {
        Window::new(self.lo, self.hi)
    }

    pub fn rank(&self, n: i64) -> usize {
        assert!(self.window().contains(n), "degree {n} outside {}", self.window());
        self.ranks[(n - self.lo) as usize]
    }

    /// `(degree, rank)` pairs over the window.
    pub fn ranks(&self) -> Vec<(i64, usize)> {
        self.ranks.iter().enumerate().map(|(k, &r)| (self.lo + k as i64, r)).collect()
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.ranks.iter().all(|&r| r == 0)
    }

    /// `d_n : C_n -> C_{n-1}` for `lo < n <= hi`.
    pub fn diff(&self, n: i64) -> &RMatrix {
        assert!(n > self.lo && n <= self.hi, "differential d_{n} outside {}", self.window());
        &self.diffs[(n - self.lo - 1) as usize]
    }

    pub fn has_diff(&self, n: i64) -> bool {
        n > self.lo && n <= self.hi
    }

    /// `Sigma^m C`: `(Sigma^m C)_n = C_{n-m}` with differential `(-1)^m d_{n-m}`.
    pub fn shift(&self, m: i64) -> Self {
        let diffs = if m.rem_euclid(2) == 1 {
            self.diffs.iter().map(|x| x.neg(&self.ring)).collect()
        } else {
            self.diffs.clone()
        };
        Self { ring: self.ring.clone(), lo: self.lo + m, hi: self.hi + m, ranks: self.ranks.clone(), diffs }
    }

    /// `Hom(C, R)`: `C*_n = (C_{-n})*` with `d*_n = (d_{1-n})^T`.
    pub fn dualize(&self) -> Self {
        let ranks: Vec<usize> = self.ranks.iter().rev().copied().collect();
        let diffs: Vec<RMatrix> = self.diffs.iter().rev().map(RMatrix::transpose).collect();
        Self { ring: self.ring.clone(), lo: -self.hi, hi: -self.lo, ranks, diffs }
    }

    /// Restriction to a subwindow.
    pub fn restrict(&self, window: Window) -> Result<Self> {
        if window.lo < self.lo || window.hi > self.hi || window.lo > window.hi {
            return Err(Error::OutOfWindow { degree: if window.lo < self.lo { window.lo } else { window.hi }, lo: self.lo, hi: self.hi });
        }
        let a = (window.lo - self.lo) as usize;
        let b = (window.hi - self.lo) as usize;
        Ok(Self {
            ring: self.ring.clone(),
            lo: window.lo,
            hi: window.hi,
            ranks: self.ranks[a..=b].to_vec(),
            diffs: self.diffs[a..b].to_vec(),
        })
    }

    /// Block-diagonal sum on the intersection of the windows.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        let w = self.window().intersect(&other.window());
        if w.lo > w.hi {
            return Err(Error::TooNarrow { lo: w.lo, hi: w.hi, reason: "windows do not overlap".into() });
        }
        let (a, b) = (self.restrict(w)?, other.restrict(w)?);
        let ranks = a.ranks.iter().zip(&b.ranks).map(|(x, y)| x + y).collect();
        let diffs = a.diffs.iter().zip(&b.diffs).map(|(x, y)| x.block_diag(y)).collect();
        Ok(Self { ring: self.ring.clone(), lo: w.lo, hi: w.hi, ranks, diffs })
    }

    /// Every differential entry lies in the maximal ideal.
    pub fn is_minimal(&self) -> bool {
        self.diffs.iter().all(|m| m.first_unit().is_none())
    }

    /// Exactness of `C` and `Hom(C, R)` at every interior degree.
    pub fn is_totally_acyclic(&self) -> bool {
        self.is_exact_interior() && self.dualize().is_exact_interior()
    }

    fn is_exact_interior(&self) -> bool {
        let d = self.ring.dim();
        let f = self.ring.field();
        let ranks: Vec<usize> = (self.lo + 1..=self.hi).map(|n| self.diff(n).flatten(&self.ring).rank(f)).collect();
        (self.lo + 1..self.hi).all(|n| {
            let k = (n - self.lo - 1) as usize;
            self.rank(n) * d - ranks[k] == ranks[k + 1]
        })
    }

    /// Splits off contractible summands `R --unit--> R` until minimal.
    pub fn minimalize(&self) -> (Self, MinimalizationCertificate) {
        let ring = self.ring.clone();
        let d = ring.dim();
        let mut ranks = self.ranks.clone();
        let mut diffs = self.diffs.clone();
        let len = ranks.len();
        let mut proj: Vec<RMatrix> = ranks.iter().map(|&r| RMatrix::identity(r, d)).collect();
        let mut incl: Vec<RMatrix> = proj.clone();
        // htpy[k]: C_{lo+k} -> C_{lo+k+1} in the original bases
        let mut htpy: Vec<RMatrix> = (0..len.saturating_sub(1)).map(|k| RMatrix::zeros(self.ranks[k + 1], self.ranks[k], d)).collect();
        let mut steps = 0usize;
        'outer: loop {
            for k in 0..diffs.len() {
                let Some((r, c)) = diffs[k].first_unit() else { continue };
                // d_n with n = lo + 1 + k; C_n has index k + 1, C_{n-1} index k
                let dn = &diffs[k];
                let a_inv = ring.inv(dn.get(r, c)).expect("unit entry");
                let b_row: Vec<Vec<u32>> = (0..dn.cols()).filter(|&j| j != c).map(|j| dn.get(r, j).to_vec()).collect();
                let gamma: Vec<Vec<u32>> = (0..dn.rows()).filter(|&i| i != r).map(|i| dn.get(i, c).to_vec()).collect();
                let mut new_dn = dn.remove_row(r).remove_col(c);
                for (i, g) in gamma.iter().enumerate() {
                    let ga = ring.mul(g, &a_inv);
                    for (j, b) in b_row.iter().enumerate() {
                        let prod = ring.mul(&ga, b);
                        let e = new_dn.entry_mut(i, j);
                        let v = ring.add(e, &ring.neg(&prod));
                        e.copy_from_slice(&v);
                    }
                }
                // homotopy update uses the certificate before this step
                {
                    let g_col: Vec<Vec<u32>> = (0..incl[k + 1].rows()).map(|i| incl[k + 1].get(i, c).to_vec()).collect();
                    let f_row: Vec<Vec<u32>> = (0..proj[k].cols()).map(|j| proj[k].get(r, j).to_vec()).collect();
                    let h = &mut htpy[k];
                    for (i, gi) in g_col.iter().enumerate() {
                        if gi.iter().all(|&x| x == 0) {
                            continue;
                        }
                        let gi = ring.mul(gi, &a_inv);
                        for (j, fj) in f_row.iter().enumerate() {
                            let prod = ring.mul(&gi, fj);
                            let e = h.entry_mut(i, j);
                            let v = ring.add(e, &prod);
                            e.copy_from_slice(&v);
                        }
                    }
                }
                // projection: f_n drops row c; f_{n-1} row i gets -gamma_i a^-1 times row r
                let old_fk = proj[k].clone();
                let mut new_fk = old_fk.remove_row(r);
                for (i, g) in gamma.iter().enumerate() {
                    let s = ring.neg(&ring.mul(g, &a_inv));
                    for j in 0..old_fk.cols() {
                        let e = new_fk.entry_mut(i, j);
                        let v = ring.add(e, &ring.mul(&s, old_fk.get(r, j)));
                        e.copy_from_slice(&v);
                    }
                }
                proj[k] = new_fk;
                proj[k + 1] = proj[k + 1].remove_row(c);
                // inclusion: g_n column l gets -a^-1 b_l times column c; g_{n-1} drops column r
                let old_g = incl[k + 1].clone();
                let mut new_g = old_g.remove_col(c);
                for (l, b) in b_row.iter().enumerate() {
                    let s = ring.neg(&ring.mul(&a_inv, b));
                    for i in 0..old_g.rows() {
                        let e = new_g.entry_mut(i, l);
                        let v = ring.add(e, &ring.mul(&s, old_g.get(i, c)));
                        e.copy_from_slice(&v);
                    }
                }
                incl[k + 1] = new_g;
                incl[k] = incl[k].remove_col(r);
                if k + 1 < diffs.len() {
                    diffs[k + 1] = diffs[k + 1].remove_row(c);
                }
                if k > 0 {
                    diffs[k - 1] = diffs[k - 1].remove_col(r);
                }
                diffs[k] = new_dn;
                ranks[k] -= 1;
                ranks[k + 1] -= 1;
                steps += 1;
                continue 'outer;
            }
            break;
        }
        let minimal = Self { ring: ring.clone(), lo: self.lo, hi: self.hi, ranks, diffs };
        let source = Arc::new(self.clone());
        let target = Arc::new(minimal.clone());
        let cert = MinimalizationCertificate {
            projection: ChainMap { source: source.clone(), target: target.clone(), degree: 0, lo: self.lo, hi: self.hi, mats: proj },
            inclusion: ChainMap { source: target, target: source.clone(), degree: 0, lo: self.lo, hi: self.hi, mats: incl },
            homotopy: ChainMap { source: source.clone(), target: source, degree: 1, lo: self.lo, hi: self.hi - 1, mats: htpy },
            steps,
        };
        (minimal, cert)
    }

    /// Ranks row followed by each differential.
    pub fn pretty(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "complex over {} on {}", self.ring.describe(), self.window());
        let degs: Vec<String> = self.ranks().iter().rev().map(|(n, r)| format!("{n}:R^{r}")).collect();
        let _ = writeln!(s, "ranks (high to low): {}", degs.join("  "));
        for n in (self.lo + 1..=self.hi).rev() {
            let m = self.diff(n);
            let _ = writeln!(s, "d_{n}: R^{} -> R^{}", m.cols(), m.rows());
            for row in m.render(&self.ring) {
                let _ = writeln!(s, "  [{}]", row.join(", "));
            }
        }
        s
    }
}

/// Projection `f`, inclusion `g` and homotopy `h` with `f g = id` and
/// `id - g f = d h + h d` on the original complex.
#[derive(Debug, Clone)]
pub struct MinimalizationCertificate {
    pub projection: ChainMap,
    pub inclusion: ChainMap,
    pub homotopy: ChainMap,
    /// Number of split steps performed.
    pub steps: usize,
}

/// Family of matrices `mat(n) : source_n -> target_{n+degree}`.
///
/// Also used as the carrier for homotopies, which are not chain maps.
#[derive(Debug, Clone)]
pub struct ChainMap {
    source: Arc<FreeComplex>,
    target: Arc<FreeComplex>,
    degree: i64,
    lo: i64,
    hi: i64,
    mats: Vec<RMatrix>,
}

fn same_complex(a: &Arc<FreeComplex>, b: &Arc<FreeComplex>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl ChainMap {
    /// Degrees `n` where both `source_n` and `target_{n+degree}` exist.
    pub fn overlap(source: &FreeComplex, target: &FreeComplex, degree: i64) -> Window {
        Window::new(source.lo.max(target.lo - degree), source.hi.min(target.hi - degree))
    }

    /// `mats[k]` is the map at degree `overlap.lo + k`.
    pub fn new(source: Arc<FreeComplex>, target: Arc<FreeComplex>, degree: i64, mats: Vec<RMatrix>) -> Result<Self> {
        if source.ring != target.ring {
            return Err(Error::RingMismatch);
        }
        let w = Self::overlap(&source, &target, degree);
        let expected = (w.hi - w.lo + 1).max(0) as usize;
        if mats.len() != expected {
            return Err(Error::DimensionMismatch(format!("expected {expected} matrices on {w}, got {}", mats.len())));
        }
        for (k, m) in mats.iter().enumerate() {
            let n = w.lo + k as i64;
            if m.rows() != target.rank(n + degree) || m.cols() != source.rank(n) {
                return Err(Error::DimensionMismatch(format!("map at degree {n} has wrong shape")));
            }
        }
        Ok(Self { source, target, degree, lo: w.lo, hi: w.hi, mats })
    }

    /// Builds the map degree by degree from a closure.
    pub fn from_fn(source: Arc<FreeComplex>, target: Arc<FreeComplex>, degree: i64, mut f: impl FnMut(i64) -> RMatrix) -> Result<Self> {
        let w = Self::overlap(&source, &target, degree);
        let mats = (w.lo..=w.hi).map(&mut f).collect();
        Self::new(source, target, degree, mats)
    }

    pub fn identity(c: Arc<FreeComplex>) -> Self {
        let d = c.ring.dim();
        let mats = c.ranks.iter().map(|&r| RMatrix::identity(r, d)).collect();
        Self { source: c.clone(), target: c.clone(), degree: 0, lo: c.lo, hi: c.hi, mats }
    }

    pub fn zero(source: Arc<FreeComplex>, target: Arc<FreeComplex>, degree: i64) -> Self {
        let d = source.ring.dim();
        let w = Self::overlap(&source, &target, degree);
        let mats = (w.lo..=w.hi).map(|n| RMatrix::zeros(target.rank(n + degree), source.rank(n), d)).collect();
        Self { source, target, degree, lo: w.lo, hi: w.hi, mats }
    }

    pub fn source(&self) -> &Arc<FreeComplex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FreeComplex> {
        &self.target
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn window(&self) -> Window {
        Window::new(self.lo, self.hi)
    }

    pub fn ring(&self) -> &Arc<QuotientRing> {
        &self.source.ring
    }

    pub fn mat(&self, n: i64) -> &RMatrix {
        assert!(self.window().contains(n), "map degree {n} outside {}", self.window());
        &self.mats[(n - self.lo) as usize]
    }

    pub fn mats(&self) -> &[RMatrix] {
        &self.mats
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.degree != other.degree || !same_complex(&self.source, &other.source) || !same_complex(&self.target, &other.target) {
            return Err(Error::DimensionMismatch("maps have different source, target or degree".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let ring = self.ring().clone();
        let mats = self.mats.iter().zip(&other.mats).map(|(a, b)| a.add(b, &ring)).collect();
        Ok(Self { mats, ..self.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let ring = self.ring().clone();
        let mats = self.mats.iter().zip(&other.mats).map(|(a, b)| a.sub(b, &ring)).collect();
        Ok(Self { mats, ..self.clone() })
    }

    pub fn scale(&self, s: u32) -> Self {
        let ring = self.ring().clone();
        Self { mats: self.mats.iter().map(|m| m.scale(s, &ring)).collect(), ..self.clone() }
    }

    /// `self o other`, defined where both factors are.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if !same_complex(&other.target, &self.source) {
            return Err(Error::DimensionMismatch("composition of maps between different complexes".into()));
        }
        let ring = self.ring().clone();
        let degree = self.degree + other.degree;
        let lo = other.lo.max(self.lo - other.degree);
        let hi = other.hi.min(self.hi - other.degree);
        let mats = (lo..=hi).map(|n| self.mat(n + other.degree).mul(other.mat(n), &ring)).collect();
        Ok(Self { source: other.source.clone(), target: self.target.clone(), degree, lo, hi: hi.max(lo - 1), mats })
    }

    /// Transport along a change of complex: `post o self o pre`.
    pub fn conjugate(&self, pre: &ChainMap, post: &ChainMap) -> Result<Self> {
        post.compose(self)?.compose(pre)
    }

    /// Degrees where the commutation square is fully defined.
    pub fn interior(&self) -> Vec<i64> {
        (self.lo + 1..=self.hi).filter(|&n| self.target.has_diff(n + self.degree)).collect()
    }

    /// `d_tgt mat(n) = mat(n-1) d_src` at every interior degree.
    pub fn is_chain_map(&self) -> bool {
        let ring = &self.source.ring;
        self.interior().into_iter().all(|n| {
            let left = self.target.diff(n + self.degree).mul(self.mat(n), ring);
            let right = self.mat(n - 1).mul(self.source.diff(n), ring);
            left == right
        })
    }

    fn check_degree(&self, n: i64) -> Result<()> {
        if !self.window().contains(n) {
            return Err(Error::OutOfWindow { degree: n, lo: self.lo, hi: self.hi });
        }
        Ok(())
    }

    /// Nakayama test: `mat(n)` mod the maximal ideal has full row rank.
    pub fn surjective_at(&self, n: i64) -> Result<bool> {
        self.check_degree(n)?;
        let m = self.mat(n).constant_part();
        Ok(m.rank(self.ring().field()) == m.rows())
    }

    /// Nakayama test: `mat(n)` mod the maximal ideal has full column rank.
    pub fn split_injective_at(&self, n: i64) -> Result<bool> {
        self.check_degree(n)?;
        let m = self.mat(n).constant_part();
        Ok(m.rank(self.ring().field()) == m.cols())
    }

    /// `Hom(f, R)` as a map `target* -> source*` of the same degree:
    /// at degree `m` it is `mat(-m-degree)^T`.
    pub fn dualize(&self) -> Self {
        let src = Arc::new(self.target.dualize());
        let tgt = Arc::new(self.source.dualize());
        let lo = -self.hi - self.degree;
        let hi = -self.lo - self.degree;
        let mats = (lo..=hi).map(|m| self.mat(-m - self.degree).transpose()).collect();
        Self { source: src, target: tgt, degree: self.degree, lo, hi, mats }
    }

    /// Checks `f - g = d h + h d` at every degree where all terms exist.
    pub fn is_homotopy_between(&self, f: &ChainMap, g: &ChainMap) -> bool {
        let ring = f.ring().clone();
        let diff = match f.sub(g) {
            Ok(x) => x,
            Err(_) => return false,
        };
        let (ea, eb) = homotopy_equation_range(f);
        (ea..=eb).all(|n| {
            let lhs = diff.mat(n);
            let a = f.target.diff(n + f.degree + 1).mul(self.mat(n), &ring);
            let b = self.mat(n - 1).mul(f.source.diff(n), &ring);
            *lhs == a.add(&b, &ring)
        })
    }
}

/// Equation degrees `n` for which `h_n`, `h_{n-1}` and both differentials exist.
fn homotopy_equation_range(f: &ChainMap) -> (i64, i64) {
    let (s, t, d) = (&f.source, &f.target, f.degree);
    (s.lo.max(t.lo - d) + 1, s.hi.min(t.hi - d - 1))
}

/// Some `h` of degree `deg f + 1` with `f - g = d h + h d` on the interior,
/// or `None` if no such `h` exists.
///
/// The system is block bidiagonal in `h_{a-1}, ..., h_b`; it is swept by
/// degree keeping the affine set of feasible `h_n`, then back-substituted.
pub fn solve_homotopy(f: &ChainMap, g: &ChainMap) -> Result<Option<ChainMap>> {
    f.check_same_shape(g)?;
    let ring = f.ring().clone();
    let field = ring.field();
    let d = ring.dim();
    let (s, t, deg) = (f.source.clone(), f.target.clone(), f.degree);
    let (ea, eb) = homotopy_equation_range(f);
    let hshape = |n: i64| (t.rank(n + deg + 1), s.rank(n));
    let diff = f.sub(g)?;
    if ea > eb {
        let mats = Vec::new();
        return Ok(Some(ChainMap { source: s, target: t, degree: deg + 1, lo: ea, hi: ea - 1, mats }));
    }
    if diff.mats.iter().all(RMatrix::is_zero) {
        return Ok(Some(ChainMap { source: s.clone(), target: t.clone(), degree: deg + 1, lo: ea - 1, hi: eb, mats: (ea - 1..=eb).map(|n| { let (r, c) = hshape(n); RMatrix::zeros(r, c, d) }).collect() }));
    }
    if let Some(h) = homotopy_by_exactness(&diff, ea, eb)? {
        return Ok(Some(h));
    }
    // x_n = u_n + V_n y
    let dim0 = { let (r, c) = hshape(ea - 1); r * c * d };
    let mut us: Vec<Vec<u32>> = vec![vec![0; dim0]];
    let mut vs: Vec<KMatrix> = vec![KMatrix::identity(dim0)];
    let mut bs: Vec<KMatrix> = Vec::new();
    let mut as_: Vec<KMatrix> = Vec::new();
    let mut cs: Vec<Vec<u32>> = Vec::new();
    for n in ea..=eb {
        let (hr, hc) = hshape(n);
        let a = t.diff(n + deg + 1).left_mul_operator(hc, &ring);
        let (pr, _) = hshape(n - 1);
        let b = s.diff(n).right_mul_operator(pr, &ring);
        let c: Vec<u32> = diff.mat(n).data().to_vec();
        let v_prev = vs.last().unwrap();
        let u_prev = us.last().unwrap();
        let bv = b.mul(v_prev, field);
        let bu = b.mul_vec(u_prev, field);
        let rhs: Vec<u32> = c.iter().zip(&bu).map(|(&x, &y)| field.sub(x, y)).collect();
        let joint = a.hstack(&bv);
        let rhs_m = KMatrix::from_columns(rhs.len(), &[rhs]);
        let Some(sol) = joint.solve(&rhs_m, field)? else {
            return Ok(None);
        };
        let nx = hr * hc * d;
        let u_n: Vec<u32> = (0..nx).map(|i| sol.get(i, 0)).collect();
        let ker = joint.kernel_basis(field);
        let mut span = crate::ffield::Subspace::new(nx);
        for kv in &ker {
            span.insert(&kv[..nx], field);
        }
        let v_n = if span.dim() == 0 { KMatrix::zeros(nx, 0) } else { KMatrix::from_columns(nx, span.basis()) };
        us.push(u_n);
        vs.push(v_n);
        as_.push(a);
        bs.push(b);
        cs.push(c);
    }
    // back substitution
    let count = us.len();
    let mut xs: Vec<Vec<u32>> = vec![Vec::new(); count];
    xs[count - 1] = us[count - 1].clone();
    for k in (0..count - 1).rev() {
        // equation index k corresponds to degree ea + k, linking x_k and x_{k+1}
        let a = &as_[k];
        let b = &bs[k];
        let ax = a.mul_vec(&xs[k + 1], field);
        let bu = b.mul_vec(&us[k], field);
        let rhs: Vec<u32> = cs[k].iter().zip(ax.iter().zip(&bu)).map(|(&c, (&x, &y))| field.sub(field.sub(c, x), y)).collect();
        let bv = b.mul(&vs[k], field);
        let rhs_m = KMatrix::from_columns(rhs.len(), &[rhs]);
        let y = bv
            .solve(&rhs_m, field)?
            .ok_or_else(|| Error::InvariantBreach("homotopy back-substitution failed".into()))?;
        let yv: Vec<u32> = (0..y.rows()).map(|i| y.get(i, 0)).collect();
        let vy = vs[k].mul_vec(&yv, field);
        xs[k] = us[k].iter().zip(&vy).map(|(&a, &b)| field.add(a, b)).collect();
    }
    let mats = xs
        .into_iter()
        .enumerate()
        .map(|(k, x)| {
            let (r, c) = hshape(ea - 1 + k as i64);
            RMatrix::from_data(r, c, d, x)
        })
        .collect();
    Ok(Some(ChainMap { source: s, target: t, degree: deg + 1, lo: ea - 1, hi: eb, mats }))
}

/// Solves `a * x = m` for an R-matrix `x`, one column at a time.
fn left_divide(a: &RMatrix, m: &RMatrix, ring: &QuotientRing) -> Result<Option<RMatrix>> {
    let d = ring.dim();
    if m.cols() == 0 || a.cols() == 0 {
        return Ok(m.is_zero().then(|| RMatrix::zeros(a.cols(), m.cols(), d)));
    }
    let cols: Vec<Vec<u32>> = (0..m.cols()).map(|j| m.flat_column(j)).collect();
    let rhs = KMatrix::from_columns(m.rows() * d, &cols);
    let Some(sol) = a.flatten(ring).solve(&rhs, ring.field())? else {
        return Ok(None);
    };
    let xs: Vec<Vec<u32>> = (0..sol.cols()).map(|j| (0..sol.rows()).map(|i| sol.get(i, j)).collect()).collect();
    Ok(Some(RMatrix::from_flat_columns(a.cols(), d, &xs)))
}

/// Homotopy for `diff` built outward from the cheapest degree, assuming exactness.
/// Returns `None` when some step has no solution so the caller can fall back.
fn homotopy_by_exactness(diff: &ChainMap, ea: i64, eb: i64) -> Result<Option<ChainMap>> {
    let ring = diff.ring().clone();
    let field = ring.field();
    let d = ring.dim();
    let (s, t, deg) = (diff.source.clone(), diff.target.clone(), diff.degree);
    let hshape = |n: i64| (t.rank(n + deg + 1), s.rank(n));
    let size = |n: i64| {
        let (r, c) = hshape(n);
        r * c
    };
    let start = (ea..=eb).min_by_key(|&n| size(n) + size(n - 1)).unwrap();
    let mut hs: Vec<Option<RMatrix>> = vec![None; (eb - ea + 2) as usize];
    let slot = |n: i64| (n - ea + 1) as usize;

    let (hr, hc) = hshape(start);
    let (pr, pc) = hshape(start - 1);
    let a = t.diff(start + deg + 1).left_mul_operator(hc, &ring);
    let b = s.diff(start).right_mul_operator(pr, &ring);
    let c = diff.mat(start).data().to_vec();
    let rhs = KMatrix::from_columns(c.len(), &[c]);
    let Some(sol) = a.hstack(&b).solve(&rhs, field)? else {
        return Ok(None);
    };
    let col: Vec<u32> = (0..sol.rows()).map(|i| sol.get(i, 0)).collect();
    let nx = hr * hc * d;
    hs[slot(start)] = Some(RMatrix::from_data(hr, hc, d, col[..nx].to_vec()));
    hs[slot(start - 1)] = Some(RMatrix::from_data(pr, pc, d, col[nx..].to_vec()));

    for n in start + 1..=eb {
        let prev = hs[slot(n - 1)].as_ref().unwrap();
        let m = diff.mat(n).sub(&prev.mul(s.diff(n), &ring), &ring);
        let Some(h) = left_divide(t.diff(n + deg + 1), &m, &ring)? else {
            return Ok(None);
        };
        hs[slot(n)] = Some(h);
    }
    for n in (ea..start).rev() {
        let next = hs[slot(n)].as_ref().unwrap();
        let m = diff.mat(n).sub(&t.diff(n + deg + 1).mul(next, &ring), &ring);
        let Some(h) = left_divide(&s.diff(n).transpose(), &m.transpose(), &ring)? else {
            return Ok(None);
        };
        hs[slot(n - 1)] = Some(h.transpose());
    }
    let mats = hs.into_iter().map(Option::unwrap).collect();
    Ok(Some(ChainMap { source: s, target: t, degree: deg + 1, lo: ea - 1, hi: eb, mats }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn xy() -> Arc<QuotientRing> {
        Arc::new(QuotientRing::from_strings(2, 2, &["x^2", "y^2"]).unwrap())
    }

    fn unit_complex(ring: &Arc<QuotientRing>) -> FreeComplex {
        let m = RMatrix::from_strings(ring, &[vec!["1"]]).unwrap();
        FreeComplex::new(ring.clone(), 0, vec![1, 1], vec![m]).unwrap()
    }

    /// The 1-periodic complex with `d = (x)` everywhere on [lo, hi].
    fn periodic_x(ring: &Arc<QuotientRing>, lo: i64, hi: i64) -> FreeComplex {
        let m = RMatrix::from_strings(ring, &[vec!["x"]]).unwrap();
        let len = (hi - lo + 1) as usize;
        FreeComplex::new(ring.clone(), lo, vec![1; len], vec![m; len - 1]).unwrap()
    }

    #[test]
    fn rejects_nonzero_square() {
        let r = xy();
        let m = RMatrix::from_strings(&r, &[vec!["x"]]).unwrap();
        let n = RMatrix::from_strings(&r, &[vec!["y"]]).unwrap();
        assert!(FreeComplex::new(r, 0, vec![1, 1, 1], vec![m, n]).is_err());
    }

    #[test]
    fn shift_examples() {
        let r = xy();
        let c = periodic_x(&r, -2, 4);
        assert_eq!(c.shift(0), c);
        assert_eq!(c.shift(2).shift(-2), c);
        let s = c.shift(3);
        assert_eq!(s.rank(5), c.rank(2));
        assert_eq!(s.diff(3), &c.diff(0).neg(&r));
    }

    #[test]
    fn dualize_examples() {
        let r = xy();
        let z = FreeComplex::zero(r.clone(), Window::new(-2, 2));
        assert!(z.dualize().is_zero());
        let c = periodic_x(&r, -1, 3);
        assert_eq!(c.dualize().dualize(), c);
        assert_eq!(c.dualize().window(), Window::new(-3, 1));
    }

    #[test]
    fn direct_sum_examples() {
        let r = xy();
        let c = periodic_x(&r, 0, 4);
        let z = FreeComplex::zero(r.clone(), c.window());
        assert_eq!(c.direct_sum(&z).unwrap(), c);
        let s = c.direct_sum(&c.shift(1).restrict(Window::new(1, 4)).unwrap()).unwrap();
        assert_eq!(s.window(), Window::new(1, 4));
        assert_eq!(s.rank(2), 2);
        assert!(s.is_minimal());
    }

    #[test]
    fn minimalize_contractible() {
        let r = xy();
        let (m, cert) = unit_complex(&r).minimalize();
        assert!(m.is_zero());
        assert_eq!(cert.steps, 1);
    }

    #[test]
    fn minimalize_fixed_point() {
        let r = xy();
        let c = periodic_x(&r, 0, 4);
        let (m, cert) = c.minimalize();
        assert_eq!(m, c);
        assert_eq!(cert.steps, 0);
    }

    #[test]
    fn minimalize_splits_padding() {
        let r = xy();
        let c = periodic_x(&r, 0, 3);
        let pad = unit_complex(&r).shift(1);
        let padded = FreeComplex::new(
            r.clone(),
            0,
            vec![1, 2, 2, 1],
            vec![
                c.diff(1).hstack_for_test(&pad_row(&r, 1, 1)),
                c.diff(2).block_diag(pad.diff(2)),
                c.diff(3).vstack_for_test(&pad_row(&r, 1, 1)),
            ],
        )
        .unwrap();
        let (m, cert) = padded.minimalize();
        assert_eq!(m.ranks(), c.ranks());
        assert!(m.is_minimal());
        check_certificate(&padded, &m, &cert);
    }

    fn pad_row(r: &QuotientRing, rows: usize, cols: usize) -> RMatrix {
        RMatrix::zeros(rows, cols, r.dim())
    }

    impl RMatrix {
        fn hstack_for_test(&self, other: &Self) -> Self {
            let mut m = Self::zeros(self.rows, self.cols + other.cols, self.d);
            for i in 0..self.rows {
                for j in 0..self.cols {
                    m.set(i, j, self.get(i, j));
                }
                for j in 0..other.cols {
                    m.set(i, self.cols + j, other.get(i, j));
                }
            }
            m
        }

        fn vstack_for_test(&self, other: &Self) -> Self {
            self.transpose().hstack_for_test(&other.transpose()).transpose()
        }
    }

    fn check_certificate(c: &FreeComplex, m: &FreeComplex, cert: &MinimalizationCertificate) {
        assert!(cert.projection.is_chain_map());
        assert!(cert.inclusion.is_chain_map());
        let fg = cert.projection.compose(&cert.inclusion).unwrap();
        let id_m = ChainMap::identity(Arc::new(m.clone()));
        for n in m.lo()..=m.hi() {
            assert_eq!(fg.mat(n), id_m.mat(n));
        }
        let gf = cert.inclusion.compose(&cert.projection).unwrap();
        let id = ChainMap::identity(Arc::new(c.clone()));
        assert!(cert.homotopy.is_homotopy_between(&id, &gf));
    }

    #[test]
    fn homotopy_examples() {
        let r = xy();
        let c = Arc::new(periodic_x(&r, 0, 5));
        let id = ChainMap::identity(c.clone());
        let h = solve_homotopy(&id, &id).unwrap().unwrap();
        assert!(h.mats().iter().all(RMatrix::is_zero));
        // identity vs zero on the contractible R --1--> R padded into a longer window
        let u = RMatrix::from_strings(&r, &[vec!["1"]]).unwrap();
        let z = RMatrix::zeros(0, 1, r.dim());
        let zz = RMatrix::zeros(1, 0, r.dim());
        let contractible = Arc::new(FreeComplex::new(r.clone(), 0, vec![0, 1, 1, 0], vec![z, u, zz]).unwrap());
        let id = ChainMap::identity(contractible.clone());
        let zero = ChainMap::zero(contractible.clone(), contractible, 0);
        let h = solve_homotopy(&id, &zero).unwrap().expect("contractible");
        assert!(h.is_homotopy_between(&id, &zero));
        // identity vs zero on a minimal exact complex: no homotopy
        let id = ChainMap::identity(c.clone());
        let zero = ChainMap::zero(c.clone(), c, 0);
        assert!(solve_homotopy(&id, &zero).unwrap().is_none());
    }

    #[test]
    fn nakayama_tests() {
        let r = xy();
        let c = Arc::new(periodic_x(&r, 0, 4));
        let id = ChainMap::identity(c.clone());
        assert!(id.surjective_at(2).unwrap() && id.split_injective_at(2).unwrap());
        let zero = ChainMap::zero(c.clone(), c, 0);
        assert!(!zero.surjective_at(2).unwrap() && !zero.split_injective_at(2).unwrap());
        assert!(matches!(id.surjective_at(9), Err(Error::OutOfWindow { .. })));
    }

    #[test]
    fn total_acyclicity() {
        let r = xy();
        assert!(FreeComplex::zero(r.clone(), Window::new(-3, 3)).is_totally_acyclic());
        assert!(periodic_x(&r, -3, 3).is_totally_acyclic());
        let m = RMatrix::from_strings(&r, &[vec!["x*y"]]).unwrap();
        let c = FreeComplex::new(r, 0, vec![1, 1, 1], vec![m.clone(), m]).unwrap();
        assert!(!c.is_totally_acyclic());
    }

    #[test]
    fn extended_serde() {
        let v = vec![Extended::NegInf, Extended::Finite(-3), Extended::PosInf];
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(text, r#"["-inf",-3,"+inf"]"#);
        let back: Vec<Extended> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, v);
    }

    fn arb_minimal_complex() -> impl Strategy<Value = (u64, i64)> {
        (any::<u64>(), -3i64..3)
    }

    /// A random minimal complex `R^a --(x or y)-->` built from scalar blocks.
    fn random_complex(r: &Arc<QuotientRing>, seed: u64, lo: i64) -> FreeComplex {
        let len = 5;
        let mut ranks = Vec::new();
        let mut diffs = Vec::new();
        for k in 0..len {
            ranks.push(1 + ((seed >> (3 * k)) % 2) as usize);
        }
        for k in 0..len - 1 {
            let entry = if (seed >> (20 + k)) & 1 == 0 { "x" } else { "x*y" };
            let m = RMatrix::zeros(ranks[k], ranks[k + 1], r.dim());
            let mut m = m;
            m.set(0, 0, &r.parse_element(if k % 2 == 0 { entry } else { "x" }).unwrap());
            diffs.push(m);
        }
        FreeComplex::new_unchecked(r.clone(), lo, ranks, diffs).unwrap()
    }

    proptest! {
        #[test]
        fn structural_involutions((seed, lo) in arb_minimal_complex(), m in -4i64..4) {
            let r = xy();
            let c = random_complex(&r, seed, lo);
            prop_assert_eq!(&c.dualize().dualize(), &c);
            prop_assert_eq!(&c.shift(m).shift(-m), &c);
            let a = c.shift(m).dualize();
            let b = c.dualize().shift(-m);
            prop_assert_eq!(a.ranks(), b.ranks());
            for n in a.lo() + 1..=a.hi() {
                let sign_fix = if m.rem_euclid(2) == 1 { b.diff(n).neg(&r) } else { b.diff(n).clone() };
                prop_assert!(a.diff(n) == b.diff(n) || a.diff(n) == &sign_fix);
            }
        }

        #[test]
        fn minimalize_idempotent(seed in any::<u64>()) {
            let r = xy();
            let c = random_complex(&r, seed, 0);
            let pad = unit_complex(&r).shift(1);
            let big = FreeComplex::new_unchecked(r.clone(), 0,
                c.ranks().iter().map(|&(n, b)| b + usize::from(n == 1 || n == 2)).collect(),
                (1..=4).map(|n| {
                    let base = c.diff(n).clone();
                    match n {
                        2 => base.block_diag(pad.diff(2)),
                        1 => base.hstack_for_test(&RMatrix::zeros(base.rows(), 1, r.dim())),
                        3 => base.vstack_for_test(&RMatrix::zeros(1, base.cols(), r.dim())),
                        _ => base,
                    }
                }).collect()).unwrap();
            let (m1, _) = big.minimalize();
            let (m2, cert2) = m1.minimalize();
            prop_assert_eq!(&m1, &m2);
            prop_assert_eq!(cert2.steps, 0);
            prop_assert!(m1.total_rank() < big.total_rank());
            prop_assert!(m1.is_minimal());
        }

        #[test]
        fn transpose_duality_of_nakayama(seed in any::<u64>()) {
            // surjective_at(f, n) <=> split_injective_at(f*, -n - deg)
            let r = xy();
            let c = Arc::new(periodic_x(&r, -3, 3));
            let s = if seed % 3 == 0 { "0" } else if seed % 3 == 1 { "1" } else { "1 + y" };
            let m = RMatrix::from_strings(&r, &[vec![s]]).unwrap();
            let f = ChainMap::from_fn(c.clone(), c, -2, |_| m.clone()).unwrap();
            let fd = f.dualize();
            for n in f.window().lo..=f.window().hi {
                prop_assert_eq!(f.surjective_at(n).unwrap(), fd.split_injective_at(-n - f.degree()).unwrap());
            }
        }
    }
}
