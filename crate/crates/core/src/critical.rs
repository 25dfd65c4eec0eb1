//! Critical and cocritical degrees, critical diameter, periodicity and the
//! socle/cosocle description through the graded Tate-Ext module over
//! `k[chi_1..chi_c]`.
//!
//! For an endomorphism `mu` of degree `-q` of a minimal complex:
//! `s_mu` is the largest `i` with `mu_{i+q} : C_{i+q} -> C_i` not surjective,
//! `t_mu` the smallest `i` with `mu_i : C_i -> C_{i-q}` not split injective.
//! Both are tested mod the maximal ideal (Nakayama). On a window `[lo, hi]`
//! the tests run over `s in [lo+q, hi-2q]` and `t in [lo+2q, hi-q]`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cioper::{eisenbud_operators, enumerate_forms, reduced_form, CIOperatorFamily, LinearForm};
use crate::complexes::{ChainMap, Extended, FreeComplex, RMatrix, VerdictStatus, Window, WindowVerdict};
use crate::error::{Error, Result};
use crate::ffield::{Field, FieldSpec, KMatrix};
use crate::resolve::{complete_resolution, complexity_from_ranks, dual_module, CompleteResolutionBundle, ComplexityEstimate, ModulePresentation};

/// Margin used for the stabilization recheck.
const STABILITY_MARGIN: i64 = 2;
const PERIODICITY_ATTEMPTS: usize = 64;
const PERIODICITY_MAX_UNKNOWNS: usize = 6000;
const PERIODICITY_SEED: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DegreeKind {
    Crdeg,
    Cocrdeg,
    Diameter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    MatrixLevel,
    Cohomological,
    BothAgree,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub kind: DegreeKind,
    pub verdict: WindowVerdict,
    pub realizer: Option<LinearForm>,
    pub method: Method,
    /// Extension degree `e` of the field the realizer search ended on.
    pub extension: u32,
    pub matrix_value: Option<WindowVerdict>,
    pub cohomological_value: Option<WindowVerdict>,
    /// Period of the in-window periodicity certificate backing an infinite value.
    pub period: Option<usize>,
}

/// Per-form degrees. `-inf` / `+inf` here only mean that no failing degree
/// was seen inside the scan range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormDegrees {
    pub form: LinearForm,
    pub s: Extended,
    pub t: Extended,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisOptions {
    pub ext_degree: u32,
    pub max_period: usize,
    pub escalate: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self { ext_degree: 1, max_period: 2, escalate: true }
    }
}

/// Scan ranges `(s_lo, s_hi)` and `(t_lo, t_hi)` for an operator of degree `-q`.
fn scan_ranges(w: Window, q: i64) -> ((i64, i64), (i64, i64)) {
    ((w.lo + q, w.hi - 2 * q), (w.lo + 2 * q, w.hi - q))
}

fn full_row_rank(m: &KMatrix, f: &Field) -> bool {
    m.rows() == 0 || m.rank(f) == m.rows()
}

fn full_col_rank(m: &KMatrix, f: &Field) -> bool {
    m.cols() == 0 || m.rank(f) == m.cols()
}

/// Largest `i` in the range with `mu_{i+q}` not surjective.
fn scan_s(range: (i64, i64), q: i64, f: &Field, mut red: impl FnMut(i64) -> KMatrix) -> Option<i64> {
    (range.0..=range.1).rev().find(|&i| !full_row_rank(&red(i + q), f))
}

/// Smallest `i` in the range with `mu_i` not split injective.
fn scan_t(range: (i64, i64), f: &Field, mut red: impl FnMut(i64) -> KMatrix) -> Option<i64> {
    (range.0..=range.1).find(|&i| !full_col_rank(&red(i), f))
}

fn finite_verdict(full: Option<i64>, shrunk: Option<i64>, w: Window) -> WindowVerdict {
    let v = full.expect("finite verdict needs a value");
    let status = if shrunk == Some(v) { VerdictStatus::Stabilized } else { VerdictStatus::Inconclusive };
    WindowVerdict { value: Extended::Finite(v), status, window: w }
}

/// Verdict when no failing degree was seen: an infinity backed by a
/// certificate, or the range edge otherwise.
fn open_verdict(inf: Extended, edge: i64, periodic: bool, w: Window) -> WindowVerdict {
    if periodic {
        WindowVerdict { value: inf, status: VerdictStatus::Stabilized, window: w }
    } else {
        WindowVerdict { value: Extended::Finite(edge), status: VerdictStatus::Inconclusive, window: w }
    }
}

fn too_narrow(w: Window, reason: &str) -> Error {
    Error::TooNarrow { lo: w.lo, hi: w.hi, reason: reason.into() }
}

fn minimal_part(c: &FreeComplex) -> Arc<FreeComplex> {
    if c.is_minimal() {
        Arc::new(c.clone())
    } else {
        Arc::new(c.minimalize().0)
    }
}

/// Transports `mu` to the minimal part of its complex.
fn minimal_endomorphism(c: &Arc<FreeComplex>, mu: &ChainMap, window: Window) -> Result<(Arc<FreeComplex>, ChainMap, Window)> {
    let q = -mu.degree();
    if q <= 0 {
        return Err(Error::DimensionMismatch(format!("endomorphism must have negative degree, got {}", mu.degree())));
    }
    let w = window.intersect(&c.window()).intersect(&mu.window().intersect(&Window::new(mu.window().lo - q, mu.window().hi)));
    if w.hi - w.lo < 3 * q {
        return Err(too_narrow(w, "the scan range is empty after trimming q at both ends"));
    }
    if c.is_minimal() {
        return Ok((c.clone(), mu.clone(), w));
    }
    let (m, cert) = c.minimalize();
    let m = Arc::new(m);
    let mu_bar = cert.projection.compose(mu)?.compose(&cert.inclusion)?;
    let mu_bar = ChainMap::new(m.clone(), m.clone(), mu.degree(), mu_bar.mats().to_vec())
        .or_else(|_| ChainMap::from_fn(m.clone(), m.clone(), mu.degree(), |n| mu_bar.mat(n).clone()))?;
    Ok((m, mu_bar, w))
}

/// `s_mu` for an endomorphism of negative degree.
pub fn mu_critical_degree(c: &Arc<FreeComplex>, mu: &ChainMap, window: Window) -> Result<WindowVerdict> {
    let (m, mu_bar, w) = minimal_endomorphism(c, mu, window)?;
    if m.is_zero() {
        return Ok(WindowVerdict { value: Extended::NegInf, status: VerdictStatus::ExactInWindow, window: w });
    }
    let q = -mu.degree();
    let f = m.ring().field().clone();
    let red = |n: i64| mu_bar.mat(n).constant_part();
    let (sr, _) = scan_ranges(w, q);
    let (srs, _) = scan_ranges(w.shrink(STABILITY_MARGIN), q);
    let full = scan_s(sr, q, &f, red);
    if full.is_some() {
        return Ok(finite_verdict(full, scan_s(srs, q, &f, red), w));
    }
    let periodic = detect_periodicity(&m, w, q.max(2) as usize).is_some();
    Ok(open_verdict(Extended::NegInf, sr.0 - 1, periodic, w))
}

/// `t_mu` for an endomorphism of negative degree.
pub fn mu_cocritical_degree(c: &Arc<FreeComplex>, mu: &ChainMap, window: Window) -> Result<WindowVerdict> {
    let (m, mu_bar, w) = minimal_endomorphism(c, mu, window)?;
    if m.is_zero() {
        return Ok(WindowVerdict { value: Extended::PosInf, status: VerdictStatus::ExactInWindow, window: w });
    }
    let q = -mu.degree();
    let f = m.ring().field().clone();
    let red = |n: i64| mu_bar.mat(n).constant_part();
    let (_, tr) = scan_ranges(w, q);
    let (_, trs) = scan_ranges(w.shrink(STABILITY_MARGIN), q);
    let full = scan_t(tr, &f, red);
    if full.is_some() {
        return Ok(finite_verdict(full, scan_t(trs, &f, red), w));
    }
    let periodic = detect_periodicity(&m, w, q.max(2) as usize).is_some();
    Ok(open_verdict(Extended::PosInf, tr.1 + 1, periodic, w))
}

/// In-window periodicity: a degree `-period` chain endomorphism of the
/// minimal complex that is bijective in every degree of its window.
#[derive(Debug, Clone)]
pub struct PeriodicityCertificate {
    pub period: usize,
    pub map: ChainMap,
}

impl PeriodicityCertificate {
    /// Re-checks the chain map identity and degree-wise bijectivity.
    pub fn verify(&self) -> bool {
        let ring = self.map.ring();
        let f = ring.field();
        self.map.degree() == -(self.period as i64)
            && self.map.is_chain_map()
            && self.map.mats().iter().all(|m| {
                let r = m.constant_part();
                r.rows() == r.cols() && (r.rows() == 0 || r.rank(f) == r.rows())
            })
    }
}

fn random_in_span(basis: &[Vec<u32>], len: usize, f: &Field, rng: &mut ChaCha8Rng) -> Vec<u32> {
    let mut v = vec![0u32; len];
    for b in basis {
        let r = rng.gen_range(0..f.order());
        if r == 0 {
            continue;
        }
        for (x, &y) in v.iter_mut().zip(b) {
            *x = f.add(*x, f.mul(r, y));
        }
    }
    v
}

fn solve_vec(a: &KMatrix, rhs: &[u32], f: &Field) -> Option<Vec<u32>> {
    let b = KMatrix::from_columns(rhs.len(), &[rhs.to_vec()]);
    let x = a.solve(&b, f).ok()??;
    Some((0..x.rows()).map(|i| x.get(i, 0)).collect())
}

fn invertible_mod_m(m: &RMatrix, f: &Field) -> bool {
    let r = m.constant_part();
    r.rows() == r.cols() && (r.rows() == 0 || r.rank(f) == r.rows())
}

/// Searches periods `1..=max_period` on `c` restricted to `window`.
///
/// A base pair `phi_{n0}, phi_{n0+1}` is drawn from the solution space of
/// the commutation square at the middle degree; the remaining maps are lifted
/// upwards through `d_{n-q} phi_n = phi_{n-1} d_n` and extended downwards
/// through `phi_n d_{n+1} = d_{n+1-q} phi_{n+1}`.
pub fn detect_periodicity(c: &Arc<FreeComplex>, window: Window, max_period: usize) -> Option<PeriodicityCertificate> {
    let w = window.intersect(&c.window());
    if w.lo > w.hi {
        return None;
    }
    let c = if w == c.window() { c.clone() } else { Arc::new(c.restrict(w).ok()?) };
    if c.is_zero() {
        let map = ChainMap::zero(c.clone(), c.clone(), -1);
        return Some(PeriodicityCertificate { period: 1, map });
    }
    (1..=max_period).find_map(|q| periodic_map(&c, q as i64).map(|map| PeriodicityCertificate { period: q, map }))
}

fn periodic_map(c: &Arc<FreeComplex>, q: i64) -> Option<ChainMap> {
    let (lo, hi) = (c.lo(), c.hi());
    if hi - lo < q + 1 {
        return None;
    }
    if (lo + q..=hi).any(|n| c.rank(n) != c.rank(n - q)) {
        return None;
    }
    let ring = c.ring().clone();
    let f = ring.field().clone();
    let d = ring.dim();
    let n0 = (lo + q + hi - 1).div_euclid(2);
    let shape = |n: i64| (c.rank(n - q), c.rank(n));
    let (xr, xc) = shape(n0);
    let (yr, yc) = shape(n0 + 1);
    let nx = xr * xc * d;
    let ny = yr * yc * d;
    if nx + ny > PERIODICITY_MAX_UNKNOWNS {
        return None;
    }
    // d_{n0+1-q} Y - X d_{n0+1} = 0
    let left = c.diff(n0 + 1 - q).left_mul_operator(yc, &ring);
    let right = c.diff(n0 + 1).right_mul_operator(xr, &ring).scale(f.neg(1), &f);
    let base = right.hstack(&left);
    let base_ker = base.kernel_basis(&f);
    if base_ker.is_empty() {
        return None;
    }
    let ups: Vec<(KMatrix, Vec<Vec<u32>>)> = (n0 + 2..=hi)
        .map(|n| {
            let a = c.diff(n - q).left_mul_operator(c.rank(n), &ring);
            let k = a.kernel_basis(&f);
            (a, k)
        })
        .collect();
    let downs: Vec<(KMatrix, Vec<Vec<u32>>)> = (lo + q..n0)
        .rev()
        .map(|n| {
            let a = c.diff(n + 1).right_mul_operator(c.rank(n - q), &ring);
            let k = a.kernel_basis(&f);
            (a, k)
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(PERIODICITY_SEED ^ q as u64);
    'attempt: for _ in 0..PERIODICITY_ATTEMPTS {
        let v = random_in_span(&base_ker, nx + ny, &f, &mut rng);
        let x = RMatrix::from_data(xr, xc, d, v[..nx].to_vec());
        let y = RMatrix::from_data(yr, yc, d, v[nx..].to_vec());
        if !invertible_mod_m(&x, &f) || !invertible_mod_m(&y, &f) {
            continue;
        }
        let mut upper = vec![x.clone(), y];
        for (k, (a, ker)) in ups.iter().enumerate() {
            let n = n0 + 2 + k as i64;
            let rhs = upper.last().unwrap().mul(c.diff(n), &ring);
            let Some(sol) = solve_vec(a, rhs.data(), &f) else { continue 'attempt };
            let extra = random_in_span(ker, sol.len(), &f, &mut rng);
            let data: Vec<u32> = sol.iter().zip(&extra).map(|(&s, &e)| f.add(s, e)).collect();
            let (r, cc) = shape(n);
            let m = RMatrix::from_data(r, cc, d, data);
            if !invertible_mod_m(&m, &f) {
                continue 'attempt;
            }
            upper.push(m);
        }
        let mut lower: Vec<RMatrix> = Vec::new();
        let mut prev = x;
        for (k, (a, ker)) in downs.iter().enumerate() {
            let n = n0 - 1 - k as i64;
            let rhs = c.diff(n + 1 - q).mul(&prev, &ring);
            let Some(sol) = solve_vec(a, rhs.data(), &f) else { continue 'attempt };
            let extra = random_in_span(ker, sol.len(), &f, &mut rng);
            let data: Vec<u32> = sol.iter().zip(&extra).map(|(&s, &e)| f.add(s, e)).collect();
            let (r, cc) = shape(n);
            let m = RMatrix::from_data(r, cc, d, data);
            if !invertible_mod_m(&m, &f) {
                continue 'attempt;
            }
            lower.push(m.clone());
            prev = m;
        }
        lower.reverse();
        lower.extend(upper);
        let Ok(map) = ChainMap::new(c.clone(), c.clone(), -q, lower) else { continue };
        let cert = PeriodicityCertificate { period: q as usize, map };
        if cert.verify() {
            return Some(cert.map);
        }
    }
    None
}

/// `E = sum_n Ext^n(M, k)` with the action of `chi_j : E_n -> E_{n+2}`.
#[derive(Debug, Clone)]
pub struct GradedExtModule {
    pub window: Window,
    pub field: FieldSpec,
    dims: Vec<usize>,
    /// `chi[j][n - lo]` for `n` in `[lo, hi - 2]`.
    chi: Vec<Vec<KMatrix>>,
    /// Period of an in-window periodicity certificate of the underlying complex.
    pub period: Option<usize>,
}

impl GradedExtModule {
    /// `chi(j, n) = (t_j(n+2) mod m)^T`.
    pub fn from_family(fam: &CIOperatorFamily) -> Self {
        let c = fam.base();
        let w = c.window();
        let dims = (w.lo..=w.hi).map(|n| c.rank(n)).collect();
        let mut chi = vec![Vec::new(); fam.codim()];
        for n in w.lo..=w.hi - 2 {
            for (j, m) in fam.reduced(n + 2).into_iter().enumerate() {
                chi[j].push(m.transpose());
            }
        }
        Self { window: w, field: c.ring().field().spec(), dims, chi, period: None }
    }

    pub fn codim(&self) -> usize {
        self.chi.len()
    }

    pub fn dim(&self, n: i64) -> usize {
        if self.window.contains(n) {
            self.dims[(n - self.window.lo) as usize]
        } else {
            0
        }
    }

    pub fn dims(&self) -> Vec<(i64, usize)> {
        (self.window.lo..=self.window.hi).map(|n| (n, self.dim(n))).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&b| b == 0)
    }

    pub fn chi(&self, j: usize, n: i64) -> &KMatrix {
        &self.chi[j][(n - self.window.lo) as usize]
    }

    fn prime_field(&self) -> Field {
        Field::new(self.field).expect("field spec was valid when the module was built")
    }

    /// `soc_n(E) = intersection of ker chi(j, n)` is nonzero.
    pub fn socle_nonzero(&self, n: i64) -> bool {
        let b = self.dim(n);
        if b == 0 {
            return false;
        }
        let f = self.prime_field();
        let mut stack = KMatrix::zeros(0, b);
        for j in 0..self.codim() {
            stack = stack.vstack(self.chi(j, n));
        }
        stack.rank(&f) < b
    }

    /// `E_n` is not covered by `sum_j im chi(j, n - 2)`.
    pub fn cosocle_nonzero(&self, n: i64) -> bool {
        let b = self.dim(n);
        if b == 0 {
            return false;
        }
        let f = self.prime_field();
        let mut stack = KMatrix::zeros(b, 0);
        for j in 0..self.codim() {
            stack = stack.hstack(self.chi(j, n - 2));
        }
        stack.rank(&f) < b
    }

    /// Degrees tested for the socle: `chi` trimmed by 2 at both ends.
    pub fn socle_range(&self) -> (i64, i64) {
        (self.window.lo + 2, self.window.hi - 4)
    }

    pub fn cosocle_range(&self) -> (i64, i64) {
        (self.window.lo + 4, self.window.hi - 2)
    }

    fn socle_top_in(&self, r: (i64, i64)) -> Option<i64> {
        (r.0..=r.1).rev().find(|&n| self.socle_nonzero(n))
    }

    fn cosocle_bottom_in(&self, r: (i64, i64)) -> Option<i64> {
        (r.0..=r.1).find(|&n| self.cosocle_nonzero(n))
    }

    pub fn socle_top(&self) -> Option<i64> {
        self.socle_top_in(self.socle_range())
    }

    pub fn cosocle_bottom(&self) -> Option<i64> {
        self.cosocle_bottom_in(self.cosocle_range())
    }

    /// `E (+) E'` on the common window.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.field != other.field || self.codim() != other.codim() {
            return Err(Error::RingMismatch);
        }
        let w = self.window.intersect(&other.window);
        let dims = (w.lo..=w.hi).map(|n| self.dim(n) + other.dim(n)).collect();
        let chi = (0..self.codim())
            .map(|j| {
                (w.lo..=w.hi - 2)
                    .map(|n| {
                        let (a, b) = (self.chi(j, n), other.chi(j, n));
                        let top = a.hstack(&KMatrix::zeros(a.rows(), b.cols()));
                        let bottom = KMatrix::zeros(b.rows(), a.cols()).hstack(b);
                        top.vstack(&bottom)
                    })
                    .collect()
            })
            .collect();
        let period = match (self.period, other.period) {
            (Some(a), Some(b)) => Some(lcm(a, b)),
            _ => None,
        };
        Ok(Self { window: w, field: self.field, dims, chi, period })
    }
}

fn lcm(a: usize, b: usize) -> usize {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

/// The Ext module of a bundle, given the operators on its complex.
pub fn ext_module(bundle: &CompleteResolutionBundle, fam: &CIOperatorFamily) -> Result<GradedExtModule> {
    if fam.base().as_ref() != &bundle.complex {
        return Err(Error::DimensionMismatch("operator family is not built on the bundle's complex".into()));
    }
    Ok(ext_module_of(fam, AnalysisOptions::default().max_period))
}

/// Builds `E` and fills the period when the socle or cosocle scan comes up empty.
pub fn ext_module_of(fam: &CIOperatorFamily, max_period: usize) -> GradedExtModule {
    let mut e = GradedExtModule::from_family(fam);
    if e.socle_top().is_none() || e.cosocle_bottom().is_none() {
        e.period = detect_periodicity(fam.base(), fam.base().window(), max_period).map(|c| c.period);
    }
    e
}

/// Largest degree with nonzero socle.
pub fn crdeg_cohomological(e: &GradedExtModule) -> Result<WindowVerdict> {
    let r = e.socle_range();
    if r.0 > r.1 {
        return Err(too_narrow(e.window, "no degrees left for the socle after trimming"));
    }
    if e.is_zero() {
        return Ok(WindowVerdict { value: Extended::NegInf, status: VerdictStatus::ExactInWindow, window: e.window });
    }
    let full = e.socle_top_in(r);
    if full.is_some() {
        let rs = (r.0 + STABILITY_MARGIN, r.1 - STABILITY_MARGIN);
        return Ok(finite_verdict(full, e.socle_top_in(rs), e.window));
    }
    Ok(open_verdict(Extended::NegInf, r.0 - 1, e.period.is_some(), e.window))
}

/// Smallest degree with nonzero cosocle.
pub fn cocrdeg_cohomological(e: &GradedExtModule) -> Result<WindowVerdict> {
    let r = e.cosocle_range();
    if r.0 > r.1 {
        return Err(too_narrow(e.window, "no degrees left for the cosocle after trimming"));
    }
    if e.is_zero() {
        return Ok(WindowVerdict { value: Extended::PosInf, status: VerdictStatus::ExactInWindow, window: e.window });
    }
    let full = e.cosocle_bottom_in(r);
    if full.is_some() {
        let rs = (r.0 + STABILITY_MARGIN, r.1 - STABILITY_MARGIN);
        return Ok(finite_verdict(full, e.cosocle_bottom_in(rs), e.window));
    }
    Ok(open_verdict(Extended::PosInf, r.1 + 1, e.period.is_some(), e.window))
}

/// `depth E^{>=r} = 0`: some socle element in degree `>= r`, within the socle range.
pub fn depth0(e: &GradedExtModule, r: i64) -> bool {
    let (a, b) = e.socle_range();
    (r.max(a)..=b).any(|n| e.socle_nonzero(n))
}

/// `codepth E^{<=r} = 0`: some cosocle element in degree `<= r`, within the cosocle range.
pub fn codepth0(e: &GradedExtModule, r: i64) -> bool {
    let (a, b) = e.cosocle_range();
    (a..=r.min(b)).any(|n| e.cosocle_nonzero(n))
}

/// Everything computed for one complex on one window.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub window: Window,
    pub minimal: Arc<FreeComplex>,
    pub crdeg: DegreeReport,
    pub cocrdeg: DegreeReport,
    pub forms: Vec<FormDegrees>,
    pub ext: GradedExtModule,
    pub periodicity: Option<PeriodicityCertificate>,
    pub complexity: ComplexityEstimate,
}

impl Analysis {
    /// A form attaining both the minimal `s` and the maximal `t`.
    pub fn simultaneous_form(&self) -> Option<&FormDegrees> {
        let (s, t) = (self.min_s()?, self.max_t()?);
        self.forms.iter().find(|fd| fd.s == s && fd.t == t)
    }

    fn min_s(&self) -> Option<Extended> {
        self.forms.iter().map(|x| x.s).min()
    }

    fn max_t(&self) -> Option<Extended> {
        self.forms.iter().map(|x| x.t).max()
    }
}

fn lex_first<'a>(forms: impl Iterator<Item = &'a FormDegrees>) -> Option<LinearForm> {
    forms.map(|x| &x.form).min_by(|a, b| a.coeffs.cmp(&b.coeffs)).cloned()
}

fn report(kind: DegreeKind, matrix: WindowVerdict, cohom: WindowVerdict, realizer: Option<LinearForm>, extension: u32, period: Option<usize>) -> DegreeReport {
    let method = if matrix == cohom { Method::BothAgree } else { Method::MatrixLevel };
    DegreeReport { kind, verdict: matrix, realizer, method, extension, matrix_value: Some(matrix), cohomological_value: Some(cohom), period }
}

/// Minimalizes `c` on `window` and runs both routes.
pub fn analyze(c: &FreeComplex, window: Window, opts: &AnalysisOptions) -> Result<Analysis> {
    let w = window.intersect(&c.window());
    if w.hi - w.lo < 6 {
        return Err(too_narrow(w, "degree -2 operators need a window of width at least 6"));
    }
    let restricted = c.restrict(w)?;
    let m = minimal_part(&restricted);
    let fam = eisenbud_operators(m)?;
    analyze_family(&fam, opts)
}

/// Both routes on a family over a minimal complex.
pub fn analyze_family(fam: &CIOperatorFamily, opts: &AnalysisOptions) -> Result<Analysis> {
    let m = fam.base().clone();
    let w = m.window();
    if w.hi - w.lo < 6 {
        return Err(too_narrow(w, "degree -2 operators need a window of width at least 6"));
    }
    let ring = m.ring().clone();
    let complexity = complexity_from_ranks(&m.ranks(), ring.codim());
    let mut ext = GradedExtModule::from_family(fam);
    if m.is_zero() {
        let cert = detect_periodicity(&m, w, opts.max_period);
        ext.period = cert.as_ref().map(|c| c.period);
        let exact = |v| WindowVerdict { value: v, status: VerdictStatus::ExactInWindow, window: w };
        let cr = report(DegreeKind::Crdeg, exact(Extended::NegInf), exact(Extended::NegInf), None, opts.ext_degree, ext.period);
        let co = report(DegreeKind::Cocrdeg, exact(Extended::PosInf), exact(Extended::PosInf), None, opts.ext_degree, ext.period);
        return Ok(Analysis { window: w, minimal: m, crdeg: cr, cocrdeg: co, forms: Vec::new(), ext, periodicity: cert, complexity });
    }
    let q = 2;
    let (sr, tr) = scan_ranges(w, q);
    let (srs, trs) = scan_ranges(w.shrink(STABILITY_MARGIN), q);
    let reduced: Vec<Vec<KMatrix>> = fam.degrees().map(|n| fam.reduced(n)).collect();
    let red_at = |n: i64| &reduced[(n - w.lo - 2) as usize];

    let soc = (ext.socle_top_in(sr), ext.socle_top_in(srs));
    let cosoc = (ext.cosocle_bottom_in(tr), ext.cosocle_bottom_in(trs));

    let p = ring.p();
    let codim = ring.codim();
    let e_cap = opts.ext_degree + if opts.escalate { 3 } else { 0 };
    let mut e = opts.ext_degree;
    let (forms, shrunk) = loop {
        let field = Field::new(FieldSpec::new(p, e))?;
        let mut forms = Vec::new();
        let mut shrunk = Vec::new();
        for form in enumerate_forms(p, codim, e) {
            let red = |n: i64| reduced_form(red_at(n), &form, &field);
            let s = scan_s(sr, q, &field, red);
            let t = scan_t(tr, &field, red);
            shrunk.push((scan_s(srs, q, &field, red), scan_t(trs, &field, red)));
            forms.push(FormDegrees { form, s: s.map_or(Extended::NegInf, Extended::Finite), t: t.map_or(Extended::PosInf, Extended::Finite) });
        }
        let min_s = forms.iter().map(|x| x.s).min().unwrap();
        let max_t = forms.iter().map(|x| x.t).max().unwrap();
        let simultaneous = forms.iter().any(|x| x.s == min_s && x.t == max_t);
        let soc_ext = soc.0.map_or(Extended::NegInf, Extended::Finite);
        let cosoc_ext = cosoc.0.map_or(Extended::PosInf, Extended::Finite);
        let settled = simultaneous && min_s == soc_ext && max_t == cosoc_ext;
        if settled || e >= e_cap {
            break (forms, shrunk);
        }
        e += 1;
    };

    let min_s = forms.iter().map(|x| x.s).min().unwrap();
    let max_t = forms.iter().map(|x| x.t).max().unwrap();
    let needs_cert = !min_s.is_finite() || !max_t.is_finite() || soc.0.is_none() || cosoc.0.is_none();
    let cert = if needs_cert { detect_periodicity(&m, w, opts.max_period) } else { None };
    let periodic = cert.is_some();
    ext.period = cert.as_ref().map(|c| c.period);

    let matrix_s = match min_s {
        Extended::Finite(v) => {
            let shr = shrunk.iter().map(|x| x.0.map_or(Extended::NegInf, Extended::Finite)).min().unwrap();
            finite_verdict(Some(v), shr.finite(), w)
        }
        _ => open_verdict(Extended::NegInf, sr.0 - 1, periodic, w),
    };
    let matrix_t = match max_t {
        Extended::Finite(v) => {
            let shr = shrunk.iter().map(|x| x.1.map_or(Extended::PosInf, Extended::Finite)).max().unwrap();
            finite_verdict(Some(v), shr.finite(), w)
        }
        _ => open_verdict(Extended::PosInf, tr.1 + 1, periodic, w),
    };
    let cohom_s = match soc.0 {
        Some(_) => finite_verdict(soc.0, soc.1, w),
        None => open_verdict(Extended::NegInf, sr.0 - 1, periodic, w),
    };
    let cohom_t = match cosoc.0 {
        Some(_) => finite_verdict(cosoc.0, cosoc.1, w),
        None => open_verdict(Extended::PosInf, tr.1 + 1, periodic, w),
    };
    let real_s = lex_first(forms.iter().filter(|x| x.s == min_s));
    let real_t = lex_first(forms.iter().filter(|x| x.t == max_t));
    let cr = report(DegreeKind::Crdeg, matrix_s, cohom_s, real_s, e, ext.period);
    let co = report(DegreeKind::Cocrdeg, matrix_t, cohom_t, real_t, e, ext.period);
    Ok(Analysis { window: w, minimal: m, crdeg: cr, cocrdeg: co, forms, ext, periodicity: cert, complexity })
}

pub fn critical_degree(c: &FreeComplex, window: Window, opts: &AnalysisOptions) -> Result<DegreeReport> {
    Ok(analyze(c, window, opts)?.crdeg)
}

pub fn cocritical_degree(c: &FreeComplex, window: Window, opts: &AnalysisOptions) -> Result<DegreeReport> {
    Ok(analyze(c, window, opts)?.cocrdeg)
}

fn worse(a: VerdictStatus, b: VerdictStatus) -> VerdictStatus {
    use VerdictStatus::*;
    match (a, b) {
        (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
        (Stabilized, _) | (_, Stabilized) => Stabilized,
        _ => ExactInWindow,
    }
}

/// `crdeg - cocrdeg`, or `-inf` when the complexity is at most 1.
pub fn diameter_of(a: &Analysis) -> DegreeReport {
    let w = a.window;
    let (s, t) = (&a.crdeg, &a.cocrdeg);
    let method = if s.method == Method::BothAgree && t.method == Method::BothAgree { Method::BothAgree } else { Method::MatrixLevel };
    let realizer = a.simultaneous_form().map(|x| x.form.clone());
    let mk = |value, status, realizer| DegreeReport {
        kind: DegreeKind::Diameter,
        verdict: WindowVerdict { value, status, window: w },
        realizer,
        method,
        extension: s.extension,
        matrix_value: None,
        cohomological_value: None,
        period: s.period,
    };
    if a.minimal.is_zero() {
        return mk(Extended::NegInf, VerdictStatus::ExactInWindow, None);
    }
    let diff = match (s.verdict.value.finite(), t.verdict.value.finite()) {
        (Some(x), Some(y)) => Some(x - y),
        _ => None,
    };
    if a.complexity.ambiguous {
        return mk(diff.map_or(Extended::NegInf, Extended::Finite), VerdictStatus::Inconclusive, realizer);
    }
    if a.complexity.value <= 1 {
        return mk(Extended::NegInf, VerdictStatus::Stabilized, None);
    }
    match diff {
        Some(v) => mk(Extended::Finite(v), worse(s.verdict.status, t.verdict.status), realizer),
        None => mk(Extended::NegInf, VerdictStatus::Inconclusive, realizer),
    }
}

pub fn critical_diameter(c: &FreeComplex, window: Window, opts: &AnalysisOptions) -> Result<DegreeReport> {
    Ok(diameter_of(&analyze(c, window, opts)?))
}

/// Diameter of the minimal complete resolution; 0 for finite projective dimension.
pub fn module_diameter(m: &ModulePresentation, window: Window, opts: &AnalysisOptions) -> Result<DegreeReport> {
    let bundle = complete_resolution(m, window)?;
    if bundle.complex.is_zero() {
        let w = bundle.complex.window();
        return Ok(DegreeReport {
            kind: DegreeKind::Diameter,
            verdict: WindowVerdict { value: Extended::Finite(0), status: VerdictStatus::ExactInWindow, window: w },
            realizer: None,
            method: Method::BothAgree,
            extension: opts.ext_degree,
            matrix_value: None,
            cohomological_value: None,
            period: None,
        });
    }
    critical_diameter(&bundle.complex, window, opts)
}

/// Outcome of one law in [`verify_suite`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawCheck {
    pub law: String,
    pub passed: bool,
    pub detail: String,
}

impl LawCheck {
    fn new(law: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self { law: law.into(), passed, detail: detail.into() }
    }
}

fn stable_finite(v: &WindowVerdict) -> Option<i64> {
    match v.status {
        VerdictStatus::Inconclusive => None,
        _ => v.value.finite(),
    }
}

/// `R^1 --1--> R^1` in degrees `n`, `n - 1`, on `window`.
fn contractible(ring: &Arc<crate::polyring::QuotientRing>, window: Window, n: i64) -> Result<FreeComplex> {
    let d = ring.dim();
    let ranks: Vec<usize> = (window.lo..=window.hi).map(|k| usize::from(k == n || k == n - 1)).collect();
    let diffs = (window.lo + 1..=window.hi)
        .map(|k| {
            let (r, c) = (ranks[(k - 1 - window.lo) as usize], ranks[(k - window.lo) as usize]);
            if k == n { RMatrix::identity(1, d) } else { RMatrix::zeros(r, c, d) }
        })
        .collect();
    FreeComplex::new(ring.clone(), window.lo, ranks, diffs)
}

fn degrees_line(a: &Analysis) -> String {
    format!("crdeg {} ({:?}), cocrdeg {} ({:?})", a.crdeg.verdict.value, a.crdeg.verdict.status, a.cocrdeg.verdict.value, a.cocrdeg.verdict.status)
}

fn run_law(out: &mut Vec<LawCheck>, law: &str, f: impl FnOnce() -> Result<(bool, String)>) {
    match f() {
        Ok((passed, detail)) => out.push(LawCheck::new(law, passed, detail)),
        Err(e) => out.push(LawCheck::new(law, false, format!("error: {e}"))),
    }
}

/// Checks the structural laws on one bundle. Shifts and sums are rebuilt on
/// widened windows so that the analysed window never sees a truncation edge
/// that the original did not.
pub fn verify_suite(bundle: &CompleteResolutionBundle, opts: &AnalysisOptions) -> Vec<LawCheck> {
    let mut out = Vec::new();
    let c = &bundle.complex;
    let w = c.window();
    let base = match analyze(c, w, opts) {
        Ok(a) => a,
        Err(e) => {
            out.push(LawCheck::new("analysis", false, format!("error: {e}")));
            return out;
        }
    };
    let (s, t) = (base.crdeg.verdict, base.cocrdeg.verdict);

    run_law(&mut out, "route-agreement", || {
        let mut ok = true;
        let mut detail = Vec::new();
        for r in [&base.crdeg, &base.cocrdeg] {
            let (m, h) = (r.matrix_value.unwrap(), r.cohomological_value.unwrap());
            if stable_finite(&m).is_some() && stable_finite(&h).is_some() && m.value != h.value {
                ok = false;
            }
            detail.push(format!("{:?}: matrix {} cohomological {}", r.kind, m.value, h.value));
        }
        Ok((ok, detail.join("; ")))
    });

    run_law(&mut out, "infinity-soundness", || {
        let infinite = !s.value.is_finite() || !t.value.is_finite();
        if !infinite {
            return Ok((true, "no infinite verdicts".into()));
        }
        let ok = base.periodicity.as_ref().is_some_and(|c| c.verify()) || base.minimal.is_zero();
        Ok((ok, format!("period {:?}", base.periodicity.as_ref().map(|c| c.period))))
    });

    run_law(&mut out, "homotopy-invariance", || {
        let pad = contractible(c.ring(), w, 1)?.direct_sum(c)?;
        let a = analyze(&pad, w, opts)?;
        let ok = a.crdeg.verdict.value == s.value && a.cocrdeg.verdict.value == t.value;
        Ok((ok, format!("original {}, padded {}", degrees_line(&base), degrees_line(&a))))
    });

    run_law(&mut out, "duality", || {
        let dual = c.dualize();
        let a = analyze(&dual, dual.window(), opts)?;
        let (ds, dt) = (a.crdeg.verdict, a.cocrdeg.verdict);
        let mut ok = true;
        if let (Some(x), Some(y)) = (stable_finite(&ds), stable_finite(&t)) {
            ok &= x == -y;
        }
        if let (Some(x), Some(y)) = (stable_finite(&dt), stable_finite(&s)) {
            ok &= x == -y;
        }
        if !s.value.is_finite() || !t.value.is_finite() {
            ok &= ds.value == t.value.neg() && dt.value == s.value.neg();
        }
        Ok((ok, format!("C: {}; C*: {}", degrees_line(&base), degrees_line(&a))))
    });

    run_law(&mut out, "dual-involution", || {
        let back = c.dualize().dualize();
        let a = analyze(&back, w, opts)?;
        let ok = &back == c && a.crdeg.verdict == s && a.cocrdeg.verdict == t;
        Ok((ok, degrees_line(&a)))
    });

    let wide = complete_resolution(&bundle.module, Window::new(w.lo - 5, w.hi + 5));

    run_law(&mut out, "shift", || {
        let wide = wide.clone()?;
        let mut ok = true;
        let mut detail = Vec::new();
        for n in -3..=3 {
            let shifted = wide.complex.shift(n).restrict(w)?;
            let a = analyze(&shifted, w, opts)?;
            let (s2, t2) = (a.crdeg.verdict, a.cocrdeg.verdict);
            let good = |x: &WindowVerdict, y: &WindowVerdict| match (stable_finite(x), stable_finite(y)) {
                (Some(u), Some(v)) => u == v + n,
                _ => x.value.is_finite() || y.value.is_finite() || x.value == y.value,
            };
            let fine = good(&s2, &s) && good(&t2, &t);
            ok &= fine;
            detail.push(format!("n={n}: {} / {}", s2.value, t2.value));
        }
        Ok((ok, detail.join(", ")))
    });

    run_law(&mut out, "gap", || {
        let mut bad = Vec::new();
        for fd in &base.forms {
            if let (Extended::Finite(a), Extended::Finite(b)) = (fd.s, fd.t) {
                if b - a >= 4 && base.periodicity.is_none() && detect_periodicity(&base.minimal, w, opts.max_period).is_none() {
                    bad.push(fd.form.to_string());
                }
            }
        }
        Ok((bad.is_empty(), if bad.is_empty() { "no wide gaps without periodicity".into() } else { format!("forms {}", bad.join(" ")) }))
    });

    run_law(&mut out, "depth-codepth-duality", || {
        let dual = complete_resolution(&dual_module(&bundle.module), w)?;
        if dual.complex.is_zero() || c.is_zero() {
            return Ok((true, "zero complex".into()));
        }
        let fam_d = eisenbud_operators(Arc::new(dual.complex.clone()))?;
        let fam = eisenbud_operators(Arc::new(c.clone()))?;
        let (ed, e) = (GradedExtModule::from_family(&fam_d), GradedExtModule::from_family(&fam));
        let (a, b) = ed.socle_range();
        let mut fails = Vec::new();
        for r in a..=b {
            let rr = -r - 1;
            let (ca, cb) = e.cosocle_range();
            if rr < ca || rr > cb {
                continue;
            }
            if depth0(&ed, r) != codepth0(&e, rr) {
                fails.push(r);
            }
        }
        Ok((fails.is_empty(), format!("depth0(E(M*)>=r) vs codepth0(E(M)<=-r-1), failing r: {fails:?}")))
    });

    run_law(&mut out, "simultaneous-form", || {
        let f = base.simultaneous_form();
        Ok((f.is_some(), format!("{:?} over e = {}", f.map(|x| x.form.to_string()), base.crdeg.extension)))
    });

    run_law(&mut out, "direct-sum", || {
        let wide = wide.clone()?;
        let sw = Window::new(w.lo, w.hi + 5);
        let a = wide.complex.restrict(sw)?;
        let b = wide.complex.shift(5).restrict(sw)?;
        let sum = a.direct_sum(&b)?;
        let (ra, rb, rs) = (analyze(&a, sw, opts)?, analyze(&b, sw, opts)?, analyze(&sum, sw, opts)?);
        let vals = |x: &Analysis| (x.crdeg.verdict.value, x.cocrdeg.verdict.value);
        let (va, vb, vs) = (vals(&ra), vals(&rb), vals(&rs));
        let mut ok = vs.0 == va.0.max(vb.0) && vs.1 == va.1.min(vb.1);
        // retract bounds with at least one equality
        ok &= va.0 <= vs.0 && vb.0 <= vs.0 && (va.0 == vs.0 || vb.0 == vs.0);
        ok &= va.1 >= vs.1 && vb.1 >= vs.1 && (va.1 == vs.1 || vb.1 == vs.1);
        Ok((ok, format!("C: {:?} {:?}, Sigma^5 C: {:?} {:?}, sum: {:?} {:?}", va.0, va.1, vb.0, vb.1, vs.0, vs.1)))
    });

    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::QuotientRing;

    fn ring(p: u32, n: usize, gens: &[&str]) -> Arc<QuotientRing> {
        Arc::new(QuotientRing::from_strings(p, n, gens).unwrap())
    }

    fn k_bundle(r: &Arc<QuotientRing>, w: Window) -> CompleteResolutionBundle {
        complete_resolution(&ModulePresentation::residue_field(r.clone()), w).unwrap()
    }

    #[test]
    fn example_ring_residue_field() {
        let r = ring(2, 2, &["x^2", "y^2"]);
        let b = k_bundle(&r, Window::new(-8, 8));
        let a = analyze(&b.complex, b.complex.window(), &AnalysisOptions::default()).unwrap();
        assert_eq!(a.crdeg.verdict.value, Extended::Finite(-1));
        assert_eq!(a.crdeg.verdict.status, VerdictStatus::Stabilized);
        assert_eq!(a.cocrdeg.verdict.value, Extended::Finite(0));
        assert_eq!(a.crdeg.method, Method::BothAgree);
        assert_eq!(a.cocrdeg.method, Method::BothAgree);
        assert_eq!(a.crdeg.extension, 1);
        assert!(a.simultaneous_form().is_some());
        let d = diameter_of(&a);
        assert_eq!(d.verdict.value, Extended::Finite(-1));
    }

    #[test]
    fn hypersurface_is_periodic() {
        for (p, f) in [(2, "x^2"), (3, "x^3")] {
            let r = ring(p, 1, &[f]);
            let b = k_bundle(&r, Window::new(-6, 6));
            let cert = detect_periodicity(&Arc::new(b.complex.clone()), b.complex.window(), 2).unwrap();
            assert!(cert.verify());
            assert!(cert.period <= 2);
            let a = analyze(&b.complex, b.complex.window(), &AnalysisOptions::default()).unwrap();
            assert_eq!(a.crdeg.verdict.value, Extended::NegInf);
            assert_eq!(a.cocrdeg.verdict.value, Extended::PosInf);
            assert_eq!(diameter_of(&a).verdict.value, Extended::NegInf);
        }
    }

    #[test]
    fn k_over_dual_numbers_has_period_one() {
        let r = ring(2, 1, &["x^2"]);
        let b = k_bundle(&r, Window::new(-5, 5));
        let cert = detect_periodicity(&Arc::new(b.complex.clone()), b.complex.window(), 2).unwrap();
        assert_eq!(cert.period, 1);
    }

    #[test]
    fn cyclic_module_over_example_ring() {
        let r = ring(2, 2, &["x^2", "y^2"]);
        let m = ModulePresentation::from_strings(r.clone(), &[vec!["x"]]).unwrap();
        let b = complete_resolution(&m, Window::new(-6, 6)).unwrap();
        let cert = detect_periodicity(&Arc::new(b.complex.clone()), b.complex.window(), 2).unwrap();
        assert_eq!(cert.period, 1);
        let a = analyze(&b.complex, b.complex.window(), &AnalysisOptions::default()).unwrap();
        assert_eq!(a.crdeg.verdict.value, Extended::NegInf);
        assert_eq!(a.cocrdeg.verdict.value, Extended::PosInf);
        assert_eq!(a.complexity.value, 1);
        assert_eq!(diameter_of(&a).verdict.value, Extended::NegInf);
        // t_1 on this complex is the identity-like operator
        let fam = eisenbud_operators(Arc::new(b.complex.clone())).unwrap();
        let c = fam.base().clone();
        let v = mu_critical_degree(&c, fam.op(0), c.window()).unwrap();
        assert_eq!(v.value, Extended::NegInf);
        let v = mu_cocritical_degree(&c, fam.op(0), c.window()).unwrap();
        assert_eq!(v.value, Extended::PosInf);
    }

    #[test]
    fn example_ring_residue_field_not_periodic() {
        let r = ring(2, 2, &["x^2", "y^2"]);
        let b = k_bundle(&r, Window::new(-6, 6));
        assert!(detect_periodicity(&Arc::new(b.complex.clone()), b.complex.window(), 2).is_none());
    }

    #[test]
    fn mu_degrees_on_example() {
        let r = ring(2, 2, &["x^2", "y^2"]);
        let b = k_bundle(&r, Window::new(-8, 8));
        let c = Arc::new(b.complex.clone());
        let fam = eisenbud_operators(c.clone()).unwrap();
        let a = analyze(&b.complex, c.window(), &AnalysisOptions::default()).unwrap();
        let form = a.crdeg.realizer.clone().unwrap();
        let mu = crate::cioper::linear_form_operator(&fam, &form).unwrap();
        assert_eq!(mu_critical_degree(&c, &mu, c.window()).unwrap().value, Extended::Finite(-1));
        assert_eq!(mu_cocritical_degree(&c, &mu, c.window()).unwrap().value, Extended::Finite(0));
    }

    #[test]
    fn contractible_complex_is_infinite() {
        let r = ring(2, 2, &["x^2", "y^2"]);
        let w = Window::new(-4, 4);
        let c = Arc::new(contractible(&r, w, 1).unwrap());
        let mu = ChainMap::zero(c.clone(), c.clone(), -2);
        assert_eq!(mu_critical_degree(&c, &mu, w).unwrap().value, Extended::NegInf);
        assert_eq!(mu_cocritical_degree(&c, &mu, w).unwrap().value, Extended::PosInf);
        let a = analyze(&c, w, &AnalysisOptions::default()).unwrap();
        assert_eq!(a.crdeg.verdict.status, VerdictStatus::ExactInWindow);
    }

    #[test]
    fn too_narrow_windows() {
        let r = ring(2, 2, &["x^2", "y^2"]);
        let b = k_bundle(&r, Window::new(-3, 3));
        assert!(matches!(analyze(&b.complex, Window::new(-2, 2), &AnalysisOptions::default()), Err(Error::TooNarrow { .. })));
    }

    #[test]
    fn ext_module_dims_and_hypersurface_chi() {
        let r = ring(2, 1, &["x^2"]);
        let b = k_bundle(&r, Window::new(-4, 4));
        let fam = eisenbud_operators(Arc::new(b.complex.clone())).unwrap();
        let e = ext_module(&b, &fam).unwrap();
        assert!(e.dims().iter().all(|&(_, d)| d == 1));
        for n in -4..=2 {
            assert_eq!(e.chi(0, n).get(0, 0), 1);
        }
        assert!(e.period.is_some());
        assert_eq!(crdeg_cohomological(&e).unwrap().value, Extended::NegInf);
    }

    #[test]
    fn ext_module_sum_socle() {
        let r = ring(2, 2, &["x^2", "y^2"]);
        let b = k_bundle(&r, Window::new(-8, 8));
        let fam = eisenbud_operators(Arc::new(b.complex.clone())).unwrap();
        let e = ext_module(&b, &fam).unwrap();
        let shifted = Arc::new(k_bundle(&r, Window::new(-11, 11)).complex.shift(3).restrict(Window::new(-8, 8)).unwrap());
        let e2 = GradedExtModule::from_family(&eisenbud_operators(shifted).unwrap());
        let sum = e.direct_sum(&e2).unwrap();
        assert_eq!(sum.socle_top(), e.socle_top().max(e2.socle_top()));
        assert_eq!(sum.cosocle_bottom(), e.cosocle_bottom().min(e2.cosocle_bottom()));
        assert_eq!(e2.socle_top(), e.socle_top().map(|x| x + 3));
    }

    #[test]
    fn module_diameter_free_is_zero() {
        let r = ring(2, 2, &["x^2", "y^2"]);
        let d = module_diameter(&ModulePresentation::free(r, 2), Window::new(-6, 6), &AnalysisOptions::default()).unwrap();
        assert_eq!(d.verdict.value, Extended::Finite(0));
    }

    #[test]
    fn suite_on_example() {
        let r = ring(2, 2, &["x^2", "y^2"]);
        let b = k_bundle(&r, Window::new(-8, 8));
        let checks = verify_suite(&b, &AnalysisOptions::default());
        for c in &checks {
            assert!(c.passed, "{c:?}");
        }
        assert!(checks.len() >= 10);
    }

    #[test]
    fn report_roundtrip() {
        let r = ring(2, 2, &["x^2", "y^2"]);
        let b = k_bundle(&r, Window::new(-6, 6));
        let rep = critical_degree(&b.complex, b.complex.window(), &AnalysisOptions::default()).unwrap();
        let s = serde_json::to_string(&rep).unwrap();
        assert_eq!(serde_json::from_str::<DegreeReport>(&s).unwrap(), rep);
    }
}

#[cfg(test)]
mod props {
    use std::sync::Arc;

    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::cioper::audit;
    use crate::complexes::{solve_homotopy, RMatrix};
    use crate::polyring::QuotientRing;
    use crate::resolve::random_presentation;

    fn example_ring() -> Arc<QuotientRing> {
        Arc::new(QuotientRing::from_strings(2, 2, &["x^2", "y^2"]).unwrap())
    }

    fn second_ring() -> Arc<QuotientRing> {
        Arc::new(QuotientRing::from_strings(3, 2, &["x^2", "y^3"]).unwrap())
    }

    const WINDOW: Window = Window { lo: -8, hi: 8 };

    fn pick_ring(second: bool) -> Arc<QuotientRing> {
        if second { second_ring() } else { example_ring() }
    }

    fn bundle(second: bool, seed: u64, window: Window) -> Option<CompleteResolutionBundle> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (b, a) = (rng.gen_range(1..=2), rng.gen_range(1..=3));
        let m = random_presentation(pick_ring(second), b, a, 0.4, &mut rng);
        complete_resolution(&m, window).ok().filter(|b| !b.complex.is_zero())
    }

    fn random_rmatrix(rows: usize, cols: usize, ring: &QuotientRing, rng: &mut ChaCha8Rng) -> RMatrix {
        let p = ring.field().p();
        let data = (0..rows * cols * ring.dim()).map(|_| if rng.gen_bool(0.3) { rng.gen_range(0..p) } else { 0 }).collect();
        RMatrix::from_data(rows, cols, ring.dim(), data)
    }

    /// `d h + h d` for a random degree-one `h` on `c`.
    fn random_boundary(c: &Arc<FreeComplex>, rng: &mut ChaCha8Rng) -> ChainMap {
        let ring = c.ring().clone();
        let (lo, hi) = (c.lo(), c.hi());
        let h: Vec<RMatrix> = (lo..hi).map(|n| random_rmatrix(c.rank(n + 1), c.rank(n), &ring, rng)).collect();
        ChainMap::from_fn(c.clone(), c.clone(), 0, |n| {
            let mut f = RMatrix::zeros(c.rank(n), c.rank(n), ring.dim());
            if n < hi {
                f = f.add(&c.diff(n + 1).mul(&h[(n - lo) as usize], &ring), &ring);
            }
            if n > lo {
                f = f.add(&h[(n - 1 - lo) as usize].mul(c.diff(n), &ring), &ring);
            }
            f
        })
        .unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

        #[test]
        fn resolution_is_exact_minimal_and_spliced(second in any::<bool>(), seed in any::<u64>()) {
            if let Some(b) = bundle(second, seed, WINDOW) {
                prop_assert!(b.verify().is_ok());
                prop_assert!(b.complex.is_minimal());
                prop_assert!(b.complex.is_totally_acyclic());
            }
        }

        #[test]
        fn operators_pass_audit(second in any::<bool>(), seed in any::<u64>()) {
            if let Some(b) = bundle(second, seed, Window::new(-6, 6)) {
                let fam = eisenbud_operators(Arc::new(b.complex.clone())).unwrap();
                let report = audit(&fam).unwrap();
                prop_assert!(report.passed());
            }
        }

        #[test]
        fn null_homotopic_maps_are_recognized(second in any::<bool>(), seed in any::<u64>()) {
            if let Some(b) = bundle(second, seed, Window::new(-5, 5)) {
                let c = Arc::new(b.complex.clone());
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
                let f = random_boundary(&c, &mut rng);
                let zero = ChainMap::zero(c.clone(), c.clone(), 0);
                let h = solve_homotopy(&f, &zero).unwrap();
                prop_assert!(h.is_some_and(|h| h.is_homotopy_between(&f, &zero)));
            }
        }

        #[test]
        fn routes_agree_and_infinities_are_certified(second in any::<bool>(), seed in any::<u64>()) {
            if let Some(b) = bundle(second, seed, WINDOW) {
                let a = analyze(&b.complex, WINDOW, &AnalysisOptions::default()).unwrap();
                let fam = eisenbud_operators(a.minimal.clone()).unwrap();
                let e = ext_module(&b, &fam).unwrap();
                for (matrix, cohom) in [(a.crdeg.verdict, crdeg_cohomological(&e).unwrap()), (a.cocrdeg.verdict, cocrdeg_cohomological(&e).unwrap())] {
                    if matrix.status != VerdictStatus::Inconclusive && cohom.status != VerdictStatus::Inconclusive {
                        prop_assert_eq!(matrix.value, cohom.value);
                    }
                    if !matrix.value.is_finite() && matrix.status != VerdictStatus::Inconclusive {
                        let cert = detect_periodicity(&a.minimal, a.window, 2);
                        prop_assert!(cert.is_some_and(|c| c.verify()));
                    }
                }
            }
        }

        #[test]
        fn diameter_is_translation_invariant(second in any::<bool>(), seed in any::<u64>(), n in -3i64..=3) {
            if let Some(b) = bundle(second, seed, WINDOW) {
                let opts = AnalysisOptions::default();
                let base = analyze(&b.complex, WINDOW, &opts).unwrap();
                let shifted_window = Window::new(WINDOW.lo + n, WINDOW.hi + n);
                let moved = analyze(&b.complex.shift(n), shifted_window, &opts).unwrap();
                prop_assert_eq!(diameter_of(&base).verdict.value, diameter_of(&moved).verdict.value);
                prop_assert_eq!(moved.crdeg.verdict.value, base.crdeg.verdict.value.add(n));
                prop_assert_eq!(moved.cocrdeg.verdict.value, base.cocrdeg.verdict.value.add(n));
            }
        }

        #[test]
        fn double_dual_reproduces_degrees(second in any::<bool>(), seed in any::<u64>()) {
            if let Some(b) = bundle(second, seed, WINDOW) {
                let opts = AnalysisOptions::default();
                let base = analyze(&b.complex, WINDOW, &opts).unwrap();
                let dd = analyze(&b.complex.dualize().dualize(), WINDOW, &opts).unwrap();
                prop_assert_eq!(base.crdeg.verdict, dd.crdeg.verdict);
                prop_assert_eq!(base.cocrdeg.verdict, dd.cocrdeg.verdict);
                let dual = analyze(&b.complex.dualize(), WINDOW, &opts).unwrap();
                if dual.cocrdeg.verdict.status != VerdictStatus::Inconclusive && base.crdeg.verdict.status != VerdictStatus::Inconclusive {
                    prop_assert_eq!(dual.cocrdeg.verdict.value, base.crdeg.verdict.value.neg());
                }
            }
        }
    }
}
