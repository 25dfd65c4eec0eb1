//! Minimal free resolutions, duals and complete resolutions of modules
//! `M = coker(A : R^a -> R^b)`.
//!
//! Every kernel is computed on the underlying `k`-vector spaces; minimal
//! generators of a submodule `K` are coset representatives of a basis of
//! `K / mK`, read off in echelon order.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::complexes::{FreeComplex, RMatrix, Window};
use crate::error::{Error, Result};
use crate::ffield::{KMatrix, Subspace};
use crate::polyring::QuotientRing;

/// `M = coker(relations)`, where `relations` is `generators x a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModulePresentation {
    ring: Arc<QuotientRing>,
    relations: RMatrix,
}

impl ModulePresentation {
    pub fn new(ring: Arc<QuotientRing>, relations: RMatrix) -> Result<Self> {
        if relations.ring_dim() != ring.dim() {
            return Err(Error::DimensionMismatch("relation entries do not match the ring".into()));
        }
        Ok(Self { ring, relations })
    }

    /// Free module `R^b`.
    pub fn free(ring: Arc<QuotientRing>, b: usize) -> Self {
        let d = ring.dim();
        Self { ring, relations: RMatrix::zeros(b, 0, d) }
    }

    /// `k = R / (x_1..x_n)`.
    pub fn residue_field(ring: Arc<QuotientRing>) -> Self {
        let n = ring.nvars();
        let mut rel = RMatrix::zeros(1, n, ring.dim());
        for i in 0..n {
            rel.set(0, i, &ring.var_element(i));
        }
        Self { ring, relations: rel }
    }

    /// Relations given row by row as polynomial text.
    pub fn from_strings(ring: Arc<QuotientRing>, rows: &[Vec<&str>]) -> Result<Self> {
        let rel = RMatrix::from_strings(&ring, rows)?;
        Self::new(ring, rel)
    }

    pub fn ring(&self) -> &Arc<QuotientRing> {
        &self.ring
    }

    pub fn generators(&self) -> usize {
        self.relations.rows()
    }

    pub fn relations(&self) -> &RMatrix {
        &self.relations
    }

    /// No relation entry is a unit.
    pub fn is_minimal(&self) -> bool {
        self.relations.first_unit().is_none()
    }

    /// `dim_k M`.
    pub fn dim_k(&self) -> usize {
        let f = self.ring.field();
        self.generators() * self.ring.dim() - self.relations.flatten(&self.ring).rank(f)
    }

    /// `M (+) N`.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        Ok(Self { ring: self.ring.clone(), relations: self.relations.block_diag(&other.relations) })
    }
}

/// Flattened `k`-basis of the kernel of `m`.
pub fn kernel_flat(m: &RMatrix, ring: &QuotientRing) -> Vec<Vec<u32>> {
    m.flatten(ring).kernel_basis(ring.field())
}

fn mul_by_var(v: &[u32], var: &KMatrix, d: usize, field: &crate::ffield::Field) -> Vec<u32> {
    let mut out = vec![0u32; v.len()];
    for (chunk_in, chunk_out) in v.chunks(d).zip(out.chunks_mut(d)) {
        if chunk_in.iter().all(|&x| x == 0) {
            continue;
        }
        chunk_out.copy_from_slice(&var.mul_vec(chunk_in, field));
    }
    out
}

/// Minimal generators of the submodule of `R^rank` spanned over `k` by
/// `basis`, which must be closed under multiplication by `R`.
pub fn minimal_generators(ring: &QuotientRing, rank: usize, basis: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let f = ring.field();
    let d = ring.dim();
    if basis.is_empty() {
        return Vec::new();
    }
    let vars: Vec<KMatrix> = (0..ring.nvars()).map(|i| ring.mult_matrix(&ring.var_element(i))).collect();
    let mut span = Subspace::new(rank * d);
    for v in basis {
        for x in &vars {
            span.insert(&mul_by_var(v, x, d, f), f);
        }
    }
    let echelon = KMatrix::from_rows(basis).row_space(f);
    let mut gens = Vec::new();
    for i in 0..echelon.rows() {
        let row = echelon.row(i);
        if span.insert(row, f) {
            gens.push(row.to_vec());
        }
    }
    gens
}

/// Minimal generators of `ker m` as the columns of a matrix.
pub fn syzygy_matrix(m: &RMatrix, ring: &QuotientRing) -> RMatrix {
    let ker = kernel_flat(m, ring);
    let gens = minimal_generators(ring, m.cols(), &ker);
    RMatrix::from_flat_columns(m.cols(), ring.dim(), &gens)
}

/// Minimal free resolution `F_L -> ... -> F_0` of `M` as a complex on `[0, L]`.
pub fn minimal_free_resolution(m: &ModulePresentation, length: usize) -> Result<FreeComplex> {
    if length < 1 {
        return Err(Error::TooNarrow { lo: 0, hi: length as i64, reason: "resolution length must be at least 1".into() });
    }
    let ring = m.ring.clone();
    let f = ring.field();
    let d = ring.dim();
    let b = m.generators();
    // generators of M/mM: standard vectors outside the span of the constant part of A
    let mut span = Subspace::new(b);
    let a_const = m.relations.constant_part();
    for j in 0..a_const.cols() {
        span.insert(&a_const.column(j), f);
    }
    let mut chosen = Vec::new();
    for i in 0..b {
        let mut e = vec![0u32; b];
        e[i] = 1;
        if span.insert(&e, f) {
            chosen.push(i);
        }
    }
    let b0 = chosen.len();
    let mut iota = RMatrix::zeros(b, b0, d);
    for (j, &i) in chosen.iter().enumerate() {
        iota.set(i, j, &ring.one());
    }
    // K_1 = { v in R^b0 : iota v in Im A }
    let n_basis = m.relations.flatten(&ring).transpose().row_space(f);
    let joint = iota.flatten(&ring).hstack(&n_basis.transpose());
    let k1: Vec<Vec<u32>> = joint.kernel_basis(f).into_iter().map(|v| v[..b0 * d].to_vec()).collect();
    let gens = minimal_generators(&ring, b0, &k1);
    let mut diffs = vec![RMatrix::from_flat_columns(b0, d, &gens)];
    let mut ranks = vec![b0, gens.len()];
    for _ in 2..=length {
        let next = syzygy_matrix(diffs.last().unwrap(), &ring);
        ranks.push(next.cols());
        diffs.push(next);
    }
    FreeComplex::new(ring, 0, ranks, diffs)
}

/// `M* = Hom(M, R) = ker(A^T)`, presented by minimal generators and their syzygies.
pub fn dual_module(m: &ModulePresentation) -> ModulePresentation {
    let ring = m.ring.clone();
    let y = syzygy_matrix(&m.relations.transpose(), &ring);
    let rel = syzygy_matrix(&y, &ring);
    ModulePresentation { ring, relations: rel }
}

/// A minimal totally acyclic complex with `Im d_0 = M` (up to free summands
/// of `M`, which do not survive).
#[derive(Debug, Clone)]
pub struct CompleteResolutionBundle {
    pub complex: FreeComplex,
    pub module: ModulePresentation,
    /// For `n >= comparison_degree` the complex agrees with the minimal free
    /// resolution of `M`.
    pub comparison_degree: i64,
    /// Minimal free resolution of `M` on `[0, hi]`.
    pub resolution: FreeComplex,
    /// Minimal generators of `M*` inside `F_0*`, one per column.
    pub dual_generators: RMatrix,
    /// Minimal free resolution of `M*` on `[0, -lo - 1]`.
    pub dual_resolution: FreeComplex,
}

/// Splices the minimal resolution of `M` with the dual of the minimal
/// resolution of `M*` along `d_0 = Y^T`.
pub fn complete_resolution(m: &ModulePresentation, window: Window) -> Result<CompleteResolutionBundle> {
    if window.lo > -3 || window.hi < 3 {
        return Err(Error::TooNarrow { lo: window.lo, hi: window.hi, reason: "complete resolutions need at least [-3, 3]".into() });
    }
    let ring = m.ring.clone();
    let f = ring.field();
    let d = ring.dim();
    let res = minimal_free_resolution(m, window.hi as usize)?;
    let y = syzygy_matrix(&res.diff(1).transpose(), &ring);
    let dual_rel = syzygy_matrix(&y, &ring);
    let dual = ModulePresentation { ring: ring.clone(), relations: dual_rel };
    let g_len = (-window.lo - 1) as usize;
    let g = minimal_free_resolution(&dual, g_len)?;
    if g.rank(0) != y.cols() {
        return Err(Error::SpliceFailure("the dual module lost generators while resolving".into()));
    }
    let d0 = y.transpose();
    let image_dim = d0.flatten(&ring).rank(f);
    let dim_m = res.rank(0) * d - res.diff(1).flatten(&ring).rank(f);
    if image_dim != dim_m {
        return Err(Error::SpliceFailure(format!("image of d_0 has dimension {image_dim}, module has {dim_m}")));
    }
    let mut ranks = Vec::new();
    let mut diffs = Vec::new();
    for n in window.lo..=window.hi {
        ranks.push(if n >= 0 { res.rank(n) } else { g.rank(-n - 1) });
        if n > window.lo {
            diffs.push(match n {
                n if n >= 1 => res.diff(n).clone(),
                0 => d0.clone(),
                n => g.diff(-n).transpose(),
            });
        }
    }
    let spliced = FreeComplex::new_unchecked(ring.clone(), window.lo, ranks, diffs)?;
    let (complex, comparison_degree) = if spliced.is_minimal() {
        (spliced, 0)
    } else {
        (spliced.minimalize().0, 1)
    };
    Ok(CompleteResolutionBundle {
        complex,
        module: m.clone(),
        comparison_degree,
        resolution: res,
        dual_generators: y,
        dual_resolution: g,
    })
}

impl CompleteResolutionBundle {
    /// `(degree, b_n)` over the window.
    pub fn betti(&self) -> Vec<(i64, usize)> {
        self.complex.ranks()
    }

    /// Full invariant check: minimality, `d^2 = 0`, total acyclicity.
    pub fn verify(&self) -> Result<()> {
        let c = &self.complex;
        if !c.is_minimal() {
            return Err(Error::InvariantBreach("complete resolution is not minimal".into()));
        }
        FreeComplex::new(c.ring().clone(), c.lo(), c.ranks().iter().map(|x| x.1).collect(), (c.lo() + 1..=c.hi()).map(|n| c.diff(n).clone()).collect())?;
        if !c.is_totally_acyclic() {
            return Err(Error::InvariantBreach("complete resolution is not totally acyclic".into()));
        }
        Ok(())
    }
}

/// `Omega^n M = Im d_n`, presented as `coker d_{n+1}`.
pub fn syzygy(bundle: &CompleteResolutionBundle, n: i64) -> Result<ModulePresentation> {
    let c = &bundle.complex;
    if n < c.lo() || n >= c.hi() {
        return Err(Error::OutOfWindow { degree: n, lo: c.lo(), hi: c.hi() - 1 });
    }
    Ok(ModulePresentation { ring: c.ring().clone(), relations: c.diff(n + 1).clone() })
}

pub fn betti(bundle: &CompleteResolutionBundle) -> Vec<(i64, usize)> {
    bundle.betti()
}

/// Complexity read off a rank sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityEstimate {
    pub value: usize,
    /// The finite-difference fit did not settle within the available data.
    pub ambiguous: bool,
}

/// Least `k < cap` such that the last `k + 3` entries of `seq` agree with a
/// polynomial of degree `k`, `-1` for the zero sequence. The flag is set when
/// fewer than `k + 3` entries were available; `None` means no such `k`.
fn growth_degree(seq: &[i64], cap: usize) -> Option<(i64, bool)> {
    if seq.iter().all(|&x| x == 0) {
        return Some((-1, seq.len() < 2));
    }
    for k in 0..cap {
        let take = (k + 3).min(seq.len());
        let mut cur = seq[seq.len() - take..].to_vec();
        for _ in 0..=k {
            cur = cur.windows(2).map(|w| w[1] - w[0]).collect();
        }
        if cur.iter().all(|&x| x == 0) {
            return Some((k as i64, take < k + 3));
        }
    }
    None
}

/// One plus the growth degree of the upper half of the ranks, fitted
/// separately on even and odd degrees and capped at `codim`.
pub fn complexity_from_ranks(ranks: &[(i64, usize)], codim: usize) -> ComplexityEstimate {
    let take = ranks.len().div_ceil(2);
    let tail = &ranks[ranks.len() - take..];
    let even: Vec<i64> = tail.iter().filter(|(n, _)| n.rem_euclid(2) == 0).map(|&(_, b)| b as i64).collect();
    let odd: Vec<i64> = tail.iter().filter(|(n, _)| n.rem_euclid(2) == 1).map(|&(_, b)| b as i64).collect();
    let (ge, go) = (growth_degree(&even, codim), growth_degree(&odd, codim));
    let fallback = (codim as i64 - 1, true);
    let (a, fa) = ge.unwrap_or(fallback);
    let (b, fb) = go.unwrap_or(fallback);
    ComplexityEstimate { value: ((a.max(b) + 1).max(0) as usize).min(codim), ambiguous: fa || fb }
}

pub fn estimate_complexity(bundle: &CompleteResolutionBundle) -> ComplexityEstimate {
    complexity_from_ranks(&bundle.complex.ranks(), bundle.complex.ring().codim())
}

/// Random presentation with `b` generators and `a` relations whose entries
/// lie in the maximal ideal; each coefficient is nonzero with probability
/// `density`.
pub fn random_presentation<G: Rng>(ring: Arc<QuotientRing>, b: usize, a: usize, density: f64, rng: &mut G) -> ModulePresentation {
    let d = ring.dim();
    let p = ring.p();
    let mut rel = RMatrix::zeros(b, a, d);
    for i in 0..b {
        for j in 0..a {
            let e = rel.entry_mut(i, j);
            for x in e.iter_mut().skip(1) {
                if rng.gen_bool(density) {
                    *x = rng.gen_range(1..p);
                }
            }
        }
    }
    ModulePresentation { ring, relations: rel }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Arc<QuotientRing> {
        Arc::new(QuotientRing::from_strings(2, 2, &["x^2", "y^2"]).unwrap())
    }

    #[test]
    fn free_module_resolution() {
        let r = xy();
        let res = minimal_free_resolution(&ModulePresentation::free(r, 1), 4).unwrap();
        assert_eq!(res.ranks().iter().map(|x| x.1).collect::<Vec<_>>(), vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn residue_field_betti() {
        let r = xy();
        let res = minimal_free_resolution(&ModulePresentation::residue_field(r), 5).unwrap();
        assert_eq!(res.ranks().iter().map(|x| x.1).collect::<Vec<_>>(), vec![1, 2, 3, 4, 5, 6]);
        assert!(res.is_minimal());
    }

    #[test]
    fn cyclic_x_resolution() {
        let r = xy();
        let m = ModulePresentation::from_strings(r.clone(), &[vec!["x"]]).unwrap();
        let res = minimal_free_resolution(&m, 4).unwrap();
        let x = RMatrix::from_strings(&r, &[vec!["x"]]).unwrap();
        for n in 1..=4 {
            assert_eq!(res.diff(n), &x);
        }
    }

    #[test]
    fn nonminimal_presentation() {
        let r = xy();
        // relations e1 + x e2 and y e2, so M = R/(y) on the generator e2
        let m = ModulePresentation::from_strings(r, &[vec!["1", "0"], vec!["x", "y"]]).unwrap();
        let res = minimal_free_resolution(&m, 3).unwrap();
        assert_eq!(res.rank(0), 1);
        assert_eq!(res.rank(1), 1);
        assert_eq!(m.dim_k(), 2);
    }

    #[test]
    fn dual_examples() {
        let r = xy();
        let free = dual_module(&ModulePresentation::free(r.clone(), 1));
        assert_eq!(free.generators(), 1);
        assert!(free.relations().is_zero());
        let k = ModulePresentation::residue_field(r);
        let kd = dual_module(&k);
        assert_eq!(kd.generators(), 1);
        assert_eq!(kd.dim_k(), 1);
    }

    #[test]
    fn complete_resolution_of_k() {
        let r = xy();
        let b = complete_resolution(&ModulePresentation::residue_field(r), Window::new(-4, 4)).unwrap();
        let ranks: Vec<usize> = b.betti().iter().map(|x| x.1).collect();
        assert_eq!(ranks, vec![4, 3, 2, 1, 1, 2, 3, 4, 5]);
        assert_eq!(b.comparison_degree, 0);
        b.verify().unwrap();
        assert!(estimate_complexity(&b).ambiguous);
        let wide = complete_resolution(&b.module, Window::new(-8, 8)).unwrap();
        assert_eq!(estimate_complexity(&wide), ComplexityEstimate { value: 2, ambiguous: false });
    }

    #[test]
    fn complete_resolution_periodic() {
        let r = xy();
        let m = ModulePresentation::from_strings(r.clone(), &[vec!["x"]]).unwrap();
        let b = complete_resolution(&m, Window::new(-3, 3)).unwrap();
        let x = RMatrix::from_strings(&r, &[vec!["x"]]).unwrap();
        for n in -2..=3 {
            assert_eq!(b.complex.diff(n), &x);
        }
        assert_eq!(estimate_complexity(&b).value, 1);
        let h = Arc::new(QuotientRing::from_strings(2, 1, &["x^2"]).unwrap());
        let b = complete_resolution(&ModulePresentation::residue_field(h), Window::new(-3, 3)).unwrap();
        assert!(b.betti().iter().all(|x| x.1 == 1));
    }

    #[test]
    fn free_summand_is_dropped() {
        let r = xy();
        let m = ModulePresentation::from_strings(r.clone(), &[vec!["x", "y"], vec!["0", "0"]]).unwrap();
        let b = complete_resolution(&m, Window::new(-4, 4)).unwrap();
        assert_eq!(b.comparison_degree, 1);
        let k = complete_resolution(&ModulePresentation::residue_field(r), Window::new(-4, 4)).unwrap();
        assert_eq!(b.betti(), k.betti());
        b.verify().unwrap();
        assert!(complete_resolution(&ModulePresentation::free(b.complex.ring().clone(), 2), Window::new(-3, 3)).unwrap().complex.is_zero());
    }

    #[test]
    fn syzygy_zero_is_module() {
        let r = xy();
        let k = ModulePresentation::residue_field(r);
        let b = complete_resolution(&k, Window::new(-3, 3)).unwrap();
        let s0 = syzygy(&b, 0).unwrap();
        assert_eq!(s0.dim_k(), k.dim_k());
        assert_eq!(syzygy(&b, 1).unwrap().dim_k(), 3);
        assert!(matches!(syzygy(&b, 3), Err(Error::OutOfWindow { .. })));
    }

    #[test]
    fn narrow_window_rejected() {
        let r = xy();
        assert!(matches!(
            complete_resolution(&ModulePresentation::residue_field(r), Window::new(-2, 3)),
            Err(Error::TooNarrow { .. })
        ));
    }

    #[test]
    fn growth_fit() {
        let lin: Vec<(i64, usize)> = (0..10).map(|n| (n, n as usize + 1)).collect();
        assert_eq!(complexity_from_ranks(&lin, 2).value, 2);
        let alt: Vec<(i64, usize)> = (0..13).map(|n| (n, if n % 2 == 0 { 2 } else { 3 })).collect();
        assert_eq!(complexity_from_ranks(&alt, 2), ComplexityEstimate { value: 1, ambiguous: false });
        let short: Vec<(i64, usize)> = (0..4).map(|n| (n, n as usize * n as usize)).collect();
        assert!(complexity_from_ranks(&short, 3).ambiguous);
        let dip: Vec<(i64, usize)> = [12, 11, 10, 9, 8, 7, 6, 5, 4, 3, 2, 1, 1, 2, 3, 4, 5, 6, 7, 8, 9].iter().enumerate().map(|(n, &b)| (n as i64 - 10, b)).collect();
        assert_eq!(complexity_from_ranks(&dip, 2), ComplexityEstimate { value: 2, ambiguous: false });
        let zero: Vec<(i64, usize)> = (0..6).map(|n| (n, 0)).collect();
        assert_eq!(complexity_from_ranks(&zero, 2).value, 0);
    }
}
