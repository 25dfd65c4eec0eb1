//! Eisenbud operators: lift `d` to the polynomial ring, square it, and divide
//! by the regular sequence. `d~_{n-1} d~_n = sum_j f_j t~_j(n)`, and the
//! reductions `t_j(n) : C_n -> C_{n-2}` are strict chain endomorphisms.
//!
//! Products of lifted entries are expanded through the ring's per-pair table
//! `m_a m_b = nf(m_a m_b) + sum_j h_j^{ab} f_j`, so the Q-level lifts are only
//! materialized by [`audit`].

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::complexes::{solve_homotopy, ChainMap, FreeComplex, RMatrix};
use crate::error::{Error, Result};
use crate::ffield::{Field, FieldSpec, KMatrix};
use crate::polyring::{Monomial, Polynomial, QuotientRing};

/// The operators `t_1..t_c` on a complex.
#[derive(Debug, Clone)]
pub struct CIOperatorFamily {
    base: Arc<FreeComplex>,
    ops: Vec<ChainMap>,
}

/// Coefficients `(a_1..a_c)` over `F_{p^e}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearForm {
    pub field: FieldSpec,
    pub coeffs: Vec<u32>,
}

impl LinearForm {
    pub fn new(field: FieldSpec, coeffs: Vec<u32>) -> Self {
        Self { field, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&a| a == 0)
    }
}

impl std::fmt::Display for LinearForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(", "))?;
        if self.field.e > 1 {
            write!(f, " over F_{}^{}", self.field.p, self.field.e)?;
        }
        Ok(())
    }
}

/// Builds `t_1..t_c` on `c`, defined on degrees `[lo + 2, hi]`.
pub fn eisenbud_operators(c: Arc<FreeComplex>) -> Result<CIOperatorFamily> {
    let ring = c.ring().clone();
    let field = ring.field();
    let d = ring.dim();
    let codim = ring.codim();
    let lo = c.lo() + 2;
    let mut per_op: Vec<Vec<RMatrix>> = vec![Vec::new(); codim];
    for n in lo..=c.hi() {
        let (outer, inner) = (c.diff(n - 1), c.diff(n));
        let (rows, mid, cols) = (outer.rows(), outer.cols(), inner.cols());
        let mut mats: Vec<RMatrix> = (0..codim).map(|_| RMatrix::zeros(rows, cols, d)).collect();
        let mut nf = vec![0u32; d];
        let mut acc = vec![vec![0u32; d]; codim];
        for i in 0..rows {
            for l in 0..cols {
                nf.iter_mut().for_each(|x| *x = 0);
                acc.iter_mut().for_each(|v| v.iter_mut().for_each(|x| *x = 0));
                for k in 0..mid {
                    let (u, v) = (outer.get(i, k), inner.get(k, l));
                    for (a, &ca) in u.iter().enumerate() {
                        if ca == 0 {
                            continue;
                        }
                        for (b, &cb) in v.iter().enumerate() {
                            if cb == 0 {
                                continue;
                            }
                            let s = field.mul(ca, cb);
                            for &(x, cx) in ring.mult_entry(a, b) {
                                nf[x] = field.add(nf[x], field.mul(s, cx));
                            }
                            for &(j, x, cx) in ring.pair_cofactors(a, b) {
                                acc[j][x] = field.add(acc[j][x], field.mul(s, cx));
                            }
                        }
                    }
                }
                if nf.iter().any(|&x| x != 0) {
                    return Err(Error::DivisionFailure { degree: n });
                }
                for (m, v) in mats.iter_mut().zip(&acc) {
                    m.set(i, l, v);
                }
            }
        }
        for (j, m) in mats.into_iter().enumerate() {
            per_op[j].push(m);
        }
    }
    let ops = per_op
        .into_iter()
        .map(|mats| ChainMap::new(c.clone(), c.clone(), -2, mats))
        .collect::<Result<Vec<_>>>()?;
    Ok(CIOperatorFamily { base: c, ops })
}

impl CIOperatorFamily {
    pub fn base(&self) -> &Arc<FreeComplex> {
        &self.base
    }

    pub fn ops(&self) -> &[ChainMap] {
        &self.ops
    }

    pub fn op(&self, j: usize) -> &ChainMap {
        &self.ops[j]
    }

    pub fn codim(&self) -> usize {
        self.ops.len()
    }

    /// True when the base complex is zero, so every operator is empty.
    pub fn is_empty(&self) -> bool {
        self.base.is_zero()
    }

    /// Degrees `n` where `t_j(n) : C_n -> C_{n-2}` is defined.
    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        let w = self.ops.first().map(ChainMap::window).unwrap_or(self.base.window());
        w.lo..=w.hi
    }

    /// `t_j(n)` reduced modulo the maximal ideal, for every `j`.
    pub fn reduced(&self, n: i64) -> Vec<KMatrix> {
        self.ops.iter().map(|t| t.mat(n).constant_part()).collect()
    }

    /// Family on `C (+) D` from the families on `C` and `D`.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        let base = Arc::new(self.base.direct_sum(&other.base)?);
        let ops = self
            .ops
            .iter()
            .zip(&other.ops)
            .map(|(a, b)| ChainMap::from_fn(base.clone(), base.clone(), -2, |n| a.mat(n).block_diag(b.mat(n))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { base, ops })
    }
}

/// `sum_j a_j t_j` for a form over the prime field.
pub fn linear_form_operator(fam: &CIOperatorFamily, a: &LinearForm) -> Result<ChainMap> {
    if a.coeffs.len() != fam.codim() {
        return Err(Error::DimensionMismatch(format!("form has {} coefficients, family has {}", a.coeffs.len(), fam.codim())));
    }
    if a.is_zero() {
        return Err(Error::ZeroForm);
    }
    if a.field.e != 1 || a.field.p != fam.base.ring().p() {
        return Err(Error::DimensionMismatch("forms over an extension field act only after reduction, see reduced_form".into()));
    }
    let mut out = fam.ops[0].scale(a.coeffs[0]);
    for (t, &c) in fam.ops.iter().zip(&a.coeffs).skip(1) {
        if c != 0 {
            out = out.add(&t.scale(c))?;
        }
    }
    Ok(out)
}

/// `sum_j a_j t_j(n)` modulo the maximal ideal, over the form's field.
pub fn reduced_form(reduced: &[KMatrix], a: &LinearForm, ext: &Field) -> KMatrix {
    let (r, c) = (reduced[0].rows(), reduced[0].cols());
    let mut out = KMatrix::zeros(r, c);
    for (t, &s) in reduced.iter().zip(&a.coeffs) {
        out.add_scaled(t, s, ext);
    }
    out
}

/// One representative per projective class of nonzero vectors in
/// `(F_{p^e})^c`, normalized so the first nonzero coefficient is 1.
pub fn enumerate_forms(p: u32, c: usize, e: u32) -> Vec<LinearForm> {
    let spec = FieldSpec::new(p, e);
    let q = spec.order();
    let total = q.pow(c as u32);
    let mut out = Vec::new();
    for code in 1..total {
        let mut coeffs = Vec::with_capacity(c);
        let mut x = code;
        for _ in 0..c {
            coeffs.push((x % q) as u32);
            x /= q;
        }
        if coeffs.iter().find(|&&a| a != 0) == Some(&1) {
            out.push(LinearForm::new(spec, coeffs));
        }
    }
    out
}

/// Projective linear forms in the operators of `ring` over `F_{p^e}`.
pub fn enumerate_linear_forms(ring: &QuotientRing, e: u32) -> Vec<LinearForm> {
    enumerate_forms(ring.p(), ring.codim(), e)
}

/// Per-degree audit record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeAudit {
    pub degree: i64,
    /// `sum_j f_j t~_j(n) = d~_{n-1} d~_n` holds exactly in the polynomial ring.
    pub division_exact: bool,
    /// Strict commutation `d t_j = t_j d` at this degree, per operator.
    pub commutes: Vec<bool>,
    /// Rendered lifts `t~_j(n)`, per operator, row by row.
    pub lifts: Vec<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub degrees: Vec<DegreeAudit>,
    /// `(i, j, found)` for each pair `i < j`: a homotopy `t_i t_j ~ t_j t_i` exists.
    pub pairwise_homotopy: Vec<(usize, usize, bool)>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.degrees.iter().all(|d| d.division_exact && d.commutes.iter().all(|&x| x))
            && self.pairwise_homotopy.iter().all(|p| p.2)
    }
}

/// Dense coordinates for polynomials of total degree at most `2D`, `D` the
/// top staircase degree: mixed radix `2D + 1` per variable, so the index of a
/// product of monomials is the sum of their indices.
struct MonomialBox {
    radix: usize,
    nvars: usize,
    size: usize,
}

impl MonomialBox {
    fn new(ring: &QuotientRing) -> Self {
        let top = ring.staircase().iter().map(Monomial::degree).max().unwrap_or(0) as usize;
        let radix = 2 * top + 1;
        let nvars = ring.nvars();
        Self { radix, nvars, size: radix.pow(nvars as u32) }
    }

    fn index(&self, m: &Monomial) -> usize {
        m.0.iter().rev().fold(0, |acc, &e| {
            assert!((e as usize) < self.radix, "monomial exponent outside the audit box");
            acc * self.radix + e as usize
        })
    }

    fn monomial(&self, mut idx: usize) -> Monomial {
        let mut e = vec![0u32; self.nvars];
        for x in e.iter_mut() {
            *x = (idx % self.radix) as u32;
            idx /= self.radix;
        }
        Monomial(e)
    }

    fn terms(&self, p: &Polynomial) -> Vec<(usize, u32)> {
        p.terms().map(|(m, &c)| (self.index(m), c)).collect()
    }

    fn polynomial(&self, v: &[u32], f: &Field) -> Polynomial {
        Polynomial::from_terms(self.nvars, v.iter().enumerate().filter(|x| *x.1 != 0).map(|(i, &c)| (self.monomial(i), c)), f)
    }
}

/// Exact division identity, strict commutation and pairwise homotopy
/// commutation for every degree of the family.
pub fn audit(fam: &CIOperatorFamily) -> Result<AuditReport> {
    audit_impl(fam, false)
}

/// [`audit`] plus the rendered lifts `t~_j(n)`.
pub fn audit_with_lifts(fam: &CIOperatorFamily) -> Result<AuditReport> {
    audit_impl(fam, true)
}

fn audit_impl(fam: &CIOperatorFamily, render: bool) -> Result<AuditReport> {
    let c = &fam.base;
    let ring = c.ring();
    let f = ring.field();
    let d = ring.dim();
    let codim = ring.codim();
    let bx = MonomialBox::new(ring);
    let stair: Vec<usize> = ring.staircase().iter().map(|m| bx.index(m)).collect();
    let gens: Vec<Vec<(usize, u32)>> = ring.gens().iter().map(|g| bx.terms(g)).collect();
    let pair: Vec<Vec<Vec<Vec<(usize, u32)>>>> =
        (0..d).map(|a| (0..d).map(|b| ring.pair_lift(a, b).iter().map(|h| bx.terms(h)).collect()).collect()).collect();
    let mut degrees = Vec::new();
    let mut tt = vec![vec![0u32; bx.size]; codim];
    let mut lhs = vec![0u32; bx.size];
    let mut rhs = vec![0u32; bx.size];
    for n in fam.degrees() {
        let (outer, inner) = (c.diff(n - 1), c.diff(n));
        let mut exact = true;
        let mut lifts = vec![vec![Vec::with_capacity(inner.cols()); outer.rows()]; if render { codim } else { 0 }];
        for i in 0..outer.rows() {
            for l in 0..inner.cols() {
                tt.iter_mut().for_each(|v| v.fill(0));
                lhs.fill(0);
                rhs.fill(0);
                for k in 0..outer.cols() {
                    let (u, v) = (outer.get(i, k), inner.get(k, l));
                    for (a, &ca) in u.iter().enumerate() {
                        if ca == 0 {
                            continue;
                        }
                        for (b, &cb) in v.iter().enumerate() {
                            if cb == 0 {
                                continue;
                            }
                            let s = f.mul(ca, cb);
                            let x = stair[a] + stair[b];
                            rhs[x] = f.add(rhs[x], s);
                            for (j, h) in pair[a][b].iter().enumerate() {
                                for &(y, cy) in h {
                                    tt[j][y] = f.add(tt[j][y], f.mul(s, cy));
                                }
                            }
                        }
                    }
                }
                for (j, g) in gens.iter().enumerate() {
                    for (y, &cy) in tt[j].iter().enumerate() {
                        if cy == 0 {
                            continue;
                        }
                        for &(z, cz) in g {
                            lhs[y + z] = f.add(lhs[y + z], f.mul(cy, cz));
                        }
                    }
                }
                if lhs != rhs {
                    exact = false;
                }
                if render {
                    for (j, v) in tt.iter().enumerate() {
                        lifts[j][i].push(ring.render(&bx.polynomial(v, f)));
                    }
                }
            }
        }
        let commutes = fam
            .ops
            .iter()
            .map(|t| {
                if !(c.has_diff(n) && c.has_diff(n - 2) && t.window().contains(n - 1)) {
                    return true;
                }
                t.target().diff(n - 2).mul(t.mat(n), ring) == t.mat(n - 1).mul(c.diff(n), ring)
            })
            .collect();
        degrees.push(DegreeAudit { degree: n, division_exact: exact, commutes, lifts });
    }
    let mut pairwise = Vec::new();
    for i in 0..fam.codim() {
        for j in i + 1..fam.codim() {
            let a = fam.ops[i].compose(&fam.ops[j])?;
            let b = fam.ops[j].compose(&fam.ops[i])?;
            let found = match solve_homotopy(&a, &b)? {
                Some(h) => h.is_homotopy_between(&a, &b),
                None => false,
            };
            pairwise.push((i, j, found));
        }
    }
    Ok(AuditReport { degrees, pairwise_homotopy: pairwise })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::Window;
    use crate::resolve::{complete_resolution, ModulePresentation};

    fn bundle_complex(ring: &str, p: u32, n: usize, gens: &[&str], window: Window) -> Arc<FreeComplex> {
        let _ = ring;
        let r = Arc::new(QuotientRing::from_strings(p, n, gens).unwrap());
        Arc::new(complete_resolution(&ModulePresentation::residue_field(r), window).unwrap().complex)
    }

    #[test]
    fn hypersurface_operator_is_one() {
        let c = bundle_complex("F2[x]/(x^2)", 2, 1, &["x^2"], Window::new(-4, 4));
        let fam = eisenbud_operators(c.clone()).unwrap();
        let one = RMatrix::identity(1, 2);
        for n in fam.degrees() {
            assert_eq!(fam.op(0).mat(n), &one);
        }
        let report = audit_with_lifts(&fam).unwrap();
        assert!(report.passed());
        assert!(report.degrees.iter().all(|d| d.lifts == vec![vec![vec!["1".to_string()]]]));
        let a = LinearForm::new(FieldSpec::prime(2), vec![1]);
        let t = linear_form_operator(&fam, &a).unwrap();
        assert_eq!(t.mat(0), &one);
    }

    #[test]
    fn residue_field_operators_xy() {
        let c = bundle_complex("F2[x,y]/(x^2,y^2)", 2, 2, &["x^2", "y^2"], Window::new(-4, 4));
        let fam = eisenbud_operators(c.clone()).unwrap();
        assert_eq!(fam.codim(), 2);
        for t in fam.ops() {
            assert!(t.is_chain_map());
        }
        // mod m the operators are nonzero somewhere
        assert!(fam.degrees().any(|n| fam.reduced(n).iter().all(|m| !m.is_zero())));
        let report = audit(&fam).unwrap();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn zero_complex_family_is_empty() {
        let r = Arc::new(QuotientRing::from_strings(2, 2, &["x^2", "y^2"]).unwrap());
        let z = Arc::new(FreeComplex::zero(r, Window::new(-3, 3)));
        assert!(eisenbud_operators(z).unwrap().is_empty());
    }

    #[test]
    fn division_failure_on_corrupt_input() {
        let r = Arc::new(QuotientRing::from_strings(2, 2, &["x^2", "y^2"]).unwrap());
        let m = RMatrix::from_strings(&r, &[vec!["x"]]).unwrap();
        let n = RMatrix::from_strings(&r, &[vec!["y"]]).unwrap();
        let bad = Arc::new(FreeComplex::new_unchecked(r, 0, vec![1, 1, 1], vec![m, n]).unwrap());
        assert!(matches!(eisenbud_operators(bad), Err(Error::DivisionFailure { degree: 2 })));
    }

    #[test]
    fn form_combinations() {
        let c = bundle_complex("", 2, 2, &["x^2", "y^2"], Window::new(-4, 4));
        let fam = eisenbud_operators(c).unwrap();
        let f2 = FieldSpec::prime(2);
        let tx = linear_form_operator(&fam, &LinearForm::new(f2, vec![1, 0])).unwrap();
        for n in fam.degrees() {
            assert_eq!(tx.mat(n), fam.op(0).mat(n));
        }
        let sum = linear_form_operator(&fam, &LinearForm::new(f2, vec![1, 1])).unwrap();
        let expect = fam.op(0).add(fam.op(1)).unwrap();
        for n in fam.degrees() {
            assert_eq!(sum.mat(n), expect.mat(n));
        }
        assert!(matches!(linear_form_operator(&fam, &LinearForm::new(f2, vec![0, 0])), Err(Error::ZeroForm)));
    }

    #[test]
    fn form_enumeration_counts() {
        let forms = enumerate_forms(2, 2, 1);
        let coeffs: Vec<Vec<u32>> = forms.iter().map(|f| f.coeffs.clone()).collect();
        assert_eq!(coeffs, vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(enumerate_forms(3, 1, 1).len(), 1);
        assert_eq!(enumerate_forms(2, 2, 2).len(), 5);
        assert_eq!(enumerate_forms(3, 2, 1).len(), 4);
        assert_eq!(enumerate_forms(2, 3, 1).len(), 7);
    }
}
