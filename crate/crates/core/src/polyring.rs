//! Polynomials over `F_p`, Buchberger with cofactor tracking, and the
//! Artinian quotient `R = k[x_1..x_n]/(f_1..f_c)`.
//!
//! Elements of `R` are dense coefficient vectors over the staircase of
//! standard monomials. Index 0 is always the monomial `1`, so the image of an
//! element in the residue field is its first coordinate.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::ffield::{Field, KMatrix};

/// Exponent vector under degree reverse lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Self) -> Self {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| b - a).collect())
    }

    pub fn lcm(&self, other: &Self) -> Self {
        Monomial(self.0.iter().zip(&other.0).map(|(&a, &b)| a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a == 0 || b == 0)
    }

    /// Index of the variable if this is a pure power `x_i^a` with `a >= 1`.
    pub fn pure_power_var(&self) -> Option<usize> {
        let mut found = None;
        for (i, &a) in self.0.iter().enumerate() {
            if a > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }

    fn render(&self, names: &[String]) -> String {
        let mut parts = Vec::new();
        for (i, &a) in self.0.iter().enumerate() {
            match a {
                0 => {}
                1 => parts.push(names[i].clone()),
                _ => parts.push(format!("{}^{}", names[i], a)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        // the smaller exponent in the last differing variable wins
        for (a, b) in self.0.iter().zip(&other.0).rev() {
            if a != b {
                return b.cmp(a);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial; terms are kept sorted by grevlex, zero coefficients
/// never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, u32>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: u32) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn term(m: Monomial, c: u32) -> Self {
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(m, c);
        }
        Self { nvars, terms }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::term(Monomial::var(nvars, i), 1)
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, u32)>, f: &Field) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars);
            p.add_term(m, c, f);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &u32)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<(&Monomial, u32)> {
        self.terms.iter().next_back().map(|(m, &c)| (m, c))
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: u32, f: &Field) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self, f: &Field) -> Self {
        let mut out = self.clone();
        out.add_assign(other, f);
        out
    }

    pub fn add_assign(&mut self, other: &Self, f: &Field) {
        for (m, &c) in &other.terms {
            self.add_term(m.clone(), c, f);
        }
    }

    pub fn sub(&self, other: &Self, f: &Field) -> Self {
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), f.neg(c), f);
        }
        out
    }

    pub fn scale(&self, s: u32, f: &Field) -> Self {
        if s == 0 {
            return Self::zero(self.nvars);
        }
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(m, &c)| (m.clone(), f.mul(c, s))).collect() }
    }

    /// `self * c * m`.
    pub fn mul_term(&self, m: &Monomial, c: u32, f: &Field) -> Self {
        if c == 0 {
            return Self::zero(self.nvars);
        }
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(t, &a)| (t.mul(m), f.mul(a, c))).collect() }
    }

    /// `self += c * m * other`.
    pub fn add_mul_term(&mut self, other: &Self, m: &Monomial, c: u32, f: &Field) {
        if c == 0 {
            return;
        }
        for (t, &a) in &other.terms {
            self.add_term(t.mul(m), f.mul(a, c), f);
        }
    }

    pub fn mul(&self, other: &Self, f: &Field) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, &c) in &self.terms {
            out.add_mul_term(other, m, c, f);
        }
        out
    }

    /// Renders with the given variable names, highest term first.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (m, &c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                s.push_str(" + ");
            }
            let mono = m.render(names);
            if mono == "1" {
                let _ = write!(s, "{c}");
            } else if c == 1 {
                s.push_str(&mono);
            } else {
                let _ = write!(s, "{c}*{mono}");
            }
        }
        s
    }
}

/// Default variable names: `x, y, z` for up to three variables, else `x1..xn`.
pub fn default_var_names(n: usize) -> Vec<String> {
    if n <= 3 {
        ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(u64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' => {
                out.push(Token::Star);
                i += 1;
            }
            '^' => {
                out.push(Token::Caret);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let v = text.parse::<u64>().map_err(|_| Error::Parse(format!("number too large: {text}")))?;
                out.push(Token::Num(v));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(Error::Parse(format!("unexpected character {other:?} in {s:?}"))),
        }
    }
    Ok(out)
}

fn var_lookup(name: &str, n: usize) -> Option<usize> {
    if n <= 3 {
        if let Some(i) = ["x", "y", "z"].iter().position(|&v| v == name) {
            if i < n {
                return Some(i);
            }
        }
    }
    let idx = name.strip_prefix('x')?.parse::<usize>().ok()?;
    (1..=n).contains(&idx).then(|| idx - 1)
}

/// Parses text such as `"x1^2*x2 + 3*x2^3"` or `"x^2 - y*z"`.
///
/// Variables are `x1..xn`; for `n <= 3` the names `x, y, z` also work.
/// Integer coefficients are reduced modulo the characteristic.
pub fn parse_polynomial(s: &str, nvars: usize, f: &Field) -> Result<Polynomial> {
    let tokens = tokenize(s)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let p = f.p() as u64;
    let mut poly = Polynomial::zero(nvars);
    let mut pos = 0;
    let mut first = true;
    while pos < tokens.len() {
        let mut negative = false;
        match tokens[pos] {
            Token::Plus => {
                pos += 1;
            }
            Token::Minus => {
                negative = true;
                pos += 1;
            }
            _ if first => {}
            _ => return Err(Error::Parse(format!("expected + or - in {s:?}"))),
        }
        first = false;
        let mut coeff: u64 = 1;
        let mut exps = vec![0u32; nvars];
        let mut expect_factor = true;
        while pos < tokens.len() {
            if !expect_factor {
                if tokens[pos] == Token::Star {
                    pos += 1;
                    expect_factor = true;
                    continue;
                }
                break;
            }
            match &tokens[pos] {
                Token::Num(v) => {
                    coeff = coeff * (v % p) % p;
                    pos += 1;
                }
                Token::Ident(name) => {
                    let i = var_lookup(name, nvars)
                        .ok_or_else(|| Error::Parse(format!("unknown variable {name:?} for {nvars} variables")))?;
                    pos += 1;
                    let mut e = 1u32;
                    if pos < tokens.len() && tokens[pos] == Token::Caret {
                        pos += 1;
                        match tokens.get(pos) {
                            Some(Token::Num(v)) if *v <= u32::MAX as u64 => e = *v as u32,
                            _ => return Err(Error::Parse(format!("expected exponent in {s:?}"))),
                        }
                        pos += 1;
                    }
                    exps[i] += e;
                }
                _ => return Err(Error::Parse(format!("expected a factor in {s:?}"))),
            }
            expect_factor = false;
        }
        if expect_factor {
            return Err(Error::Parse(format!("dangling operator in {s:?}")));
        }
        let mut c = coeff as u32;
        if negative {
            c = f.neg(c);
        }
        poly.add_term(Monomial(exps), c, f);
    }
    Ok(poly)
}

/// An element of `R`: coordinates over the staircase basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingElement(pub Vec<u32>);

impl RingElement {
    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn is_unit(&self) -> bool {
        self.0.first().is_some_and(|&c| c != 0)
    }
}

struct DivisionResult {
    quotients: Vec<Polynomial>,
    remainder: Polynomial,
}

fn divide(p: &Polynomial, basis: &[Polynomial], f: &Field) -> DivisionResult {
    let n = p.nvars();
    let mut quotients = vec![Polynomial::zero(n); basis.len()];
    let mut remainder = Polynomial::zero(n);
    let mut rest = p.clone();
    while let Some((m, c)) = rest.leading().map(|(m, c)| (m.clone(), c)) {
        let hit = basis.iter().enumerate().find(|(_, g)| g.leading().is_some_and(|(lm, _)| lm.divides(&m)));
        match hit {
            Some((i, g)) => {
                let (lm, lc) = g.leading().unwrap();
                let q = lm.quotient_of(&m);
                let s = f.mul(c, f.inv(lc));
                quotients[i].add_term(q.clone(), s, f);
                rest.add_mul_term(g, &q, f.neg(s), f);
            }
            None => {
                rest.terms.remove(&m);
                remainder.add_term(m, c, f);
            }
        }
    }
    DivisionResult { quotients, remainder }
}

/// Gröbner element with its expression in terms of the original generators.
#[derive(Debug, Clone)]
struct Tracked {
    poly: Polynomial,
    cof: Vec<Polynomial>,
}

fn tracked_combination(items: &[Tracked], quotients: &[Polynomial], f: &Field, c: usize, n: usize) -> Vec<Polynomial> {
    let mut cof = vec![Polynomial::zero(n); c];
    for (q, t) in quotients.iter().zip(items) {
        if q.is_zero() {
            continue;
        }
        for j in 0..c {
            if !t.cof[j].is_zero() {
                cof[j].add_assign(&q.mul(&t.cof[j], f), f);
            }
        }
    }
    cof
}

/// Reduced Gröbner basis of `(gens)` under grevlex, with cofactors.
fn groebner_with_cofactors(gens: &[Polynomial], f: &Field) -> Vec<Tracked> {
    let n = gens[0].nvars();
    let c = gens.len();
    let mut basis: Vec<Tracked> = Vec::new();
    for (j, g) in gens.iter().enumerate() {
        let Some((_, lc)) = g.leading() else { continue };
        let inv = f.inv(lc);
        let mut cof = vec![Polynomial::zero(n); c];
        cof[j] = Polynomial::constant(n, inv);
        basis.push(Tracked { poly: g.scale(inv, f), cof });
    }
    let mut pairs: Vec<(usize, usize)> = (0..basis.len()).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    while let Some((i, j)) = pairs.pop() {
        let (li, lj) = (basis[i].poly.leading().unwrap().0.clone(), basis[j].poly.leading().unwrap().0.clone());
        if li.coprime(&lj) {
            continue;
        }
        let l = li.lcm(&lj);
        let (qi, qj) = (li.quotient_of(&l), lj.quotient_of(&l));
        let one = 1;
        let minus = f.neg(1);
        let mut s = basis[i].poly.mul_term(&qi, one, f);
        s.add_mul_term(&basis[j].poly, &qj, minus, f);
        let mut s_cof = vec![Polynomial::zero(n); c];
        for k in 0..c {
            s_cof[k].add_mul_term(&basis[i].cof[k], &qi, one, f);
            s_cof[k].add_mul_term(&basis[j].cof[k], &qj, minus, f);
        }
        let polys: Vec<Polynomial> = basis.iter().map(|t| t.poly.clone()).collect();
        let div = divide(&s, &polys, f);
        if div.remainder.is_zero() {
            continue;
        }
        let sub = tracked_combination(&basis, &div.quotients, f, c, n);
        let mut cof: Vec<Polynomial> = s_cof.iter().zip(&sub).map(|(a, b)| a.sub(b, f)).collect();
        let lc = div.remainder.leading().unwrap().1;
        let inv = f.inv(lc);
        for x in cof.iter_mut() {
            *x = x.scale(inv, f);
        }
        let new_idx = basis.len();
        basis.push(Tracked { poly: div.remainder.scale(inv, f), cof });
        for k in 0..new_idx {
            pairs.insert(0, (k, new_idx));
        }
    }
    // minimal basis: drop elements whose leading monomial is divisible by another's
    let mut keep: Vec<bool> = vec![true; basis.len()];
    for i in 0..basis.len() {
        let li = basis[i].poly.leading().unwrap().0;
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            let lj = basis[j].poly.leading().unwrap().0;
            if lj.divides(li) && (lj != li || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    let mut minimal: Vec<Tracked> = basis.into_iter().zip(keep).filter(|(_, k)| *k).map(|(t, _)| t).collect();
    // interreduce the tails
    for i in 0..minimal.len() {
        let others: Vec<Tracked> = minimal.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, t)| t.clone()).collect();
        let polys: Vec<Polynomial> = others.iter().map(|t| t.poly.clone()).collect();
        let div = divide(&minimal[i].poly, &polys, f);
        let sub = tracked_combination(&others, &div.quotients, f, c, n);
        let cof = minimal[i].cof.iter().zip(&sub).map(|(a, b)| a.sub(b, f)).collect();
        minimal[i] = Tracked { poly: div.remainder, cof };
    }
    minimal
}

/// `R = F_p[x_1..x_n]/(f_1..f_c)` with `f` a homogeneous regular sequence and
/// `R` Artinian.
#[derive(Debug, Clone)]
pub struct QuotientRing {
    field: Field,
    nvars: usize,
    var_names: Vec<String>,
    gens: Vec<Polynomial>,
    groebner: Vec<Polynomial>,
    cofactors: Vec<Vec<Polynomial>>,
    staircase: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    /// `mult[a][b]`: sparse normal form of `m_a * m_b`.
    mult: Vec<Vec<Vec<(usize, u32)>>>,
    /// `pair_lift[a][b][j]`: `h_j` with `m_a m_b = nf + sum_j h_j f_j` in `Q`.
    pair_lift: Vec<Vec<Vec<Polynomial>>>,
    /// `pair_cof[a][b]`: sparse `(j, index, coeff)` list of the normal forms of `pair_lift[a][b][j]`.
    pair_cof: Vec<Vec<Vec<(usize, usize, u32)>>>,
}

impl PartialEq for QuotientRing {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.nvars == other.nvars && self.gens == other.gens
    }
}

impl Eq for QuotientRing {}

impl QuotientRing {
    /// Builds the ring and certifies the complete-intersection property.
    pub fn new(field: Field, nvars: usize, gens: Vec<Polynomial>) -> Result<Self> {
        if field.spec().e != 1 {
            return Err(Error::InvalidField { p: field.p(), e: field.spec().e });
        }
        if gens.is_empty() {
            return Err(Error::NotArtinian("no generators".into()));
        }
        for g in &gens {
            if g.nvars() != nvars {
                return Err(Error::DimensionMismatch(format!("generator has {} variables, ring has {nvars}", g.nvars())));
            }
        }
        let names = default_var_names(nvars);
        for g in &gens {
            if g.is_zero() {
                return Err(Error::NotRegularSequence("zero generator".into()));
            }
            if !g.is_homogeneous() {
                return Err(Error::NonHomogeneous(g.render(&names)));
            }
            if g.degree() == Some(0) {
                return Err(Error::NotRegularSequence(format!("unit generator {}", g.render(&names))));
            }
        }
        let c = gens.len();
        if c > nvars {
            return Err(Error::NotRegularSequence(format!("{c} generators in {nvars} variables")));
        }
        if c < nvars {
            return Err(Error::NotArtinian(format!("{c} generators in {nvars} variables")));
        }
        let tracked = groebner_with_cofactors(&gens, &field);
        let groebner: Vec<Polynomial> = tracked.iter().map(|t| t.poly.clone()).collect();
        let cofactors: Vec<Vec<Polynomial>> = tracked.into_iter().map(|t| t.cof).collect();
        let leads: Vec<Monomial> = groebner.iter().map(|g| g.leading().unwrap().0.clone()).collect();
        let mut has_power = vec![false; nvars];
        for l in &leads {
            if let Some(i) = l.pure_power_var() {
                has_power[i] = true;
            }
        }
        if let Some(i) = has_power.iter().position(|h| !h) {
            return Err(Error::NotRegularSequence(format!(
                "no power of {} lies in the leading ideal, so the quotient is not Artinian",
                names[i]
            )));
        }
        let mut staircase = vec![Monomial::one(nvars)];
        let mut frontier = staircase.clone();
        let mut seen: std::collections::HashSet<Monomial> = staircase.iter().cloned().collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for m in &frontier {
                for i in 0..nvars {
                    let cand = m.mul(&Monomial::var(nvars, i));
                    if seen.contains(&cand) || leads.iter().any(|l| l.divides(&cand)) {
                        continue;
                    }
                    seen.insert(cand.clone());
                    next.push(cand);
                }
            }
            staircase.extend(next.iter().cloned());
            frontier = next;
        }
        staircase.sort();
        let expected: u64 = gens.iter().map(|g| g.degree().unwrap() as u64).product();
        if staircase.len() as u64 != expected {
            return Err(Error::NotRegularSequence(format!(
                "dim_k R = {} but the product of generator degrees is {expected}",
                staircase.len()
            )));
        }
        let index = staircase.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut ring = Self {
            field,
            nvars,
            var_names: names,
            gens,
            groebner,
            cofactors,
            staircase,
            index,
            mult: Vec::new(),
            pair_lift: Vec::new(),
            pair_cof: Vec::new(),
        };
        ring.build_tables();
        Ok(ring)
    }

    /// Parses generators with [`parse_polynomial`] and builds the ring.
    pub fn from_strings(p: u32, nvars: usize, gens: &[&str]) -> Result<Self> {
        let field = Field::prime(p)?;
        let polys = gens.iter().map(|g| parse_polynomial(g, nvars, &field)).collect::<Result<Vec<_>>>()?;
        Self::new(field, nvars, polys)
    }

    fn build_tables(&mut self) {
        let d = self.staircase.len();
        let c = self.gens.len();
        let f = self.field.clone();
        let mut mult = vec![vec![Vec::new(); d]; d];
        let mut pair_lift = vec![vec![Vec::new(); d]; d];
        let mut pair_cof = vec![vec![Vec::new(); d]; d];
        for a in 0..d {
            for b in 0..d {
                let prod = Polynomial::term(self.staircase[a].mul(&self.staircase[b]), 1);
                let div = divide(&prod, &self.groebner, &f);
                mult[a][b] = self.poly_to_sparse(&div.remainder);
                let h = self.combine_cofactors(&div.quotients);
                let mut cof = Vec::new();
                for (j, hj) in h.iter().enumerate() {
                    for (idx, v) in self.poly_to_sparse(&divide(hj, &self.groebner, &f).remainder) {
                        cof.push((j, idx, v));
                    }
                }
                pair_cof[a][b] = cof;
                pair_lift[a][b] = h;
            }
        }
        debug_assert!(pair_lift.iter().all(|r| r.iter().all(|h| h.len() == c)));
        self.mult = mult;
        self.pair_lift = pair_lift;
        self.pair_cof = pair_cof;
    }

    fn combine_cofactors(&self, quotients: &[Polynomial]) -> Vec<Polynomial> {
        let f = &self.field;
        let mut h = vec![Polynomial::zero(self.nvars); self.gens.len()];
        for (q, cof) in quotients.iter().zip(&self.cofactors) {
            if q.is_zero() {
                continue;
            }
            for (hj, u) in h.iter_mut().zip(cof) {
                if !u.is_zero() {
                    hj.add_assign(&q.mul(u, f), f);
                }
            }
        }
        h
    }

    fn poly_to_sparse(&self, p: &Polynomial) -> Vec<(usize, u32)> {
        p.terms().map(|(m, &c)| (self.index[m], c)).collect()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    /// Codimension `c`, the number of generators.
    pub fn codim(&self) -> usize {
        self.gens.len()
    }

    pub fn groebner(&self) -> &[Polynomial] {
        &self.groebner
    }

    /// Cofactors `u` of each Gröbner element: `g_i = sum_j u_ij f_j`.
    pub fn groebner_cofactors(&self) -> &[Vec<Polynomial>] {
        &self.cofactors
    }

    pub fn staircase(&self) -> &[Monomial] {
        &self.staircase
    }

    /// `dim_k R`.
    pub fn dim(&self) -> usize {
        self.staircase.len()
    }

    pub fn render(&self, p: &Polynomial) -> String {
        p.render(&self.var_names)
    }

    pub fn parse(&self, s: &str) -> Result<Polynomial> {
        parse_polynomial(s, self.nvars, &self.field)
    }

    /// Canonical text form of the ring, used for hashing and display.
    pub fn describe(&self) -> String {
        let gens: Vec<String> = self.gens.iter().map(|g| self.render(g)).collect();
        format!("F_{}[{}]/({})", self.p(), self.var_names.join(","), gens.join(", "))
    }

    pub fn normal_form(&self, g: &Polynomial) -> RingElement {
        let r = divide(g, &self.groebner, &self.field).remainder;
        let mut v = vec![0u32; self.dim()];
        for (idx, c) in self.poly_to_sparse(&r) {
            v[idx] = c;
        }
        RingElement(v)
    }

    /// Polynomial supported on the staircase representing `a`.
    pub fn lift(&self, a: &[u32]) -> Polynomial {
        let mut p = Polynomial::zero(self.nvars);
        for (i, &c) in a.iter().enumerate() {
            if c != 0 {
                p.add_term(self.staircase[i].clone(), c, &self.field);
            }
        }
        p
    }

    /// Some `h` with `g = sum_j h_j f_j` exactly in the polynomial ring.
    pub fn express_in_ideal(&self, g: &Polynomial) -> Result<Vec<Polynomial>> {
        let div = divide(g, &self.groebner, &self.field);
        if !div.remainder.is_zero() {
            return Err(Error::NotInIdeal(self.render(g)));
        }
        let h = self.combine_cofactors(&div.quotients);
        let back = self.recombine(&h);
        if &back != g {
            return Err(Error::InvariantBreach(format!("cofactor re-expansion of {} failed", self.render(g))));
        }
        Ok(h)
    }

    /// `sum_j h_j f_j`.
    pub fn recombine(&self, h: &[Polynomial]) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (hj, fj) in h.iter().zip(&self.gens) {
            out.add_assign(&hj.mul(fj, &self.field), &self.field);
        }
        out
    }

    pub fn zero(&self) -> Vec<u32> {
        vec![0; self.dim()]
    }

    pub fn one(&self) -> Vec<u32> {
        let mut v = self.zero();
        v[0] = 1;
        v
    }

    pub fn scalar(&self, c: u32) -> Vec<u32> {
        let mut v = self.zero();
        v[0] = c;
        v
    }

    /// `acc += a * b`.
    pub fn mul_acc(&self, acc: &mut [u32], a: &[u32], b: &[u32]) {
        let f = &self.field;
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let xy = f.mul(x, y);
                for &(k, c) in &self.mult[i][j] {
                    acc[k] = f.add(acc[k], f.mul(xy, c));
                }
            }
        }
    }

    pub fn mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let mut out = self.zero();
        self.mul_acc(&mut out, a, b);
        out
    }

    pub fn add(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().zip(b).map(|(&x, &y)| self.field.add(x, y)).collect()
    }

    pub fn neg(&self, a: &[u32]) -> Vec<u32> {
        a.iter().map(|&x| self.field.neg(x)).collect()
    }

    pub fn scale(&self, a: &[u32], s: u32) -> Vec<u32> {
        a.iter().map(|&x| self.field.mul(x, s)).collect()
    }

    pub fn is_unit(&self, a: &[u32]) -> bool {
        a[0] != 0
    }

    /// Inverse of a unit via the truncated geometric series.
    pub fn inv(&self, a: &[u32]) -> Option<Vec<u32>> {
        let f = &self.field;
        if a[0] == 0 {
            return None;
        }
        let c_inv = f.inv(a[0]);
        // a = a0 (1 - n) with n nilpotent; a^-1 = a0^-1 (1 + n + n^2 + ...)
        let mut n = self.scale(a, f.neg(c_inv));
        n[0] = 0;
        let mut out = self.one();
        let mut power = self.one();
        loop {
            power = self.mul(&power, &n);
            if power.iter().all(|&x| x == 0) {
                break;
            }
            out = self.add(&out, &power);
        }
        Some(self.scale(&out, c_inv))
    }

    /// Matrix of multiplication by `a` on the staircase basis.
    pub fn mult_matrix(&self, a: &[u32]) -> KMatrix {
        let d = self.dim();
        let mut m = KMatrix::zeros(d, d);
        for b in 0..d {
            let mut e = self.zero();
            e[b] = 1;
            let prod = self.mul(a, &e);
            for (i, &v) in prod.iter().enumerate() {
                m.set(i, b, v);
            }
        }
        m
    }

    /// Normal form of `x_i`.
    pub fn var_element(&self, i: usize) -> Vec<u32> {
        self.normal_form(&Polynomial::var(self.nvars, i)).0
    }

    /// Sparse normal form of `m_a * m_b`.
    pub fn mult_entry(&self, a: usize, b: usize) -> &[(usize, u32)] {
        &self.mult[a][b]
    }

    /// Sparse `(j, index, coeff)` normal forms of the cofactors of `m_a * m_b`.
    pub fn pair_cofactors(&self, a: usize, b: usize) -> &[(usize, usize, u32)] {
        &self.pair_cof[a][b]
    }

    /// Polynomial cofactors `h_j` with `m_a m_b = nf(m_a m_b) + sum_j h_j f_j`.
    pub fn pair_lift(&self, a: usize, b: usize) -> &[Polynomial] {
        &self.pair_lift[a][b]
    }

    /// Degree of each staircase monomial.
    pub fn staircase_degrees(&self) -> Vec<u32> {
        self.staircase.iter().map(Monomial::degree).collect()
    }

    /// Renders a ring element as a polynomial.
    pub fn render_element(&self, a: &[u32]) -> String {
        self.render(&self.lift(a))
    }

    /// Parses a polynomial and reduces it into `R`.
    pub fn parse_element(&self, s: &str) -> Result<Vec<u32>> {
        Ok(self.normal_form(&self.parse(s)?).0)
    }
}
