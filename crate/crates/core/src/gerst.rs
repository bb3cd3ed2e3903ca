//! The exterior algebra `Λ_A L`, its Gerstenhaber bracket, and generators.
//!
//! On basis multivectors the bracket is the signed double sum
//!
//! ```text
//! [α_1∧..∧α_p, α_{p+1}∧..∧α_{p+q}]
//!     = (-1)^p Σ_{j ≤ p < k} (-1)^{j+k} [α_j, α_k] ∧ α_1∧..α̂_j..α̂_k..∧α_{p+q}
//! ```
//!
//! and coefficients are moved out with
//! `[a e_S, b e_T] = ab [e_S, e_T] + a [e_S, b] ∧ e_T + b e_S ∧ [a, e_T]`,
//! where `[e_S, b] = Σ_i (-1)^{p-i} ρ(e_{s_i})(b) e_{S∖s_i}` and
//! `[a, e_T] = (-1)^{|T|} [e_T, a]`.
//!
//! A generator `Δ` of degree `-1` satisfies
//! `[u, v] = (-1)^{|u|} (Δ(uv) - (Δu)v - (-1)^{|u|} u(Δv))`.
//! Generators correspond to connections on the top exterior power
//! `Λ^n L ≅ A`, trivialised by `e_0∧..∧e_{n-1}`, through
//! `Δ = s(p) φ_{p-1}^{-1} d_∇ φ_p` with `φ_p(u)(x_1..x_{n-p}) = u∧x_1∧..∧x_{n-p}`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::basis::{all_subsets, sign_pow, sort_sign, subsets_of_size, wedge_sign, BasisSet};
use crate::calgebra::AElem;
use crate::error::{Error, Result};
use crate::exactla::Rat;
use crate::lrcore::{ce_differential, AltForm, FreeElem, LElem, LRModule, LieRinehart};
use crate::report::ValidationReport;

/// An element of `Λ_A L`: coefficient `a_S ∈ A` for each sorted subset `S`
/// of the basis of `L`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Multivector {
    rank: usize,
    dim: usize,
    terms: BTreeMap<BasisSet, AElem>,
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display())
    }
}

impl Multivector {
    pub fn zero(lr: &LieRinehart) -> Self {
        Self::zero_with(lr.rank(), lr.dim())
    }

    pub fn zero_with(rank: usize, dim: usize) -> Self {
        Self { rank, dim, terms: BTreeMap::new() }
    }

    /// `a e_S`.
    pub fn term(lr: &LieRinehart, s: BasisSet, a: AElem) -> Self {
        Self::term_with(lr.rank(), s, a)
    }

    pub fn term_with(rank: usize, s: BasisSet, a: AElem) -> Self {
        let mut out = Self::zero_with(rank, a.dim());
        out.add_term(s, &a);
        out
    }

    /// `e_S`.
    pub fn basis(lr: &LieRinehart, s: BasisSet) -> Self {
        Self::term(lr, s, lr.alg().one())
    }

    /// `a_α e_S`, the rational basis element indexed by `(α, S)`.
    pub fn basis_elem(lr: &LieRinehart, alpha: usize, s: BasisSet) -> Self {
        Self::term(lr, s, lr.alg().basis(alpha))
    }

    pub fn scalar(lr: &LieRinehart, a: AElem) -> Self {
        Self::term(lr, BasisSet::EMPTY, a)
    }

    pub fn from_lelem(lr: &LieRinehart, u: &LElem) -> Self {
        let mut out = Self::zero(lr);
        for (i, a) in u.0.iter().enumerate() {
            out.add_term(BasisSet::singleton(i), a);
        }
        out
    }

    /// The degree one component as an element of `L`.
    pub fn to_lelem(&self) -> LElem {
        let mut out = FreeElem::zero(self.rank, self.dim);
        for (s, a) in &self.terms {
            if s.len() == 1 {
                out.0[s.iter().next().expect("singleton")] = a.clone();
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<BasisSet, AElem> {
        &self.terms
    }

    pub fn coeff(&self, s: BasisSet) -> AElem {
        self.terms.get(&s).cloned().unwrap_or_else(|| AElem::zero(self.dim))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common degree of all terms, `None` for zero or mixed elements.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|s| s.len());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn homogeneous_part(&self, p: usize) -> Multivector {
        let terms = self.terms.iter().filter(|(s, _)| s.len() == p).map(|(s, a)| (*s, a.clone())).collect();
        Multivector { rank: self.rank, dim: self.dim, terms }
    }

    pub fn add_term(&mut self, s: BasisSet, a: &AElem) {
        if a.is_zero() {
            return;
        }
        let entry = self.terms.entry(s).or_insert_with(|| AElem::zero(a.dim()));
        *entry += a;
        if entry.is_zero() {
            self.terms.remove(&s);
        }
    }

    pub fn add_assign(&mut self, other: &Multivector) {
        for (s, a) in &other.terms {
            self.add_term(*s, a);
        }
    }

    pub fn sub_assign(&mut self, other: &Multivector) {
        for (s, a) in &other.terms {
            self.add_term(*s, &-a.clone());
        }
    }

    pub fn neg(&self) -> Multivector {
        self.scale_int(-1)
    }

    pub fn scale_int(&self, c: i32) -> Multivector {
        self.map_coeffs(|a| a.scale_int(c))
    }

    pub fn scale_rat(&self, c: &Rat) -> Multivector {
        self.map_coeffs(|a| a.scale(c))
    }

    fn map_coeffs(&self, f: impl Fn(&AElem) -> AElem) -> Multivector {
        let mut out = Multivector::zero_with(self.rank, self.dim);
        for (s, a) in &self.terms {
            out.add_term(*s, &f(a));
        }
        out
    }

    /// Coordinates `(α, S, c)`: the rational expansion in the basis
    /// `a_α e_S`.
    pub fn rational_terms(&self) -> impl Iterator<Item = (usize, BasisSet, &Rat)> + '_ {
        self.terms
            .iter()
            .flat_map(|(s, a)| a.0.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(al, c)| (al, *s, c)))
    }

    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = self.terms.iter().map(|(s, a)| format!("{}*e{}", a.display(), s)).collect();
        parts.join(" + ")
    }
}

/// Label of the rational basis element `a_α e_S` used in witnesses.
pub fn basis_label(alpha: usize, s: BasisSet) -> String {
    format!("a{alpha}e{s}")
}

fn check_parent(lr: &LieRinehart, u: &Multivector) -> Result<()> {
    if u.rank != lr.rank() || u.dim != lr.dim() {
        return Err(Error::ParentMismatch(format!(
            "multivector over rank {} / dim {} used with rank {} / dim {}",
            u.rank,
            u.dim,
            lr.rank(),
            lr.dim()
        )));
    }
    Ok(())
}

/// `u ∧ v`.
pub fn wedge(lr: &LieRinehart, u: &Multivector, v: &Multivector) -> Result<Multivector> {
    check_parent(lr, u)?;
    check_parent(lr, v)?;
    Ok(wedge_unchecked(lr, u, v))
}

pub(crate) fn wedge_unchecked(lr: &LieRinehart, u: &Multivector, v: &Multivector) -> Multivector {
    let alg = lr.alg();
    let mut out = Multivector::zero(lr);
    for (s, a) in &u.terms {
        for (t, b) in &v.terms {
            if let Some(sign) = wedge_sign(*s, *t) {
                out.add_term(s.union(*t), &alg.mul(a, b).scale_int(sign));
            }
        }
    }
    out
}

/// `[e_S, e_T]` by the signed double sum.
fn bracket_basis(lr: &LieRinehart, s: BasisSet, t: BasisSet) -> Multivector {
    let mut out = Multivector::zero(lr);
    if s.is_empty() || t.is_empty() {
        return out;
    }
    let p = s.len();
    let seq: Vec<usize> = s.iter().chain(t.iter()).collect();
    for j in 0..p {
        for k in p..seq.len() {
            let rest: Vec<usize> =
                seq.iter().enumerate().filter(|(pos, _)| *pos != j && *pos != k).map(|(_, &x)| x).collect();
            let sign = sign_pow(p + j + k);
            for (l, c) in lr.basis_bracket(seq[j], seq[k]).0.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut list = Vec::with_capacity(rest.len() + 1);
                list.push(l);
                list.extend_from_slice(&rest);
                if let Some((sg, set)) = sort_sign(&list) {
                    out.add_term(set, &c.scale_int(sign * sg));
                }
            }
        }
    }
    out
}

/// `[e_S, b] = Σ_i (-1)^{p-i} ρ(e_{s_i})(b) e_{S∖s_i}`.
fn bracket_basis_scalar(lr: &LieRinehart, s: BasisSet, b: &AElem) -> Multivector {
    let mut out = Multivector::zero(lr);
    let p = s.len();
    for (i, si) in s.iter().enumerate() {
        let image = lr.anchor_basis(si, b);
        out.add_term(s.remove(si), &image.scale_int(sign_pow(p - (i + 1))));
    }
    out
}

/// The Gerstenhaber bracket on `Λ_A L`.
pub fn schouten_bracket(lr: &LieRinehart, u: &Multivector, v: &Multivector) -> Result<Multivector> {
    check_parent(lr, u)?;
    check_parent(lr, v)?;
    Ok(schouten_unchecked(lr, u, v))
}

pub(crate) fn schouten_unchecked(lr: &LieRinehart, u: &Multivector, v: &Multivector) -> Multivector {
    let alg = lr.alg();
    let mut out = Multivector::zero(lr);
    for (s, a) in &u.terms {
        for (t, b) in &v.terms {
            let ab = alg.mul(a, b);
            if !ab.is_zero() {
                for (r, c) in &bracket_basis(lr, *s, *t).terms {
                    out.add_term(*r, &alg.mul(&ab, c));
                }
            }
            // a [e_S, b] ∧ e_T
            let left = bracket_basis_scalar(lr, *s, b);
            if !left.is_zero() {
                let e_t = Multivector::term(lr, *t, a.clone());
                out.add_assign(&wedge_unchecked(lr, &left, &e_t));
            }
            // b e_S ∧ [a, e_T]
            let right = bracket_basis_scalar(lr, *t, a).scale_int(sign_pow(t.len()));
            if !right.is_zero() {
                let e_s = Multivector::term(lr, *s, b.clone());
                out.add_assign(&wedge_unchecked(lr, &e_s, &right));
            }
        }
    }
    out
}

/// Rational basis elements `a_α e_S` with `|S| ≤ max_degree`.
pub fn basis_multivectors(lr: &LieRinehart, max_degree: usize) -> Vec<(String, usize, Multivector)> {
    let mut out = Vec::new();
    for s in all_subsets(lr.rank()) {
        if s.len() > max_degree {
            continue;
        }
        for alpha in 0..lr.dim() {
            out.push((basis_label(alpha, s), s.len(), Multivector::basis_elem(lr, alpha, s)));
        }
    }
    out
}

/// Checks graded antisymmetry, graded Jacobi and the odd Leibniz rule on all
/// triples of rational basis multivectors of degree at most `max_degree`:
///
/// ```text
/// [u,v] = -(-1)^{(|u|-1)(|v|-1)} [v,u]
/// [u,[v,w]] = [[u,v],w] + (-1)^{(|u|-1)(|v|-1)} [v,[u,w]]
/// [u,v∧w] = [u,v]∧w + (-1)^{(|u|-1)|v|} v∧[u,w]
/// ```
pub fn gerstenhaber_validate(lr: &LieRinehart, max_degree: usize) -> ValidationReport {
    let mut report = ValidationReport::new();
    let elems = basis_multivectors(lr, max_degree);
    let br = |x: &Multivector, y: &Multivector| schouten_unchecked(lr, x, y);
    let mut table: BTreeMap<(usize, usize), Multivector> = BTreeMap::new();
    for (i, (_, _, u)) in elems.iter().enumerate() {
        for (j, (_, _, v)) in elems.iter().enumerate() {
            table.insert((i, j), br(u, v));
        }
    }
    for (i, (lu, du, _)) in elems.iter().enumerate() {
        for (j, (lv, dv, _)) in elems.iter().enumerate() {
            let sign = sign_pow((du + 1) * (dv + 1));
            let mut lhs = table[&(i, j)].clone();
            lhs.add_assign(&table[&(j, i)].scale_int(sign));
            if !lhs.is_zero() {
                report.push_first("antisymmetry", format!("({lu},{lv})"), format!("residual {}", lhs.display()));
            }
        }
    }
    for (i, (lu, du, u)) in elems.iter().enumerate() {
        for (j, (lv, dv, v)) in elems.iter().enumerate() {
            let uv = &table[&(i, j)];
            for (k, (lw, _, w)) in elems.iter().enumerate() {
                let sign = sign_pow((du + 1) * (dv + 1));
                let mut jac = br(u, &table[&(j, k)]);
                jac.sub_assign(&br(uv, w));
                jac.sub_assign(&br(v, &table[&(i, k)]).scale_int(sign));
                if !jac.is_zero() {
                    report.push_first("jacobi", format!("({lu},{lv},{lw})"), format!("residual {}", jac.display()));
                }
                let vw = wedge_unchecked(lr, v, w);
                let mut leib = br(u, &vw);
                leib.sub_assign(&wedge_unchecked(lr, uv, w));
                leib.sub_assign(&wedge_unchecked(lr, v, &table[&(i, k)]).scale_int(sign_pow((du + 1) * dv)));
                if !leib.is_zero() {
                    report.push_first("leibniz", format!("({lu},{lv},{lw})"), format!("residual {}", leib.display()));
                }
            }
        }
    }
    report
}

/// `φ_p(u)`: the form of degree `n - p` with values in `Λ^n L ≅ A` given by
/// `(x_1..x_{n-p}) ↦ u ∧ x_1 ∧ .. ∧ x_{n-p}`. Requires `u` homogeneous of
/// degree `p` (zero is accepted for any `p`).
pub fn contraction_iso(lr: &LieRinehart, u: &Multivector, p: usize) -> Result<AltForm> {
    check_parent(lr, u)?;
    let n = lr.rank();
    if p > n || u.terms.keys().any(|s| s.len() != p) {
        return Err(Error::DimensionMismatch {
            what: "multivector degree",
            expected: p,
            found: u.degree().unwrap_or(0),
        });
    }
    let mut out = AltForm::zero(n - p, 1);
    for (s, a) in &u.terms {
        let c = s.complement(n);
        let sign = wedge_sign(*s, c).expect("disjoint");
        out.set(c, FreeElem(vec![a.scale_int(sign)]));
    }
    Ok(out)
}

/// Inverse of [`contraction_iso`] on forms of degree `q` with `A` values.
pub fn contraction_inverse(lr: &LieRinehart, w: &AltForm) -> Result<Multivector> {
    if w.module_rank() != 1 {
        return Err(Error::DimensionMismatch { what: "form coefficients", expected: 1, found: w.module_rank() });
    }
    let n = lr.rank();
    let mut out = Multivector::zero(lr);
    for (t, v) in w.values() {
        let c = t.complement(n);
        out.add_term(c, &v.0[0].scale_int(wedge_sign(c, *t).expect("disjoint")));
    }
    Ok(out)
}

/// An `(A, L)`-connection on `Λ^n L`, trivialised by the top basis
/// multivector: `∇_x(a·top) = x(a)·top + a·ω(x)·top`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TopConnection {
    omega: Vec<AElem>,
}

impl TopConnection {
    pub fn new(lr: &LieRinehart, omega: Vec<AElem>) -> Result<Self> {
        if omega.len() != lr.rank() {
            return Err(Error::DimensionMismatch { what: "connection form", expected: lr.rank(), found: omega.len() });
        }
        if let Some(bad) = omega.iter().find(|a| a.dim() != lr.dim()) {
            return Err(Error::DimensionMismatch { what: "connection value", expected: lr.dim(), found: bad.dim() });
        }
        Ok(Self { omega })
    }

    pub fn zero(lr: &LieRinehart) -> Self {
        Self { omega: vec![lr.alg().zero(); lr.rank()] }
    }

    /// `ω(e_i)`.
    pub fn omega(&self) -> &[AElem] {
        &self.omega
    }

    /// `ω` as a degree one form with `A` values.
    pub fn as_form(&self) -> AltForm {
        let mut w = AltForm::zero(1, 1);
        for (i, a) in self.omega.iter().enumerate() {
            w.set(BasisSet::singleton(i), FreeElem(vec![a.clone()]));
        }
        w
    }

    pub fn line_module(&self, lr: &LieRinehart) -> LRModule {
        LRModule::line(lr, &self.omega).expect("shape checked at construction")
    }
}

/// `F(x, y) = x(ω(y)) - y(ω(x)) - ω([x, y])` on basis pairs.
pub fn connection_curvature(lr: &LieRinehart, c: &TopConnection) -> AltForm {
    let alg = lr.alg();
    let n = lr.rank();
    let mut out = AltForm::zero(2, 1);
    for i in 0..n {
        for j in i + 1..n {
            let mut f = lr.anchor_basis(i, &c.omega[j]);
            f -= &lr.anchor_basis(j, &c.omega[i]);
            for (k, coeff) in lr.basis_bracket(i, j).0.iter().enumerate() {
                f -= &alg.mul(coeff, &c.omega[k]);
            }
            out.set(BasisSet::from_indices(&[i, j]).expect("distinct"), FreeElem(vec![f]));
        }
    }
    out
}

/// An operator on `Λ_A L` tabulated on the rational basis `a_α e_S` and
/// extended `ℚ`-linearly.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeneratorOp {
    rank: usize,
    dim: usize,
    table: BTreeMap<(usize, BasisSet), Multivector>,
}

impl GeneratorOp {
    /// Tabulates `f` on every `a_α e_S`.
    pub fn from_fn(lr: &LieRinehart, mut f: impl FnMut(&Multivector) -> Multivector) -> Self {
        let mut table = BTreeMap::new();
        for s in all_subsets(lr.rank()) {
            for alpha in 0..lr.dim() {
                let image = f(&Multivector::basis_elem(lr, alpha, s));
                if !image.is_zero() {
                    table.insert((alpha, s), image);
                }
            }
        }
        Self { rank: lr.rank(), dim: lr.dim(), table }
    }

    /// Builds an operator from explicit images; missing entries are zero.
    pub fn from_table(lr: &LieRinehart, entries: BTreeMap<(usize, BasisSet), Multivector>) -> Result<Self> {
        for ((alpha, s), image) in &entries {
            if *alpha >= lr.dim() || s.iter().any(|i| i >= lr.rank()) {
                return Err(Error::DimensionMismatch { what: "generator input", expected: lr.dim(), found: *alpha });
            }
            check_parent(lr, image)?;
        }
        let table = entries.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(Self { rank: lr.rank(), dim: lr.dim(), table })
    }

    pub fn zero(lr: &LieRinehart) -> Self {
        Self { rank: lr.rank(), dim: lr.dim(), table: BTreeMap::new() }
    }

    pub fn table(&self) -> &BTreeMap<(usize, BasisSet), Multivector> {
        &self.table
    }

    /// `Δ(a_α e_S)`.
    pub fn image(&self, alpha: usize, s: BasisSet) -> Multivector {
        self.table.get(&(alpha, s)).cloned().unwrap_or_else(|| Multivector::zero_with(self.rank, self.dim))
    }

    pub fn apply(&self, u: &Multivector) -> Multivector {
        let mut out = Multivector::zero_with(self.rank, self.dim);
        for (alpha, s, c) in u.rational_terms() {
            if let Some(image) = self.table.get(&(alpha, s)) {
                out.add_assign(&image.scale_rat(c));
            }
        }
        out
    }

    pub fn add(&self, other: &GeneratorOp) -> GeneratorOp {
        let mut table = self.table.clone();
        for (k, v) in &other.table {
            let entry = table.entry(*k).or_insert_with(|| Multivector::zero_with(self.rank, self.dim));
            entry.add_assign(v);
        }
        table.retain(|_, v| !v.is_zero());
        GeneratorOp { rank: self.rank, dim: self.dim, table }
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }
}

/// The sign `s(p) = (-1)^p` in `Δ = s(p) φ_{p-1}^{-1} d_∇ φ_p` on
/// multivectors of degree `p`. With the differential of [`ce_differential`]
/// this is the only choice, independent of the rank, making the result a
/// generator of [`schouten_bracket`]; the search test below confirms it.
pub fn generator_sign(p: usize) -> i32 {
    sign_pow(p)
}

pub(crate) fn conjugated_differential(lr: &LieRinehart, c: &TopConnection, sign: impl Fn(usize) -> i32) -> GeneratorOp {
    let line = c.line_module(lr);
    GeneratorOp::from_fn(lr, |u| {
        let p = u.degree().unwrap_or(0);
        if p == 0 {
            return Multivector::zero(lr);
        }
        let w = contraction_iso(lr, u, p).expect("basis element is homogeneous");
        let dw = ce_differential(lr, &line, &w).expect("line module");
        contraction_inverse(lr, &dw).expect("rank one values").scale_int(sign(p))
    })
}

/// The generator attached to a connection on `Λ^n L`.
pub fn generator_from_connection(lr: &LieRinehart, c: &TopConnection) -> Result<GeneratorOp> {
    TopConnection::new(lr, c.omega.clone())?;
    Ok(conjugated_differential(lr, c, generator_sign))
}

/// Checks the generator identity on all pairs of rational basis
/// multivectors.
pub fn generator_validate(lr: &LieRinehart, g: &GeneratorOp) -> ValidationReport {
    let mut report = ValidationReport::new();
    if g.rank != lr.rank() || g.dim != lr.dim() {
        report.push("shape", "()", "operator tabulated over a different Lie-Rinehart algebra");
        return report;
    }
    for (image_key, image) in &g.table {
        if image.terms.keys().any(|t| t.len() + 1 != image_key.1.len()) {
            report.push_first("bidegree", basis_label(image_key.0, image_key.1), "image not of degree one less");
        }
    }
    let elems = basis_multivectors(lr, lr.rank());
    let images: Vec<Multivector> = elems.iter().map(|(_, _, u)| g.apply(u)).collect();
    for (i, (lu, du, u)) in elems.iter().enumerate() {
        for (j, (lv, _, v)) in elems.iter().enumerate() {
            let residual = generator_residual(lr, g, u, *du, &images[i], v, &images[j]);
            if !residual.is_zero() {
                report.push_first("generator", format!("({lu},{lv})"), format!("residual {}", residual.display()));
            }
        }
    }
    report
}

/// `[u,v] - (-1)^{|u|}(Δ(uv) - (Δu)v - (-1)^{|u|} u(Δv))`.
fn generator_residual(
    lr: &LieRinehart,
    g: &GeneratorOp,
    u: &Multivector,
    du: usize,
    gu: &Multivector,
    v: &Multivector,
    gv: &Multivector,
) -> Multivector {
    let mut rhs = g.apply(&wedge_unchecked(lr, u, v));
    rhs.sub_assign(&wedge_unchecked(lr, gu, v));
    rhs.sub_assign(&wedge_unchecked(lr, u, gv).scale_int(sign_pow(du)));
    let mut residual = schouten_unchecked(lr, u, v);
    residual.sub_assign(&rhs.scale_int(sign_pow(du)));
    residual
}

/// Empty iff `Δ∘Δ` vanishes on every rational basis multivector; the
/// witness is the first basis input with nonzero square.
pub fn generator_square(lr: &LieRinehart, g: &GeneratorOp) -> ValidationReport {
    let mut report = ValidationReport::new();
    for (label, _, u) in basis_multivectors(lr, lr.rank()) {
        let sq = g.apply(&g.apply(&u));
        if !sq.is_zero() {
            report.push_first("exactness", label, format!("ΔΔ = {}", sq.display()));
        }
    }
    report
}

/// Recovers the connection from a generator via its value on the top
/// multivector. Fails if `g` does not generate the bracket.
pub fn generator_to_connection(lr: &LieRinehart, g: &GeneratorOp) -> Result<TopConnection> {
    let report = generator_validate(lr, g);
    if let Some(v) = report.violations.first() {
        return Err(Error::NotGenerator(v.to_string()));
    }
    let n = lr.rank();
    let full = BasisSet::full(n);
    let top = g.apply(&Multivector::basis(lr, full));
    let s_n = generator_sign(n);
    let omega = (0..n)
        .map(|i| {
            let single = BasisSet::singleton(i);
            let rest = single.complement(n);
            top.coeff(rest).scale_int(s_n * wedge_sign(rest, single).expect("disjoint"))
        })
        .collect();
    TopConnection::new(lr, omega)
}

/// Checks `∂[x,y] = [∂x,y] - (-1)^{|x|}[x,∂y]` on all pairs of rational
/// basis multivectors.
pub fn derivation_property_check(lr: &LieRinehart, g: &GeneratorOp) -> ValidationReport {
    let mut report = ValidationReport::new();
    let elems = basis_multivectors(lr, lr.rank());
    let images: Vec<Multivector> = elems.iter().map(|(_, _, u)| g.apply(u)).collect();
    for (i, (lu, du, u)) in elems.iter().enumerate() {
        for (j, (lv, _, v)) in elems.iter().enumerate() {
            let mut residual = g.apply(&schouten_unchecked(lr, u, v));
            residual.sub_assign(&schouten_unchecked(lr, &images[i], v));
            residual.add_assign(&schouten_unchecked(lr, u, &images[j]).scale_int(sign_pow(*du)));
            if !residual.is_zero() {
                report.push_first("derivation", format!("({lu},{lv})"), format!("residual {}", residual.display()));
            }
        }
    }
    report
}

/// All `p`-subsets as basis multivectors `e_S`.
pub fn basis_of_degree(lr: &LieRinehart, p: usize) -> Vec<Multivector> {
    subsets_of_size(lr.rank(), p).into_iter().map(|s| Multivector::basis(lr, s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;
    use crate::lrcore::lr_validate;
    use proptest::prelude::*;

    fn e(lr: &LieRinehart, idx: &[usize]) -> Multivector {
        let (sign, set) = sort_sign(idx).expect("distinct");
        Multivector::basis(lr, set).scale_int(sign)
    }

    /// Wedge of a list of general elements of `L`.
    fn wedge_list(lr: &LieRinehart, xs: &[LElem]) -> Multivector {
        let mut out = Multivector::scalar(lr, lr.alg().one());
        for x in xs {
            out = wedge_unchecked(lr, &out, &Multivector::from_lelem(lr, x));
        }
        out
    }

    /// The double sum evaluated on general elements `α_i ∈ L`, independent of
    /// the coefficient rules used by `schouten_bracket`.
    fn double_sum(lr: &LieRinehart, us: &[LElem], vs: &[LElem]) -> Multivector {
        let p = us.len();
        let all: Vec<LElem> = us.iter().chain(vs).cloned().collect();
        let mut out = Multivector::zero(lr);
        if us.is_empty() || vs.is_empty() {
            return out;
        }
        for j in 0..p {
            for k in p..all.len() {
                let mut factors = vec![lr.bracket(&all[j], &all[k])];
                factors.extend(all.iter().enumerate().filter(|(i, _)| *i != j && *i != k).map(|(_, x)| x.clone()));
                out.add_assign(&wedge_list(lr, &factors).scale_int(sign_pow(p + j + k)));
            }
        }
        out
    }

    #[test]
    fn wedge_examples() {
        let lr = instances::abelian(2);
        assert!(wedge(&lr, &e(&lr, &[0]), &e(&lr, &[0])).unwrap().is_zero());
        assert_eq!(wedge(&lr, &e(&lr, &[1]), &e(&lr, &[0])).unwrap(), e(&lr, &[0, 1]).neg());
        let der = instances::abelian_over_dual_numbers();
        let x = der.alg().basis(1);
        let ax = Multivector::term(&der, BasisSet::singleton(0), x.clone());
        assert_eq!(wedge(&der, &ax, &e(&der, &[1])).unwrap(), Multivector::term(&der, BasisSet::full(2), x));
    }

    #[test]
    fn bracket_examples() {
        let sl2 = instances::sl2();
        // [H∧E, F] = 2 E∧F
        let lhs = schouten_bracket(&sl2, &e(&sl2, &[0, 1]), &e(&sl2, &[2])).unwrap();
        assert_eq!(lhs, e(&sl2, &[1, 2]).scale_int(2));
        // [x, a] = x(a)
        let der = instances::euler_truncated(3);
        let x = der.alg().basis(1);
        let br = schouten_bracket(&der, &e(&der, &[0]), &Multivector::scalar(&der, x.clone())).unwrap();
        assert_eq!(br, Multivector::scalar(&der, x));
        // [α₁∧α₂, α₃] = [α₁,α₃]∧α₂ - [α₂,α₃]∧α₁ on the Heisenberg algebra plus sl₂
        for lr in [instances::sl2(), instances::heisenberg()] {
            let a: Vec<LElem> = (0..3).map(|i| lr.basis_elem(i)).collect();
            let lhs = schouten_bracket(&lr, &wedge_list(&lr, &a[..2]), &wedge_list(&lr, &a[2..])).unwrap();
            let mut rhs = wedge_list(&lr, &[lr.bracket(&a[0], &a[2]), a[1].clone()]);
            rhs.sub_assign(&wedge_list(&lr, &[lr.bracket(&a[1], &a[2]), a[0].clone()]));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn parent_mismatch_rejected() {
        let a = instances::abelian(2);
        let b = instances::abelian(3);
        assert!(wedge(&a, &e(&a, &[0]), &e(&b, &[0])).is_err());
        assert!(matches!(schouten_bracket(&a, &e(&b, &[0]), &e(&a, &[0])), Err(Error::ParentMismatch(_))));
    }

    #[test]
    fn closed_form_matches_double_sum_on_coefficients() {
        for lr in [instances::euler_truncated(3), instances::abelian_over_dual_numbers(), instances::sl2()] {
            let d = lr.dim();
            let n = lr.rank();
            for s in all_subsets(n) {
                for t in all_subsets(n) {
                    for alpha in 0..d {
                        for beta in 0..d {
                            let (a, b) = (lr.alg().basis(alpha), lr.alg().basis(beta));
                            let mut us: Vec<LElem> = s.iter().map(|i| lr.basis_elem(i)).collect();
                            let mut vs: Vec<LElem> = t.iter().map(|i| lr.basis_elem(i)).collect();
                            if us.is_empty() || vs.is_empty() {
                                continue;
                            }
                            us[0] = lr.elem(s.iter().next().unwrap(), a.clone());
                            vs[0] = lr.elem(t.iter().next().unwrap(), b.clone());
                            let u = Multivector::term(&lr, s, a);
                            let v = Multivector::term(&lr, t, b);
                            assert_eq!(schouten_unchecked(&lr, &u, &v), double_sum(&lr, &us, &vs), "{s} {t}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn degree_one_is_lie_rinehart_bracket() {
        for lr in [instances::sl2(), instances::euler_truncated(3), instances::abelian_over_dual_numbers()] {
            for al in 0..lr.dim() {
                for be in 0..lr.dim() {
                    for i in 0..lr.rank() {
                        for j in 0..lr.rank() {
                            let x = lr.elem(i, lr.alg().basis(al));
                            let y = lr.elem(j, lr.alg().basis(be));
                            let br = schouten_unchecked(
                                &lr,
                                &Multivector::from_lelem(&lr, &x),
                                &Multivector::from_lelem(&lr, &y),
                            );
                            assert_eq!(br, Multivector::from_lelem(&lr, &lr.bracket(&x, &y)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn gerstenhaber_identities_hold() {
        assert!(gerstenhaber_validate(&instances::abelian(3), 3).is_valid());
        assert!(gerstenhaber_validate(&instances::sl2(), 3).is_valid());
        assert!(gerstenhaber_validate(&instances::euler_truncated(3), 3).is_valid());
        assert!(gerstenhaber_validate(&instances::abelian_over_dual_numbers(), 2).is_valid());
    }

    #[test]
    fn corrupted_bracket_gives_jacobi_witness() {
        // [E,F] = H + E breaks Jacobi on (H,E,F)
        let bad = instances::lie_algebra(3, &[(0, 1, 1, 2), (0, 2, 2, -2), (1, 2, 0, 1), (1, 2, 1, 1)]);
        assert!(lr_validate(&bad).has("jacobi"));
        let report = gerstenhaber_validate(&bad, 3);
        assert!(report.has("jacobi"));
        assert!(!report.has("antisymmetry"));
    }

    #[test]
    fn contraction_examples() {
        let lr = instances::abelian(2);
        let top = Multivector::basis(&lr, BasisSet::full(2));
        let w = contraction_iso(&lr, &top, 2).unwrap();
        assert_eq!(w.value(BasisSet::EMPTY, 1), FreeElem(vec![AElem::from_ints(&[1])]));
        let w = contraction_iso(&lr, &e(&lr, &[0]), 1).unwrap();
        assert_eq!(w.value(BasisSet::singleton(1), 1), FreeElem(vec![AElem::from_ints(&[1])]));
        assert!(w.values().get(&BasisSet::singleton(0)).is_none());
        let a = Multivector::scalar(&lr, AElem::from_ints(&[3]));
        let w = contraction_iso(&lr, &a, 0).unwrap();
        assert_eq!(w.value(BasisSet::full(2), 1), FreeElem(vec![AElem::from_ints(&[3])]));
        for s in all_subsets(3) {
            let lr = instances::sl2();
            let u = Multivector::basis(&lr, s);
            assert_eq!(contraction_inverse(&lr, &contraction_iso(&lr, &u, s.len()).unwrap()).unwrap(), u);
        }
    }

    /// Every `(n, p)` sign assignment that turns the conjugated differential
    /// into a generator, found by exhaustive search.
    fn admissible_signs(lr: &LieRinehart, c: &TopConnection) -> Vec<Vec<i32>> {
        let n = lr.rank();
        let mut found = Vec::new();
        for mask in 0..(1u32 << n) {
            let signs: Vec<i32> = (1..=n).map(|p| if mask & (1 << (p - 1)) != 0 { -1 } else { 1 }).collect();
            let g = conjugated_differential(lr, c, |p| signs[p - 1]);
            if generator_validate(lr, &g).is_valid() {
                found.push(signs);
            }
        }
        found
    }

    fn sample_connections(lr: &LieRinehart) -> Vec<TopConnection> {
        let n = lr.rank();
        let alg = lr.alg();
        let mut out = vec![TopConnection::zero(lr)];
        let mut omega: Vec<AElem> = (0..n).map(|i| alg.basis((i + 1) % alg.dim()).scale_int(i as i32 + 1)).collect();
        out.push(TopConnection::new(lr, omega.clone()).unwrap());
        omega[0] = alg.one().scale_int(-2);
        out.push(TopConnection::new(lr, omega).unwrap());
        out
    }

    #[test]
    fn sign_family_found_by_search() {
        let instances = [
            instances::abelian(1),
            instances::abelian(2),
            instances::book(),
            instances::sl2(),
            instances::heisenberg(),
            instances::euler_truncated(2),
            instances::euler_truncated(3),
            instances::abelian_over_dual_numbers(),
        ];
        for lr in &instances {
            let n = lr.rank();
            let expected: Vec<i32> = (1..=n).map(generator_sign).collect();
            for c in sample_connections(lr) {
                let found = admissible_signs(lr, &c);
                assert!(found.contains(&expected), "rank {n}");
                // degrees on which the unsigned operator vanishes leave s(p) free
                let unsigned = conjugated_differential(lr, &c, |_| 1);
                let live: Vec<usize> =
                    (1..=n).filter(|&p| unsigned.table().keys().any(|(_, s)| s.len() == p)).collect();
                // with vanishing bracket and anchor, -Δ generates as well
                let trivial = lr.anchors().iter().all(|a| a.is_zero())
                    && lr.bracket_table().iter().flatten().all(|b| b.is_zero());
                for signs in &found {
                    let flip = if trivial && live.iter().all(|&p| signs[p - 1] == -expected[p - 1]) { -1 } else { 1 };
                    for &p in &live {
                        assert_eq!(signs[p - 1], flip * expected[p - 1], "rank {n}, degree {p}");
                    }
                }
            }
        }
    }

    #[test]
    fn generator_examples() {
        let ab = instances::abelian(3);
        assert!(generator_from_connection(&ab, &TopConnection::zero(&ab)).unwrap().is_zero());

        // Δ(x∧y) = -[x,y] and Δ(x) = 0 on sl₂ with ω = 0
        let sl2 = instances::sl2();
        let g = generator_from_connection(&sl2, &TopConnection::zero(&sl2)).unwrap();
        for i in 0..3 {
            assert!(g.apply(&e(&sl2, &[i])).is_zero());
            for j in 0..3 {
                if i == j {
                    continue;
                }
                let expected = Multivector::from_lelem(&sl2, sl2.basis_bracket(i, j)).neg();
                assert_eq!(g.apply(&e(&sl2, &[i, j])), expected);
            }
        }

        // rank one: Δ(a E) = -(E(a) + a c)
        let der = instances::euler_truncated(2);
        let alg = der.alg().clone();
        let c = AElem::from_ints(&[2, 5]);
        let conn = TopConnection::new(&der, vec![c.clone()]).unwrap();
        let g = generator_from_connection(&der, &conn).unwrap();
        for alpha in 0..2 {
            let a = alg.basis(alpha);
            let mut expected = der.anchor_basis(0, &a);
            expected += &alg.mul(&a, &c);
            let got = g.apply(&Multivector::term(&der, BasisSet::singleton(0), a));
            assert_eq!(got, Multivector::scalar(&der, -expected));
        }
    }

    #[test]
    fn generator_identity_and_round_trip() {
        let instances = [
            instances::abelian(2),
            instances::book(),
            instances::sl2(),
            instances::heisenberg(),
            instances::euler_truncated(3),
            instances::abelian_over_dual_numbers(),
        ];
        for lr in &instances {
            for c in sample_connections(lr) {
                let g = generator_from_connection(lr, &c).unwrap();
                assert!(
                    generator_validate(lr, &g).is_valid(),
                    "{:?} {:?}",
                    lr.rank(),
                    generator_validate(lr, &g).violations.first()
                );
                assert_eq!(generator_to_connection(lr, &g).unwrap(), c);
                let flat = connection_curvature(lr, &c).is_zero();
                assert_eq!(generator_square(lr, &g).is_valid(), flat);
                if flat {
                    assert!(derivation_property_check(lr, &g).is_valid());
                }
            }
        }
    }

    #[test]
    fn perturbed_generator_rejected() {
        let sl2 = instances::sl2();
        let g = generator_from_connection(&sl2, &TopConnection::zero(&sl2)).unwrap();
        // an A-linear map of degree -1 that is not a derivation: e_{01} ↦ e_0 only
        let mut bump = BTreeMap::new();
        bump.insert((0, BasisSet::from_indices(&[0, 1]).unwrap()), e(&sl2, &[0]));
        let bad = g.add(&GeneratorOp::from_table(&sl2, bump).unwrap());
        let report = generator_validate(&sl2, &bad);
        assert!(report.has("generator"));
        assert!(matches!(generator_to_connection(&sl2, &bad), Err(Error::NotGenerator(_))));
    }

    #[test]
    fn curvature_examples() {
        let ab = instances::abelian(2);
        assert!(connection_curvature(&ab, &TopConnection::zero(&ab)).is_zero());
        let der = instances::euler_truncated(3);
        let c = TopConnection::new(&der, vec![der.anchor_basis(0, &der.alg().basis(2))]).unwrap();
        assert!(connection_curvature(&der, &c).is_zero());
        // ρ(e_0) = x d/dx, ω(e_1) = x: F(e_0, e_1) = x
        let dn = instances::abelian_over_dual_numbers();
        let c = TopConnection::new(&dn, vec![dn.alg().zero(), dn.alg().basis(1)]).unwrap();
        let f = connection_curvature(&dn, &c);
        assert_eq!(f.value(BasisSet::full(2), 2), FreeElem(vec![dn.alg().basis(1)]));
        let g = generator_from_connection(&dn, &c).unwrap();
        assert_eq!(generator_square(&dn, &g).first("exactness").unwrap().witness, "a0e{0,1}");
        // the curvature is dω with trivial coefficients
        let dw = ce_differential(&dn, &LRModule::trivial(&dn), &c.as_form()).unwrap();
        assert_eq!(dw, f);
    }

    fn small_elem(lr: &LieRinehart) -> impl Strategy<Value = Multivector> {
        let n = lr.rank();
        let d = lr.dim();
        let lr = lr.clone();
        proptest::collection::vec(((0u32..(1 << n)), proptest::collection::vec(-3i64..=3, d)), 0..4).prop_map(
            move |ts| {
                let mut out = Multivector::zero(&lr);
                for (bits, cs) in ts {
                    out.add_term(BasisSet::from_bits(bits), &AElem::from_ints(&cs));
                }
                out
            },
        )
    }

    proptest! {
        #[test]
        fn bracket_is_bilinear_and_antisymmetric_on_homogeneous(
            u in small_elem(&instances::abelian_over_dual_numbers()),
            v in small_elem(&instances::abelian_over_dual_numbers()),
            p in 0usize..3, q in 0usize..3,
        ) {
            let lr = instances::abelian_over_dual_numbers();
            let (u, v) = (u.homogeneous_part(p), v.homogeneous_part(q));
            let uv = schouten_unchecked(&lr, &u, &v);
            let vu = schouten_unchecked(&lr, &v, &u);
            let mut sum = uv;
            sum.add_assign(&vu.scale_int(sign_pow((p + 1) * (q + 1))));
            prop_assert!(sum.is_zero());
        }

        #[test]
        fn wedge_is_graded_commutative(u in small_elem(&instances::sl2()), v in small_elem(&instances::sl2()), p in 0usize..4, q in 0usize..4) {
            let lr = instances::sl2();
            let (u, v) = (u.homogeneous_part(p), v.homogeneous_part(q));
            prop_assert_eq!(wedge_unchecked(&lr, &u, &v), wedge_unchecked(&lr, &v, &u).scale_int(sign_pow(p * q)));
        }
    }
}
