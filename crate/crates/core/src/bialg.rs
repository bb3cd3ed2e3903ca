//! Duality of Lie-Rinehart algebras and the bialgebra condition.
//!
//! `L` and `D` are in duality when `D ≅ L* = Hom_A(L, A)`; here both are
//! free of the same rank and the pairing is Kronecker on the given bases,
//! so `Alt_A(D, A)` is identified with `Λ_A L` via `e_S ↔ (d_S ↦ 1)`. The
//! Chevalley-Eilenberg-Rinehart differential of `D` then becomes an
//! operator `d_*` on `Λ_A L`, and `(A, L, D)` is a bialgebra when `d_*` is
//! a derivation of the bracket on `L`:
//!
//! ```text
//! d_*[x, y] = [d_*x, y] + [x, d_*y]        x, y ∈ L
//! ```

use crate::calgebra::{AElem, CommAlg, Derivation};
use crate::error::{Error, Result};
use crate::gerst::{basis_multivectors, schouten_unchecked, Multivector};
use crate::instances;
use crate::lrcore::{ce_differential, lr_validate, module_validate, AltForm, FreeElem, LRModule, LieRinehart};
use crate::report::ValidationReport;
use crate::twilled::{is_twilled, theorem23_check, AlmostTwilled, EquivalenceReport};

/// `L` and `D` over the same algebra, of equal rank, paired by
/// `⟨e_i, d_j⟩ = δ_ij`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DualPair {
    l: LieRinehart,
    d: LieRinehart,
}

impl DualPair {
    pub fn new(l: LieRinehart, d: LieRinehart) -> Result<Self> {
        if l.alg() != d.alg() {
            return Err(Error::ParentMismatch("L and D are over different algebras".into()));
        }
        if l.rank() != d.rank() {
            return Err(Error::DimensionMismatch { what: "dual pair rank", expected: l.rank(), found: d.rank() });
        }
        Ok(Self { l, d })
    }

    pub fn l(&self) -> &LieRinehart {
        &self.l
    }

    pub fn d(&self) -> &LieRinehart {
        &self.d
    }

    /// The same pair with the roles of `L` and `D` exchanged.
    pub fn swapped(&self) -> DualPair {
        DualPair { l: self.d.clone(), d: self.l.clone() }
    }
}

/// A failing instance of a derivation identity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BialgebraWitness {
    /// Degree of the first argument.
    pub degree: usize,
    /// The pair of rational basis elements, e.g. `(a0e{0},a0e{1})`.
    pub pair: String,
    pub residual: String,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BialgebraReport {
    pub holds: bool,
    pub witness: Option<BialgebraWitness>,
    /// Verdict of the degree-one identity for `d_*` on `L`.
    pub degree_one: bool,
    /// Verdict of the identity for `d` on `Λ_A D` up to the requested
    /// degree.
    pub all_degrees: bool,
}

impl BialgebraReport {
    /// The two forms of the condition gave the same verdict.
    pub fn agree(&self) -> bool {
        self.degree_one == self.all_degrees
    }
}

fn to_form(u: &Multivector, k: usize) -> AltForm {
    let mut w = AltForm::zero(k, 1);
    for (s, a) in u.terms() {
        if s.len() == k {
            w.set(*s, FreeElem(vec![a.clone()]));
        }
    }
    w
}

/// The differential of `other` transported to multivectors of `base`.
fn transported_differential(base: &LieRinehart, other: &LieRinehart, u: &Multivector) -> Multivector {
    let trivial = LRModule::trivial(other);
    let mut out = Multivector::zero(base);
    for k in 0..=base.rank() {
        if u.terms().keys().all(|s| s.len() != k) {
            continue;
        }
        let dw = ce_differential(other, &trivial, &to_form(u, k)).expect("rank one coefficients");
        for (s, v) in dw.values() {
            out.add_term(*s, &v.0[0]);
        }
    }
    out
}

/// `d_*`: the differential of `D` acting on `Λ_A L`.
pub fn dual_differential(p: &DualPair, u: &Multivector) -> Multivector {
    transported_differential(&p.l, &p.d, u)
}

/// Checks `d[u,v] = [du,v] - (-1)^{|u|}[u,dv]` on pairs of rational basis
/// multivectors of `base` of degree at most `max_degree`, where `d` is the
/// differential of `other`.
fn derivation_witness(
    base: &LieRinehart,
    other: &LieRinehart,
    max_degree: usize,
    only_degree: Option<usize>,
) -> Option<BialgebraWitness> {
    let elems: Vec<_> = basis_multivectors(base, max_degree)
        .into_iter()
        .filter(|(_, k, _)| only_degree.is_none_or(|d| *k == d))
        .collect();
    let images: Vec<Multivector> = elems.iter().map(|(_, _, u)| transported_differential(base, other, u)).collect();
    for (i, (lu, du, u)) in elems.iter().enumerate() {
        for (j, (lv, _, v)) in elems.iter().enumerate() {
            let mut r = transported_differential(base, other, &schouten_unchecked(base, u, v));
            r.sub_assign(&schouten_unchecked(base, &images[i], v));
            r.add_assign(&schouten_unchecked(base, u, &images[j]).scale_int(crate::basis::sign_pow(*du)));
            if !r.is_zero() {
                return Some(BialgebraWitness { degree: *du, pair: format!("({lu},{lv})"), residual: r.display() });
            }
        }
    }
    None
}

/// The bialgebra condition: the degree-one identity for `d_*` on basis
/// pairs `a_α e_i`, cross-checked against the identity for the
/// differential of `L` on `Λ_A D` up to `max_degree`.
pub fn bialgebra_check(p: &DualPair, max_degree: usize) -> BialgebraReport {
    let first = derivation_witness(&p.l, &p.d, 1, Some(1));
    let second = derivation_witness(&p.d, &p.l, max_degree, None);
    let degree_one = first.is_none();
    let all_degrees = second.is_none();
    BialgebraReport { holds: degree_one, witness: first.or(second), degree_one, all_degrees }
}

/// The induced action on `M* = Hom_A(M, A)`:
/// `(x·φ)(m) = x(φ(m)) - φ(x·m)`.
pub fn dual_module_action(lr: &LieRinehart, m: &LRModule) -> Result<LRModule> {
    if let Some(v) = module_validate(lr, m).violations.first() {
        return Err(Error::NotFlat(v.to_string()));
    }
    let dual = m.dual_exterior_power(lr, 1);
    if let Some(v) = module_validate(lr, &dual).violations.first() {
        return Err(Error::NotFlat(format!("dual action: {v}")));
    }
    Ok(dual)
}

fn pair_elems(alg: &CommAlg, phi: &FreeElem, m: &FreeElem) -> AElem {
    let mut out = alg.zero();
    for (a, b) in phi.0.iter().zip(&m.0) {
        out += &alg.mul(a, b);
    }
    out
}

/// Checks `x⟨φ, m⟩ = ⟨x·φ, m⟩ + ⟨φ, x·m⟩` for `x = e_i`, `φ = a_α φ_b`,
/// `m = a_β m_c`.
pub fn pairing_report(lr: &LieRinehart, m: &LRModule, dual: &LRModule) -> ValidationReport {
    let mut report = ValidationReport::new();
    let (alg, d, r) = (lr.alg(), lr.dim(), m.rank());
    for i in 0..lr.rank() {
        for b in 0..r {
            for c in 0..r {
                for alpha in 0..d {
                    for beta in 0..d {
                        let phi = FreeElem::basis_times(r, b, alg.basis(alpha));
                        let mm = FreeElem::basis_times(r, c, alg.basis(beta));
                        let lhs = lr.anchor_basis(i, &pair_elems(alg, &phi, &mm));
                        let mut rhs = pair_elems(alg, &dual.act_basis(lr, i, &phi), &mm);
                        rhs += &pair_elems(alg, &phi, &m.act_basis(lr, i, &mm));
                        if lhs != rhs {
                            report.push_first(
                                "pairing",
                                crate::report::tuple(&[i, alpha, b, beta, c]),
                                format!("{} != {}", lhs.display(), rhs.display()),
                            );
                        }
                    }
                }
            }
        }
    }
    report
}

/// `L ⋉ M` with `M` an abelian ideal: basis `e_1..e_n, m_1..m_r`,
/// `[(x,φ),(y,ψ)] = ([x,y], x·ψ - y·φ)`, anchor `(x,φ) ↦ ρ(x)`.
pub fn semidirect_product(lr: &LieRinehart, m: &LRModule) -> Result<LieRinehart> {
    if let Some(v) = module_validate(lr, m).violations.first() {
        return Err(Error::NotFlat(v.to_string()));
    }
    let (n, r, d) = (lr.rank(), m.rank(), lr.dim());
    let total = n + r;
    let embed = |x: &FreeElem, offset: usize| {
        let mut out = FreeElem::zero(total, d);
        for (k, a) in x.0.iter().enumerate() {
            out.0[offset + k] = a.clone();
        }
        out
    };
    let mut bracket = vec![vec![FreeElem::zero(total, d); total]; total];
    for i in 0..n {
        for j in 0..n {
            bracket[i][j] = embed(lr.basis_bracket(i, j), 0);
        }
        for b in 0..r {
            let v = embed(m.basis_action(i, b), n);
            bracket[n + b][i] = v.neg();
            bracket[i][n + b] = v;
        }
    }
    let mut anchor = lr.anchors().to_vec();
    anchor.extend((0..r).map(|_| Derivation::zero(d)));
    let out = LieRinehart::new(lr.alg().clone(), bracket, anchor)?;
    if let Some(v) = lr_validate(&out).violations.first() {
        return Err(Error::NotLieRinehart(v.to_string()));
    }
    Ok(out)
}

/// Renumbers the basis: new `e_k` is old `e_{perm[k]}`.
pub fn permute_basis(lr: &LieRinehart, perm: &[usize]) -> Result<LieRinehart> {
    let n = lr.rank();
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&k| k >= n || std::mem::replace(&mut seen[k], true)) {
        return Err(Error::Unsupported("not a permutation of the basis".into()));
    }
    let move_elem = |x: &FreeElem| FreeElem(perm.iter().map(|&k| x.0[k].clone()).collect());
    let bracket = perm.iter().map(|&i| perm.iter().map(|&j| move_elem(lr.basis_bracket(i, j))).collect()).collect();
    let anchor = perm.iter().map(|&i| lr.anchor(i).clone()).collect();
    LieRinehart::new(lr.alg().clone(), bracket, anchor)
}

/// `(L'⋉L''*, L''⋉L'*)` with `D` renumbered so that `e'_i ↔ φ'_i` and
/// `φ''_j ↔ e''_j` are Kronecker.
pub fn semidirect_pair(t: &AlmostTwilled) -> Result<DualPair> {
    let l = semidirect_product(t.lprime(), &dual_module_action(t.lprime(), t.act_p_on_s())?)?;
    let d0 = semidirect_product(t.lsecond(), &dual_module_action(t.lsecond(), t.act_s_on_p())?)?;
    let (np, ns) = (t.n_prime(), t.n_second());
    let perm: Vec<usize> = (0..np).map(|i| ns + i).chain(0..ns).collect();
    DualPair::new(l, permute_basis(&d0, &perm)?)
}

fn bialgebra_details(r: &BialgebraReport) -> ValidationReport {
    let mut details = ValidationReport::new();
    if let Some(w) = &r.witness {
        details.push("bialgebra", w.pair.clone(), format!("degree {}: residual {}", w.degree, w.residual));
    }
    if !r.agree() {
        details.push("bialgebra.forms_disagree", "", "");
    }
    details
}

/// `(Alt(L'', Λ L'), [·,·]', d'')` is a differential bigraded Gerstenhaber
/// algebra iff `(A, L'⋉L''*, L''⋉L'*)` is a bialgebra.
pub fn theorem41_check(t: &AlmostTwilled) -> Result<EquivalenceReport> {
    let pair = semidirect_pair(t)?;
    let b = bialgebra_check(&pair, pair.l().rank());
    let dg = theorem23_check(t);
    let mut details = dg.details.clone();
    details.extend(bialgebra_details(&b));
    Ok(EquivalenceReport {
        name: "theorem41",
        conditions: vec![("bialgebra", b.holds)],
        counterpart: ("dg_gerstenhaber", dg.left()),
        details,
    })
}

/// `t` is twilled iff `(A, L'⋉L''*, L''⋉L'*)` is a bialgebra.
pub fn corollary42_check(t: &AlmostTwilled) -> Result<EquivalenceReport> {
    let pair = semidirect_pair(t)?;
    let b = bialgebra_check(&pair, pair.l().rank());
    let tw = is_twilled(t);
    let mut details = tw.clone().scoped("twilled");
    details.extend(bialgebra_details(&b));
    Ok(EquivalenceReport {
        name: "corollary42",
        conditions: vec![("bialgebra", b.holds)],
        counterpart: ("twilled", tw.is_valid()),
        details,
    })
}

/// The matched pair `(g, g*)` of a Lie bialgebra over `ℚ`, where the
/// cobracket is given as the Lie bracket of `gstar` on the dual basis.
/// Accepted iff [`corollary42_check`] confirms both sides.
pub fn matched_pair_from_lie_bialgebra(g: &LieRinehart, gstar: &LieRinehart) -> Result<AlmostTwilled> {
    if g.dim() != 1 || gstar.dim() != 1 {
        return Err(Error::Unsupported("Lie bialgebras are taken over the rationals".into()));
    }
    if let Some(v) = lr_validate(g).violations.first() {
        return Err(Error::NotLieRinehart(v.to_string()));
    }
    if let Some(v) = lr_validate(gstar).violations.first() {
        return Err(Error::NotBialgebra(format!("co-Jacobi: {v}")));
    }
    let t = instances::lie_bialgebra_pair(g, gstar)?;
    let c = corollary42_check(&t)?;
    if !(c.left() && c.right()) {
        let first = c.details.violations.first().map(|v| v.to_string()).unwrap_or_default();
        return Err(Error::NotBialgebra(first));
    }
    Ok(t)
}

#[cfg(test)]
mod tests;
