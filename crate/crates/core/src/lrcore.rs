//! Lie-Rinehart algebras `(A, L)` with `L` free of finite rank over `A`,
//! their modules and connections, and the Chevalley-Eilenberg-Rinehart
//! complex `Alt_A(L, M)`.
//!
//! Brackets, anchors and actions are stored on basis tuples only. Values on
//! general elements are always obtained by the canonical expansion
//!
//! ```text
//! [a e_i, b e_j] = ab [e_i, e_j] + a ρ(e_i)(b) e_j - b ρ(e_j)(a) e_i
//! (a e_i) · (b f_j) = a ρ(e_i)(b) f_j + ab (e_i · f_j)
//! ```
//!
//! The differential is
//!
//! ```text
//! (dω)(x_0..x_q) = Σ_i (-1)^i x_i · ω(..x̂_i..)
//!                + Σ_{i<j} (-1)^{i+j} ω([x_i, x_j], ..x̂_i..x̂_j..)
//! ```
//!
//! evaluated on sorted basis subsets. For a connection that is not flat the
//! same formula defines the formal operator, which need not square to zero.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::basis::{binomial, sign_pow, subset_rank, subsets_of_size, BasisSet, MAX_RANK};
use crate::calgebra::{alg_validate, der_bracket, derivation_validate, AElem, CommAlg, Derivation};
use crate::error::{Error, Result};
use crate::exactla::{Rat, RatMatrix};
use crate::report::{tuple, ValidationReport};

/// Element of a free `A`-module of rank `m`: one algebra coefficient per
/// basis vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FreeElem(pub Vec<AElem>);

/// Element of `L`.
pub type LElem = FreeElem;

impl FreeElem {
    pub fn zero(rank: usize, dim: usize) -> Self {
        FreeElem(vec![AElem::zero(dim); rank])
    }

    /// `a · f_i`.
    pub fn basis_times(rank: usize, i: usize, a: AElem) -> Self {
        let mut v = Self::zero(rank, a.dim());
        v.0[i] = a;
        v
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(AElem::is_zero)
    }

    pub fn add_assign(&mut self, other: &FreeElem) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b;
        }
    }

    pub fn sub_assign(&mut self, other: &FreeElem) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a -= b;
        }
    }

    pub fn neg(&self) -> FreeElem {
        FreeElem(self.0.iter().map(|a| -a.clone()).collect())
    }

    pub fn scale_int(&self, c: i32) -> FreeElem {
        FreeElem(self.0.iter().map(|a| a.scale_int(c)).collect())
    }

    /// `a · self`.
    pub fn scale(&self, alg: &CommAlg, a: &AElem) -> FreeElem {
        FreeElem(self.0.iter().map(|b| alg.mul(a, b)).collect())
    }

    pub fn display(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(AElem::display).collect();
        format!("({})", parts.join(", "))
    }
}

/// A Lie-Rinehart algebra with `L` free of rank `n` over `A`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LieRinehart {
    alg: CommAlg,
    rank: usize,
    bracket: Vec<Vec<LElem>>,
    anchor: Vec<Derivation>,
}

impl LieRinehart {
    /// Checks shapes; the axioms are checked separately by [`lr_validate`].
    ///
    /// `bracket[i][j]` is `[e_i, e_j]` and `anchor[i]` is `ρ(e_i)`.
    pub fn new(alg: CommAlg, bracket: Vec<Vec<LElem>>, anchor: Vec<Derivation>) -> Result<Self> {
        let n = anchor.len();
        let d = alg.dim();
        if n > MAX_RANK {
            return Err(Error::Unsupported(format!("rank {n} exceeds {MAX_RANK}")));
        }
        if bracket.len() != n {
            return Err(Error::DimensionMismatch { what: "bracket table rows", expected: n, found: bracket.len() });
        }
        for row in &bracket {
            if row.len() != n {
                return Err(Error::DimensionMismatch { what: "bracket table columns", expected: n, found: row.len() });
            }
            for v in row {
                check_free(v, n, d, "bracket value")?;
            }
        }
        if let Some(bad) = anchor.iter().find(|a| a.dim() != d) {
            return Err(Error::DimensionMismatch { what: "anchor matrix", expected: d, found: bad.dim() });
        }
        Ok(Self { alg, rank: n, bracket, anchor })
    }

    /// Abelian `L = A^n` with zero anchor.
    pub fn abelian(alg: CommAlg, n: usize) -> Self {
        let d = alg.dim();
        let bracket = vec![vec![FreeElem::zero(n, d); n]; n];
        let anchor = vec![Derivation::zero(d); n];
        Self { alg, rank: n, bracket, anchor }
    }

    /// A Lie algebra over `ℚ` from integer structure constants
    /// `c[i][j][k]`: `[e_i, e_j] = Σ_k c[i][j][k] e_k`.
    pub fn lie_algebra_from_constants(constants: &[Vec<Vec<Rat>>]) -> Result<Self> {
        let n = constants.len();
        let alg = CommAlg::rationals();
        let bracket = constants
            .iter()
            .map(|row| row.iter().map(|c| FreeElem(c.iter().map(|x| AElem(vec![x.clone()])).collect())).collect())
            .collect();
        Self::new(alg, bracket, vec![Derivation::zero(1); n])
    }

    pub fn alg(&self) -> &CommAlg {
        &self.alg
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn basis_bracket(&self, i: usize, j: usize) -> &LElem {
        &self.bracket[i][j]
    }

    pub fn anchor(&self, i: usize) -> &Derivation {
        &self.anchor[i]
    }

    pub fn anchors(&self) -> &[Derivation] {
        &self.anchor
    }

    pub fn bracket_table(&self) -> &[Vec<LElem>] {
        &self.bracket
    }

    pub fn zero_elem(&self) -> LElem {
        FreeElem::zero(self.rank, self.dim())
    }

    /// `a · e_i`.
    pub fn elem(&self, i: usize, a: AElem) -> LElem {
        FreeElem::basis_times(self.rank, i, a)
    }

    /// The basis element `e_i`.
    pub fn basis_elem(&self, i: usize) -> LElem {
        self.elem(i, self.alg.one())
    }

    /// Same algebra and also same table shapes.
    pub fn check_elem(&self, u: &LElem) -> Result<()> {
        check_free(u, self.rank, self.dim(), "L element").map_err(|e| Error::ParentMismatch(e.to_string()))
    }

    /// `ρ(e_i)(a)`.
    pub fn anchor_basis(&self, i: usize, a: &AElem) -> AElem {
        self.anchor[i].apply(a)
    }

    /// `u(a) = Σ_i u_i ρ(e_i)(a)`.
    pub fn anchor_apply(&self, u: &LElem, a: &AElem) -> AElem {
        let mut out = self.alg.zero();
        for (i, ui) in u.0.iter().enumerate() {
            if ui.is_zero() || self.anchor[i].is_zero() {
                continue;
            }
            out += &self.alg.mul(ui, &self.anchor[i].apply(a));
        }
        out
    }

    /// `ρ(u)` as a derivation matrix.
    pub fn anchor_of(&self, u: &LElem) -> Derivation {
        let mut out = Derivation::zero(self.dim());
        for (i, ui) in u.0.iter().enumerate() {
            if !ui.is_zero() {
                out = out.add(&self.anchor[i].left_mul(&self.alg, ui));
            }
        }
        out
    }

    /// The bracket of general elements by Leibniz expansion.
    pub fn bracket(&self, u: &LElem, v: &LElem) -> LElem {
        let alg = &self.alg;
        let mut out = self.zero_elem();
        for (i, ui) in u.0.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.0.iter().enumerate() {
                if vj.is_zero() {
                    continue;
                }
                let uv = alg.mul(ui, vj);
                if !uv.is_zero() {
                    out.add_assign(&self.bracket[i][j].scale(alg, &uv));
                }
                // ui ρ_i(vj) e_j - vj ρ_j(ui) e_i
                let t = alg.mul(ui, &self.anchor[i].apply(vj));
                out.0[j] += &t;
                let s = alg.mul(vj, &self.anchor[j].apply(ui));
                out.0[i] -= &s;
            }
        }
        out
    }
}

fn check_free(v: &FreeElem, rank: usize, dim: usize, what: &'static str) -> Result<()> {
    if v.rank() != rank {
        return Err(Error::DimensionMismatch { what, expected: rank, found: v.rank() });
    }
    if let Some(bad) = v.0.iter().find(|a| a.dim() != dim) {
        return Err(Error::DimensionMismatch { what, expected: dim, found: bad.dim() });
    }
    Ok(())
}

/// Checks the base algebra, that each anchor is a derivation, antisymmetry of
/// the bracket table, that the anchor is a Lie morphism, and Jacobi on all
/// basis triples. Reports the first witnessing tuple of each failed axiom.
///
/// Basis triples suffice: once the anchor is a Lie morphism the Jacobiator
/// is `A`-trilinear.
pub fn lr_validate(lr: &LieRinehart) -> ValidationReport {
    let n = lr.rank;
    let mut report = alg_validate(&lr.alg).scoped("algebra");
    for (i, a) in lr.anchor.iter().enumerate() {
        let r = derivation_validate(&lr.alg, a);
        if let Some(v) = r.violations.first() {
            report.push_first("anchor_derivation", tuple(&[i]), v.to_string());
        }
    }
    for i in 0..n {
        for j in i..n {
            let mut sum = lr.bracket[i][j].clone();
            sum.add_assign(&lr.bracket[j][i]);
            if !sum.is_zero() {
                let axiom = if i == j { "alternating" } else { "antisymmetry" };
                report.push_first(axiom, tuple(&[i, j]), format!("[e_i,e_j] + [e_j,e_i] = {}", sum.display()));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            let lhs = lr.anchor_of(&lr.bracket[i][j]);
            let rhs = der_bracket(&lr.anchor[i], &lr.anchor[j]).expect("same algebra");
            if lhs != rhs {
                report.push_first("anchor_morphism", tuple(&[i, j]), "ρ([e_i,e_j]) != [ρ(e_i), ρ(e_j)]");
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let (x, y, z) = (lr.basis_elem(i), lr.basis_elem(j), lr.basis_elem(k));
                let mut jac = lr.bracket(&lr.bracket(&x, &y), &z);
                jac.add_assign(&lr.bracket(&lr.bracket(&y, &z), &x));
                jac.add_assign(&lr.bracket(&lr.bracket(&z, &x), &y));
                if !jac.is_zero() {
                    report.push_first("jacobi", tuple(&[i, j, k]), format!("jacobiator = {}", jac.display()));
                }
            }
        }
    }
    report
}

pub fn lr_bracket(lr: &LieRinehart, u: &LElem, v: &LElem) -> Result<LElem> {
    lr.check_elem(u)?;
    lr.check_elem(v)?;
    Ok(lr.bracket(u, v))
}

pub fn lr_anchor_apply(lr: &LieRinehart, u: &LElem, a: &AElem) -> Result<AElem> {
    lr.check_elem(u)?;
    lr.alg.check_elem(a)?;
    Ok(lr.anchor_apply(u, a))
}

/// Free `A`-module `M` of rank `m` with an `L`-connection given on basis
/// tuples: `action[i][j] = e_i · f_j`. It is a module exactly when the
/// connection is flat, see [`module_validate`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LRModule {
    rank: usize,
    action: Vec<Vec<FreeElem>>,
}

impl LRModule {
    pub fn new(lr: &LieRinehart, rank: usize, action: Vec<Vec<FreeElem>>) -> Result<Self> {
        if action.len() != lr.rank {
            return Err(Error::DimensionMismatch { what: "action table rows", expected: lr.rank, found: action.len() });
        }
        for row in &action {
            if row.len() != rank {
                return Err(Error::DimensionMismatch {
                    what: "action table columns",
                    expected: rank,
                    found: row.len(),
                });
            }
            for v in row {
                check_free(v, rank, lr.dim(), "action value")?;
            }
        }
        Ok(Self { rank, action })
    }

    /// `A` itself, acted on through the anchor.
    pub fn trivial(lr: &LieRinehart) -> Self {
        Self::zero_action(lr, 1)
    }

    /// `A^m` with `e_i · f_j = 0`, i.e. the action is the anchor on every
    /// coefficient.
    pub fn zero_action(lr: &LieRinehart, m: usize) -> Self {
        Self { rank: m, action: vec![vec![FreeElem::zero(m, lr.dim()); m]; lr.rank] }
    }

    /// Rank one module `A · f` with `e_i · f = ω_i f`.
    pub fn line(lr: &LieRinehart, omega: &[AElem]) -> Result<Self> {
        if omega.len() != lr.rank {
            return Err(Error::DimensionMismatch { what: "connection form", expected: lr.rank, found: omega.len() });
        }
        let action = omega.iter().map(|w| vec![FreeElem(vec![w.clone()])]).collect();
        Self::new(lr, 1, action)
    }

    /// `L` acting on itself by the bracket table. This is a connection only
    /// when the anchor vanishes, so it is meant for Lie algebras over `ℚ`.
    pub fn adjoint(lr: &LieRinehart) -> Self {
        Self { rank: lr.rank, action: lr.bracket.clone() }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn table(&self) -> &[Vec<FreeElem>] {
        &self.action
    }

    pub fn basis_action(&self, i: usize, j: usize) -> &FreeElem {
        &self.action[i][j]
    }

    pub fn zero_elem(&self, dim: usize) -> FreeElem {
        FreeElem::zero(self.rank, dim)
    }

    /// `e_i · w`.
    pub fn act_basis(&self, lr: &LieRinehart, i: usize, w: &FreeElem) -> FreeElem {
        let alg = lr.alg();
        let mut out = self.zero_elem(lr.dim());
        let anchor = lr.anchor(i);
        for (j, wj) in w.0.iter().enumerate() {
            if wj.is_zero() {
                continue;
            }
            if !anchor.is_zero() {
                out.0[j] += &anchor.apply(wj);
            }
            out.add_assign(&self.action[i][j].scale(alg, wj));
        }
        out
    }

    /// `u · w` for general `u ∈ L`.
    pub fn act(&self, lr: &LieRinehart, u: &LElem, w: &FreeElem) -> FreeElem {
        let mut out = self.zero_elem(lr.dim());
        for (i, ui) in u.0.iter().enumerate() {
            if !ui.is_zero() {
                out.add_assign(&self.act_basis(lr, i, w).scale(lr.alg(), ui));
            }
        }
        out
    }

    /// The induced connection on `Λ^p M` (basis: sorted `p`-subsets of the
    /// module basis in lexicographic order), acting by derivations:
    /// `x · (m_1 ∧ .. ∧ m_p) = Σ_i m_1 ∧ .. ∧ (x·m_i) ∧ .. ∧ m_p`.
    pub fn exterior_power(&self, lr: &LieRinehart, p: usize) -> LRModule {
        let m = self.rank;
        let d = lr.dim();
        let subsets = subsets_of_size(m, p);
        let rank = subsets.len();
        let action = (0..lr.rank)
            .map(|i| {
                subsets
                    .iter()
                    .map(|&s| {
                        let mut out = FreeElem::zero(rank, d);
                        for r in s.iter() {
                            let rest = s.remove(r);
                            for (k, c) in self.action[i][r].0.iter().enumerate() {
                                if c.is_zero() || rest.contains(k) {
                                    continue;
                                }
                                // replace f_r by f_k in place: sign of moving k into sorted position
                                let sign = sign_pow(rest.count_below(r) + rest.count_below(k));
                                let target = rest.insert(k);
                                out.0[subset_rank(m, target)] += &c.scale_int(sign);
                            }
                        }
                        out
                    })
                    .collect()
            })
            .collect();
        LRModule { rank, action }
    }

    /// The induced connection on `Alt^p_A(M, A) = Λ^p M^*` (dual basis of the
    /// sorted subsets of the module basis):
    /// `(x·φ)(m_1..m_p) = x(φ(m_1..m_p)) - Σ_i φ(.., x·m_i, ..)`.
    /// On basis tuples the first term vanishes, so the table is minus the
    /// transpose of the exterior power table.
    pub fn dual_exterior_power(&self, lr: &LieRinehart, p: usize) -> LRModule {
        let ext = self.exterior_power(lr, p);
        let rank = ext.rank;
        let d = lr.dim();
        let action = (0..lr.rank)
            .map(|i| {
                (0..rank)
                    .map(|r0| {
                        let mut out = FreeElem::zero(rank, d);
                        for r in 0..rank {
                            out.0[r] = -ext.action[i][r].0[r0].clone();
                        }
                        out
                    })
                    .collect()
            })
            .collect();
        LRModule { rank, action }
    }

    /// Same module with every basis action multiplied by `c`.
    pub fn scaled(&self, c: i32) -> LRModule {
        LRModule {
            rank: self.rank,
            action: self.action.iter().map(|row| row.iter().map(|v| v.scale_int(c)).collect()).collect(),
        }
    }

    /// Adds `ω_i · id` to the action of `e_i` (tensoring with a line).
    pub fn twisted(&self, omega: &[AElem]) -> LRModule {
        let mut action = self.action.clone();
        for (i, row) in action.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                v.0[j] += &omega[i];
            }
        }
        LRModule { rank: self.rank, action }
    }
}

/// Empty iff `[e_i,e_j]·f_k = e_i·(e_j·f_k) - e_j·(e_i·f_k)` on all basis
/// tuples. A report with witnesses means the data is only a connection.
pub fn module_validate(lr: &LieRinehart, m: &LRModule) -> ValidationReport {
    let mut report = ValidationReport::new();
    if m.action.len() != lr.rank {
        report.push("shape", tuple(&[m.action.len()]), "action table does not match the rank of L");
        return report;
    }
    for i in 0..lr.rank {
        for j in 0..lr.rank {
            for k in 0..m.rank {
                let f = FreeElem::basis_times(m.rank, k, lr.alg().one());
                let lhs = m.act(lr, lr.basis_bracket(i, j), &f);
                let mut rhs = m.act_basis(lr, i, &m.act_basis(lr, j, &f));
                rhs.sub_assign(&m.act_basis(lr, j, &m.act_basis(lr, i, &f)));
                let mut diff = lhs;
                diff.sub_assign(&rhs);
                if !diff.is_zero() {
                    report.push_first("flatness", tuple(&[i, j, k]), format!("curvature = {}", diff.display()));
                }
            }
        }
    }
    report
}

/// An `A`-multilinear alternating form of degree `q` on `L` with values in a
/// free module of rank `module_rank`, stored on sorted `q`-subsets.
/// Zero values are never stored, so equality is coefficientwise.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AltForm {
    degree: usize,
    module_rank: usize,
    values: BTreeMap<BasisSet, FreeElem>,
}

impl AltForm {
    pub fn zero(degree: usize, module_rank: usize) -> Self {
        Self { degree, module_rank, values: BTreeMap::new() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn module_rank(&self) -> usize {
        self.module_rank
    }

    pub fn values(&self) -> &BTreeMap<BasisSet, FreeElem> {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Value on the sorted basis tuple `s`, zero if not stored.
    pub fn value(&self, s: BasisSet, dim: usize) -> FreeElem {
        self.values.get(&s).cloned().unwrap_or_else(|| FreeElem::zero(self.module_rank, dim))
    }

    /// Sets the value on `s` (which must have `degree` elements).
    pub fn set(&mut self, s: BasisSet, v: FreeElem) {
        assert_eq!(s.len(), self.degree, "subset of the wrong size");
        if v.is_zero() {
            self.values.remove(&s);
        } else {
            self.values.insert(s, v);
        }
    }

    pub fn add_at(&mut self, s: BasisSet, v: &FreeElem) {
        if v.is_zero() {
            return;
        }
        let entry = self.values.entry(s).or_insert_with(|| FreeElem::zero(v.rank(), v.0[0].dim()));
        entry.add_assign(v);
        if entry.is_zero() {
            self.values.remove(&s);
        }
    }

    /// `a · f_j` placed on the dual basis element of `s`.
    pub fn basis_form(degree: usize, module_rank: usize, s: BasisSet, j: usize, a: AElem) -> Self {
        let mut w = Self::zero(degree, module_rank);
        w.set(s, FreeElem::basis_times(module_rank, j, a));
        w
    }

    /// Value on the ordered tuple `(k, rest...)` where `rest` is sorted.
    fn value_with_front(&self, k: usize, rest: BasisSet) -> Option<(i32, &FreeElem)> {
        if rest.contains(k) {
            return None;
        }
        let v = self.values.get(&rest.insert(k))?;
        Some((sign_pow(rest.count_below(k)), v))
    }
}

/// The Chevalley-Eilenberg-Rinehart differential with coefficients in the
/// connection `m` (use [`LRModule::trivial`] for `A`). Forms above degree
/// `n` are zero.
pub fn ce_differential(lr: &LieRinehart, m: &LRModule, w: &AltForm) -> Result<AltForm> {
    if w.module_rank != m.rank {
        return Err(Error::DimensionMismatch { what: "form coefficients", expected: m.rank, found: w.module_rank });
    }
    let n = lr.rank;
    let q = w.degree;
    let d = lr.dim();
    let mut out = AltForm::zero(q + 1, m.rank);
    if q + 1 > n {
        return Ok(out);
    }
    for s in subsets_of_size(n, q + 1) {
        let idx = s.indices();
        let mut val = FreeElem::zero(m.rank, d);
        for (i, &si) in idx.iter().enumerate() {
            let inner = w.value(s.remove(si), d);
            if inner.is_zero() {
                continue;
            }
            let t = m.act_basis(lr, si, &inner);
            if i % 2 == 0 {
                val.add_assign(&t);
            } else {
                val.sub_assign(&t);
            }
        }
        for (i, &si) in idx.iter().enumerate() {
            for (j, &sj) in idx.iter().enumerate().skip(i + 1) {
                let rest = s.remove(si).remove(sj);
                let br = lr.basis_bracket(si, sj);
                for (k, c) in br.0.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    if let Some((sign, v)) = w.value_with_front(k, rest) {
                        let t = v.scale(lr.alg(), c).scale_int(sign * sign_pow(i + j));
                        val.add_assign(&t);
                    }
                }
            }
        }
        out.set(s, val);
    }
    Ok(out)
}

/// Rational coordinates of `Alt^q(L, M)`: index `(subset, j, α)` flattened
/// as `(subset_rank * m + j) * d + α`.
pub fn form_space_dim(lr: &LieRinehart, module_rank: usize, q: usize) -> usize {
    binomial(lr.rank, q) * module_rank * lr.dim()
}

pub fn form_coordinates(lr: &LieRinehart, w: &AltForm) -> Vec<Rat> {
    let d = lr.dim();
    let m = w.module_rank;
    let mut out = vec![Rat::zero(); form_space_dim(lr, m, w.degree)];
    for (s, v) in &w.values {
        let base = subset_rank(lr.rank, *s) * m;
        for (j, a) in v.0.iter().enumerate() {
            for (alpha, x) in a.0.iter().enumerate() {
                out[(base + j) * d + alpha] = x.clone();
            }
        }
    }
    out
}

/// Rational basis of `Alt^q(L, M)` in coordinate order.
pub fn form_basis(lr: &LieRinehart, module_rank: usize, q: usize) -> Vec<AltForm> {
    let d = lr.dim();
    let mut out = Vec::new();
    for s in subsets_of_size(lr.rank, q) {
        for j in 0..module_rank {
            for alpha in 0..d {
                out.push(AltForm::basis_form(q, module_rank, s, j, lr.alg().basis(alpha)));
            }
        }
    }
    out
}

/// Matrix of `d_q : Alt^q -> Alt^{q+1}` over `ℚ`.
pub fn differential_matrix(lr: &LieRinehart, m: &LRModule, q: usize) -> Result<RatMatrix> {
    let rows = form_space_dim(lr, m.rank, q + 1);
    let cols: Vec<Vec<Rat>> = form_basis(lr, m.rank, q)
        .iter()
        .map(|w| ce_differential(lr, m, w).map(|dw| form_coordinates(lr, &dw)))
        .collect::<Result<_>>()?;
    Ok(RatMatrix::from_columns(rows, &cols))
}

/// Checks `d∘d = 0` on every rational basis form of every degree.
pub fn ce_square_report(lr: &LieRinehart, m: &LRModule) -> Result<ValidationReport> {
    let mut report = ValidationReport::new();
    for q in 0..=lr.rank {
        for w in form_basis(lr, m.rank, q) {
            let dd = ce_differential(lr, m, &ce_differential(lr, m, &w)?)?;
            if !dd.is_zero() {
                let (s, v) = w.values.iter().next().expect("basis form is nonzero");
                let j = v.0.iter().position(|a| !a.is_zero()).unwrap_or(0);
                let alpha = v.0[j].0.iter().position(|x| !x.is_zero()).unwrap_or(0);
                report.push_first("d_squared", format!("(q={q}, a{alpha}*f{j}*e{s})"), "d(d(w)) != 0");
            }
        }
    }
    Ok(report)
}

/// `dim H^q` for `q = 0..=max_degree` computed by exact elimination.
/// Non-flat coefficients are rejected.
pub fn cohomology_dims(lr: &LieRinehart, m: &LRModule, max_degree: usize) -> Result<Vec<usize>> {
    let flat = module_validate(lr, m);
    if let Some(v) = flat.violations.first() {
        return Err(Error::NotFlat(v.to_string()));
    }
    let n = lr.rank;
    let ranks: Vec<usize> =
        (0..=n.min(max_degree)).map(|q| differential_matrix(lr, m, q).map(|mat| mat.rank())).collect::<Result<_>>()?;
    Ok((0..=max_degree)
        .map(|q| {
            if q > n {
                return 0;
            }
            let dim = form_space_dim(lr, m.rank, q);
            let out = ranks[q];
            let inc = if q == 0 { 0 } else { ranks[q - 1] };
            dim - out - inc
        })
        .collect())
}

/// `Σ (-1)^q dim Alt^q`.
pub fn euler_characteristic_of_forms(lr: &LieRinehart, module_rank: usize) -> i64 {
    (0..=lr.rank).map(|q| sign_pow(q) as i64 * form_space_dim(lr, module_rank, q) as i64).sum()
}

pub fn euler_characteristic(dims: &[usize]) -> i64 {
    dims.iter().enumerate().map(|(q, &x)| sign_pow(q) as i64 * x as i64).sum()
}
