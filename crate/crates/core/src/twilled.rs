//! Almost twilled Lie-Rinehart data `(A, L', L'')`, the twilled sum, the
//! bigraded complex `Alt(L'', Alt(L', A))`, the crossed product Gerstenhaber
//! algebra `Alt(L'', Λ L')`, and checkers for the characterisations of
//! twilledness.
//!
//! Bigraded elements are keyed by `(T, S)` with `T` a sorted subset of the
//! `L''` basis (the external form slots) and `S` a sorted subset of the `L'`
//! basis. The key stands for `φ''_T ⊗ e'_S` in `Alt(L'', Λ L')` and for
//! `φ''_T ⊗ φ'_S` in `Alt(L'', Alt(L', A))`, and in both carriers
//!
//! ```text
//! (φ_T ⊗ u)(φ_{T'} ⊗ v) = (-1)^{|u||T'|} (φ_T ∧ φ_{T'}) ⊗ (u ∧ v).
//! ```
//!
//! `d''` is the differential of `L''` with coefficients `Λ^p L'` (resp.
//! `Alt^p(L', A)`) under the `L''`-action on `L'`. `d'` is `(-1)^q` times the
//! differential of `L'` with coefficients `Alt^q(L'', A)` under the
//! `L'`-action on `L''`. Both are formal: no flatness is assumed.
//!
//! The crossed bracket is evaluated from the rules
//!
//! ```text
//! [αβ, γ] = α[β, γ] + (-1)^{|α||β|} β[α, γ]
//! [x, a]  = x·a           x ∈ L', a ∈ Alt(L'', A)
//! [α, β]  = -(-1)^{(|α|-1)(|β|-1)} [β, α]
//! ```
//!
//! with total degrees, on the canonical factorisation
//! `c φ_T ⊗ e_S = (c φ_T) · e_{s_1} ⋯ e_{s_p}`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::basis::{all_subsets, binomial, sign_pow, subset_rank, subsets_of_size, wedge_sign, BasisSet};
use crate::calgebra::{AElem, CommAlg};
use crate::error::{Error, Result};
use crate::exactla::{Rat, RatMatrix};
use crate::gerst::{generator_to_connection, GeneratorOp, TopConnection};
use crate::lrcore::{
    ce_differential, cohomology_dims, lr_validate, module_validate, AltForm, FreeElem, LRModule, LieRinehart,
};
use crate::report::ValidationReport;

/// `(A, L', L'')` with an `L'`-connection on `L''` and an `L''`-connection
/// on `L'`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlmostTwilled {
    lprime: LieRinehart,
    lsecond: LieRinehart,
    act_p_on_s: LRModule,
    act_s_on_p: LRModule,
}

impl AlmostTwilled {
    /// `act_p_on_s` is a connection of `L'` on the free module `L''`
    /// (`e'_i · e''_j`), `act_s_on_p` a connection of `L''` on `L'`.
    pub fn new(lprime: LieRinehart, lsecond: LieRinehart, act_p_on_s: LRModule, act_s_on_p: LRModule) -> Result<Self> {
        if lprime.alg() != lsecond.alg() {
            return Err(Error::ParentMismatch("L' and L'' are over different algebras".into()));
        }
        if act_p_on_s.rank() != lsecond.rank() || act_p_on_s.table().len() != lprime.rank() {
            return Err(Error::DimensionMismatch {
                what: "action of L' on L''",
                expected: lsecond.rank(),
                found: act_p_on_s.rank(),
            });
        }
        if act_s_on_p.rank() != lprime.rank() || act_s_on_p.table().len() != lsecond.rank() {
            return Err(Error::DimensionMismatch {
                what: "action of L'' on L'",
                expected: lprime.rank(),
                found: act_s_on_p.rank(),
            });
        }
        Ok(Self { lprime, lsecond, act_p_on_s, act_s_on_p })
    }

    /// Both actions zero.
    pub fn direct_sum(lprime: LieRinehart, lsecond: LieRinehart) -> Result<Self> {
        let a = LRModule::zero_action(&lprime, lsecond.rank());
        let b = LRModule::zero_action(&lsecond, lprime.rank());
        Self::new(lprime, lsecond, a, b)
    }

    pub fn lprime(&self) -> &LieRinehart {
        &self.lprime
    }

    pub fn lsecond(&self) -> &LieRinehart {
        &self.lsecond
    }

    pub fn act_p_on_s(&self) -> &LRModule {
        &self.act_p_on_s
    }

    pub fn act_s_on_p(&self) -> &LRModule {
        &self.act_s_on_p
    }

    pub fn alg(&self) -> &CommAlg {
        self.lprime.alg()
    }

    pub fn dim(&self) -> usize {
        self.lprime.dim()
    }

    pub fn n_prime(&self) -> usize {
        self.lprime.rank()
    }

    pub fn n_second(&self) -> usize {
        self.lsecond.rank()
    }

    /// Flatness of the two connections, scoped `act_p_on_s` / `act_s_on_p`.
    pub fn flatness_report(&self) -> ValidationReport {
        let mut r = module_validate(&self.lprime, &self.act_p_on_s).scoped("act_p_on_s");
        r.extend(module_validate(&self.lsecond, &self.act_s_on_p).scoped("act_s_on_p"));
        r
    }
}

/// `L' ⊕ L''` with basis `e'_0..e'_{n'-1}, e''_0..e''_{n''-1}` and
/// `[e'_i, e''_j] = e'_i·e''_j - e''_j·e'_i`; the anchor is the sum of the
/// anchors. Validity is not assumed.
pub fn twilled_sum(t: &AlmostTwilled) -> LieRinehart {
    let (np, ns, d) = (t.n_prime(), t.n_second(), t.dim());
    let n = np + ns;
    let embed = |v: &FreeElem, offset: usize| {
        let mut out = FreeElem::zero(n, d);
        for (k, a) in v.0.iter().enumerate() {
            out.0[offset + k] = a.clone();
        }
        out
    };
    let mut bracket = vec![vec![FreeElem::zero(n, d); n]; n];
    for i in 0..np {
        for j in 0..np {
            bracket[i][j] = embed(t.lprime.basis_bracket(i, j), 0);
        }
    }
    for i in 0..ns {
        for j in 0..ns {
            bracket[np + i][np + j] = embed(t.lsecond.basis_bracket(i, j), np);
        }
    }
    for i in 0..np {
        for j in 0..ns {
            let mut v = embed(t.act_p_on_s.basis_action(i, j), np);
            v.sub_assign(&embed(t.act_s_on_p.basis_action(j, i), 0));
            bracket[np + j][i] = v.neg();
            bracket[i][np + j] = v;
        }
    }
    let mut anchor = t.lprime.anchors().to_vec();
    anchor.extend_from_slice(t.lsecond.anchors());
    LieRinehart::new(t.alg().clone(), bracket, anchor).expect("shapes agree")
}

/// Empty iff the twilled sum is a Lie-Rinehart algebra.
pub fn is_twilled(t: &AlmostTwilled) -> ValidationReport {
    lr_validate(&twilled_sum(t))
}

/// An element of `Alt(L'', Λ L')` or `Alt(L'', Alt(L', A))`; the carrier is
/// fixed by the operator applied to it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BigradedElement {
    n_second: usize,
    n_prime: usize,
    dim: usize,
    terms: BTreeMap<(BasisSet, BasisSet), AElem>,
}

impl fmt::Debug for BigradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display())
    }
}

impl BigradedElement {
    pub fn zero(t: &AlmostTwilled) -> Self {
        Self { n_second: t.n_second(), n_prime: t.n_prime(), dim: t.dim(), terms: BTreeMap::new() }
    }

    /// `a φ_T ⊗ e_S` (or `a φ_T ⊗ φ_S`).
    pub fn term(t: &AlmostTwilled, ts: BasisSet, s: BasisSet, a: AElem) -> Self {
        let mut out = Self::zero(t);
        out.add_term(ts, s, &a);
        out
    }

    /// The rational basis element `a_α φ_T ⊗ e_S`.
    pub fn basis_elem(t: &AlmostTwilled, alpha: usize, ts: BasisSet, s: BasisSet) -> Self {
        Self::term(t, ts, s, t.alg().basis(alpha))
    }

    pub fn terms(&self) -> &BTreeMap<(BasisSet, BasisSet), AElem> {
        &self.terms
    }

    pub fn coeff(&self, ts: BasisSet, s: BasisSet) -> AElem {
        self.terms.get(&(ts, s)).cloned().unwrap_or_else(|| AElem::zero(self.dim))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(q, p)` if all terms share it.
    pub fn bidegree(&self) -> Option<(usize, usize)> {
        let mut it = self.terms.keys().map(|(t, s)| (t.len(), s.len()));
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    /// Common total degree `p + q`, if any.
    pub fn total_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|(t, s)| t.len() + s.len());
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    pub fn add_term(&mut self, ts: BasisSet, s: BasisSet, a: &AElem) {
        if a.is_zero() {
            return;
        }
        let key = (ts, s);
        let entry = self.terms.entry(key).or_insert_with(|| AElem::zero(a.dim()));
        *entry += a;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_assign(&mut self, other: &BigradedElement) {
        for ((ts, s), a) in &other.terms {
            self.add_term(*ts, *s, a);
        }
    }

    pub fn sub_assign(&mut self, other: &BigradedElement) {
        for ((ts, s), a) in &other.terms {
            self.add_term(*ts, *s, &-a.clone());
        }
    }

    pub fn scale_int(&self, c: i32) -> BigradedElement {
        self.map_coeffs(|a| a.scale_int(c))
    }

    pub fn scale_rat(&self, c: &Rat) -> BigradedElement {
        self.map_coeffs(|a| a.scale(c))
    }

    fn map_coeffs(&self, f: impl Fn(&AElem) -> AElem) -> BigradedElement {
        let mut out = BigradedElement { terms: BTreeMap::new(), ..*self };
        for ((ts, s), a) in &self.terms {
            out.add_term(*ts, *s, &f(a));
        }
        out
    }

    fn empty_like(&self) -> BigradedElement {
        BigradedElement { terms: BTreeMap::new(), ..*self }
    }

    /// Rational expansion `(α, T, S, c)`.
    pub fn rational_terms(&self) -> impl Iterator<Item = (usize, BasisSet, BasisSet, &Rat)> + '_ {
        self.terms.iter().flat_map(|((ts, s), a)| {
            a.0.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(al, c)| (al, *ts, *s, c))
        })
    }

    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> =
            self.terms.iter().map(|((ts, s), a)| format!("{}*f{}*e{}", a.display(), ts, s)).collect();
        parts.join(" + ")
    }
}

/// Witness label of `a_α φ_T ⊗ e_S`.
pub fn bigraded_label(alpha: usize, ts: BasisSet, s: BasisSet) -> String {
    format!("a{alpha}f{ts}e{s}")
}

/// All rational basis elements with total degree at most `max_total`.
pub fn bigraded_basis(t: &AlmostTwilled, max_total: usize) -> Vec<(String, usize, BigradedElement)> {
    let mut out = Vec::new();
    for ts in all_subsets(t.n_second()) {
        for s in all_subsets(t.n_prime()) {
            if ts.len() + s.len() > max_total {
                continue;
            }
            for alpha in 0..t.dim() {
                out.push((
                    bigraded_label(alpha, ts, s),
                    ts.len() + s.len(),
                    BigradedElement::basis_elem(t, alpha, ts, s),
                ));
            }
        }
    }
    out
}

/// The bigraded product, the same in both carriers.
pub fn bigraded_product(t: &AlmostTwilled, x: &BigradedElement, y: &BigradedElement) -> BigradedElement {
    let alg = t.alg();
    let mut out = x.empty_like();
    for ((t1, s1), a) in &x.terms {
        for ((t2, s2), b) in &y.terms {
            let (Some(st), Some(ss)) = (wedge_sign(*t1, *t2), wedge_sign(*s1, *s2)) else {
                continue;
            };
            let sign = st * ss * sign_pow(s1.len() * t2.len());
            out.add_term(t1.union(*t2), s1.union(*s2), &alg.mul(a, b).scale_int(sign));
        }
    }
    out
}

/// The operators of the bigraded complex and of the crossed product
/// algebra, with the induced connections precomputed.
#[derive(Clone, Debug)]
pub struct TwilledOperators {
    t: AlmostTwilled,
    /// `Alt^q(L'', A)` as an `L'`-connection, indexed by `q`.
    forms_second: Vec<LRModule>,
    /// `Alt^p(L', A)` as an `L''`-connection, indexed by `p`.
    forms_prime: Vec<LRModule>,
    /// `Λ^p L'` as an `L''`-connection, indexed by `p`.
    ext_prime: Vec<LRModule>,
}

/// Tabulates `d'`, `d''` and the crossed bracket for `t`.
pub fn build_dprime_dsecond(t: &AlmostTwilled) -> TwilledOperators {
    let forms_second = (0..=t.n_second()).map(|q| t.act_p_on_s.dual_exterior_power(&t.lprime, q)).collect();
    let forms_prime = (0..=t.n_prime()).map(|p| t.act_s_on_p.dual_exterior_power(&t.lsecond, p)).collect();
    let ext_prime = (0..=t.n_prime()).map(|p| t.act_s_on_p.exterior_power(&t.lsecond, p)).collect();
    TwilledOperators { t: t.clone(), forms_second, forms_prime, ext_prime }
}

/// Groups the terms of `x` with `|S| = p` into a `q`-form on `L''` with
/// values in the rank `C(n', p)` module on the `S` slots.
fn second_slices(x: &BigradedElement, n_prime: usize) -> BTreeMap<(usize, usize), AltForm> {
    let mut out: BTreeMap<(usize, usize), AltForm> = BTreeMap::new();
    for ((ts, s), a) in &x.terms {
        let (q, p) = (ts.len(), s.len());
        let rank = binomial(n_prime, p);
        let form = out.entry((q, p)).or_insert_with(|| AltForm::zero(q, rank));
        let mut v = FreeElem::zero(rank, a.dim());
        v.0[subset_rank(n_prime, *s)] = a.clone();
        form.add_at(*ts, &v);
    }
    out
}

fn prime_slices(x: &BigradedElement, n_second: usize) -> BTreeMap<(usize, usize), AltForm> {
    let mut out: BTreeMap<(usize, usize), AltForm> = BTreeMap::new();
    for ((ts, s), a) in &x.terms {
        let (q, p) = (ts.len(), s.len());
        let rank = binomial(n_second, q);
        let form = out.entry((q, p)).or_insert_with(|| AltForm::zero(p, rank));
        let mut v = FreeElem::zero(rank, a.dim());
        v.0[subset_rank(n_second, *ts)] = a.clone();
        form.add_at(*s, &v);
    }
    out
}

impl TwilledOperators {
    pub fn twilled(&self) -> &AlmostTwilled {
        &self.t
    }

    /// `d''` on the given coefficient family (`Alt^p(L',A)` or `Λ^p L'`).
    fn apply_second(&self, modules: &[LRModule], x: &BigradedElement) -> BigradedElement {
        let np = self.t.n_prime();
        let mut out = x.empty_like();
        for ((_, p), form) in second_slices(x, np) {
            let dw = ce_differential(&self.t.lsecond, &modules[p], &form).expect("module rank matches");
            let subsets = subsets_of_size(np, p);
            for (ts, v) in dw.values() {
                for (r, a) in v.0.iter().enumerate() {
                    out.add_term(*ts, subsets[r], a);
                }
            }
        }
        out
    }

    /// `(-1)^q` times the differential of `L'` with coefficients
    /// `modules[q]`, slot by slot; `modules` is indexed by `q`.
    fn apply_prime_with(&self, modules: &[LRModule], x: &BigradedElement) -> BigradedElement {
        let ns = self.t.n_second();
        let mut out = x.empty_like();
        for ((q, _), form) in prime_slices(x, ns) {
            let dw = ce_differential(&self.t.lprime, &modules[q], &form).expect("module rank matches");
            let subsets = subsets_of_size(ns, q);
            for (s, v) in dw.values() {
                for (r, a) in v.0.iter().enumerate() {
                    out.add_term(subsets[r], *s, &a.scale_int(sign_pow(q)));
                }
            }
        }
        out
    }

    /// `d'` on `Alt(L'', Alt(L', A))`.
    pub fn dprime(&self, x: &BigradedElement) -> BigradedElement {
        self.apply_prime_with(&self.forms_second, x)
    }

    /// `d''` on `Alt(L'', Alt(L', A))`.
    pub fn dsecond(&self, x: &BigradedElement) -> BigradedElement {
        self.apply_second(&self.forms_prime, x)
    }

    /// `d' + d''`.
    pub fn total(&self, x: &BigradedElement) -> BigradedElement {
        let mut out = self.dprime(x);
        out.add_assign(&self.dsecond(x));
        out
    }

    /// `d''` on `Alt(L'', Λ L')`.
    pub fn dsecond_multivector(&self, x: &BigradedElement) -> BigradedElement {
        self.apply_second(&self.ext_prime, x)
    }

    /// `e'_i · a` for `a = c φ_T ∈ Alt^q(L'', A)`.
    fn act_prime_on_form(&self, i: usize, ts: BasisSet, c: &AElem) -> BigradedElement {
        let ns = self.t.n_second();
        let q = ts.len();
        let module = &self.forms_second[q];
        let w = FreeElem::basis_times(module.rank(), subset_rank(ns, ts), c.clone());
        let image = module.act_basis(&self.t.lprime, i, &w);
        let subsets = subsets_of_size(ns, q);
        let mut out = BigradedElement::zero(&self.t);
        for (r, a) in image.0.iter().enumerate() {
            out.add_term(subsets[r], BasisSet::EMPTY, a);
        }
        out
    }

    fn gen_elem(&self, g: &Gen) -> BigradedElement {
        match g {
            Gen::Form(ts, c) => BigradedElement::term(&self.t, *ts, BasisSet::EMPTY, c.clone()),
            Gen::Vector(i) => {
                BigradedElement::term(&self.t, BasisSet::EMPTY, BasisSet::singleton(*i), self.t.alg().one())
            }
        }
    }

    fn product_of(&self, gens: &[Gen]) -> BigradedElement {
        let mut out = self.gen_elem(&gens[0]);
        for g in &gens[1..] {
            out = bigraded_product(&self.t, &out, &self.gen_elem(g));
        }
        out
    }

    fn bracket_gens(&self, g: &Gen, h: &Gen) -> BigradedElement {
        match (g, h) {
            (Gen::Vector(i), Gen::Vector(j)) => {
                let mut out = BigradedElement::zero(&self.t);
                for (k, c) in self.t.lprime.basis_bracket(*i, *j).0.iter().enumerate() {
                    out.add_term(BasisSet::EMPTY, BasisSet::singleton(k), c);
                }
                out
            }
            (Gen::Vector(i), Gen::Form(ts, c)) => self.act_prime_on_form(*i, *ts, c),
            (Gen::Form(ts, c), Gen::Vector(i)) => self.act_prime_on_form(*i, *ts, c).scale_int(-1),
            (Gen::Form(..), Gen::Form(..)) => BigradedElement::zero(&self.t),
        }
    }

    fn bracket_lists(&self, a: &[Gen], b: &[Gen]) -> BigradedElement {
        if a.len() > 1 {
            let (alpha, beta) = a.split_at(1);
            let da = gens_degree(alpha);
            let db = gens_degree(beta);
            let mut out = bigraded_product(&self.t, &self.product_of(alpha), &self.bracket_lists(beta, b));
            let second = bigraded_product(&self.t, &self.product_of(beta), &self.bracket_lists(alpha, b));
            out.add_assign(&second.scale_int(sign_pow(da * db)));
            out
        } else if b.len() > 1 {
            // [g, γ₁γ₂] = [g, γ₁]γ₂ + (-1)^{(|g|-1)|γ₁|} γ₁[g, γ₂]
            let (g1, g2) = b.split_at(1);
            let dg = gens_degree(a);
            let d1 = gens_degree(g1);
            let mut out = bigraded_product(&self.t, &self.bracket_lists(a, g1), &self.product_of(g2));
            let second = bigraded_product(&self.t, &self.product_of(g1), &self.bracket_lists(a, g2));
            out.add_assign(&second.scale_int(sign_pow((dg + 1) * d1)));
            out
        } else {
            self.bracket_gens(&a[0], &b[0])
        }
    }

    /// The crossed product bracket on `Alt(L'', Λ L')`.
    pub fn crossed_bracket(&self, u: &BigradedElement, v: &BigradedElement) -> BigradedElement {
        let mut out = BigradedElement::zero(&self.t);
        for ((t1, s1), a) in &u.terms {
            let ga = factor(*t1, *s1, a);
            for ((t2, s2), b) in &v.terms {
                let gb = factor(*t2, *s2, b);
                out.add_assign(&self.bracket_lists(&ga, &gb));
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
enum Gen {
    /// `c φ_T`, of total degree `|T|`.
    Form(BasisSet, AElem),
    /// `e'_i`, of degree one.
    Vector(usize),
}

fn gens_degree(gens: &[Gen]) -> usize {
    gens.iter()
        .map(|g| match g {
            Gen::Form(ts, _) => ts.len(),
            Gen::Vector(_) => 1,
        })
        .sum()
}

fn factor(ts: BasisSet, s: BasisSet, c: &AElem) -> Vec<Gen> {
    let mut out = vec![Gen::Form(ts, c.clone())];
    out.extend(s.iter().map(Gen::Vector));
    out
}

/// `crossed_bracket` through freshly built operators.
pub fn crossed_bracket(t: &AlmostTwilled, u: &BigradedElement, v: &BigradedElement) -> BigradedElement {
    build_dprime_dsecond(t).crossed_bracket(u, v)
}

/// Verdicts of one side of a characterisation, its counterpart, and the
/// witnesses of every failed condition.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EquivalenceReport {
    pub name: &'static str,
    /// Named conditions whose conjunction is compared with `twilled`.
    pub conditions: Vec<(&'static str, bool)>,
    pub counterpart: (&'static str, bool),
    pub details: ValidationReport,
}

impl EquivalenceReport {
    pub fn left(&self) -> bool {
        self.conditions.iter().all(|(_, v)| *v)
    }

    pub fn right(&self) -> bool {
        self.counterpart.1
    }

    /// The biconditional holds on this instance.
    pub fn holds(&self) -> bool {
        self.left() == self.right()
    }

    pub fn condition(&self, name: &str) -> Option<bool> {
        self.conditions.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
    }
}

fn check_square(
    report: &mut ValidationReport,
    axiom: &str,
    elems: &[(String, usize, BigradedElement)],
    f: impl Fn(&BigradedElement) -> BigradedElement,
) -> bool {
    let mut ok = true;
    for (label, _, x) in elems {
        let y = f(&f(x));
        if !y.is_zero() {
            report.push_first(axiom, label.clone(), format!("residual {}", y.display()));
            ok = false;
        }
    }
    ok
}

/// Theorem-1.4 style characterisation: `d'² = 0`, `d''² = 0` and
/// `d'd'' + d''d' = 0` on all basis elements of `Alt(L'', Alt(L', A))`,
/// compared with twilledness of the sum.
pub fn theorem14_check(t: &AlmostTwilled) -> EquivalenceReport {
    let ops = build_dprime_dsecond(t);
    let elems = bigraded_basis(t, t.n_prime() + t.n_second());
    let mut details = ValidationReport::new();
    let dp2 = check_square(&mut details, "dprime_squared", &elems, |x| ops.dprime(x));
    let ds2 = check_square(&mut details, "dsecond_squared", &elems, |x| ops.dsecond(x));
    let mut anticommute = true;
    for (label, _, x) in &elems {
        let mut y = ops.dprime(&ops.dsecond(x));
        y.add_assign(&ops.dsecond(&ops.dprime(x)));
        if !y.is_zero() {
            details.push_first("anticommute", label.clone(), format!("residual {}", y.display()));
            anticommute = false;
        }
    }
    let tw = is_twilled(t);
    let twilled = tw.is_valid();
    details.extend(tw.scoped("twilled_sum"));
    EquivalenceReport {
        name: "theorem14",
        conditions: vec![("dprime_squared", dp2), ("dsecond_squared", ds2), ("anticommute", anticommute)],
        counterpart: ("twilled", twilled),
        details,
    }
}

/// Checks `d''[u,v] = [d''u,v] - (-1)^{|u|}[u,d''v]` on all pairs.
fn derivation_of_bracket(
    ops: &TwilledOperators,
    details: &mut ValidationReport,
    elems: &[(String, usize, BigradedElement)],
) -> bool {
    let images: Vec<BigradedElement> = elems.iter().map(|(_, _, x)| ops.dsecond_multivector(x)).collect();
    let mut ok = true;
    for (i, (lu, du, u)) in elems.iter().enumerate() {
        for (j, (lv, _, v)) in elems.iter().enumerate() {
            let mut r = ops.dsecond_multivector(&ops.crossed_bracket(u, v));
            r.sub_assign(&ops.crossed_bracket(&images[i], v));
            r.add_assign(&ops.crossed_bracket(u, &images[j]).scale_int(sign_pow(*du)));
            if !r.is_zero() {
                details.push_first("derivation", format!("({lu},{lv})"), format!("residual {}", r.display()));
                ok = false;
            }
        }
    }
    ok
}

/// Graded Jacobi with total degrees shifted down by one.
fn bracket_jacobi(
    ops: &TwilledOperators,
    details: &mut ValidationReport,
    elems: &[(String, usize, BigradedElement)],
) -> bool {
    let mut ok = true;
    let n = elems.len();
    let mut table = Vec::with_capacity(n * n);
    for (_, _, u) in elems {
        for (_, _, v) in elems {
            table.push(ops.crossed_bracket(u, v));
        }
    }
    for (i, (lu, du, u)) in elems.iter().enumerate() {
        for (j, (lv, dv, v)) in elems.iter().enumerate() {
            for (k, (lw, _, w)) in elems.iter().enumerate() {
                let mut r = ops.crossed_bracket(u, &table[j * n + k]);
                r.sub_assign(&ops.crossed_bracket(&table[i * n + j], w));
                r.sub_assign(&ops.crossed_bracket(v, &table[i * n + k]).scale_int(sign_pow((du + 1) * (dv + 1))));
                if !r.is_zero() {
                    details.push_first("jacobi", format!("({lu},{lv},{lw})"), format!("residual {}", r.display()));
                    ok = false;
                }
            }
        }
    }
    ok
}

fn dg_checks(t: &AlmostTwilled, elems: &[(String, usize, BigradedElement)], name: &'static str) -> EquivalenceReport {
    let ops = build_dprime_dsecond(t);
    let mut details = ValidationReport::new();
    let jacobi = bracket_jacobi(&ops, &mut details, elems);
    let ds2 = check_square(&mut details, "dsecond_squared", elems, |x| ops.dsecond_multivector(x));
    let derivation = derivation_of_bracket(&ops, &mut details, elems);
    let tw = is_twilled(t);
    let twilled = tw.is_valid();
    details.extend(tw.scoped("twilled_sum"));
    EquivalenceReport {
        name,
        conditions: vec![("jacobi", jacobi), ("dsecond_squared", ds2), ("derivation", derivation)],
        counterpart: ("twilled", twilled),
        details,
    }
}

/// `(Alt(L'', L'), d'')` is a differential graded Lie algebra, compared
/// with twilledness.
pub fn theorem21_check(t: &AlmostTwilled) -> EquivalenceReport {
    let elems: Vec<_> = bigraded_basis(t, t.n_prime() + t.n_second())
        .into_iter()
        .filter(|(_, _, x)| x.terms.keys().all(|(_, s)| s.len() == 1))
        .collect();
    dg_checks(t, &elems, "theorem21")
}

/// `(Alt(L'', Λ L'), [·,·]', d'')` is a differential bigraded Gerstenhaber
/// algebra, compared with twilledness.
pub fn theorem23_check(t: &AlmostTwilled) -> EquivalenceReport {
    let elems = bigraded_basis(t, t.n_prime() + t.n_second());
    dg_checks(t, &elems, "theorem23")
}

/// Rational coordinates of total degree `k` in `Alt(L'', Alt(L', A))`,
/// ordered by `q`, then `T`, then `S`, then `α`.
fn total_basis(t: &AlmostTwilled, k: usize) -> Vec<(BasisSet, BasisSet, usize)> {
    let mut out = Vec::new();
    for q in 0..=k.min(t.n_second()) {
        let p = k - q;
        if p > t.n_prime() {
            continue;
        }
        for ts in subsets_of_size(t.n_second(), q) {
            for s in subsets_of_size(t.n_prime(), p) {
                for alpha in 0..t.dim() {
                    out.push((ts, s, alpha));
                }
            }
        }
    }
    out
}

/// Matrix of `d' + d''` from total degree `k` to `k + 1`.
pub fn total_differential_matrix(t: &AlmostTwilled, k: usize) -> RatMatrix {
    let ops = build_dprime_dsecond(t);
    let target = total_basis(t, k + 1);
    let index: BTreeMap<(BasisSet, BasisSet, usize), usize> =
        target.iter().enumerate().map(|(i, key)| (*key, i)).collect();
    let cols: Vec<Vec<Rat>> = total_basis(t, k)
        .into_iter()
        .map(|(ts, s, alpha)| {
            let y = ops.total(&BigradedElement::basis_elem(t, alpha, ts, s));
            let mut col = vec![Rat::zero(); target.len()];
            for (al, t2, s2, c) in y.rational_terms() {
                col[index[&(t2, s2, al)]] = c.clone();
            }
            col
        })
        .collect();
    RatMatrix::from_columns(target.len(), &cols)
}

/// `dim H^k` of the total complex for `k ≤ max_total`.
pub fn total_cohomology_dims(t: &AlmostTwilled, max_total: usize) -> Vec<usize> {
    let n = t.n_prime() + t.n_second();
    let ranks: Vec<usize> = (0..=n.min(max_total)).map(|k| total_differential_matrix(t, k).rank()).collect();
    (0..=max_total)
        .map(|k| {
            if k > n {
                return 0;
            }
            let dim = total_basis(t, k).len();
            dim - ranks[k] - if k == 0 { 0 } else { ranks[k - 1] }
        })
        .collect()
}

/// Dimension lists of the total complex and of the twilled sum.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CohomologyComparison {
    pub total_complex: Vec<usize>,
    pub twilled_sum: Vec<usize>,
}

impl CohomologyComparison {
    pub fn agree(&self) -> bool {
        self.total_complex == self.twilled_sum
    }
}

/// Compares `H^*(Alt(L'', Alt(L', A)), d' + d'')` with `H^*(L' ⋈ L'', A)`.
pub fn theorem31_check(t: &AlmostTwilled, max_total: usize) -> Result<CohomologyComparison> {
    let r = is_twilled(t);
    if let Some(v) = r.violations.first() {
        return Err(Error::NotTwilled(v.to_string()));
    }
    let sum = twilled_sum(t);
    let twilled_sum = cohomology_dims(&sum, &LRModule::trivial(&sum), max_total)?;
    Ok(CohomologyComparison { total_complex: total_cohomology_dims(t, max_total), twilled_sum })
}

/// `Δ` on `Alt(L'', Λ L')` extending a generator on `Λ L'` over the
/// external slots: conjugation of `d'` with coefficients
/// `Alt^q(L'', A) ⊗ Λ^{n'} L'` by the contraction isomorphism.
#[derive(Clone, Debug)]
pub struct BigradedGenerator {
    ops: TwilledOperators,
    connection: TopConnection,
    /// `Alt^q(L'', A) ⊗ Λ^{n'} L'` with the connection twist, by `q`.
    twisted: Vec<LRModule>,
}

/// Sign of the bigraded extension on bidegree `(q, p)`.
pub fn bigraded_generator_sign(q: usize, p: usize) -> i32 {
    sign_pow(p) * sign_pow(q)
}

impl BigradedGenerator {
    pub fn from_connection(t: &AlmostTwilled, connection: TopConnection) -> Self {
        let ops = build_dprime_dsecond(t);
        let twisted = ops.forms_second.iter().map(|m| m.twisted(connection.omega())).collect();
        Self { ops, connection, twisted }
    }

    pub fn connection(&self) -> &TopConnection {
        &self.connection
    }

    pub fn operators(&self) -> &TwilledOperators {
        &self.ops
    }

    pub(crate) fn apply_signed(&self, x: &BigradedElement, sign: impl Fn(usize, usize) -> i32) -> BigradedElement {
        let t = &self.ops.t;
        let (np, ns) = (t.n_prime(), t.n_second());
        let mut out = x.empty_like();
        // φ: value c at (T, S) becomes ε(S, S^c) c at (T, S^c)
        let mut forms: BTreeMap<(usize, usize), AltForm> = BTreeMap::new();
        for ((ts, s), a) in &x.terms {
            let (q, p) = (ts.len(), s.len());
            if p == 0 {
                continue;
            }
            let rank = binomial(ns, q);
            let c = s.complement(np);
            let form = forms.entry((q, p)).or_insert_with(|| AltForm::zero(np - p, rank));
            let mut v = FreeElem::zero(rank, a.dim());
            v.0[subset_rank(ns, *ts)] = a.scale_int(wedge_sign(*s, c).expect("disjoint"));
            form.add_at(c, &v);
        }
        for ((q, p), form) in forms {
            let dw = ce_differential(&t.lprime, &self.twisted[q], &form).expect("module rank matches");
            let subsets = subsets_of_size(ns, q);
            for (u, v) in dw.values() {
                let back = u.complement(np);
                let eps = wedge_sign(back, *u).expect("disjoint");
                for (r, a) in v.0.iter().enumerate() {
                    out.add_term(subsets[r], back, &a.scale_int(eps * sign(q, p)));
                }
            }
        }
        out
    }

    pub fn apply(&self, x: &BigradedElement) -> BigradedElement {
        self.apply_signed(x, bigraded_generator_sign)
    }
}

/// Extends a generator of the bracket on `Λ L'` to `Alt(L'', Λ L')`.
pub fn bigraded_generator_extend(t: &AlmostTwilled, g: &GeneratorOp) -> Result<BigradedGenerator> {
    let c = generator_to_connection(&t.lprime, g)?;
    Ok(BigradedGenerator::from_connection(t, c))
}

/// Checks the generator identity with total degrees against the crossed
/// bracket on all pairs of rational basis elements.
pub fn bigraded_generator_validate(t: &AlmostTwilled, g: &BigradedGenerator) -> ValidationReport {
    validate_with(t, &g.ops, |x| g.apply(x))
}

pub(crate) fn validate_with(
    t: &AlmostTwilled,
    ops: &TwilledOperators,
    delta: impl Fn(&BigradedElement) -> BigradedElement,
) -> ValidationReport {
    let mut report = ValidationReport::new();
    let elems = bigraded_basis(t, t.n_prime() + t.n_second());
    let images: Vec<BigradedElement> = elems.iter().map(|(_, _, x)| delta(x)).collect();
    for (i, (lu, du, u)) in elems.iter().enumerate() {
        for (j, (lv, _, v)) in elems.iter().enumerate() {
            let mut rhs = delta(&bigraded_product(t, u, v));
            rhs.sub_assign(&bigraded_product(t, &images[i], v));
            rhs.sub_assign(&bigraded_product(t, u, &images[j]).scale_int(sign_pow(*du)));
            let mut r = ops.crossed_bracket(u, v);
            r.sub_assign(&rhs.scale_int(sign_pow(*du)));
            if !r.is_zero() {
                report.push_first("generator", format!("({lu},{lv})"), format!("residual {}", r.display()));
            }
        }
    }
    report
}

/// Result of the commutator test `[d'', Δ] = d''Δ + Δd''`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeakDbvReport {
    /// `[d'', Δ]` vanishes on every basis element.
    pub commutes: bool,
    /// `ΔΔ` vanishes on every basis element.
    pub exact: bool,
    pub details: ValidationReport,
}

impl WeakDbvReport {
    /// Weak differential bigraded BV algebra.
    pub fn weak(&self) -> bool {
        self.commutes
    }

    /// Differential bigraded BV algebra: weak and exact.
    pub fn full(&self) -> bool {
        self.commutes && self.exact
    }
}

pub fn weak_dbv_check(t: &AlmostTwilled, g: &GeneratorOp) -> Result<WeakDbvReport> {
    let ext = bigraded_generator_extend(t, g)?;
    Ok(weak_dbv_for(&ext))
}

pub fn weak_dbv_for(g: &BigradedGenerator) -> WeakDbvReport {
    let t = &g.ops.t;
    let mut details = ValidationReport::new();
    let elems = bigraded_basis(t, t.n_prime() + t.n_second());
    let mut commutes = true;
    let mut exact = true;
    for (label, _, x) in &elems {
        let gx = g.apply(x);
        let mut c = g.ops.dsecond_multivector(&gx);
        c.add_assign(&g.apply(&g.ops.dsecond_multivector(x)));
        if !c.is_zero() {
            details.push_first("commutator", label.clone(), format!("[d'',Δ] = {}", c.display()));
            commutes = false;
        }
        let sq = g.apply(&gx);
        if !sq.is_zero() {
            details.push_first("exactness", label.clone(), format!("ΔΔ = {}", sq.display()));
            exact = false;
        }
    }
    WeakDbvReport { commutes, exact, details }
}

/// Checks `Δ[u,v] = [Δu,v] - (-1)^{|u|}[u,Δv]` on all basis pairs.
pub fn bigraded_derivation_property_check(g: &BigradedGenerator) -> ValidationReport {
    let t = &g.ops.t;
    let mut report = ValidationReport::new();
    let elems = bigraded_basis(t, t.n_prime() + t.n_second());
    let images: Vec<BigradedElement> = elems.iter().map(|(_, _, x)| g.apply(x)).collect();
    for (i, (lu, du, u)) in elems.iter().enumerate() {
        for (j, (lv, _, v)) in elems.iter().enumerate() {
            let mut r = g.apply(&g.ops.crossed_bracket(u, v));
            r.sub_assign(&g.ops.crossed_bracket(&images[i], v));
            r.add_assign(&g.ops.crossed_bracket(u, &images[j]).scale_int(sign_pow(*du)));
            if !r.is_zero() {
                report.push_first("derivation", format!("({lu},{lv})"), format!("residual {}", r.display()));
            }
        }
    }
    report
}

/// Checks that `d'`, `d''` (complex carrier) and `d''` (multivector
/// carrier) are derivations of the bigraded product on all basis pairs.
pub fn product_derivation_report(t: &AlmostTwilled) -> ValidationReport {
    let ops = build_dprime_dsecond(t);
    let elems = bigraded_basis(t, t.n_prime() + t.n_second());
    let mut report = ValidationReport::new();
    let named: [(&str, &dyn Fn(&BigradedElement) -> BigradedElement); 3] = [
        ("dprime", &|x| ops.dprime(x)),
        ("dsecond", &|x| ops.dsecond(x)),
        ("dsecond_multivector", &|x| ops.dsecond_multivector(x)),
    ];
    for (name, d) in named {
        for (lu, du, u) in &elems {
            for (lv, _, v) in &elems {
                let mut r = d(&bigraded_product(t, u, v));
                r.sub_assign(&bigraded_product(t, &d(u), v));
                r.sub_assign(&bigraded_product(t, u, &d(v)).scale_int(sign_pow(*du)));
                if !r.is_zero() {
                    report.push_first(name, format!("({lu},{lv})"), format!("residual {}", r.display()));
                }
            }
        }
    }
    report
}
