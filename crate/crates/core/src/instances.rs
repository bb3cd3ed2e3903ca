//! Small named instances used by tests, fixtures and the documentation.

use crate::calgebra::{AElem, CommAlg, Derivation};
use crate::exactla::{rat, Rat};
use crate::lrcore::{FreeElem, LRModule, LieRinehart};
use crate::twilled::AlmostTwilled;

/// A Lie algebra over `ℚ` from sparse structure constants
/// `(i, j, k, c)`: `[e_i, e_j] += c e_k`, with `[e_j, e_i]` filled in by
/// antisymmetry.
pub fn lie_algebra(n: usize, constants: &[(usize, usize, usize, i64)]) -> LieRinehart {
    let mut table = vec![vec![vec![rat(0); n]; n]; n];
    for &(i, j, k, c) in constants {
        table[i][j][k] += rat(c);
        table[j][i][k] -= rat(c);
    }
    LieRinehart::lie_algebra_from_constants(&table).expect("well-formed constants")
}

/// The same, without filling in the antisymmetric partner.
pub fn raw_lie_algebra(n: usize, constants: &[(usize, usize, usize, Rat)]) -> LieRinehart {
    let mut table = vec![vec![vec![rat(0); n]; n]; n];
    for (i, j, k, c) in constants {
        table[*i][*j][*k] += c;
    }
    LieRinehart::lie_algebra_from_constants(&table).expect("well-formed constants")
}

/// Abelian Lie algebra `ℚ^n`.
pub fn abelian(n: usize) -> LieRinehart {
    LieRinehart::abelian(CommAlg::rationals(), n)
}

/// `sl₂` with basis `(H, E, F)`: `[H,E] = 2E`, `[H,F] = -2F`, `[E,F] = H`.
pub fn sl2() -> LieRinehart {
    lie_algebra(3, &[(0, 1, 1, 2), (0, 2, 2, -2), (1, 2, 0, 1)])
}

/// The non-abelian two-dimensional Lie algebra `[e_0, e_1] = e_1`.
pub fn book() -> LieRinehart {
    lie_algebra(2, &[(0, 1, 1, 1)])
}

/// Heisenberg algebra `[e_0, e_1] = e_2`.
pub fn heisenberg() -> LieRinehart {
    lie_algebra(3, &[(0, 1, 2, 1)])
}

/// Rank one over `ℚ[x]/(x^k)` generated by the Euler derivation `E = x d/dx`:
/// `[E, E] = 0`, `ρ(E) = x d/dx`. This is the free part of `Der(ℚ[x]/(x^k))`
/// that is a Lie-Rinehart algebra of finite rank over the truncated algebra.
pub fn euler_truncated(k: usize) -> LieRinehart {
    rank_one(CommAlg::truncated_polynomials(k), Derivation::euler(k))
}

/// Rank one over `ℚ[x]/(x^k)` with anchor the coefficientwise map
/// `x^j ↦ j x^{j-1}`. Rejected by [`crate::lr_validate`] for `k ≥ 2`
/// because that map is not a derivation of the truncated algebra.
pub fn ddx_truncated(k: usize) -> LieRinehart {
    rank_one(CommAlg::truncated_polynomials(k), Derivation::d_dx(k))
}

/// Free rank one `L = A·e` with `ρ(e) = D`.
pub fn rank_one(alg: CommAlg, d: Derivation) -> LieRinehart {
    let dim = alg.dim();
    LieRinehart::new(alg, vec![vec![FreeElem::zero(1, dim)]], vec![d]).expect("rank one")
}

/// Abelian rank two over `ℚ[x]/(x²)` with `ρ(e_0) = x d/dx`, `ρ(e_1) = 0`.
pub fn abelian_over_dual_numbers() -> LieRinehart {
    let alg = CommAlg::truncated_polynomials(2);
    let z = || FreeElem::zero(2, 2);
    LieRinehart::new(alg, vec![vec![z(), z()], vec![z(), z()]], vec![Derivation::euler(2), Derivation::zero(2)])
        .expect("rank two")
}

/// `ℚ` as an element of any algebra of dimension `dim` (basis index 0 is
/// not assumed to be the unit; the algebra's unit is used).
pub fn constant(alg: &CommAlg, c: i64) -> AElem {
    alg.constant(&rat(c))
}

/// The matched pair of a Lie bialgebra over `ℚ`: `L' = g`, `L'' = g*` with
/// the dual bracket, each acting on the other by the coadjoint action.
pub fn lie_bialgebra_pair(g: &LieRinehart, gstar: &LieRinehart) -> crate::Result<AlmostTwilled> {
    let p_on_s = LRModule::adjoint(g).dual_exterior_power(g, 1);
    let s_on_p = LRModule::adjoint(gstar).dual_exterior_power(gstar, 1);
    AlmostTwilled::new(g.clone(), gstar.clone(), p_on_s, s_on_p)
}

/// The book algebra `[e_0, e_1] = e_1` with dual bracket `[ε_0, ε_1] = ε_1`.
pub fn book_bialgebra_pair() -> AlmostTwilled {
    lie_bialgebra_pair(&book(), &book()).expect("same rank")
}

/// The book pair with the action of `L'` on `L''` negated.
pub fn book_pair_flipped() -> AlmostTwilled {
    let t = book_bialgebra_pair();
    let flipped = t.act_p_on_s().scaled(-1);
    AlmostTwilled::new(t.lprime().clone(), t.lsecond().clone(), flipped, t.act_s_on_p().clone()).expect("shapes")
}

/// Rank one summands `L' = ℚe`, `L'' = ℚf` with `e·f = f`, `f·e = e`.
pub fn rank_one_pair() -> AlmostTwilled {
    let (l1, l2) = (abelian(1), abelian(1));
    let one = || FreeElem(vec![AElem::from_ints(&[1])]);
    let a = LRModule::new(&l1, 1, vec![vec![one()]]).expect("rank one");
    let b = LRModule::new(&l2, 1, vec![vec![one()]]).expect("rank one");
    AlmostTwilled::new(l1, l2, a, b).expect("shapes")
}

/// Two rank one algebras over `ℚ[x]/(x²)`: `L' = A·e` with `ρ(e) = x d/dx`,
/// `L'' = A·f` with `ρ(f) = 0`, `e·f = 0`, `f·e = x e`.
pub fn dual_numbers_pair() -> AlmostTwilled {
    let alg = CommAlg::truncated_polynomials(2);
    let l1 = rank_one(alg.clone(), Derivation::euler(2));
    let l2 = rank_one(alg.clone(), Derivation::zero(2));
    let a = LRModule::zero_action(&l1, 1);
    let b = LRModule::new(&l2, 1, vec![vec![FreeElem(vec![alg.basis(1)])]]).expect("rank one");
    AlmostTwilled::new(l1, l2, a, b).expect("shapes")
}

/// The book pair with the action of `L''` on `L'` set to zero. Both actions
/// are flat; the sum is not twilled.
pub fn book_pair_one_sided() -> AlmostTwilled {
    let t = book_bialgebra_pair();
    let zero = LRModule::zero_action(t.lsecond(), 2);
    AlmostTwilled::new(t.lprime().clone(), t.lsecond().clone(), t.act_p_on_s().clone(), zero).expect("shapes")
}
