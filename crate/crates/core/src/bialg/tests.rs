use super::*;
use crate::basis::BasisSet;
use crate::instances::{self, lie_algebra};
use proptest::prelude::*;

fn q(xs: &[i64]) -> FreeElem {
    FreeElem(xs.iter().map(|&x| AElem::from_ints(&[x])).collect())
}

/// Standard bialgebra structure on `sl₂ = (H, E, F)`:
/// `[ε_E, ε_H] = ε_E`, `[ε_F, ε_H] = ε_F`.
fn sl2_standard_dual() -> LieRinehart {
    lie_algebra(3, &[(1, 0, 1, 1), (2, 0, 2, 1)])
}

/// `[ε_E, ε_F] = ε_H`; not compatible with the bracket of `sl₂`.
fn sl2_bad_dual() -> LieRinehart {
    lie_algebra(3, &[(1, 2, 0, 1)])
}

#[test]
fn dual_action_examples() {
    let sl2 = instances::sl2();
    let triv = LRModule::trivial(&sl2);
    assert_eq!(dual_module_action(&sl2, &triv).unwrap(), triv);
    let co = dual_module_action(&sl2, &LRModule::adjoint(&sl2)).unwrap();
    assert!(module_validate(&sl2, &co).is_valid());
    // coadjoint of H on ε_E: -(ε_E∘ad_H) = -2 ε_E
    assert_eq!(co.basis_action(0, 1), &q(&[0, -2, 0]));

    let l = instances::abelian(1);
    let m = LRModule::new(&l, 1, vec![vec![q(&[1])]]).unwrap();
    let dual = dual_module_action(&l, &m).unwrap();
    assert_eq!(dual.basis_action(0, 0), &q(&[-1]));

    let book = instances::book();
    let bad = LRModule::new(&book, 1, vec![vec![q(&[0])], vec![q(&[1])]]).unwrap();
    assert!(matches!(dual_module_action(&book, &bad), Err(Error::NotFlat(_))));
}

#[test]
fn pairing_and_involution() {
    let cases = [
        (instances::sl2(), LRModule::adjoint(&instances::sl2())),
        (instances::euler_truncated(3), LRModule::trivial(&instances::euler_truncated(3))),
        (instances::euler_truncated(2), LRModule::adjoint(&instances::euler_truncated(2))),
        (instances::abelian_over_dual_numbers(), LRModule::trivial(&instances::abelian_over_dual_numbers())),
    ];
    for (lr, m) in cases {
        let dual = dual_module_action(&lr, &m).unwrap();
        assert!(pairing_report(&lr, &m, &dual).is_valid());
        assert_eq!(dual_module_action(&lr, &dual).unwrap(), m);
    }
    let sl2 = instances::sl2();
    let m = LRModule::adjoint(&sl2);
    assert!(pairing_report(&sl2, &m, &m).has("pairing"));
}

#[test]
fn semidirect_examples() {
    let book = instances::book();
    let s = semidirect_product(&book, &LRModule::zero_action(&book, 2)).unwrap();
    let expected = lie_algebra(4, &[(0, 1, 1, 1)]);
    assert_eq!(s, expected);

    let sl2 = instances::sl2();
    let co = dual_module_action(&sl2, &LRModule::adjoint(&sl2)).unwrap();
    let s = semidirect_product(&sl2, &co).unwrap();
    assert_eq!(s.rank(), 6);
    assert!(lr_validate(&s).is_valid());
    assert_eq!(s.basis_bracket(0, 4), &FreeElem::basis_times(6, 4, AElem::from_ints(&[-2])));
    assert!(s.basis_bracket(3, 4).is_zero());

    // Der(A) ⋉ A* over ℚ[x]/(x²), with Der(A) replaced by A·(x d/dx)
    let lr = instances::euler_truncated(2);
    let astar = dual_module_action(&lr, &LRModule::trivial(&lr)).unwrap();
    let s = semidirect_product(&lr, &astar).unwrap();
    assert_eq!(s.rank(), 2);
    assert!(lr_validate(&s).is_valid());
    assert_eq!(s.anchor(0), lr.anchor(0));
    assert!(s.anchor(1).is_zero());

    let bad = LRModule::new(&book, 1, vec![vec![q(&[0])], vec![q(&[1])]]).unwrap();
    assert!(matches!(semidirect_product(&book, &bad), Err(Error::NotFlat(_))));
}

#[test]
fn permutation_relabels() {
    let book = instances::book();
    let p = permute_basis(&book, &[1, 0]).unwrap();
    assert_eq!(p, lie_algebra(2, &[(1, 0, 0, 1)]));
    assert!(permute_basis(&book, &[0, 0]).is_err());
}

#[test]
fn bialgebra_examples() {
    let book = instances::book();
    let r = bialgebra_check(&DualPair::new(book.clone(), instances::abelian(2)).unwrap(), 2);
    assert!(r.holds && r.all_degrees && r.witness.is_none());

    // d_* on L for D = book: (d_*e_1)(d_0, d_1) = -e_1([d_0, d_1]) = -1
    let pair = DualPair::new(book.clone(), book.clone()).unwrap();
    let one = book.alg().one();
    let e = |i| Multivector::basis(&book, BasisSet::singleton(i));
    assert!(dual_differential(&pair, &e(0)).is_zero());
    assert_eq!(
        dual_differential(&pair, &e(1)),
        Multivector::term(&book, BasisSet::from_indices(&[0, 1]).unwrap(), one.scale_int(-1))
    );
    let r = bialgebra_check(&pair, 2);
    assert!(r.holds && r.agree());

    let r = bialgebra_check(&DualPair::new(instances::sl2(), sl2_bad_dual()).unwrap(), 3);
    assert!(!r.holds && r.agree());
    let w = r.witness.unwrap();
    assert_eq!(w.degree, 1);
    assert!(w.pair.starts_with("(a0e{"));

    let r = bialgebra_check(&DualPair::new(instances::sl2(), sl2_standard_dual()).unwrap(), 3);
    assert!(r.holds && r.agree());

    // over the dual numbers: D = A·f with zero anchor, L = A·E
    let lr = instances::euler_truncated(2);
    let d = LieRinehart::abelian(lr.alg().clone(), 1);
    let r = bialgebra_check(&DualPair::new(lr.clone(), d).unwrap(), 1);
    assert!(r.holds && r.agree());
    let r = bialgebra_check(&DualPair::new(lr.clone(), lr.clone()).unwrap(), 1);
    assert!(r.agree());

    assert!(DualPair::new(book, instances::abelian(3)).is_err());
}

#[test]
fn theorem41_and_corollary42() {
    let positive = [
        instances::book_bialgebra_pair(),
        instances::rank_one_pair(),
        instances::dual_numbers_pair(),
        AlmostTwilled::direct_sum(instances::sl2(), instances::abelian(0)).unwrap(),
        AlmostTwilled::direct_sum(instances::book(), instances::abelian(1)).unwrap(),
    ];
    for t in &positive {
        let r41 = theorem41_check(t).unwrap();
        assert!(r41.left() && r41.right(), "{:?}", r41.details);
        let r42 = corollary42_check(t).unwrap();
        assert!(r42.left() && r42.right(), "{:?}", r42.details);
    }
    let bad = instances::book_pair_one_sided();
    assert!(bad.flatness_report().is_valid());
    let r41 = theorem41_check(&bad).unwrap();
    assert!(!r41.left() && !r41.right() && r41.holds());
    let r42 = corollary42_check(&bad).unwrap();
    assert!(!r42.left() && !r42.right() && r42.holds());
    assert!(r42.details.has("bialgebra"));
    // the flipped pair is not even flat
    assert!(matches!(corollary42_check(&instances::book_pair_flipped()), Err(Error::NotFlat(_))));
}

#[test]
fn matched_pairs_from_bialgebras() {
    let sl2 = instances::sl2();
    assert!(matched_pair_from_lie_bialgebra(&sl2, &instances::abelian(3)).is_ok());
    assert!(matched_pair_from_lie_bialgebra(&instances::book(), &instances::abelian(2)).is_ok());
    let t = matched_pair_from_lie_bialgebra(&instances::book(), &instances::book()).unwrap();
    assert_eq!(t, instances::book_bialgebra_pair());
    assert!(matched_pair_from_lie_bialgebra(&sl2, &sl2_standard_dual()).is_ok());
    assert!(matches!(matched_pair_from_lie_bialgebra(&sl2, &sl2_bad_dual()), Err(Error::NotBialgebra(_))));
    let no_jacobi = lie_algebra(3, &[(0, 1, 1, 2), (0, 2, 2, -2), (1, 2, 0, 1), (1, 2, 1, 1)]);
    match matched_pair_from_lie_bialgebra(&sl2, &no_jacobi) {
        Err(Error::NotBialgebra(m)) => assert!(m.starts_with("co-Jacobi")),
        other => panic!("{other:?}"),
    }
    let over_dual = instances::euler_truncated(2);
    assert!(matches!(matched_pair_from_lie_bialgebra(&over_dual, &over_dual), Err(Error::Unsupported(_))));
}

/// Commuting actions `e_0 ↦ M`, `e_1 ↦ c_0 + c_1 M` on `ℚ^r` for the
/// abelian rank-two Lie algebra.
fn commuting_module(r: usize, entries: &[i64], c: (i64, i64)) -> (LieRinehart, LRModule) {
    let l = instances::abelian(2);
    let m: Vec<Vec<i64>> = (0..r).map(|i| entries[i * r..(i + 1) * r].to_vec()).collect();
    let col0 = (0..r).map(|j| q(&(0..r).map(|i| m[i][j]).collect::<Vec<_>>())).collect::<Vec<_>>();
    let col1 = (0..r)
        .map(|j| q(&(0..r).map(|i| c.1 * m[i][j] + if i == j { c.0 } else { 0 }).collect::<Vec<_>>()))
        .collect::<Vec<_>>();
    let module = LRModule::new(&l, r, vec![col0, col1]).unwrap();
    (l, module)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn flat_modules_give_valid_semidirect_products(
        entries in prop::collection::vec(-3i64..=3, 4),
        c0 in -2i64..=2, c1 in -2i64..=2,
    ) {
        let (l, m) = commuting_module(2, &entries, (c0, c1));
        prop_assert!(module_validate(&l, &m).is_valid());
        let dual = dual_module_action(&l, &m).unwrap();
        prop_assert!(pairing_report(&l, &m, &dual).is_valid());
        prop_assert_eq!(&dual_module_action(&l, &dual).unwrap(), &m);
        let s = semidirect_product(&l, &m).unwrap();
        prop_assert!(lr_validate(&s).is_valid());
    }

    #[test]
    fn bialgebra_forms_agree_on_random_duals(
        coeffs in prop::collection::vec(-1i64..=1, 3),
    ) {
        // D = span(d_0, d_1, d_2) with [d_0,d_1] = a d_2, [d_0,d_2] = b d_2,
        // [d_1,d_2] = c d_2 when that satisfies Jacobi
        let d = lie_algebra(3, &[(0, 1, 2, coeffs[0]), (0, 2, 2, coeffs[1]), (1, 2, 2, coeffs[2])]);
        prop_assume!(lr_validate(&d).is_valid());
        for l in [instances::sl2(), instances::heisenberg()] {
            let r = bialgebra_check(&DualPair::new(l, d.clone()).unwrap(), 3);
            prop_assert!(r.agree());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn biconditionals_agree_on_random_flat_data(
        a in -2i64..=2,
        m in prop::collection::vec(-1i64..=1, 4),
    ) {
        // L' = book, L'' = ℚf, e_0·f = a f, e_1·f = 0, f·e_j = M e_j
        let book = instances::book();
        let l2 = instances::abelian(1);
        let p_on_s = LRModule::new(&book, 1, vec![vec![q(&[a])], vec![q(&[0])]]).unwrap();
        let s_on_p = LRModule::new(&l2, 2, vec![vec![q(&[m[0], m[1]]), q(&[m[2], m[3]])]]).unwrap();
        let t = AlmostTwilled::new(book, l2, p_on_s, s_on_p).unwrap();
        prop_assert!(t.flatness_report().is_valid());
        let twilled = is_twilled(&t).is_valid();
        let r42 = corollary42_check(&t).unwrap();
        prop_assert!(r42.holds());
        prop_assert_eq!(r42.right(), twilled);
        let r41 = theorem41_check(&t).unwrap();
        prop_assert!(r41.holds());
        prop_assert!(crate::twilled::theorem14_check(&t).holds());
        prop_assert!(theorem23_check(&t).holds());
    }
}
