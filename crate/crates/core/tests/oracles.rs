//! Lie algebras over Q checked against direct computations from structure
//! constants.

use lierine_core::exactla::{rat, Rat};
use lierine_core::instances;
use lierine_core::{cohomology_dims, lr_validate, LRModule, LieRinehart};
use num_traits::Zero;
use proptest::prelude::*;

type Constants = Vec<Vec<Vec<Rat>>>;

fn constants(lr: &LieRinehart) -> Constants {
    let n = lr.rank();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| lr.basis_bracket(i, j).0[k].0[0].clone()).collect()).collect())
        .collect()
}

fn jacobi_holds(c: &Constants) -> bool {
    let n = c.len();
    for (i, j, k, m) in quadruples(n) {
        let mut s = Rat::zero();
        for l in 0..n {
            s += &c[j][k][l] * &c[i][l][m];
            s += &c[k][i][l] * &c[j][l][m];
            s += &c[i][j][l] * &c[k][l][m];
        }
        if !s.is_zero() {
            return false;
        }
    }
    true
}

fn quadruples(n: usize) -> Vec<(usize, usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for m in 0..n {
                    out.push((i, j, k, m));
                }
            }
        }
    }
    out
}

fn subsets(n: usize, q: usize) -> Vec<u32> {
    (0u32..1 << n).filter(|s| s.count_ones() as usize == q).collect()
}

fn elements(s: u32) -> Vec<usize> {
    (0..32).filter(|i| s & (1 << i) != 0).collect()
}

/// `ε_S(e_k, e_rest...)` for sorted `rest`.
fn eval(s: u32, k: usize, rest: &[usize]) -> i32 {
    if rest.contains(&k) {
        return 0;
    }
    let mut set = 1u32 << k;
    for &r in rest {
        set |= 1 << r;
    }
    if set != s {
        return 0;
    }
    if rest.iter().filter(|&&r| r < k).count() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Matrix of `d: Λ^q g* → Λ^{q+1} g*` for trivial coefficients.
fn ce_matrix(c: &Constants, q: usize) -> Vec<Vec<Rat>> {
    let n = c.len();
    let (cols, rows) = (subsets(n, q), subsets(n, q + 1));
    rows.iter()
        .map(|&t| {
            let xs = elements(t);
            cols.iter()
                .map(|&s| {
                    let mut v = Rat::zero();
                    for i in 0..xs.len() {
                        for j in i + 1..xs.len() {
                            let rest: Vec<usize> = (0..xs.len()).filter(|&m| m != i && m != j).map(|m| xs[m]).collect();
                            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                            for (k, ck) in c[xs[i]][xs[j]].iter().enumerate() {
                                let e = eval(s, k, &rest);
                                if e != 0 {
                                    v += ck * rat((sign * e) as i64);
                                }
                            }
                        }
                    }
                    v
                })
                .collect()
        })
        .collect()
}

fn rank(mut m: Vec<Vec<Rat>>) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let f = &m[i][col] / &m[r][col];
                let pivot = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(pivot) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

fn oracle_dims(c: &Constants) -> Vec<usize> {
    let n = c.len();
    let ranks: Vec<usize> = (0..=n).map(|q| if q < n { rank(ce_matrix(c, q)) } else { 0 }).collect();
    (0..=n)
        .map(|q| {
            let into = if q == 0 { 0 } else { ranks[q - 1] };
            subsets(n, q).len() - ranks[q] - into
        })
        .collect()
}

fn library_dims(lr: &LieRinehart) -> Vec<usize> {
    cohomology_dims(lr, &LRModule::trivial(lr), lr.rank()).unwrap()
}

#[test]
fn named_algebras_match_the_oracle() {
    for (lr, expected) in [
        (instances::sl2(), vec![1, 0, 0, 1]),
        (instances::book(), vec![1, 1, 0]),
        (instances::heisenberg(), vec![1, 2, 2, 1]),
        (instances::abelian(3), vec![1, 3, 3, 1]),
    ] {
        let c = constants(&lr);
        assert!(jacobi_holds(&c));
        assert_eq!(oracle_dims(&c), expected);
        assert_eq!(library_dims(&lr), expected);
    }
}

#[test]
fn oracle_differential_squares_to_zero_on_sl2() {
    let c = constants(&instances::sl2());
    for q in 0..2 {
        let (a, b) = (ce_matrix(&c, q), ce_matrix(&c, q + 1));
        for row in &b {
            for col in 0..a[0].len() {
                let v: Rat = row.iter().zip(&a).map(|(x, r)| x * &r[col]).sum();
                assert!(v.is_zero());
            }
        }
    }
}

fn antisymmetric(n: usize) -> impl Strategy<Value = Vec<(usize, usize, usize, i64)>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let len = pairs.len() * n;
    proptest::collection::vec(-1i64..=1, len).prop_map(move |vals| {
        let mut out = Vec::new();
        for (p, &(i, j)) in pairs.iter().enumerate() {
            for k in 0..n {
                let v = vals[p * n + k];
                if v != 0 {
                    out.push((i, j, k, v));
                }
            }
        }
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jacobi_verdict_matches_the_oracle(entries in antisymmetric(3)) {
        let lr = instances::lie_algebra(3, &entries);
        let c = constants(&lr);
        let report = lr_validate(&lr);
        prop_assert_eq!(report.is_valid(), jacobi_holds(&c));
        if !report.is_valid() {
            prop_assert!(report.has("jacobi"));
        }
    }

    #[test]
    fn cohomology_matches_the_oracle(entries in antisymmetric(3)) {
        let lr = instances::lie_algebra(3, &entries);
        let c = constants(&lr);
        prop_assume!(jacobi_holds(&c));
        prop_assert_eq!(library_dims(&lr), oracle_dims(&c));
    }
}
