use num_bigint::BigInt;
use num_rational::BigRational;

use flowpoly_core::combinatorics::{dim_marked_nosingleton, factorial, n_trivial, partitions, young_dim};
use flowpoly_core::partition::enumerate_basis;
use flowpoly_core::structure::check_all;
use flowpoly_core::trace::{degree_bound, trace_exact_at, trace_polynomial, NoCache};
use flowpoly_core::transfer::{build_block, deflate_trivial};

#[test]
fn structure_lemmas_through_k4() {
    for k in 1..=4 {
        let checks = check_all(k).unwrap();
        assert!(!checks.is_empty());
        for c in checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}

#[test]
fn basis_cardinalities() {
    for k in 1..=6 {
        for l in 0..=k + 1 {
            assert_eq!(BigInt::from(enumerate_basis(k, l).len()), dim_marked_nosingleton(k + 1, l), "k={k} l={l}");
        }
    }
}

#[test]
fn block_dimensions() {
    for k in 1..=5 {
        for l in 0..=k + 1 {
            for lam in partitions(l) {
                let b = build_block(k, l, &lam).unwrap();
                let want = dim_marked_nosingleton(k + 1, l) / factorial(l) * young_dim(&lam);
                assert_eq!(BigInt::from(b.dimension()), want, "k={k} ({l},{lam})");
                assert_eq!(b.expected_dimension(), want);
                if l > 0 {
                    let d = deflate_trivial(&b).unwrap();
                    assert_eq!(BigInt::from(d.removed()), n_trivial(k, l) * young_dim(&lam), "k={k} ({l},{lam})");
                    assert_eq!(d.dimension() + d.removed(), b.dimension());
                }
            }
        }
    }
}

#[test]
fn traces_match_exact_evaluation() {
    // A polynomial of degree ≤ d agreeing at d + 1 non-integer points is exact.
    for k in 1..=3 {
        for l in 0..=k + 1 {
            for lam in partitions(l) {
                let mut block = build_block(k, l, &lam).unwrap();
                if l > 0 && l <= k {
                    block = deflate_trivial(&block).unwrap();
                }
                for n in [1, 2, 4, 6] {
                    let t = trace_polynomial(&block, n, &NoCache).unwrap();
                    let d = degree_bound(k, l, n);
                    assert!(t.poly.degree().is_none_or(|x| x <= d), "degree: k={k} ({l},{lam}) n={n}");
                    if l <= 1 && block.dimension() > 0 {
                        assert_eq!(t.poly.degree(), Some(d), "bound attained: k={k} ({l},{lam}) n={n}");
                    }
                    if block.dimension() > 12 && n > 4 {
                        continue;
                    }
                    for i in 0..=d {
                        let x = BigRational::new(BigInt::from(2 * i as i64 - 5), BigInt::from(3));
                        assert_eq!(t.poly.eval(&x), trace_exact_at(&block, n, &x).unwrap(), "k={k} ({l},{lam}) n={n} Q={x}");
                    }
                }
            }
        }
    }
}
