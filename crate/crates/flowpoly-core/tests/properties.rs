use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use proptest::prelude::*;

use flowpoly_core::combinatorics::{alpha, beta, bell_marked_total, dim_marked, dim_marked_nosingleton, divides, factorial, partitions, young_dim};
use flowpoly_core::partition::{detach, State, WeightedStateSum};
use flowpoly_core::roots::{all_roots, certify_real_root, sturm_count, Bound};
use flowpoly_core::spectra::{parity_classify, Parity};
use flowpoly_core::trace::{primes_desc, trace_with_plan, EvaluationPlan};
use flowpoly_core::transfer::{build_block, deflate_trivial};
use flowpoly_core::{IntPoly, RatPoly};

/// A random state on `n` points: block assignment plus marked blocks in a
/// shuffled label order.
fn state_strategy() -> impl Strategy<Value = State> {
    (2usize..=8)
        .prop_flat_map(|n| (Just(n), proptest::collection::vec(0..n, n), proptest::collection::vec(any::<bool>(), n), any::<u64>()))
        .prop_map(|(n, owner, marked, seed)| {
            let mut blocks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for (x, &b) in owner.iter().enumerate().take(n) {
                blocks.entry(b).or_default().push(x);
            }
            let blocks: Vec<Vec<usize>> = blocks.into_values().collect();
            let chosen: Vec<usize> = (0..blocks.len()).filter(|&b| marked[b]).collect();
            let mut labels: Vec<u8> = (1..=chosen.len() as u8).collect();
            let mut s = seed;
            for i in (1..labels.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                labels.swap(i, (s >> 33) as usize % (i + 1));
            }
            let mut marks = vec![0u8; blocks.len()];
            for (b, l) in chosen.into_iter().zip(labels) {
                marks[b] = l;
            }
            State::from_blocks(&blocks, &marks, true).unwrap()
        })
}

fn d_sum(v: &WeightedStateSum, i: usize) -> WeightedStateSum {
    v.map_states(|s| detach(s, i))
}

fn j_sum(v: &WeightedStateSum, i: usize, j: usize) -> WeightedStateSum {
    v.map_states(|s| WeightedStateSum::single(s.join(i, j), RatPoly::one()))
}

fn times_q(v: &WeightedStateSum) -> WeightedStateSum {
    let mut out = WeightedStateSum::new();
    for (s, c) in v.terms() {
        out.add(*s, &RatPoly::x() * c);
    }
    out
}

fn one(s: State) -> WeightedStateSum {
    WeightedStateSum::single(s, RatPoly::one())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn detach_is_quasi_idempotent(s in state_strategy(), i in 0usize..8) {
        let i = i % s.points();
        let d = d_sum(&one(s), i);
        prop_assert_eq!(d_sum(&d, i), times_q(&d));
    }

    #[test]
    fn detaches_commute(s in state_strategy(), i in 0usize..8, j in 0usize..8) {
        let (i, j) = (i % s.points(), j % s.points());
        let a = d_sum(&d_sum(&one(s), j), i);
        let b = d_sum(&d_sum(&one(s), i), j);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn join_is_idempotent(s in state_strategy(), i in 0usize..8, j in 0usize..8) {
        let (i, j) = (i % s.points(), j % s.points());
        let once = s.join(i, j);
        prop_assert_eq!(once.join(i, j), once);
        prop_assert_eq!(once.block_of(i), once.block_of(j));
    }

    #[test]
    fn join_commutes_with_distant_detach(s in state_strategy(), i in 0usize..8, j in 0usize..8, m in 0usize..8) {
        let n = s.points();
        let (i, j, m) = (i % n, j % n, m % n);
        prop_assume!(m != i && m != j);
        let a = j_sum(&d_sum(&one(s), m), i, j);
        let b = d_sum(&j_sum(&one(s), i, j), m);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn encoding_round_trips(s in state_strategy()) {
        let bytes = s.encode();
        let (back, used) = State::decode(&bytes).unwrap();
        prop_assert_eq!(back, s);
        prop_assert_eq!(used, bytes.len());
        prop_assert_eq!(back.encode(), bytes);
        prop_assert_eq!(State::parse_dump(&s.dump()).unwrap(), s);
    }

    #[test]
    fn product_roots_are_unions(
        ints in proptest::collection::btree_set(-12i64..=12, 1..6),
        b in -6i64..=6,
        extra in 1i64..=20,
    ) {
        // Q² + bQ + c with c > b²/4 has a conjugate pair.
        let c = b * b / 4 + extra;
        let roots: Vec<i64> = ints.iter().copied().collect();
        let lin = IntPoly::from_roots(&roots);
        let quad = IntPoly::from_i64(&[c, b, 1]);
        let rs = all_roots(&(&lin * &quad), 14).unwrap();
        prop_assert_eq!(rs.roots.len(), roots.len() + 2);
        let mut real = rs.real_roots();
        real.sort_by(|x, y| x.partial_cmp(y).unwrap());
        prop_assert_eq!(real.len(), roots.len());
        for (x, r) in real.iter().zip(&roots) {
            prop_assert!((x - *r as f64).abs() < 1e-12);
        }
        let disc = (4 * c - b * b) as f64;
        let pair: Vec<_> = rs.roots.iter().filter(|r| !r.is_real()).collect();
        prop_assert_eq!(pair.len(), 2);
        for r in pair {
            prop_assert!((r.re_f64() + b as f64 / 2.0).abs() < 1e-10);
            prop_assert!((r.im_f64().abs() - disc.sqrt() / 2.0).abs() < 1e-10);
        }
    }

    #[test]
    fn certified_intervals_hold_one_root(ints in proptest::collection::btree_set(-15i64..=15, 2..7), pick in 0usize..7, w in 1i64..=4) {
        let roots: Vec<i64> = ints.iter().copied().collect();
        let p = IntPoly::from_roots(&roots);
        let r = roots[pick % roots.len()];
        // Half-width w/10 < 1/2 keeps neighbouring integer roots outside.
        let lo = BigRational::new(BigInt::from(10 * r - w), BigInt::from(10));
        let hi = BigRational::new(BigInt::from(10 * r + w), BigInt::from(10));
        let c = certify_real_root(&p, &lo, &hi, true).unwrap();
        prop_assert!(c.certified);
        prop_assert_eq!(c.sturm, Some(1));
        let found = all_roots(&p, 12).unwrap().real_roots();
        let (a, b) = (r as f64 - w as f64 / 10.0, r as f64 + w as f64 / 10.0);
        prop_assert_eq!(found.iter().filter(|&&x| x > a && x < b).count(), 1);
        prop_assert_eq!(sturm_count(&p, &Bound::NegInf, &Bound::PosInf), roots.len());
    }

    #[test]
    fn parity_is_symmetric(a1 in -5.0f64..5.0, a2 in -5.0f64..5.0, m1 in -5.0f64..5.0, m2 in -5.0f64..5.0, s in 0.1f64..10.0) {
        prop_assume!(a1.abs() > 1e-3 && a2.abs() > 1e-3 && m1.abs() > 1e-3 && m2.abs() > 1e-3);
        let p = parity_classify(a1, a2, m1, m2).unwrap();
        prop_assert_eq!(parity_classify(a2, a1, m2, m1).unwrap(), p);
        prop_assert_eq!(parity_classify(-a1 * s, -a2, m1, m2 * s).unwrap(), p);
        prop_assert_eq!(parity_classify(a1, a2, -m1, -m2).unwrap(), p);
        let expect = match ((a1 > 0.0) == (a2 > 0.0), (m1 > 0.0) == (m2 > 0.0)) {
            (true, false) => Parity::OddN,
            (false, false) => Parity::EvenN,
            (false, true) => Parity::AllN,
            (true, true) => Parity::NonReal,
        };
        prop_assert_eq!(p, expect);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn trace_is_plan_independent(k in 1usize..=3, l in 0usize..=3, n in 2usize..=4, skip in 0usize..5, extra in 0usize..4) {
        prop_assume!(l <= k + 1);
        let lam = partitions(l).pop().unwrap();
        let mut block = build_block(k, l, &lam).unwrap();
        if l > 0 {
            block = deflate_trivial(&block).unwrap();
        }
        let base = EvaluationPlan::default_for(&block, n).unwrap();
        let reference = trace_with_plan(&block, n, &base).unwrap();
        let mut other = base.clone();
        let primes = primes_desc(base.primes.len() + skip + extra);
        other.primes = primes[skip..].to_vec();
        let m = base.points.len() + extra;
        other.points = (1..=m as i64).rev().collect();
        other.scaling = vec![1; m];
        prop_assert_eq!(trace_with_plan(&block, n, &other).unwrap(), reference);
    }
}

#[test]
fn marked_counts_are_divisible() {
    for k in 0..=9 {
        for l in 0..=k {
            assert!(divides(&factorial(l), &dim_marked(k, l)), "k={k} l={l}");
            assert!(divides(&factorial(l), &dim_marked_nosingleton(k, l)), "k={k} l={l}");
        }
        let tot: BigInt = (0..=k).map(|l| dim_marked(k, l) / factorial(l)).sum();
        assert_eq!(tot, bell_marked_total(k));
    }
}

#[test]
fn beta_is_weighted_alpha_sum() {
    for l in 0..=8 {
        let s = partitions(l).iter().fold(RatPoly::zero(), |a, lam| {
            &a + &alpha(l, lam).unwrap().scale(&BigRational::from_integer(young_dim(lam)))
        });
        assert_eq!(s, beta(l), "l={l}");
    }
}
