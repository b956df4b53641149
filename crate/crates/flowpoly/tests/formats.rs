use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use flowpoly::cache::{decode, encode, key_string};
use flowpoly::formats::{factor_small, FlowFile};
use flowpoly_core::trace::TraceKey;
use flowpoly_core::{IntPoly, RatPoly};

proptest! {
    #[test]
    fn cache_records_round_trip(
        k in 1usize..8, l in 0usize..8, n in 1usize..40, deflated in any::<bool>(),
        coeffs in proptest::collection::vec((-10i64.pow(12)..10i64.pow(12), 1i64..10i64.pow(6)), 0..12),
        flip in any::<usize>(),
    ) {
        let key = TraceKey { k, l, lam: format!("({l})"), deflated, n };
        let poly = RatPoly::from_coeffs(coeffs.iter().map(|&(a, b)| BigRational::new(BigInt::from(a), BigInt::from(b))).collect());
        let bytes = encode(&key, &poly);
        let (k2, p2) = decode(&bytes).unwrap();
        prop_assert_eq!(k2, key_string(&key));
        prop_assert_eq!(p2, poly);
        let mut bad = bytes.clone();
        let i = flip % bad.len();
        bad[i] ^= 0x40;
        prop_assert!(decode(&bad).is_err());
        prop_assert!(decode(&bytes[..bytes.len() - 1]).is_err());
    }

    #[test]
    fn flow_files_round_trip(roots in proptest::collection::vec(-4i64..=6, 0..8), tail in proptest::collection::vec(-50i64..=50, 1..5)) {
        let p = &IntPoly::from_roots(&roots) * &IntPoly::from_i64(&tail);
        prop_assume!(!p.is_zero());
        let f = FlowFile::from_poly(&p);
        let json = serde_json::to_string(&f).unwrap();
        let back: FlowFile = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back.poly().unwrap(), p.clone());
        let (small, rest) = factor_small(&p);
        let mut rebuilt = rest;
        for (r, m) in small {
            prop_assert!((1..=3).contains(&r));
            for _ in 0..m {
                rebuilt = &rebuilt * &IntPoly::from_roots(&[r]);
            }
        }
        prop_assert_eq!(rebuilt, p);
    }
}
