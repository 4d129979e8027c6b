mod common;

use common::*;
use proptest::prelude::*;
use strongclean::Ring;

fn ring_strategy() -> impl Strategy<Value = Ring> {
    let rings = all_rings();
    (0..rings.len()).prop_map(move |i| rings[i].clone())
}

#[test]
fn primitive_idempotents_are_complete_orthogonal() {
    for r in all_rings() {
        let set = r.pierce_decomposition().idempotents;
        assert!(r.is_complete_orthogonal(&set), "{}", r.name());
        for (i, e) in set.iter().enumerate() {
            assert_eq!(r.mul(e, e), *e);
            for f in &set[i + 1..] {
                assert!(r.is_zero(&r.mul(e, f)));
            }
        }
    }
}

#[test]
fn every_stalk_is_local() {
    for r in all_rings() {
        for i in 0..r.stalk_count() {
            assert!(r.stalk_ring(i).is_local(), "{} stalk {i}", r.name());
        }
        assert!(r.classify().is_clean);
    }
}

#[test]
fn unit_test_matches_inverse_search_on_tables() {
    for r in finite_rings().into_iter().filter(|r| r.has_table()) {
        for a in r.elements() {
            let has_inverse = r.elements().any(|b| r.is_one(&r.mul(&a, &b)));
            assert_eq!(r.is_unit(&a), has_inverse, "{} {}", r.name(), r.display(&a));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn arithmetic_commutes_with_restriction(r in ring_strategy(), seed in any::<u64>()) {
        let mut g = rng(seed);
        let (a, b) = (r.random_element(&mut g), r.random_element(&mut g));
        for i in 0..r.stalk_count() {
            let s = r.stalk_ring(i);
            let (ax, bx) = (r.restrict(&a, i), r.restrict(&b, i));
            prop_assert_eq!(r.restrict(&r.mul(&a, &b), i), s.mul(&ax, &bx));
            prop_assert_eq!(r.restrict(&r.add(&a, &b), i), s.add(&ax, &bx));
        }
    }

    #[test]
    fn glue_inverts_restriction(r in ring_strategy(), seed in any::<u64>()) {
        let mut g = rng(seed);
        let a = r.random_element(&mut g);
        let prim = r.pierce_decomposition().idempotents;
        let blocks: Vec<_> = prim.iter().enumerate().map(|(i, e)| (e.clone(), r.restrict(&a, i))).collect();
        let glued = r.pierce_glue(&blocks).unwrap();
        prop_assert_eq!(&glued, &a);
        for (i, (_, v)) in blocks.iter().enumerate() {
            prop_assert_eq!(&r.restrict(&glued, i), v);
        }
    }

    #[test]
    fn nil_radical_is_stalkwise(r in ring_strategy(), seed in any::<u64>()) {
        let mut g = rng(seed);
        let a = r.random_element(&mut g);
        let stalkwise = (0..r.stalk_count()).all(|i| r.stalk_ring(i).is_nilpotent(&r.restrict(&a, i)));
        prop_assert_eq!(r.radical_membership(&a).in_nil, stalkwise);
        prop_assert_eq!(r.is_nilpotent(&a), stalkwise);
    }

    #[test]
    fn json_round_trip(r in ring_strategy(), seed in any::<u64>()) {
        let mut g = rng(seed);
        let a = r.random_element(&mut g);
        prop_assert_eq!(r.from_json(&r.to_json(&a)).unwrap(), a.clone());
        prop_assert_eq!(r.from_global_json(&r.global_json(&a)).unwrap(), a);
    }
}

#[test]
fn nil_radical_exhaustive_on_finite_rings() {
    for r in finite_rings() {
        for a in r.elements() {
            let nil = (1..=8).any(|k| r.is_zero(&r.pow(&a, k)));
            assert_eq!(r.radical_membership(&a).in_nil, nil, "{} {}", r.name(), r.display(&a));
        }
    }
}
