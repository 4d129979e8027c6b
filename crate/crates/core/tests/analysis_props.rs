mod common;

use common::*;
use proptest::prelude::*;
use strongclean::analysis::{
    decide_pi_regular, decide_ring_strongly_clean, decide_strongly_clean, jclean_quadratic_criterion, sqrt_one_plus_radical,
    triangular_sweep, AuditLimits, Evidence, Route, Verdict,
};
use strongclean::factor::comaximality;
use strongclean::oracle::strongly_clean_bruteforce;
use strongclean::{Matrix, Ring};

fn finite_strategy() -> impl Strategy<Value = Ring> {
    let rings = finite_rings();
    (0..rings.len()).prop_map(move |i| rings[i].clone())
}

fn any_strategy() -> impl Strategy<Value = Ring> {
    let rings = all_rings();
    (0..rings.len()).prop_map(move |i| rings[i].clone())
}

fn random_matrix(r: &Ring, n: usize, seed: u64) -> Matrix {
    let mut g = rng(seed);
    let data = (0..n * n).map(|_| r.random_element(&mut g)).collect();
    Matrix::new(r, n, n, data)
}

#[test]
fn clean_ring_with_non_strongly_clean_matrices() {
    let z2 = build(zloc(2));
    assert!(z2.classify().is_clean);
    let d = decide_ring_strongly_clean(&z2, 2, 1000).unwrap();
    assert_eq!(d.verdict, Verdict::No);
    assert!(matches!(d.evidence, Evidence::QuadraticWitness { .. }));
}

#[test]
fn jclean_criterion_matches_exhaustive_route() {
    for r in finite_rings() {
        if r.order().unwrap().pow(2) > 1000 {
            continue;
        }
        let a = jclean_quadratic_criterion(&r).unwrap();
        let b = decide_ring_strongly_clean(&r, 2, 1_000_000).unwrap();
        assert_eq!(a.verdict, b.verdict, "{}", r.name());
        assert!(b.max_blocks() <= 3);
    }
}

#[test]
fn triangular_matrices_over_products() {
    for r in [build(zmod(6)), build(product(vec![zmod(2), zmod(2)])), build(zmod(9))] {
        let rep = triangular_sweep(&r, 2, AuditLimits::default()).unwrap();
        assert!(rep.passed(), "{}: {:?}", r.name(), rep.disagreements);
        assert_eq!(rep.routes.get("diagonal").copied(), Some(rep.instances));
    }
}

#[test]
fn square_roots_exist_over_finite_rings_with_two_a_unit() {
    for r in finite_rings() {
        if !r.is_unit(&r.from_int(2)) {
            continue;
        }
        for v in r.elements() {
            if !r.radical_membership(&r.sub(&v, &r.one())).in_jacobson {
                continue;
            }
            let s = sqrt_one_plus_radical(&r, &v).unwrap().expect("Hensel lift");
            assert_eq!(r.mul(&s, &s), v);
            assert!(r.radical_membership(&r.sub(&s, &r.one())).in_jacobson);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn routes_agree_with_brute_force(r in finite_strategy(), n in 1usize..=2, seed in any::<u64>(), companion in any::<bool>()) {
        let a = if companion {
            Matrix::companion(&random_monic(&r, n, &mut rng(seed)))
        } else {
            random_matrix(&r, n, seed)
        };
        let d = decide_strongly_clean(&a, u128::MAX).unwrap();
        let bf = strongly_clean_bruteforce(&a, u128::MAX).unwrap();
        prop_assert_eq!(d.verdict == Verdict::Yes, bf.is_some());
        prop_assert!(d.max_blocks() <= n + 1);
        if companion {
            prop_assert_eq!(d.route == Route::Gsrc, bf.is_some());
        }
    }

    #[test]
    fn pi_regular_implies_strongly_clean(r in any_strategy(), n in 1usize..=3, seed in any::<u64>()) {
        let a = if n == 3 && !r.is_finite() {
            Matrix::companion(&random_monic(&r, n, &mut rng(seed)))
        } else {
            random_matrix(&r, n, seed)
        };
        let p = decide_pi_regular(&a).unwrap();
        prop_assert!(p.max_blocks() <= n + 1);
        if p.verdict == Verdict::Yes {
            let s = decide_strongly_clean(&a, 100_000).unwrap();
            prop_assert_eq!(s.verdict, Verdict::Yes);
            let Evidence::PiRegular { gsp, .. } = &p.evidence else { unreachable!() };
            for b in &gsp.blocks {
                for x in 0..r.stalk_count() {
                    if r.restrict(&b.idempotent, x) == r.stalk_ring(x).one() {
                        let (h0, p0) = (b.cert.h0.restrict(x), b.cert.p0.restrict(x));
                        prop_assert!(comaximality(&h0, &p0).unwrap().is_some());
                    }
                }
            }
        }
    }
}
