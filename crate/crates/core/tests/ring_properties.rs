//! Ring axioms, normal-form idempotence and rewrite confluence on random samples.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use weaklift::rings::{ReductionOrder, Relation, Ring};

fn rings() -> Vec<Ring> {
    let z = Ring::integers();
    let f25 = Ring::finite_field(5, 2).unwrap();
    vec![
        Ring::integers_mod(9).unwrap(),
        Ring::galois(2, 2, 2).unwrap(),
        Ring::galois(3, 2, 2).unwrap(),
        Ring::galois(2, 3, 5).unwrap(),
        Ring::galois(3, 3, 4).unwrap(),
        Ring::finite_field(3, 40).unwrap(),
        Ring::finite_field(197, 12).unwrap(),
        Ring::ramified_tower(5, 2).unwrap(),
        Ring::ramified_tower(7, 1).unwrap(),
        Ring::quotient(&z, &["j"], vec![Relation::modulus("j", vec![1, 1, 1])]).unwrap(),
        Ring::quotient(&z, &["alpha"], vec![Relation::modulus("alpha", vec![5, 5, 1])]).unwrap(),
        Ring::quotient(&z, &["alpha", "u"], vec![]).unwrap(),
        Ring::quotient(
            &f25,
            &["alpha", "x1", "x2"],
            vec![
                Relation::nilpotent("alpha", 2),
                Relation::annihilate("alpha", "x1"),
                Relation::annihilate("alpha", "x2"),
            ],
        )
        .unwrap(),
        Ring::quotient(
            &Ring::galois(2, 2, 1).unwrap(),
            &["j", "e", "f"],
            vec![
                Relation::modulus("j", vec![1, 1, 1]),
                Relation::nilpotent("e", 3),
                Relation::annihilate("e", "f"),
            ],
        )
        .unwrap(),
    ]
}

fn check_axioms(r: &Ring, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = r.random_elem(&mut rng, 50);
    let b = r.random_elem(&mut rng, 50);
    let c = r.random_elem(&mut rng, 50);
    assert_eq!(r.add(&r.add(&a, &b), &c), r.add(&a, &r.add(&b, &c)));
    assert_eq!(r.mul(&r.mul(&a, &b), &c), r.mul(&a, &r.mul(&b, &c)));
    assert_eq!(r.mul(&a, &r.add(&b, &c)), r.add(&r.mul(&a, &b), &r.mul(&a, &c)));
    assert_eq!(r.mul(&a, &b), r.mul(&b, &a));
    assert_eq!(r.add(&a, &b), r.add(&b, &a));
    assert_eq!(r.add(&a, &r.neg(&a)), r.zero());
    assert_eq!(r.mul(&a, &r.one()), a);
    for x in [&a, &r.mul(&a, &b)] {
        for order in [ReductionOrder::ModulusFirst, ReductionOrder::AnnihilationFirst] {
            assert_eq!(&r.normalize_with(x, order), x);
        }
        assert_eq!(r.from_payload(&r.to_payload(x)).unwrap(), *x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 10_000, .. ProptestConfig::default() })]

    #[test]
    fn axioms_hold_on_every_ring(seed in any::<u64>()) {
        for r in rings() {
            check_axioms(&r, seed);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 2_000, .. ProptestConfig::default() })]

    /// Unreduced products of variables reduce to the same normal form whichever
    /// rule family is applied first.
    #[test]
    fn quotient_rewriting_is_confluent(
        exps in proptest::collection::vec(proptest::collection::vec(0u32..7, 3), 1..6),
        coeffs in proptest::collection::vec(-20i64..20, 6),
    ) {
        for r in rings().into_iter().filter(|r| r.var_names().len() == 3) {
            let base = r.base().unwrap().clone();
            let raw: Vec<_> = exps.iter().zip(&coeffs).map(|(e, c)| (e.clone(), base.from_i64(*c))).collect();
            let x = r.from_terms(raw.clone(), ReductionOrder::ModulusFirst).unwrap();
            let y = r.from_terms(raw, ReductionOrder::AnnihilationFirst).unwrap();
            prop_assert_eq!(&x, &y);
            prop_assert_eq!(r.normalize_with(&x, ReductionOrder::AnnihilationFirst), x);
        }
    }

    #[test]
    fn inverses_are_two_sided(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for r in rings() {
            let x = r.random_elem(&mut rng, 5);
            if let Ok(y) = r.inverse(&x) {
                prop_assert!(r.is_one(&r.mul(&x, &y)));
                prop_assert!(r.is_unit(&x));
            }
        }
    }
}

#[test]
fn characteristics() {
    for (p, n, s) in [(2u64, 1u32, 3u32), (2, 3, 2), (3, 2, 2), (5, 3, 1), (7, 2, 3)] {
        assert_eq!(Ring::galois(p, n, s).unwrap().characteristic(), p.pow(n));
    }
    for p in [3u64, 5, 7, 11, 13] {
        assert_eq!(Ring::ramified_tower(p, 2).unwrap().characteristic(), p * p);
    }
}

#[test]
fn finite_enumeration_matches_cardinality() {
    for r in rings().into_iter().filter(|r| r.is_finite()) {
        if r.cardinality().unwrap() > 1 << 16 {
            continue;
        }
        let elems = r.elements().unwrap();
        assert_eq!(elems.len() as u128, r.cardinality().unwrap());
        let mut sorted = elems.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), elems.len());
    }
}
