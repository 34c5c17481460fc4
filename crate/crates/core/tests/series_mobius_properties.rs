use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weaklift::{MobiusElem, RamificationBreak, Ring, TruncatedSeries};

fn finite_rings() -> Vec<Ring> {
    vec![
        Ring::finite_field(5, 1).unwrap(),
        Ring::finite_field(2, 3).unwrap(),
        Ring::galois(3, 2, 2).unwrap(),
        Ring::integers_mod(8).unwrap(),
        Ring::ramified_tower(5, 2).unwrap(),
    ]
}

/// Random matrix with unit d and unit determinant.
fn random_mobius(r: &Ring, rng: &mut ChaCha8Rng) -> MobiusElem {
    loop {
        let e: Vec<_> = (0..4).map(|_| r.random_elem(rng, 5)).collect();
        if let Ok(m) = MobiusElem::new(r, e[0].clone(), e[1].clone(), e[2].clone(), e[3].clone()) {
            if r.is_unit(m.d()) && m.is_invertible() {
                return m;
            }
        }
    }
}

/// Random fixed-point-preserving homography: b nilpotent (here: zero or p·x).
fn random_local_mobius(r: &Ring, rng: &mut ChaCha8Rng) -> MobiusElem {
    loop {
        let m = random_mobius(r, rng);
        let b = if rng.gen_bool(0.5) { r.zero() } else { r.mul_i64(m.b(), r.residue_characteristic().unwrap() as i64) };
        if let Ok(m2) = MobiusElem::new(r, m.a().clone(), b, m.c().clone(), m.d().clone()) {
            if m2.is_invertible() && r.is_unit(m2.d()) {
                return m2;
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, .. ProptestConfig::default() })]

    #[test]
    fn expansion_is_a_monoid_morphism(seed in any::<u64>(), k in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for r in finite_rings() {
            let m = random_mobius(&r, &mut rng);
            let n = random_local_mobius(&r, &mut rng);
            let prod = m.mul(&n);
            if !r.is_unit(prod.d()) {
                continue;
            }
            let lhs = prod.to_series(k).unwrap();
            // exact action on a series with nilpotent constant term
            prop_assert_eq!(&lhs, &m.apply(&n.to_series(k).unwrap()).unwrap());
            // truncated polynomial composition is exact once the constant term vanishes
            if r.is_zero(n.b()) {
                let rhs = m.to_series(k).unwrap().compose(&n.to_series(k).unwrap()).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn composition_is_associative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for r in finite_rings() {
            let mut s = || {
                let mut c: Vec<_> = (0..5).map(|_| r.random_elem(&mut rng, 5)).collect();
                c[0] = r.zero();
                TruncatedSeries::new(&r, c).unwrap()
            };
            let (f, g, h) = (s(), s(), s());
            let left = f.compose(&g).unwrap().compose(&h).unwrap();
            let right = f.compose(&g.compose(&h).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }
    }

    #[test]
    fn determinant_is_multiplicative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for r in finite_rings() {
            let m = random_mobius(&r, &mut rng);
            let n = random_mobius(&r, &mut rng);
            prop_assert_eq!(m.mul(&n).det(), r.mul(&m.det(), &n.det()));
        }
    }

    #[test]
    fn projective_equality_is_an_equivalence(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for r in finite_rings() {
            let m = random_mobius(&r, &mut rng);
            let unit = loop {
                let u = r.random_elem(&mut rng, 5);
                if r.is_unit(&u) { break u; }
            };
            let unit2 = loop {
                let u = r.random_elem(&mut rng, 5);
                if r.is_unit(&u) { break u; }
            };
            let n = m.scale(&unit);
            let o = n.scale(&unit2);
            prop_assert_eq!(m.projective_equal(&m).unwrap(), Some(r.one()));
            let l1 = n.projective_equal(&m).unwrap().expect("scaled matrices are equivalent");
            prop_assert_eq!(&l1, &unit);
            prop_assert!(m.projective_equal(&n).unwrap().is_some());
            prop_assert!(o.projective_equal(&m).unwrap().is_some());
            let other = random_mobius(&r, &mut rng);
            let a = m.projective_equal(&other).unwrap().is_some();
            let b = other.projective_equal(&m).unwrap().is_some();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn order_divides_series_order(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for r in [Ring::finite_field(5, 1).unwrap(), Ring::finite_field(2, 2).unwrap(), Ring::finite_field(7, 1).unwrap()] {
            let m = random_local_mobius(&r, &mut rng);
            let s = m.to_series(6).unwrap();
            let series_order = (1..=60u64).find(|&k| s.iterate(k).unwrap().is_identity());
            if let (Some(a), Some(b)) = (m.pgl_order(60), series_order) {
                prop_assert_eq!(b % a, 0);
            }
        }
    }
}

#[test]
fn translations_have_break_one() {
    for (p, s) in [(2u64, 2u32), (5, 1), (2, 3), (3, 2), (5, 2)] {
        let f = Ring::finite_field(p, s).unwrap();
        for u in f.elements().unwrap().into_iter().filter(|u| !f.is_zero(u)) {
            let m = MobiusElem::new(&f, f.one(), f.zero(), u, f.one()).unwrap();
            let series = m.to_series(6).unwrap();
            assert_eq!(series.ramification_break().unwrap(), RamificationBreak::Exact(1));
            assert!(series.iterate(p).unwrap().is_identity());
        }
    }
}
