use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::deformation::{GroupSpec, NamedGenerator};
use crate::mobius::MobiusElem;
use crate::rings::{Elem, Relation, Ring};

fn f25() -> Ring {
    Ring::finite_field(5, 2).unwrap()
}

#[test]
fn constraints_p5_force_c0_c1() {
    let f = f25();
    let u = f.galois_generator().unwrap();
    let sys = perturbation_constraints(5, &u, &f, 3).unwrap();
    assert_eq!(sys.constraints.len(), 2);
    assert_eq!(sys.constraints[0].coeffs, vec![f.from_i64(2), f.zero(), f.zero()]);
    let two_u_3 = f.add(&f.mul_i64(&u, 2), &f.from_i64(3));
    assert_eq!(sys.constraints[1].coeffs, vec![f.neg(&two_u_3), f.one(), f.zero()]);
    assert_eq!(sys.forced_zero, Some(vec![true, true, false]));
}

#[test]
fn constraints_symbolic_u() {
    let fp = Ring::finite_field(5, 1).unwrap();
    let r = Ring::quotient(&fp, &["u"], vec![]).unwrap();
    let u = r.var("u").unwrap();
    let sys = perturbation_constraints(5, &u, &r, 3).unwrap();
    let expected = r.neg(&r.add(&r.mul_i64(&u, 2), &r.from_i64(3)));
    assert_eq!(sys.constraints[1].coeffs[0], expected);
    assert!(sys.forced_zero.is_none());
}

#[test]
fn constraints_edge_cases() {
    let f4 = Ring::finite_field(2, 2).unwrap();
    let w = f4.galois_generator().unwrap();
    let sys = perturbation_constraints(2, &w, &f4, 3).unwrap();
    assert!(sys.constraints[0].is_vacuous(&f4));
    let f = f25();
    let u = f.galois_generator().unwrap();
    assert_eq!(perturbation_constraints(5, &u, &f, 2).unwrap().constraints.len(), 1);
    assert!(perturbation_constraints(5, &u, &f, 1).is_err());
    assert!(perturbation_constraints(5, &f.from_i64(2), &f, 3).is_err());
}

#[test]
fn perturbed_lift_realization() {
    let r = Ring::integers_mod(25).unwrap();
    let base = MobiusElem::from_ints(&r, [1, 0, 1, 1]).unwrap();
    let lift = PerturbedLift::new(base.clone(), vec![r.from_i64(1), r.from_i64(2)], 4).unwrap();
    let expected = base.to_series(4).unwrap().add(
        &crate::series::TruncatedSeries::from_ints(&r, &[5, 10, 0, 0]).unwrap(),
    );
    assert_eq!(lift.realized().unwrap(), expected);
}

fn random_outside_fp(f: &Ring, rng: &mut ChaCha8Rng) -> Elem {
    f.galois_elem(&[rng.gen_range(0..5), rng.gen_range(1..5)]).unwrap()
}

#[test]
fn iterate_identity_random_samples() {
    let f = f25();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let u = random_outside_fp(&f, &mut rng);
        let c = f.galois_elem(&[rng.gen_range(0..5), rng.gen_range(0..5)]).unwrap();
        for lift in [ULift::Naive, ULift::ShiftedByP] {
            let rep = iterate_identity_check(5, &u, &c, 5, lift).unwrap();
            assert!(rep.holds, "{:?}", rep.failure);
            assert_eq!(rep.tp_equals_np, Some(true));
        }
    }
}

#[test]
fn iterate_identity_rejects_bad_input() {
    let f = f25();
    let u = f.galois_generator().unwrap();
    assert!(iterate_identity_check(5, &u, &f.one(), 0, ULift::Naive).is_err());
    assert!(iterate_identity_check(5, &f.one(), &f.one(), 3, ULift::Naive).is_err());
    assert!(iterate_identity_check(4, &u, &f.one(), 3, ULift::Naive).is_err());
}

#[test]
fn order_p_probe_all_triples() {
    for p in [5, 7] {
        let rep = order_p_probe(p).unwrap();
        assert_eq!(rep.triples, p * p * p);
        assert!(rep.all_equal_target);
        assert_eq!(rep.target, [0, 1, p * p - p]);
        assert!(!rep.order_p_lift_exists);
        assert!(rep.formulas[..3].iter().all(|f| f.holds), "{:?}", rep.formulas);
        // the linear coefficient needs the factor p on its c0 term
        assert!(!rep.formulas[3].holds);
    }
    assert!(order_p_probe(3).is_err());
    assert!(order_p_probe(9).is_err());
}

#[test]
fn binomial_identity_small_primes() {
    for p in [3, 5, 7, 11, 13] {
        assert!(binomial_identity_check(p).unwrap().holds, "p = {p}");
    }
    assert!(binomial_identity_check(2).is_err());
}

#[test]
fn binomial_identity_p3_by_hand() {
    let f3 = Ring::finite_field(3, 1).unwrap();
    let r = Ring::quotient(&f3, &["A", "C"], vec![]).unwrap();
    let (a, c) = (r.var("A").unwrap(), r.var("C").unwrap());
    let expected = r.mul(&c, &r.sub(&r.mul(&a, &a), &r.mul(&c, &c)));
    let rep = binomial_identity_check(3).unwrap();
    assert_eq!(rep.rhs, r.to_payload(&expected));
    assert_eq!(rep.lhs, r.to_payload(&expected));
}

#[test]
fn eigen_values_identity_and_residue() {
    let z = Ring::integers();
    let (p_val, q_val) = eigen_order_values(&z, &z.one(), &z.zero(), &z.zero(), 5).unwrap();
    assert!(z.is_zero(&p_val) && z.is_zero(&q_val));
    let f7 = Ring::finite_field(7, 1).unwrap();
    for a in 0..7 {
        for c in 0..7 {
            let (av, cv) = (f7.from_i64(a), f7.from_i64(c));
            let (p_val, q_val) = eigen_order_values(&f7, &av, &cv, &f7.zero(), 7).unwrap();
            assert!(f7.is_zero(&q_val));
            assert_eq!(p_val, f7.sub(&f7.pow(&av, 7), &f7.one()));
        }
    }
}

#[test]
fn eigen_values_vanish_on_cyclic_lift() {
    let z = Ring::integers();
    let psi = crate::chebyshev::psi_poly(5).unwrap();
    let coeffs: Vec<i64> = psi.coeffs().iter().map(|c| c.try_into().unwrap()).collect();
    let r = Ring::quotient(&z, &["alpha"], vec![Relation::modulus("alpha", coeffs)]).unwrap();
    let a = r.var("alpha").unwrap();
    let (p_val, q_val) = eigen_order_values(&r, &r.one(), &r.one(), &a, 5).unwrap();
    assert!(r.is_zero(&p_val) && r.is_zero(&q_val));
    let m = MobiusElem::new(&r, r.one(), a.clone(), r.one(), r.add(&r.one(), &a)).unwrap();
    assert!(m.pow(5).is_scalar());
}

#[test]
fn klein_commutation_condition() {
    let f4 = Ring::finite_field(2, 2).unwrap();
    let w = f4.galois_generator().unwrap();
    let rep = klein_commutation_check(2, &w, &f4.add(&w, &f4.one())).unwrap();
    assert!(rep.condition_equivalent);
    assert!(rep.commuting > 0);
    assert!(rep.product_relation > 0 && rep.product_relation <= rep.commuting);
}

fn klein_spec(s: u32, t: usize) -> GroupSpec {
    let f = Ring::finite_field(2, s).unwrap();
    let w = f.galois_generator().unwrap();
    let basis: Vec<Elem> = (0..t as u64).map(|i| f.pow(&w, i)).collect();
    GroupSpec::with_data(f, basis, 1, None).unwrap()
}

#[test]
fn search_klein_char4_found() {
    let ring = Ring::galois(2, 2, 2).unwrap();
    let spec = klein_spec(2, 2);
    let out = exhaustive_lift_search(&spec, &ring, &SearchBounds::perturbed(3, 3)).unwrap();
    assert_eq!(out.status, SearchStatus::Found);
    assert_eq!(out.search_space.cardinality, 64 * 64);
    assert_eq!(out.checked_count, out.search_space.cardinality);
    let exact = exhaustive_lift_search(&spec, &ring, &SearchBounds::exact(0)).unwrap();
    assert_eq!(exact.status, SearchStatus::Found);
}

#[test]
fn search_elementary_eight_exhausted() {
    let ring = Ring::galois(2, 2, 3).unwrap();
    let spec = klein_spec(3, 3);
    let out = exhaustive_lift_search(&spec, &ring, &SearchBounds::perturbed(3, 3)).unwrap();
    assert_eq!(out.status, SearchStatus::Exhausted);
    assert_eq!(out.search_space.cardinality, 512u128.pow(3));
    assert_eq!(out.checked_count, out.search_space.cardinality);
    for order in [EnumerationOrder::Reversed, EnumerationOrder::Shuffled(11)] {
        let again = exhaustive_lift_search(&spec, &ring, &SearchBounds::perturbed(3, 3).with_order(order)).unwrap();
        assert_eq!(again.status, SearchStatus::Exhausted);
        assert_eq!(again.checked_count, out.checked_count);
    }
    // the pair sub-search inside the same ring lifts
    let pair = exhaustive_lift_search(&klein_spec(3, 2), &ring, &SearchBounds::perturbed(3, 3)).unwrap();
    assert_eq!(pair.status, SearchStatus::Found);
}

#[test]
fn search_rank_two_p3_with_fixed_generator_exhausted() {
    let ring = Ring::galois(3, 2, 2).unwrap();
    let f = Ring::finite_field(3, 2).unwrap();
    let spec = GroupSpec::with_data(f.clone(), vec![f.one(), f.galois_generator().unwrap()], 1, None).unwrap();
    let m = MobiusElem::from_ints(&ring, [1, -3, 1, -2]).unwrap();
    let bounds = SearchBounds::perturbed(3, 3).with_fixed(NamedGenerator::new("sigma_u1", m));
    let out = exhaustive_lift_search(&spec, &ring, &bounds).unwrap();
    assert_eq!(out.status, SearchStatus::Exhausted);
    assert_eq!(out.search_space.cardinality, 729);
    assert_eq!(out.checked_count, 729);
}

#[test]
fn search_refuses_oversized_space() {
    let ring = Ring::galois(2, 2, 3).unwrap();
    let bounds = SearchBounds::perturbed(3, 3).with_ceiling(1000);
    assert!(matches!(
        exhaustive_lift_search(&klein_spec(3, 3), &ring, &bounds),
        Err(crate::Error::SearchTooLarge { .. })
    ));
}

#[test]
fn search_needs_bound_over_infinite_ring() {
    let spec = GroupSpec::new(3, 1, 1).unwrap();
    let mut bounds = SearchBounds::exact(2);
    bounds.entry_bound = None;
    assert!(exhaustive_lift_search(&spec, &Ring::integers(), &bounds).is_err());
    let out = exhaustive_lift_search(&spec, &Ring::integers(), &SearchBounds::exact(3)).unwrap();
    // [[1,-3],[1,-2]] is among the candidates
    assert_eq!(out.status, SearchStatus::Found);
}
