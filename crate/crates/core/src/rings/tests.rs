use super::*;
use serde_json::json;

fn q_j() -> Ring {
    Ring::quotient(&Ring::integers(), &["j"], vec![Relation::modulus("j", vec![1, 1, 1])]).unwrap()
}

#[test]
fn integers_mod_nine() {
    let r = Ring::integers_mod(9).unwrap();
    assert_eq!(r.cardinality(), Some(9));
    assert_eq!(r.characteristic(), 9);
    assert_eq!(r.inverse(&r.from_i64(2)).unwrap(), r.from_i64(5));
    assert_eq!(r.inverse(&r.from_i64(3)), Err(Error::NotUnit));
}

#[test]
fn galois_ring_gr4_2_has_twelve_units() {
    let r = Ring::galois(2, 2, 2).unwrap();
    let elems = r.elements().unwrap();
    assert_eq!(elems.len(), 16);
    // independent count: x is a unit iff some y has x·y = 1
    let units = elems.iter().filter(|x| elems.iter().any(|y| r.is_one(&r.mul(x, y)))).count();
    assert_eq!(units, 12);
    assert_eq!(elems.iter().filter(|x| r.is_unit(x)).count(), 12);
    assert_eq!(r.characteristic(), 4);
}

#[test]
fn equicharacteristic_quotient_kills_alpha_x() {
    let f25 = Ring::finite_field(5, 2).unwrap();
    let r = Ring::quotient(
        &f25,
        &["alpha", "x1"],
        vec![Relation::nilpotent("alpha", 2), Relation::annihilate("alpha", "x1")],
    )
    .unwrap();
    let a = r.var("alpha").unwrap();
    let x = r.var("x1").unwrap();
    assert!(r.is_zero(&r.mul(&a, &x)));
    assert!(r.is_zero(&r.mul(&a, &a)));
    assert!(!r.is_zero(&r.mul(&x, &x)));
    assert_eq!(r.characteristic(), 5);
    assert!(!r.is_finite());
}

#[test]
fn inverse_of_j_is_minus_one_minus_j() {
    let r = q_j();
    let j = r.var("j").unwrap();
    let expected = r.sub(&r.neg(&r.one()), &j);
    assert_eq!(r.inverse(&j).unwrap(), expected);
    assert!(r.is_one(&r.pow(&j, 3)));
    assert_eq!(r.inverse(&r.from_i64(2)), Err(Error::NotUnit));
}

#[test]
fn tower_at_five_has_a_squared_minus_five() {
    let r = Ring::ramified_tower(5, 2).unwrap();
    let a = r.tower_root().unwrap();
    assert_eq!(r.mul(&a, &a), r.from_i64(-5));
    assert_eq!(r.characteristic(), 25);
    assert!(r.is_zero(&r.mul_i64(&a, 5)));
    assert!(!r.is_zero(&r.from_i64(5)));
    assert!(r.is_zero(&r.pow(&a, 3)));
    assert!(r.is_nilpotent(&a));
}

#[test]
fn tower_rejects_non_eisenstein() {
    let d = RingDescriptor::RamifiedTower { p: 5, s: 1, psi: Some(vec![25, 5, 1]), schema: None };
    assert!(matches!(Ring::new(&d), Err(Error::InvalidRing(_))));
    let d = RingDescriptor::RamifiedTower { p: 5, s: 1, psi: Some(vec![5, 1, 1]), schema: None };
    assert!(Ring::new(&d).is_err());
    let d = RingDescriptor::RamifiedTower { p: 5, s: 1, psi: Some(vec![10, 15, 1]), schema: None };
    assert!(Ring::new(&d).is_ok());
}

#[test]
fn galois_ring_rejects_reducible_modulus() {
    let d = RingDescriptor::GaloisRing { p: 2, n: 2, s: 2, modulus: Some(vec![1, 0, 1]), schema: None };
    assert!(matches!(Ring::new(&d), Err(Error::InvalidRing(_))));
}

#[test]
fn quotient_rejects_unsupported_shapes() {
    let z = Ring::integers();
    assert!(Ring::quotient(&z, &["a"], vec![Relation::modulus("a", vec![1, 2])]).is_err());
    assert!(Ring::quotient(
        &z,
        &["a", "b"],
        vec![Relation::modulus("a", vec![1, 1]), Relation::annihilate("a", "b")]
    )
    .is_err());
    assert!(Ring::quotient(&z, &["a"], vec![Relation::nilpotent("a", 2), Relation::nilpotent("a", 3)]).is_err());
    assert!(Ring::quotient(&z, &["a"], vec![Relation::nilpotent("b", 2)]).is_err());
}

#[test]
fn binomials_in_rings() {
    let f7 = Ring::finite_field(7, 1).unwrap();
    assert_eq!(binom_in_ring(&f7, &f7.from_i64(3), 2).unwrap(), f7.from_i64(3));
    assert_eq!(binom_in_ring(&f7, &f7.from_i64(4), 0).unwrap(), f7.one());
    let f5 = Ring::finite_field(5, 1).unwrap();
    assert!(binom_in_ring(&f5, &f5.from_i64(2), 5).is_err());
    for p in [3u64, 5, 7, 11] {
        let f = Ring::finite_field(p, 1).unwrap();
        for x in 0..p {
            for nn in 0..p {
                let want = binomial(x, nn) % BigUint::from(p);
                let got = binom_in_ring(&f, &f.from_i64(x as i64), nn).unwrap();
                assert_eq!(got, f.from_bigint(&BigInt::from(want)));
            }
        }
    }
}

#[test]
fn payload_round_trips() {
    let rings = vec![
        Ring::integers(),
        Ring::integers_mod(27).unwrap(),
        Ring::galois(3, 2, 2).unwrap(),
        Ring::ramified_tower(7, 2).unwrap(),
        q_j(),
        Ring::quotient(
            &Ring::finite_field(5, 2).unwrap(),
            &["alpha", "x1"],
            vec![Relation::nilpotent("alpha", 2), Relation::annihilate("alpha", "x1")],
        )
        .unwrap(),
    ];
    for r in rings {
        let samples: Vec<Elem> = match r.var_names().first() {
            Some(v) => {
                let x = r.var(v).unwrap();
                vec![r.zero(), r.one(), x.clone(), r.add(&r.pow(&x, 3), &r.from_i64(-4))]
            }
            None => vec![r.zero(), r.one(), r.from_i64(-4), r.from_i64(12345)],
        };
        for x in samples {
            let v = r.to_payload(&x);
            assert_eq!(r.from_payload(&v).unwrap(), x, "{v}");
        }
    }
    let r = q_j();
    assert_eq!(r.to_payload(&r.var("j").unwrap()), json!([0, 1]));
    assert_eq!(r.to_payload(&r.zero()), json!([]));
    assert_eq!(r.from_payload(&json!([0, 0, 1])).unwrap(), r.from_payload(&json!([-1, -1])).unwrap());
    assert!(Ring::galois(2, 2, 2).unwrap().from_payload(&json!([1])).is_err());
}

#[test]
fn descriptor_json_round_trip_resolves_defaults() {
    let d = RingDescriptor::from_json(&json!({"kind":"galois_ring","p":2,"n":2,"s":3,"schema":1})).unwrap();
    let r = Ring::new(&d).unwrap();
    let v = r.descriptor().to_json();
    assert_eq!(v, json!({"kind":"galois_ring","p":2,"n":2,"s":3,"modulus":[1,1,0,1],"schema":1}));
    let back = Ring::new(&RingDescriptor::from_json(&v).unwrap()).unwrap();
    assert_eq!(back, r);
    let q = RingDescriptor::from_json(&json!({
        "kind":"quotient","base":{"kind":"integers"},"vars":["j"],
        "relations":[{"type":"modulus","var":"j","coeffs":[1,1,1]}]
    }))
    .unwrap();
    assert_eq!(Ring::new(&q).unwrap(), q_j());
    assert!(RingDescriptor::from_json(&json!({"kind":"integers","schema":2})).is_err());
    assert!(RingDescriptor::from_json(&json!({"kind":"bogus"})).is_err());
}

#[test]
fn try_div_cases() {
    let z = Ring::integers();
    assert_eq!(z.try_div(&z.from_i64(12), &z.from_i64(-4)), Some(z.from_i64(-3)));
    assert_eq!(z.try_div(&z.from_i64(12), &z.from_i64(5)), None);
    let r = q_j();
    let j = r.var("j").unwrap();
    let two_plus_j = r.add(&r.from_i64(2), &j);
    let prod = r.mul(&two_plus_j, &r.add(&r.from_i64(5), &r.mul_i64(&j, 3)));
    assert_eq!(r.try_div(&prod, &two_plus_j), Some(r.add(&r.from_i64(5), &r.mul_i64(&j, 3))));
    assert_eq!(r.try_div(&r.from_i64(1), &r.from_i64(3)), None);
    let free = Ring::quotient(&z, &["a", "u"], vec![]).unwrap();
    let a = free.var("a").unwrap();
    let u = free.var("u").unwrap();
    let f = free.add(&free.mul(&a, &u), &free.from_i64(2));
    let g = free.sub(&u, &free.from_i64(3));
    assert_eq!(free.try_div(&free.mul(&f, &g), &g), Some(f.clone()));
    assert_eq!(free.try_div(&f, &g), None);
    let m = Ring::integers_mod(12).unwrap();
    let q = m.try_div(&m.from_i64(8), &m.from_i64(4)).unwrap();
    assert_eq!(m.mul(&q, &m.from_i64(4)), m.from_i64(8));
}

#[test]
fn coercions_and_evaluation() {
    let gr = Ring::galois(2, 2, 2).unwrap();
    let f4 = gr.residue_field(2).unwrap();
    let x = gr.galois_generator().unwrap();
    let y = f4.coerce_from(&gr, &gr.add(&x, &gr.from_i64(3))).unwrap();
    assert_eq!(y, f4.add(&f4.galois_generator().unwrap(), &f4.one()));
    let r = q_j();
    let j = r.var("j").unwrap();
    let w = f4.galois_generator().unwrap();
    assert_eq!(f4.evaluate(&r, &j, std::slice::from_ref(&w)).unwrap(), w);
    assert!(f4.evaluate(&r, &j, &[f4.one()]).is_err());
    let t = Ring::ramified_tower(5, 2).unwrap();
    let gr25 = t.tower_unramified().unwrap();
    let z = gr25.galois_generator().unwrap();
    let zt = t.coerce_from(&gr25, &z).unwrap();
    let f25 = t.residue_field(5).unwrap();
    assert_eq!(f25.coerce_from(&t, &zt).unwrap(), f25.galois_generator().unwrap());
}

#[test]
fn quotient_with_nilpotent_over_galois_inverts() {
    let gr = Ring::galois(3, 2, 2).unwrap();
    let r = Ring::quotient(&gr, &["e"], vec![Relation::nilpotent("e", 3)]).unwrap();
    let e = r.var("e").unwrap();
    let x = r.add(&r.add(&r.from_i64(2), &r.mul_i64(&e, 3)), &r.mul(&e, &e));
    let y = r.inverse(&x).unwrap();
    assert!(r.is_one(&r.mul(&x, &y)));
    assert!(r.inverse(&r.add(&r.from_i64(3), &e)).is_err());
    assert_eq!(r.cardinality(), Some(81u128.pow(3)));
}
