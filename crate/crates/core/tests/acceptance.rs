//! End-to-end acceptance run: one PASS/FAIL line per criterion, with the
//! wall-clock limit of each pinned below. Exits non-zero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use weaklift::chebyshev::{cheb_poly, cheb_recurrence, psi_ideal_check, psi_poly, ChebKind};
use weaklift::classify::{hurwitz_example, minimal_hurwitz_violation, nu_global, recognize_group, LocalActionInput};
use weaklift::deformation::{
    equichar_generator, lift_generators, verify_relations, versal_table, GroupSpec, LiftCase, NamedGenerator,
};
use weaklift::obstruction::{
    binomial_identity_check, exhaustive_lift_search, iterate_identity_check, order_p_probe, perturbation_constraints,
    EnumerationOrder, SearchBounds, SearchOutcome, SearchStatus, ULift,
};
use weaklift::rings::is_prime;
use weaklift::{Elem, MobiusElem, Ring};

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn psi_shape() -> Check {
    ensure!(psi_poly(3).unwrap().coeffs() == [BigInt::from(3), BigInt::from(1)], "psi_3 != alpha + 3");
    let primes: Vec<u64> = (3..=23).filter(|&p| is_prime(p)).collect();
    for &p in &primes {
        let psi = psi_poly(p).unwrap();
        let half = ((p - 1) / 2) as usize;
        let mut expected = vec![BigInt::from(0); half + 1];
        expected[half] = BigInt::from(1);
        ensure!(psi.reduce_mod(p).coeffs() == expected, "psi_{p} mod p is not X^{half}");
        ensure!(psi.coeffs()[0] == BigInt::from(p), "constant term of psi_{p}");
    }
    Ok(format!("{} primes", primes.len()))
}

fn psi_ideal() -> Check {
    for p in [3, 5, 7, 11, 13] {
        let r = psi_ideal_check(p).map_err(|e| e.to_string())?;
        ensure!(r.first_divisible && r.second_divisible, "p = {p}");
    }
    Ok("p in {3,5,7,11,13}".into())
}

fn chebyshev_dual() -> Check {
    for kind in [ChebKind::First, ChebKind::Second] {
        for j in 0..=30 {
            ensure!(cheb_poly(kind, j).unwrap() == cheb_recurrence(kind, j).unwrap(), "{kind:?} j = {j}");
        }
    }
    for j in 1..=20i64 {
        ensure!(cheb_poly(ChebKind::Second, j - 1).unwrap().eval(&BigInt::from(1)) == BigInt::from(j), "S_{}(1)", j - 1);
    }
    Ok("j <= 30".into())
}

fn dihedral() -> Check {
    for p in [5, 7, 11] {
        let pres = lift_generators(LiftCase::Dp, p).unwrap();
        let r = &pres.ring;
        let m = pres.generator("sigma_u1").unwrap();
        let g = pres.generator("g").unwrap();
        let id = MobiusElem::identity(r);
        ensure!(m.pow(p).is_scalar(), "m^{p} not scalar");
        ensure!(g.pow(2) == id, "g^2 != 1 at p = {p}");
        ensure!(g.mul(m).pow(2) == id, "(gm)^2 != 1 at p = {p}");
    }
    Ok("p in {5,7,11}".into())
}

fn symmetric() -> Check {
    let pres = lift_generators(LiftCase::S3, 3).unwrap();
    let z = &pres.ring;
    let m = pres.generator("sigma_u1").unwrap();
    let g = pres.generator("g").unwrap();
    let id = MobiusElem::identity(z);
    // X² + X + 1 = X² − tr·X + det
    ensure!(m.trace() == z.from_i64(-1) && m.det() == z.one(), "char poly of m");
    ensure!(m.pow(3) == id && g.pow(2) == id && g.mul(m).pow(2) == id, "S3 relations");
    Ok("exact over Z".into())
}

fn klein() -> Check {
    let pres = lift_generators(LiftCase::Klein, 2).unwrap();
    let r = &pres.ring;
    let s1 = pres.generator("sigma_u1").unwrap();
    let su = pres.generator("sigma_u2").unwrap();
    // units of the completion W[[α, ũ]]: constant term ±1
    let z = Ring::integers();
    let origin = [z.zero(), z.zero()];
    for (name, sq) in [("sigma_1", s1.pow(2)), ("sigma_u", su.pow(2))] {
        ensure!(sq.is_scalar(), "{name}^2 not scalar");
        let constant = z.evaluate(r, sq.a(), &origin).unwrap();
        ensure!(z.is_unit(&constant), "{name}^2 scalar has constant term {constant:?}");
    }
    let lambda = s1.mul(su).projective_equal(&su.mul(s1)).unwrap();
    ensure!(lambda == Some(r.from_i64(-1)), "commutator scalar {lambda:?}");
    Ok("commutator scalar -1".into())
}

fn alternating() -> Check {
    let pres = lift_generators(LiftCase::A4, 2).unwrap();
    let r = &pres.ring;
    let (m, m2, g) =
        (pres.generator("sigma_u1").unwrap(), pres.generator("sigma_u2").unwrap(), pres.generator("g").unwrap());
    ensure!(m.pow(2).is_scalar() && m2.pow(2).is_scalar() && g.pow(3).is_scalar(), "orders");
    let pe = |a: &MobiusElem, b: &MobiusElem| a.projective_equal(b).unwrap().is_some();
    ensure!(pe(&m.mul(m2), &m2.mul(m)), "m, m' do not commute");
    let g_inv = g.adjugate();
    ensure!(pe(&g.mul(m).mul(&g_inv), &m.mul(m2)) || pe(&g.mul(m).mul(&g_inv), m2), "conjugation");
    let spec = LiftCase::A4.group_spec(2).unwrap();
    ensure!(verify_relations(&pres, &spec).all_passed, "relation report");
    for ((name, expected), x) in spec.residue_generators().iter().zip([m, m2, g]) {
        let red = pres.residue.reduce_matrix(x).unwrap();
        ensure!(pe(&red, expected), "residue of {name}");
    }
    let j = r.var("j").unwrap();
    let unipotent = MobiusElem::new(r, r.one(), r.sub(&r.mul_i64(&j, -2), &r.one()), r.zero(), r.one()).unwrap();
    ensure!(!unipotent.pow(3).is_scalar(), "unipotent g has order 3");
    Ok("lift found; unipotent g = [[1,-2j-1],[0,1]] rejected".into())
}

fn equichar() -> Check {
    let spec = GroupSpec::new(5, 2, 1).unwrap();
    let pres = versal_table(&spec).unwrap();
    let r = &pres.ring;
    let (alpha, x1) = (r.var("alpha").unwrap(), r.var("x1").unwrap());
    let f = spec.field();
    let mats: Vec<MobiusElem> = f
        .elements()
        .unwrap()
        .iter()
        .filter(|u| !f.is_zero(u))
        .map(|u| equichar_generator(u, &spec, r, &alpha, std::slice::from_ref(&x1)).unwrap())
        .collect();
    for m in &mats {
        ensure!(m.pgl_order(10) == Some(5), "order");
    }
    for a in &mats {
        for b in &mats {
            ensure!(a.mul(b).projective_equal(&b.mul(a)).unwrap().is_some(), "commutation");
        }
    }
    Ok(format!("{} generators", mats.len()))
}

fn constraints() -> Check {
    let f = Ring::finite_field(5, 2).unwrap();
    let u = f.galois_generator().unwrap();
    let sys = perturbation_constraints(5, &u, &f, 3).unwrap();
    let two_u_3 = f.add(&f.mul_i64(&u, 2), &f.from_i64(3));
    ensure!(sys.constraints.len() == 2, "{} constraints", sys.constraints.len());
    ensure!(sys.constraints[0].coeffs == [f.from_i64(2), f.zero(), f.zero()], "2c0 = 0");
    ensure!(sys.constraints[1].coeffs == [f.neg(&two_u_3), f.one(), f.zero()], "c1 - (2u+3)c0 = 0");
    ensure!(sys.forced_zero == Some(vec![true, true, false]), "c0 = c1 = 0 not forced");
    Ok("2c0 = 0, c1 - (2u+3)c0 = 0".into())
}

fn iterate() -> Check {
    let f = Ring::finite_field(5, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let u = f.galois_elem(&[rng.gen_range(0..5), rng.gen_range(1..5)]).unwrap();
        let c = f.galois_elem(&[rng.gen_range(0..5), rng.gen_range(0..5)]).unwrap();
        for lift in [ULift::Naive, ULift::ShiftedByP] {
            let rep = iterate_identity_check(5, &u, &c, 5, lift).unwrap();
            ensure!(rep.holds, "{:?}", rep.failure);
            ensure!(rep.tp_equals_np == Some(true), "T^5 != n^5");
        }
    }
    Ok("100 pairs x 2 lifts".into())
}

fn binomial() -> Check {
    for p in [3, 5, 7, 11, 13] {
        ensure!(binomial_identity_check(p).unwrap().holds, "p = {p}");
    }
    Ok("p in {3,5,7,11,13}".into())
}

fn probe() -> Check {
    for p in [5u64, 7] {
        let rep = order_p_probe(p).unwrap();
        ensure!(rep.triples == p * p * p, "triples");
        ensure!(rep.all_equal_target && rep.target == [0, 1, p * p - p], "T^p != y - p y^2 at p = {p}");
        ensure!(!rep.order_p_lift_exists, "order-p lift at p = {p}");
    }
    Ok("all triples give y - p y^2".into())
}

fn elementary_spec(s: u32, t: usize) -> GroupSpec {
    let f = Ring::finite_field(2, s).unwrap();
    let w = f.galois_generator().unwrap();
    let basis: Vec<Elem> = (0..t as u64).map(|i| f.pow(&w, i)).collect();
    GroupSpec::with_data(f, basis, 1, None).unwrap()
}

fn certified(out: &SearchOutcome, status: SearchStatus, cardinality: u128) -> Result<(), String> {
    ensure!(out.status == status, "status {:?}", out.status);
    ensure!(out.search_space.cardinality == cardinality, "cardinality {}", out.search_space.cardinality);
    if status == SearchStatus::Exhausted {
        ensure!(out.checked_count == cardinality, "checked {} of {cardinality}", out.checked_count);
    }
    Ok(())
}

fn searches() -> Check {
    let gr43 = Ring::galois(2, 2, 3).unwrap();
    let bounds = SearchBounds::perturbed(3, 3);
    let eight = elementary_spec(3, 3);
    let out = exhaustive_lift_search(&eight, &gr43, &bounds).unwrap();
    certified(&out, SearchStatus::Exhausted, 512u128.pow(3))?;
    for order in [EnumerationOrder::Reversed, EnumerationOrder::Shuffled(99)] {
        let again = exhaustive_lift_search(&eight, &gr43, &bounds.clone().with_order(order)).unwrap();
        certified(&again, SearchStatus::Exhausted, 512u128.pow(3))?;
    }

    let gr42 = Ring::galois(2, 2, 2).unwrap();
    let out = exhaustive_lift_search(&elementary_spec(2, 2), &gr42, &bounds).unwrap();
    certified(&out, SearchStatus::Found, 64 * 64)?;

    let gr92 = Ring::galois(3, 2, 2).unwrap();
    let f9 = Ring::finite_field(3, 2).unwrap();
    let spec = GroupSpec::with_data(f9.clone(), vec![f9.one(), f9.galois_generator().unwrap()], 1, None).unwrap();
    let m = MobiusElem::from_ints(&gr92, [1, -3, 1, -2]).unwrap();
    let fixed = bounds.clone().with_fixed(NamedGenerator::new("sigma_u1", m));
    let out = exhaustive_lift_search(&spec, &gr92, &fixed).unwrap();
    certified(&out, SearchStatus::Exhausted, 729)?;
    let again = exhaustive_lift_search(&spec, &gr92, &fixed.with_order(EnumerationOrder::Reversed)).unwrap();
    certified(&again, SearchStatus::Exhausted, 729)?;
    Ok("(Z/2)^3 exhausted (512^3), (Z/2)^2 found, (Z/3)^2 exhausted (729)".into())
}

/// Independent statement of the characteristic column.
fn expected_characteristic(p: u64, t: u32, n: u64) -> u64 {
    let lifts = t == 0 || (t == 1 && (n == 1 || (n == 2 && p > 2))) || (p == 2 && t == 2 && (n == 1 || n == 3));
    if lifts {
        0
    } else {
        p
    }
}

fn specs_up_to(limit: u128) -> Vec<GroupSpec> {
    let mut out = Vec::new();
    for p in (2..=limit as u64).filter(|&p| is_prime(p)) {
        let mut pt = 1u128;
        for t in 0.. {
            if pt > limit {
                break;
            }
            for n in 1..=(limit / pt) as u64 {
                if let Ok(s) = GroupSpec::new(p, t, n) {
                    out.push(s);
                }
            }
            pt *= p as u128;
        }
    }
    out
}

fn global_nu() -> Check {
    let mut rows = 0;
    for p in [2u64, 3, 5, 7] {
        for t in 0..=3u32 {
            for n in 1..=12u64 {
                let Ok(spec) = GroupSpec::new(p, t, n) else { continue };
                if spec.order() > 400 {
                    continue;
                }
                rows += 1;
                let ans = nu_global(std::slice::from_ref(&spec)).unwrap();
                let expected = expected_characteristic(p, t, n);
                ensure!(ans.nu == expected, "nu({}) = {} != {expected}", spec.to_json(), ans.nu);
                ensure!(versal_table(&spec).unwrap().characteristic == expected, "table row {}", spec.to_json());
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let pools: Vec<(u64, Vec<GroupSpec>)> = [2u64, 3, 5, 7]
        .into_iter()
        .map(|p| (p, specs_up_to(100).into_iter().filter(|s| s.p() == p).collect()))
        .collect();
    for _ in 0..50 {
        let (p, pool) = &pools[rng.gen_range(0..pools.len())];
        let k = rng.gen_range(1..6);
        let locals: Vec<GroupSpec> = (0..k).map(|_| pool[rng.gen_range(0..pool.len())].clone()).collect();
        let ans = nu_global(&locals).unwrap();
        let expected = if locals.iter().any(|s| expected_characteristic(s.p(), s.t(), s.n()) != 0) { *p } else { 0 };
        ensure!(ans.nu == expected, "multiset nu {} != {expected}", ans.nu);
        ensure!(ans.flat == (ans.nu == 0), "flatness");
    }
    Ok(format!("{rows} rows, 50 multisets"))
}

fn hurwitz() -> Check {
    ensure!(minimal_hurwitz_violation(1000) == Some(41), "minimal prime");
    let r = hurwitz_example(41).unwrap();
    ensure!((r.group_order, r.hurwitz_bound) == (134480, 134316), "p = 41 values");
    Ok("p = 41: 134480 > 134316".into())
}

fn ramification() -> Check {
    for (p, s) in [(2, 2), (5, 1), (2, 3), (3, 2), (5, 2)] {
        let f = Ring::finite_field(p, s).unwrap();
        for u in f.elements().unwrap().iter().filter(|u| !f.is_zero(u)) {
            let m = MobiusElem::new(&f, f.one(), f.zero(), u.clone(), f.one()).unwrap();
            let brk = m.to_series(4).unwrap().ramification_break().unwrap().exact();
            ensure!(brk == Some(1), "break {brk:?} over F_{}", p.pow(s));
        }
    }
    let specs = specs_up_to(200);
    for spec in &specs {
        let got = recognize_group(&LocalActionInput::from_spec(spec, 4), 1000).map_err(|e| e.to_string())?;
        ensure!(&got == spec, "round trip {}", spec.to_json());
    }
    Ok(format!("breaks over q in {{4,5,8,9,25}}; {} specs round-trip", specs.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check, Duration); 16] = [
        ("psi shape", psi_shape, secs(1)),
        ("psi ideal", psi_ideal, secs(5)),
        ("Chebyshev dual construction", chebyshev_dual, secs(10)),
        ("dihedral lift", dihedral, secs(10)),
        ("S3 lift", symmetric, secs(10)),
        ("Klein lift", klein, secs(10)),
        ("A4 lift search", alternating, secs(600)),
        ("equicharacteristic family", equichar, secs(30)),
        ("perturbation constraints", constraints, secs(10)),
        ("iterate identity", iterate, secs(60)),
        ("binomial identity", binomial, secs(10)),
        ("order-p probe", probe, secs(60)),
        ("exhaustive searches", searches, secs(1800)),
        ("global obstruction", global_nu, secs(600)),
        ("Hurwitz bound", hurwitz, secs(10)),
        ("ramification and recognition", ramification, secs(1800)),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or(e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|msg| {
            if elapsed <= limit {
                Ok(msg)
            } else {
                Err(format!("took {elapsed:.1?}, limit {limit:?}"))
            }
        });
        let (tag, msg) = match &outcome {
            Ok(m) => ("PASS", m),
            Err(m) => ("FAIL", m),
        };
        failed += outcome.is_err() as usize;
        println!("[{tag}] {:>2} {name}: {msg} ({:.2}s / {}s)", i + 1, elapsed.as_secs_f64(), limit.as_secs());
    }
    println!("{} of 16 criteria passed", 16 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
