//! Iterates of perturbed lifts: the induction T^i ≡ n^i + p·i·c·y² over O/pπ
//! and the order-p probe over Z/p².

use serde::Serialize;
use serde_json::Value;

use super::PerturbedLift;
use crate::chebyshev::{is_eisenstein, psi_poly};
use crate::mobius::MobiusElem;
use crate::rings::{binom_in_ring, is_prime, Elem, Ring};
use crate::series::TruncatedSeries;
use crate::{Error, Result};

/// How u ∈ F_{p²} is lifted to GR(p², 2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ULift {
    /// Coefficients taken in [0, p).
    Naive,
    /// The naive lift plus p.
    ShiftedByP,
}

#[derive(Clone, Debug, Serialize)]
pub struct IterateFailure {
    pub i: u64,
    /// Power of y whose coefficient differs.
    pub index: usize,
    pub lhs: Value,
    pub rhs: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct IterateReport {
    pub p: u64,
    pub u: Value,
    pub c: Value,
    pub lift: ULift,
    pub imax: u64,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<IterateFailure>,
    /// T^p ≡ n^p, present when imax ≥ p.
    #[serde(rename = "tpEqualsNp", skip_serializing_if = "Option::is_none")]
    pub tp_equals_np: Option<bool>,
}

/// The matrix n = [[A, aC], [C, A + aC]] with A, C the equicharacteristic
/// sums (no x-term) evaluated at the Eisenstein root a and at ũ.
pub fn lemma_matrix(tower: &Ring, ut: &Elem) -> Result<MobiusElem> {
    let p = tower.residue_characteristic().unwrap();
    let a = tower.tower_root()?;
    let e = (p - 1) / 2;
    let mut big_a = tower.zero();
    let mut big_c = tower.zero();
    for j in 0..=e {
        let aj = tower.pow(&a, j);
        let shifted = tower.add(ut, &tower.from_i64(j as i64 - 1));
        big_a = tower.add(&big_a, &tower.mul(&binom_in_ring(tower, &shifted, 2 * j)?, &aj));
        if j < e {
            let shifted = tower.add(ut, &tower.from_i64(j as i64));
            big_c = tower.add(&big_c, &tower.mul(&binom_in_ring(tower, &shifted, 2 * j + 1)?, &aj));
        }
    }
    let ac = tower.mul(&a, &big_c);
    MobiusElem::new(tower, big_a.clone(), ac.clone(), big_c, tower.add(&big_a, &ac))
}

fn lift_residue(tower: &Ring, field: &Ring, x: &Elem, shift: bool) -> Result<Elem> {
    let gr = tower.tower_unramified()?;
    let coeffs: Vec<i64> = field.galois_coeffs(x).iter().map(|&c| c as i64).collect();
    let mut lifted = gr.galois_elem(&coeffs)?;
    if shift {
        let p = tower.residue_characteristic().unwrap() as i64;
        lifted = gr.add(&lifted, &gr.from_i64(p));
    }
    tower.coerce_from(&gr, &lifted)
}

/// Checks T^i ≡ n^i + p·i·c·y² mod (pπ, y³) for 1 ≤ i ≤ imax, T = n + p·c·y².
/// `u` and `c` are elements of F_{p²} (the residue field of the tower).
pub fn iterate_identity_check(p: u64, u: &Elem, c: &Elem, imax: u64, lift: ULift) -> Result<IterateReport> {
    if p < 3 || !is_prime(p) {
        return Err(Error::InvalidArgument("p must be an odd prime".into()));
    }
    if imax < 1 {
        return Err(Error::InvalidArgument("imax must be at least 1".into()));
    }
    if !is_eisenstein(&psi_poly(p)?, p) {
        return Err(Error::InvalidArgument("ψ is not Eisenstein".into()));
    }
    let tower = Ring::ramified_tower(p, 2)?;
    let field = tower.residue_field(p)?;
    if field.galois_coeffs(u)[1] == 0 {
        return Err(Error::InvalidArgument("u must lie outside F_p".into()));
    }
    let ut = lift_residue(&tower, &field, u, lift == ULift::ShiftedByP)?;
    let ct = lift_residue(&tower, &field, c, false)?;
    let n = lemma_matrix(&tower, &ut)?;
    let k = 3;
    let t = PerturbedLift::new(n.clone(), vec![tower.zero(), tower.zero(), ct.clone()], k)?;
    let pc = tower.mul_i64(&ct, p as i64);
    let mut failure = None;
    let mut iter = TruncatedSeries::identity(&tower, k);
    let mut tp_equals_np = None;
    for i in 1..=imax {
        iter = t.apply(&iter)?;
        let ni = n.pow(i).to_series(k)?;
        let mut expected = ni.coeffs().to_vec();
        expected[2] = tower.add(&expected[2], &tower.mul_i64(&pc, i as i64));
        if i == p {
            tp_equals_np = Some(iter == ni);
        }
        if failure.is_none() {
            if let Some(idx) = (0..k).find(|&j| iter.coeff(j) != &expected[j]) {
                failure = Some(IterateFailure {
                    i,
                    index: idx,
                    lhs: tower.to_payload(iter.coeff(idx)),
                    rhs: tower.to_payload(&expected[idx]),
                });
            }
        }
    }
    Ok(IterateReport {
        p,
        u: field.to_payload(u),
        c: field.to_payload(c),
        lift,
        imax,
        holds: failure.is_none(),
        failure,
        tp_equals_np,
    })
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CoefficientFormula {
    pub name: String,
    pub formula: String,
    /// Holds for every N in 1..=p and every triple.
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OrderProbeReport {
    pub p: u64,
    pub triples: u64,
    /// Coefficients of y⁰, y¹, y² of the common value of T^p.
    pub target: [u64; 3],
    pub all_equal_target: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<[u64; 3]>,
    /// T^p = y would be needed for a lift of order p.
    pub order_p_lift_exists: bool,
    /// Closed forms for the coefficients of T^N mod (p², y³).
    pub formulas: Vec<CoefficientFormula>,
}

/// For every (c₀, c₁, c₂) ∈ (Z/p)³, T = y/(y+1) + p(c₀ + c₁y + c₂y²) over
/// Z/p² satisfies T^p ≡ y − p·y² mod y³, so no such T has order p.
pub fn order_p_probe(p: u64) -> Result<OrderProbeReport> {
    if p <= 3 || !is_prime(p) {
        return Err(Error::InvalidArgument(format!(
            "the probe needs a prime p > 3 (for p = 3 the closed form of T^p does not reduce to y − p·y²; got {p})"
        )));
    }
    let m = p * p;
    let ring = Ring::integers_mod(m)?;
    let base = MobiusElem::from_ints(&ring, [1, 0, 1, 1])?;
    let target = [0, 1, m - p];
    let mm = m as i128;
    let pi = p as i128;
    let inv2 = crate::rings::inv_mod(2, m).unwrap() as i128;
    let inv3 = crate::rings::inv_mod(3, m).unwrap() as i128;
    let inv6 = crate::rings::inv_mod(6, m).unwrap() as i128;
    let modm = |x: i128| x.rem_euclid(mm) as u64;
    let value = |x: &Elem| match x {
        Elem::Mod(v) => *v,
        _ => unreachable!(),
    };
    let mut counterexample = None;
    let mut ok = [true; 5];
    for idx in 0..p * p * p {
        let cs = [idx % p, (idx / p) % p, idx / (p * p)];
        let coeffs = cs.iter().map(|&c| ring.from_i64(c as i64)).collect();
        let t = PerturbedLift::new(base.clone(), coeffs, 3)?;
        let [c0, c1, c2] = cs.map(|c| c as i128);
        let mut it = TruncatedSeries::identity(&ring, 3);
        for n in 1..=p {
            it = t.apply(&it)?;
            let nn = n as i128;
            let got = [value(it.coeff(0)), value(it.coeff(1)), value(it.coeff(2))];
            let constant = modm(nn * pi * c0);
            let linear = modm(1 + nn * pi * c1 - nn * (nn - 1) * pi * c0);
            let quad_common = nn * pi * c2 - nn - 3 * nn * (nn - 1) * pi * c1 % mm * inv2;
            let quadratic = modm(quad_common + nn * (nn - 1) * (8 * nn - 1) % mm * inv6 % mm * pi * c0);
            let alt_linear = modm(1 + nn * pi * c1 - nn * (nn - 1) * c0);
            let alt_quadratic =
                modm(quad_common + nn * (4 * nn * nn - 9 * nn + 5) % mm * inv3 % mm * pi * c0);
            ok[0] &= got[0] == constant;
            ok[1] &= got[1] == linear;
            ok[2] &= got[2] == quadratic;
            ok[3] &= got[1] == alt_linear;
            ok[4] &= got[2] == alt_quadratic;
        }
        let got = [value(it.coeff(0)), value(it.coeff(1)), value(it.coeff(2))];
        if got != target && counterexample.is_none() {
            counterexample = Some(cs);
        }
    }
    let all_equal_target = counterexample.is_none();
    let f = |name: &str, formula: &str, holds: bool| CoefficientFormula {
        name: name.into(),
        formula: formula.into(),
        holds,
    };
    Ok(OrderProbeReport {
        p,
        triples: p * p * p,
        target,
        all_equal_target,
        counterexample,
        order_p_lift_exists: !all_equal_target,
        formulas: vec![
            f("constant", "N·p·c0", ok[0]),
            f("linear", "1 + N·p·c1 − N(N−1)·p·c0", ok[1]),
            f("quadratic", "N·p·c2 − N − (3/2)N(N−1)·p·c1 + (1/6)N(N−1)(8N−1)·p·c0", ok[2]),
            f("linear (c0 term without the factor p)", "1 + N·p·c1 − N(N−1)·c0", ok[3]),
            f("quadratic (c0 term (1/3)N(4N²−9N+5)·p·c0)", "N·p·c2 − N − (3/2)N(N−1)·p·c1 + (1/3)N(4N²−9N+5)·p·c0", ok[4]),
        ],
    })
}
