//! Polynomial identities behind the order computations: the binomial
//! congruence in F_p[A, C], the eigenvalue criterion for order p and the
//! commutation condition of the Klein lift in characteristic 4.

use serde::Serialize;
use serde_json::Value;

use crate::chebyshev::{second_kind_half_shift, twice_first_kind_half_shift};
use crate::mobius::MobiusElem;
use crate::rings::{binomial, is_prime, Elem, Ring};
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct BinomialIdentityReport {
    pub p: u64,
    pub holds: bool,
    pub lhs: Value,
    pub rhs: Value,
}

/// Σ_{j=1}^{p−1} (j/p)·C(p,j)·(A−C)^{p−j}·C^j ≡ C·(A^{p−1} − C^{p−1}) in F_p[A, C].
pub fn binomial_identity_check(p: u64) -> Result<BinomialIdentityReport> {
    if p == 2 || !is_prime(p) {
        return Err(Error::InvalidArgument(format!("p must be an odd prime, got {p}")));
    }
    let fp = Ring::finite_field(p, 1)?;
    let r = Ring::quotient(&fp, &["A", "C"], Vec::new())?;
    let (a, c) = (r.var("A")?, r.var("C")?);
    let amc = r.sub(&a, &c);
    let mut lhs = r.zero();
    for j in 1..p {
        // (j/p)·C(p, j) = C(p−1, j−1), an integer
        let coeff = r.from_bigint(&binomial(p - 1, j - 1).into());
        let term = r.mul(&r.pow(&amc, p - j), &r.pow(&c, j));
        lhs = r.add(&lhs, &r.mul(&coeff, &term));
    }
    let rhs = r.mul(&c, &r.sub(&r.pow(&a, p - 1), &r.pow(&c, p - 1)));
    Ok(BinomialIdentityReport { p, holds: lhs == rhs, lhs: r.to_payload(&lhs), rhs: r.to_payload(&rhs) })
}

/// Values of P and Q at Y = 1 + α/2 for the eigenvalues λ± = A − C + C·e^{±iθ},
/// cos θ = Y, of [[A, αC], [C, A + αC]]:
/// λ^p = Σ_j C(p,j)(A−C)^{p−j}C^j (T_j(Y) ± i·sin θ·S_{j−1}(Y)), P = Re − 1, Q the
/// S-part. Both vanish iff the matrix has order p. P is computed as 2P / 2,
/// which needs 2P to be divisible by 2 (automatic when 2 is a unit).
pub fn eigen_order_values(ring: &Ring, a: &Elem, c: &Elem, alpha: &Elem, p: u64) -> Result<(Elem, Elem)> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let amc = ring.sub(a, c);
    let mut two_p = ring.from_i64(-2);
    let mut q = ring.zero();
    for j in 0..=p {
        let w = ring.mul(
            &ring.from_bigint(&binomial(p, j).into()),
            &ring.mul(&ring.pow(&amc, p - j), &ring.pow(c, j)),
        );
        let t2 = twice_first_kind_half_shift(j as i64)?.eval_in(ring, alpha);
        two_p = ring.add(&two_p, &ring.mul(&w, &t2));
        let s = second_kind_half_shift(j as i64)?.eval_in(ring, alpha);
        q = ring.add(&q, &ring.mul(&w, &s));
    }
    let half = ring
        .try_div(&two_p, &ring.from_i64(2))
        .ok_or_else(|| Error::InvalidArgument("2 is not invertible and does not divide 2P".into()))?;
    Ok((half, q))
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct KleinCommutationReport {
    pub s: u32,
    /// Triples (α, ũ, ṽ) examined: α ∈ 2·GR(4, s), ũ, ṽ lifts of u, v.
    pub triples: u64,
    /// Triples where σ̃_u and σ̃_v commute in PGL₂.
    pub commuting: u64,
    /// Whether commuting ⇔ 2αũṽ = −2(ũ + ṽ − 1) on every triple.
    pub condition_equivalent: bool,
    /// Commuting triples with σ̃_v ~ σ̃_1·σ̃_u.
    pub product_relation: u64,
}

fn klein_matrix(r: &Ring, alpha: &Elem, u: &Elem) -> Result<MobiusElem> {
    // det ≡ −1 mod 2 since α ∈ 2R
    let b = r.sub(&r.neg(&r.mul(alpha, u)), &r.from_i64(2));
    MobiusElem::new(r, r.one(), b, u.clone(), r.from_i64(-1))
}

/// With σ̃_w = [[1, −αw̃ − 2], [w̃, −1]] over GR(4, s) (σ̃_1 = [[1, α], [1, −1]]),
/// σ̃_u and σ̃_v commute exactly when 2αũṽ = −2(ũ + ṽ − 1).
pub fn klein_commutation_check(s: u32, u: &Elem, v: &Elem) -> Result<KleinCommutationReport> {
    let r = Ring::galois(2, 2, s)?;
    let f = r.residue_field(2)?;
    let lifts = |x: &Elem| -> Result<Vec<Elem>> {
        let two = r.from_i64(2);
        let base: Vec<i64> = f.galois_coeffs(x).iter().map(|&c| c as i64).collect();
        let base = r.galois_elem(&base)?;
        Ok(f.elements()?
            .iter()
            .map(|e| {
                let cs: Vec<i64> = f.galois_coeffs(e).iter().map(|&c| c as i64).collect();
                r.add(&base, &r.mul(&two, &r.galois_elem(&cs).unwrap()))
            })
            .collect())
    };
    let (us, vs) = (lifts(u)?, lifts(v)?);
    let one = r.one();
    let s1 = |a: &Elem| klein_matrix(&r, &r.sub(&r.from_i64(-2), a), &one);
    let mut report =
        KleinCommutationReport { s, triples: 0, commuting: 0, condition_equivalent: true, product_relation: 0 };
    let two = r.from_i64(2);
    for alpha in r.elements()?.iter().filter(|a| r.try_div(a, &two).is_some()) {
        for ut in &us {
            for vt in &vs {
                report.triples += 1;
                let (mu, mv) = (klein_matrix(&r, alpha, ut)?, klein_matrix(&r, alpha, vt)?);
                let commute = mu.mul(&mv).projective_equal(&mv.mul(&mu))?.is_some();
                let lhs = r.mul_i64(&r.mul(alpha, &r.mul(ut, vt)), 2);
                let rhs = r.mul_i64(&r.sub(&r.add(ut, vt), &one), -2);
                report.condition_equivalent &= commute == (lhs == rhs);
                if commute {
                    report.commuting += 1;
                    // σ̃_1 = [[1, α], [1, −1]] is the w̃ = 1 member with α ↦ −α − 2
                    let m1 = s1(alpha)?;
                    if mv.projective_equal(&m1.mul(&mu))?.is_some() {
                        report.product_relation += 1;
                    }
                }
            }
        }
    }
    Ok(report)
}
