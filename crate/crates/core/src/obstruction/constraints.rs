//! Linear constraints on a perturbation S from the functional equation
//! S(y/(y+1)) = (y/(uy+1) + 1)^{−2}·S(y) over the residue field.

use serde::Serialize;
use serde_json::Value;

use crate::linalg;
use crate::mobius::MobiusElem;
use crate::rings::{Elem, Ring};
use crate::series::TruncatedSeries;
use crate::{Error, Result};

/// Σ_i coeffs[i]·c_i = 0, read off the coefficient of y^power.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearConstraint {
    pub power: usize,
    pub coeffs: Vec<Elem>,
}

impl LinearConstraint {
    /// All coefficients vanish (e.g. 2c₀ = 0 in characteristic 2).
    pub fn is_vacuous(&self, ring: &Ring) -> bool {
        self.coeffs.iter().all(|c| ring.is_zero(c))
    }
}

#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    pub ring: Ring,
    pub constraints: Vec<LinearConstraint>,
    /// For each c_i, whether every solution has c_i = 0 (only over a field).
    pub forced_zero: Option<Vec<bool>>,
}

#[derive(Serialize)]
struct ConstraintJson {
    power: usize,
    coeffs: Vec<Value>,
    vacuous: bool,
    text: String,
}

impl ConstraintSystem {
    /// Human-readable "a·c0 + b·c1 = 0" with coefficient payloads.
    pub fn render(&self, c: &LinearConstraint) -> String {
        let r = &self.ring;
        let terms: Vec<String> = c
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, x)| !r.is_zero(x))
            .map(|(i, x)| if r.is_one(x) { format!("c{i}") } else { format!("({})·c{i}", r.to_payload(x)) })
            .collect();
        if terms.is_empty() {
            "0 = 0".into()
        } else {
            format!("{} = 0", terms.join(" + "))
        }
    }

    pub fn to_json(&self) -> Value {
        let list: Vec<ConstraintJson> = self
            .constraints
            .iter()
            .map(|c| ConstraintJson {
                power: c.power,
                coeffs: c.coeffs.iter().map(|x| self.ring.to_payload(x)).collect(),
                vacuous: c.is_vacuous(&self.ring),
                text: self.render(c),
            })
            .collect();
        serde_json::json!({
            "ring": self.ring.descriptor().to_json(),
            "constraints": list,
            "forcedZero": self.forced_zero,
        })
    }
}

/// The relations among c₀…c_{K−1} imposed by the functional equation at
/// y¹…y^{K−1} (the y⁰ coefficient is identically zero). `u` is an element of
/// `ring`, a ring of characteristic p: a finite field F_q with u ∉ F_p, or a
/// polynomial ring F_p[u] for a symbolic answer.
pub fn perturbation_constraints(p: u64, u: &Elem, ring: &Ring, k: usize) -> Result<ConstraintSystem> {
    if k < 2 {
        return Err(Error::TruncationTooSmall("K must be at least 2 for an informative constraint".into()));
    }
    if ring.characteristic() != p {
        return Err(Error::InvalidArgument(format!("ring must have characteristic {p}")));
    }
    let is_field = ring.base().is_none();
    if is_field && ring.galois_coeffs(u).iter().skip(1).all(|&c| c == 0) {
        return Err(Error::InvalidArgument("u must lie outside the prime field".into()));
    }
    let sigma = TruncatedSeries::from_homography(ring, [&ring.one(), &ring.zero(), &ring.one(), &ring.one()], k)?;
    let tau = MobiusElem::new(ring, ring.one(), ring.zero(), u.clone(), ring.one())?.to_series(k)?;
    let base = tau.add(&TruncatedSeries::constant(ring, ring.one(), k)).reciprocal()?;
    let factor = base.mul(&base);
    let mut columns = Vec::with_capacity(k);
    for i in 0..k {
        let mut mono = vec![ring.zero(); k];
        mono[i] = ring.one();
        let s = TruncatedSeries::new(ring, mono)?;
        let lhs = s.compose(&sigma)?;
        let rhs = factor.mul(&s);
        columns.push(lhs.sub(&rhs));
    }
    debug_assert!(columns.iter().all(|c| ring.is_zero(c.coeff(0))));
    let constraints: Vec<LinearConstraint> = (1..k)
        .map(|power| LinearConstraint { power, coeffs: columns.iter().map(|c| c.coeff(power).clone()).collect() })
        .collect();
    let forced_zero = is_field.then(|| {
        let rows: Vec<Vec<Elem>> = constraints.iter().map(|c| c.coeffs.clone()).collect();
        let ns = linalg::nullspace(ring, &rows, k);
        (0..k).map(|i| ns.iter().all(|v| ring.is_zero(&v[i]))).collect()
    });
    Ok(ConstraintSystem { ring: ring.clone(), constraints, forced_zero })
}
