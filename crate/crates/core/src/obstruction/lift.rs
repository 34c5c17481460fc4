//! Lifts of the form T(y) = n(y) + p·S(y) with n a homography and S a polynomial.

use serde_json::{json, Value};

use crate::mobius::MobiusElem;
use crate::rings::{Elem, Ring};
use crate::series::TruncatedSeries;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbedLift {
    base: MobiusElem,
    coeffs: Vec<Elem>,
    multiplier: Elem,
    truncation: usize,
}

impl PerturbedLift {
    /// T = base + p·Σ coeffs_i y^i, where p is the residue characteristic.
    pub fn new(base: MobiusElem, coeffs: Vec<Elem>, truncation: usize) -> Result<Self> {
        let ring = base.ring().clone();
        let p = ring
            .residue_characteristic()
            .ok_or_else(|| Error::InvalidArgument("ring has no residue characteristic".into()))?;
        if truncation < 1 {
            return Err(Error::TruncationTooSmall("K must be at least 1".into()));
        }
        Ok(PerturbedLift { multiplier: ring.from_i64(p as i64), base, coeffs, truncation })
    }

    pub fn ring(&self) -> &Ring {
        self.base.ring()
    }

    pub fn base(&self) -> &MobiusElem {
        &self.base
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// n(y) + p·S(y) mod y^K.
    pub fn realized(&self) -> Result<TruncatedSeries> {
        self.apply(&TruncatedSeries::identity(self.ring(), self.truncation))
    }

    /// T(s) = n(s) + p·S(s); exact mod y^K because S is a polynomial.
    pub fn apply(&self, s: &TruncatedSeries) -> Result<TruncatedSeries> {
        let r = self.ring();
        let k = s.truncation();
        let mut acc = TruncatedSeries::zero(r, k);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(s).add(&TruncatedSeries::constant(r, c.clone(), k));
        }
        Ok(self.base.apply(s)?.add(&acc.scale(&self.multiplier)))
    }

    /// T^N(y) mod y^K.
    pub fn iterate(&self, n: u64) -> Result<TruncatedSeries> {
        let mut acc = TruncatedSeries::identity(self.ring(), self.truncation);
        for _ in 0..n {
            acc = self.apply(&acc)?;
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> Value {
        let r = self.ring();
        json!({
            "base": self.base.to_json(),
            "perturbation": self.coeffs.iter().map(|c| r.to_payload(c)).collect::<Vec<_>>(),
            "K": self.truncation,
        })
    }
}
