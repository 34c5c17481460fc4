//! Truncated power series c_0 + c_1 y + … + c_{K−1} y^{K−1} over a ring.

use serde_json::{json, Value};

use crate::rings::{Elem, Ring, RingDescriptor};
use crate::{Error, Result};

/// Default truncation for obstruction work: everything happens mod y³.
pub const DEFAULT_TRUNCATION: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    ring: Ring,
    coeffs: Vec<Elem>,
}

/// Ramification break of an automorphism: `Exact(i)` when ord(f(y) − y) = i + 1,
/// `AtLeast(K − 1)` when f(y) = y to the available precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RamificationBreak {
    Exact(u64),
    AtLeast(u64),
}

impl RamificationBreak {
    pub fn exact(self) -> Option<u64> {
        match self {
            RamificationBreak::Exact(i) => Some(i),
            RamificationBreak::AtLeast(_) => None,
        }
    }
}

impl TruncatedSeries {
    /// A series from its coefficients; the truncation is their number.
    pub fn new(ring: &Ring, coeffs: Vec<Elem>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("truncation must be at least 1".into()));
        }
        Ok(TruncatedSeries { ring: ring.clone(), coeffs })
    }

    pub fn from_ints(ring: &Ring, coeffs: &[i64]) -> Result<Self> {
        Self::new(ring, coeffs.iter().map(|c| ring.from_i64(*c)).collect())
    }

    pub fn zero(ring: &Ring, k: usize) -> Self {
        TruncatedSeries { ring: ring.clone(), coeffs: vec![ring.zero(); k.max(1)] }
    }

    /// The series y.
    pub fn identity(ring: &Ring, k: usize) -> Self {
        let mut s = Self::zero(ring, k);
        if k > 1 {
            s.coeffs[1] = ring.one();
        }
        s
    }

    pub fn constant(ring: &Ring, c: Elem, k: usize) -> Self {
        let mut s = Self::zero(ring, k);
        s.coeffs[0] = c;
        s
    }

    /// Expansion of (a y + b)/(c y + d) to order K; needs d to be a unit.
    pub fn from_homography(ring: &Ring, entries: [&Elem; 4], k: usize) -> Result<Self> {
        let [a, b, c, d] = entries;
        let num = Self::linear(ring, b, a, k);
        let den = Self::linear(ring, d, c, k);
        Ok(num.mul(&den.reciprocal()?))
    }

    fn linear(ring: &Ring, c0: &Elem, c1: &Elem, k: usize) -> Self {
        let mut s = Self::constant(ring, c0.clone(), k);
        if k > 1 {
            s.coeffs[1] = c1.clone();
        }
        s
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Elem {
        &self.coeffs[i]
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring || self.truncation() != other.truncation() {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        let r = &self.ring;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| r.add(a, b)).collect();
        TruncatedSeries { ring: r.clone(), coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let r = &self.ring;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| r.sub(a, b)).collect();
        TruncatedSeries { ring: r.clone(), coeffs }
    }

    pub fn scale(&self, c: &Elem) -> Self {
        let r = &self.ring;
        TruncatedSeries { ring: r.clone(), coeffs: self.coeffs.iter().map(|a| r.mul(a, c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let r = &self.ring;
        let k = self.truncation();
        let mut out = vec![r.zero(); k];
        for (i, a) in self.coeffs.iter().enumerate() {
            if r.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(k - i) {
                out[i + j] = r.add(&out[i + j], &r.mul(a, b));
            }
        }
        TruncatedSeries { ring: r.clone(), coeffs: out }
    }

    /// Multiplicative inverse; the constant term must be a unit.
    pub fn reciprocal(&self) -> Result<Self> {
        let r = &self.ring;
        let inv0 = r.inverse(&self.coeffs[0])?;
        let k = self.truncation();
        let mut out = vec![r.zero(); k];
        out[0] = inv0.clone();
        for n in 1..k {
            let mut s = r.zero();
            for j in 1..=n {
                s = r.add(&s, &r.mul(&self.coeffs[j], &out[n - j]));
            }
            out[n] = r.neg(&r.mul(&inv0, &s));
        }
        Ok(TruncatedSeries { ring: r.clone(), coeffs: out })
    }

    /// f(g(y)) mod y^K, reading f as the polynomial Σ_{i<K} f_i y^i. The
    /// constant term of g must be nilpotent.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        self.check_compatible(g)?;
        let r = &self.ring;
        if !r.is_zero(&g.coeffs[0]) && !r.is_nilpotent(&g.coeffs[0]) {
            return Err(Error::NonNilpotentConstant);
        }
        let k = self.truncation();
        let mut acc = Self::constant(r, self.coeffs[k - 1].clone(), k);
        for i in (0..k - 1).rev() {
            acc = acc.mul(g);
            acc.coeffs[0] = r.add(&acc.coeffs[0], &self.coeffs[i]);
        }
        Ok(acc)
    }

    /// n-fold self-composition.
    pub fn iterate(&self, n: u64) -> Result<Self> {
        let mut acc = Self::identity(&self.ring, self.truncation());
        for _ in 0..n {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(&self.ring, self.truncation())
    }

    /// ord(f(y) − y) − 1 for an automorphism f fixing 0.
    pub fn ramification_break(&self) -> Result<RamificationBreak> {
        let r = &self.ring;
        let k = self.truncation();
        if k < 2 {
            return Err(Error::TruncationTooSmall("need at least the linear coefficient".into()));
        }
        if !r.is_zero(&self.coeffs[0]) {
            return Err(Error::InvalidArgument("series does not fix the origin".into()));
        }
        if !r.is_unit(&self.coeffs[1]) {
            return Err(Error::InvalidArgument("linear coefficient is not a unit".into()));
        }
        let diff = self.sub(&Self::identity(r, k));
        match diff.coeffs.iter().position(|c| !r.is_zero(c)) {
            Some(ord) => Ok(RamificationBreak::Exact(ord as u64 - 1)),
            None => Ok(RamificationBreak::AtLeast(k as u64 - 1)),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ring": self.ring.descriptor().to_json(),
            "K": self.truncation(),
            "coeffs": self.coeffs.iter().map(|c| self.ring.to_payload(c)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let ring = Ring::new(&RingDescriptor::from_json(
            v.get("ring").ok_or_else(|| Error::InvalidArgument("missing ring".into()))?,
        )?)?;
        let coeffs = v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidArgument("missing coeffs".into()))?
            .iter()
            .map(|c| ring.from_payload(c))
            .collect::<Result<Vec<_>>>()?;
        if let Some(k) = v.get("K") {
            if k.as_u64() != Some(coeffs.len() as u64) {
                return Err(Error::InvalidArgument("K does not match the number of coefficients".into()));
            }
        }
        Self::new(&ring, coeffs)
    }
}
