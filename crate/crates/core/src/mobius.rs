//! 2×2 matrices over a ring acting as homographies y ↦ (ay+b)/(cy+d),
//! compared up to unit scalars.

use serde_json::{json, Value};

use crate::rings::{Elem, Ring};
use crate::series::TruncatedSeries;
use crate::{Error, Result};

/// A matrix [[a, b], [c, d]] with nonzero determinant. Products compose the
/// homographies: (M·N)(y) = M(N(y)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MobiusElem {
    ring: Ring,
    e: [Elem; 4],
}

impl MobiusElem {
    pub fn new(ring: &Ring, a: Elem, b: Elem, c: Elem, d: Elem) -> Result<Self> {
        let m = MobiusElem { ring: ring.clone(), e: [a, b, c, d] };
        if ring.is_zero(&m.det()) {
            return Err(Error::InvalidArgument("determinant is zero".into()));
        }
        Ok(m)
    }

    pub fn from_ints(ring: &Ring, [a, b, c, d]: [i64; 4]) -> Result<Self> {
        Self::new(ring, ring.from_i64(a), ring.from_i64(b), ring.from_i64(c), ring.from_i64(d))
    }

    pub fn identity(ring: &Ring) -> Self {
        MobiusElem { ring: ring.clone(), e: [ring.one(), ring.zero(), ring.zero(), ring.one()] }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn entries(&self) -> &[Elem; 4] {
        &self.e
    }

    pub fn a(&self) -> &Elem {
        &self.e[0]
    }

    pub fn b(&self) -> &Elem {
        &self.e[1]
    }

    pub fn c(&self) -> &Elem {
        &self.e[2]
    }

    pub fn d(&self) -> &Elem {
        &self.e[3]
    }

    pub fn det(&self) -> Elem {
        let r = &self.ring;
        r.sub(&r.mul(&self.e[0], &self.e[3]), &r.mul(&self.e[1], &self.e[2]))
    }

    pub fn trace(&self) -> Elem {
        self.ring.add(&self.e[0], &self.e[3])
    }

    /// Whether the determinant is a unit of the (uncompleted) ring.
    pub fn is_invertible(&self) -> bool {
        self.ring.is_unit(&self.det())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let r = &self.ring;
        let [a, b, c, d] = &self.e;
        let [e, f, g, h] = &o.e;
        let dot = |x: &Elem, y: &Elem, z: &Elem, w: &Elem| r.add(&r.mul(x, y), &r.mul(z, w));
        MobiusElem {
            ring: r.clone(),
            e: [dot(a, e, b, g), dot(a, f, b, h), dot(c, e, d, g), dot(c, f, d, h)],
        }
    }

    /// [[d, −b], [−c, a]]: the inverse in PGL₂.
    pub fn adjugate(&self) -> Self {
        let r = &self.ring;
        let [a, b, c, d] = &self.e;
        MobiusElem { ring: r.clone(), e: [d.clone(), r.neg(b), r.neg(c), a.clone()] }
    }

    pub fn scale(&self, lambda: &Elem) -> Self {
        let r = &self.ring;
        MobiusElem { ring: r.clone(), e: self.e.clone().map(|x| r.mul(&x, lambda)) }
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut acc = Self::identity(&self.ring);
        let mut b = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        acc
    }

    /// b = c = 0 and a = d.
    pub fn is_scalar(&self) -> bool {
        let r = &self.ring;
        r.is_zero(&self.e[1]) && r.is_zero(&self.e[2]) && self.e[0] == self.e[3]
    }

    /// The unit λ with self = λ·other, if any.
    pub fn projective_equal(&self, other: &Self) -> Result<Option<Elem>> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        let r = &self.ring;
        // all 2×2 minors of the 2×4 matrix (self; other) must vanish
        for i in 0..4 {
            for j in i + 1..4 {
                let w = r.sub(&r.mul(&self.e[i], &other.e[j]), &r.mul(&self.e[j], &other.e[i]));
                if !r.is_zero(&w) {
                    return Ok(None);
                }
            }
        }
        let candidates = (0..4)
            .filter(|&i| !r.is_zero(&other.e[i]))
            .filter_map(|i| r.try_div(&self.e[i], &other.e[i]));
        for lambda in candidates {
            if r.is_unit(&lambda) && other.scale(&lambda) == *self {
                return Ok(Some(lambda));
            }
        }
        Ok(None)
    }

    /// Least k ≤ bound with self^k scalar.
    pub fn pgl_order(&self, bound: u64) -> Option<u64> {
        let mut acc = self.clone();
        for k in 1..=bound {
            if acc.is_scalar() {
                return Some(k);
            }
            acc = acc.mul(self);
        }
        None
    }

    /// Expansion of the homography to order K (needs d a unit).
    pub fn to_series(&self, k: usize) -> Result<TruncatedSeries> {
        let [a, b, c, d] = &self.e;
        TruncatedSeries::from_homography(&self.ring, [a, b, c, d], k)
    }

    /// (a s + b)/(c s + d) for a series s with nilpotent constant term.
    pub fn apply(&self, s: &TruncatedSeries) -> Result<TruncatedSeries> {
        if s.ring() != &self.ring {
            return Err(Error::RingMismatch);
        }
        let r = &self.ring;
        let k = s.truncation();
        if !r.is_zero(s.coeff(0)) && !r.is_nilpotent(s.coeff(0)) {
            return Err(Error::NonNilpotentConstant);
        }
        let lin = |x: &Elem, y: &Elem| {
            s.scale(x).add(&TruncatedSeries::constant(r, y.clone(), k))
        };
        let num = lin(&self.e[0], &self.e[1]);
        let den = lin(&self.e[2], &self.e[3]);
        Ok(num.mul(&den.reciprocal()?))
    }

    /// Entrywise image in another ring.
    pub fn map(&self, target: &Ring, f: impl Fn(&Elem) -> Result<Elem>) -> Result<Self> {
        let [a, b, c, d] = &self.e;
        Self::new(target, f(a)?, f(b)?, f(c)?, f(d)?)
    }

    /// Image under the canonical map into `target`.
    pub fn coerce(&self, target: &Ring) -> Result<Self> {
        self.map(target, |x| target.coerce_from(&self.ring, x))
    }

    /// 2×2 array of element payloads.
    pub fn to_json(&self) -> Value {
        let p = |x: &Elem| self.ring.to_payload(x);
        json!([[p(&self.e[0]), p(&self.e[1])], [p(&self.e[2]), p(&self.e[3])]])
    }

    pub fn from_json(ring: &Ring, v: &Value) -> Result<Self> {
        let bad = || Error::MalformedElement("Möbius payload must be a 2×2 array".into());
        let rows = v.as_array().filter(|r| r.len() == 2).ok_or_else(bad)?;
        let mut out = Vec::with_capacity(4);
        for row in rows {
            let row = row.as_array().filter(|r| r.len() == 2).ok_or_else(bad)?;
            for x in row {
                out.push(ring.from_payload(x)?);
            }
        }
        let [a, b, c, d]: [Elem; 4] = out.try_into().map_err(|_| bad())?;
        Self::new(ring, a, b, c, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::Relation;

    #[test]
    fn projective_equality_examples() {
        let r = Ring::integers_mod(9).unwrap();
        let m = MobiusElem::from_ints(&r, [1, 2, 3, 5]).unwrap();
        assert_eq!(m.scale(&r.from_i64(7)).projective_equal(&m).unwrap(), Some(r.from_i64(7)));
        let shifted = MobiusElem::from_ints(&r, [2, 3, 3, 5]).unwrap();
        assert_eq!(shifted.projective_equal(&m).unwrap(), None);
        let other = MobiusElem::from_ints(&Ring::integers_mod(3).unwrap(), [1, 0, 0, 1]).unwrap();
        assert_eq!(m.projective_equal(&other), Err(Error::RingMismatch));
    }

    #[test]
    fn s3_generator_cubes_to_scalar() {
        let z = Ring::integers();
        let m = MobiusElem::from_ints(&z, [1, -3, 1, -2]).unwrap();
        assert!(m.pow(3).is_scalar());
        assert_eq!(m.pow(1), m);
        assert_eq!(m.pow(0), MobiusElem::identity(&z));
    }

    #[test]
    fn cyclic_lift_has_order_five_over_psi_quotient() {
        let z = Ring::integers();
        let r = Ring::quotient(&z, &["alpha"], vec![Relation::modulus("alpha", vec![5, 5, 1])]).unwrap();
        let a = r.var("alpha").unwrap();
        let n = MobiusElem::new(&r, r.one(), a.clone(), r.one(), r.add(&r.one(), &a)).unwrap();
        assert!(n.pow(5).is_scalar());
        assert_eq!(n.pgl_order(20), Some(5));
    }

    #[test]
    fn orders() {
        let z = Ring::integers();
        assert_eq!(MobiusElem::identity(&z).pgl_order(1), Some(1));
        assert_eq!(MobiusElem::from_ints(&z, [1, 1, 0, 1]).unwrap().pgl_order(100), None);
        let f5 = Ring::finite_field(5, 1).unwrap();
        assert_eq!(MobiusElem::from_ints(&f5, [1, 0, 1, 1]).unwrap().pgl_order(100), Some(5));
    }

    #[test]
    fn zero_determinant_rejected() {
        assert!(MobiusElem::from_ints(&Ring::integers(), [1, 2, 2, 4]).is_err());
    }

    #[test]
    fn apply_matches_product_expansion() {
        let r = Ring::galois(3, 2, 2).unwrap();
        let m = MobiusElem::from_ints(&r, [1, 3, 2, 1]).unwrap();
        let n = MobiusElem::from_ints(&r, [4, 0, 1, 1]).unwrap();
        let lhs = m.apply(&n.to_series(5).unwrap()).unwrap();
        assert_eq!(lhs, m.mul(&n).to_series(5).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let r = Ring::integers();
        let m = MobiusElem::from_ints(&r, [1, -3, 1, -2]).unwrap();
        assert_eq!(m.to_json(), json!([[1, -3], [1, -2]]));
        assert_eq!(MobiusElem::from_json(&r, &m.to_json()).unwrap(), m);
    }
}
