//! Reduction of a deformation ring to its residue field.

use serde_json::{json, Value};

use crate::mobius::MobiusElem;
use crate::rings::{Elem, Ring, RingDescriptor};
use crate::{Error, Result};

/// The map R → k to the residue field of a local model ring. On quotient
/// rings it is given by the images of the variables.
#[derive(Clone, Debug)]
pub struct ResidueMap {
    source: Ring,
    field: Ring,
    images: Vec<Elem>,
}

fn lower_terms_vanish(coeffs: &[Elem], ring: &Ring) -> bool {
    coeffs.iter().all(|c| ring.is_zero(c))
}

impl ResidueMap {
    /// A map with explicit variable images; checked against every relation.
    pub fn new(source: &Ring, field: &Ring, images: Vec<Elem>) -> Result<Self> {
        let map = ResidueMap { source: source.clone(), field: field.clone(), images };
        map.reduce(&source.one())?;
        Ok(map)
    }

    /// The canonical choice: modulus variables whose modulus is X^d mod p go
    /// to 0, other modulus variables to a root in the smallest field
    /// containing one (the field generator when it is a root), nilpotent and
    /// free variables to 0.
    pub fn canonical(source: &Ring, p: u64) -> Result<Self> {
        let Some(base) = source.base() else {
            let field = source.residue_field(p)?;
            return Ok(ResidueMap { source: source.clone(), field, images: Vec::new() });
        };
        let base_field = base.residue_field(p)?;
        let desc = source.descriptor();
        let RingDescriptor::Quotient { vars, relations, .. } = desc else { unreachable!() };
        let mut moduli: Vec<Option<Vec<i64>>> = vec![None; vars.len()];
        for r in relations {
            if let crate::rings::Relation::Modulus { var, coeffs } = r {
                let i = vars.iter().position(|v| v == var).unwrap();
                moduli[i] = Some(coeffs.clone());
            }
        }
        // smallest degree over the base residue field with a root of each modulus
        let mut degree = 1u32;
        for m in moduli.iter().flatten() {
            let low: Vec<Elem> = m[..m.len() - 1].iter().map(|c| base_field.from_i64(*c)).collect();
            if lower_terms_vanish(&low, &base_field) {
                continue;
            }
            let d = (1..m.len() as u32)
                .find(|&d| Self::roots_in(m, p, d).map(|r| !r.is_empty()).unwrap_or(false))
                .ok_or_else(|| Error::Unsupported("modulus has no root in a small extension".into()))?;
            degree = num_integer::lcm(degree, d);
        }
        let field = if degree == 1 {
            base_field
        } else {
            if base_field.galois_coeffs(&base_field.zero()).len() != 1 {
                return Err(Error::Unsupported("residue extension of a non-prime base field".into()));
            }
            Ring::finite_field(p, degree)?
        };
        let mut images = Vec::with_capacity(vars.len());
        for m in &moduli {
            let img = match m {
                None => field.zero(),
                Some(m) => {
                    let low: Vec<Elem> = m[..m.len() - 1].iter().map(|c| field.from_i64(*c)).collect();
                    if lower_terms_vanish(&low, &field) {
                        field.zero()
                    } else {
                        let roots = Self::roots_in_field(m, &field)?;
                        let gen = field.galois_generator()?;
                        if roots.contains(&gen) {
                            gen
                        } else {
                            roots.into_iter().next().ok_or_else(|| Error::Unsupported("no root".into()))?
                        }
                    }
                }
            };
            images.push(img);
        }
        Self::new(source, &field, images)
    }

    fn roots_in(m: &[i64], p: u64, d: u32) -> Result<Vec<Elem>> {
        Self::roots_in_field(m, &Ring::finite_field(p, d)?)
    }

    fn roots_in_field(m: &[i64], field: &Ring) -> Result<Vec<Elem>> {
        let eval = |x: &Elem| {
            m.iter().rev().fold(field.zero(), |acc, c| field.add(&field.mul(&acc, x), &field.from_i64(*c)))
        };
        Ok(field.elements()?.into_iter().filter(|x| field.is_zero(&eval(x))).collect())
    }

    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn field(&self) -> &Ring {
        &self.field
    }

    pub fn images(&self) -> &[Elem] {
        &self.images
    }

    pub fn reduce(&self, x: &Elem) -> Result<Elem> {
        if self.source.base().is_some() {
            self.field.evaluate(&self.source, x, &self.images)
        } else {
            self.field.coerce_from(&self.source, x)
        }
    }

    /// Whether x is invertible in the completion at the maximal ideal.
    pub fn is_local_unit(&self, x: &Elem) -> bool {
        self.reduce(x).map(|r| !self.field.is_zero(&r)).unwrap_or(false)
    }

    pub fn reduce_matrix(&self, m: &MobiusElem) -> Result<MobiusElem> {
        m.map(&self.field, |x| self.reduce(x))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "field": self.field.descriptor().to_json(),
            "images": self.images.iter().map(|x| self.field.to_payload(x)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(source: &Ring, v: &Value) -> Result<Self> {
        let field = Ring::new(&RingDescriptor::from_json(
            v.get("field").ok_or_else(|| Error::InvalidArgument("residue map needs a field".into()))?,
        )?)?;
        let images = v
            .get("images")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidArgument("residue map needs images".into()))?
            .iter()
            .map(|x| field.from_payload(x))
            .collect::<Result<Vec<_>>>()?;
        Self::new(source, &field, images)
    }
}
