//! Element payloads: integers for Z and Z/m, little-endian coefficient arrays
//! for Galois rings, nested arrays for quotients (outermost index = exponent of
//! the first variable, innermost = base payload, trailing zeros trimmed) and an
//! array of coefficient arrays for towers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde_json::Value;

use super::quotient::{ReductionOrder, Terms};
use super::{expect_gr, expect_int, expect_mod, expect_poly, expect_tower, Elem, Kind, Ring};
use crate::json::{bigint_to_json, json_to_bigint};
use crate::{Error, Result};

fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedElement(msg.into())
}

pub(super) fn to_json(ring: &Ring, x: &Elem) -> Value {
    match &ring.0.kind {
        Kind::Integers => bigint_to_json(expect_int(x)),
        Kind::Mod { .. } => bigint_to_json(&BigInt::from(expect_mod(x))),
        Kind::Galois(_) => coeff_array(expect_gr(x)),
        Kind::Tower(_) => Value::Array(expect_tower(x).iter().map(|c| coeff_array(c)).collect()),
        Kind::Quotient(q) => nest(&q.base, expect_poly(x), 0, q.nvars()),
    }
}

fn coeff_array(c: &[u64]) -> Value {
    Value::Array(c.iter().map(|v| bigint_to_json(&BigInt::from(*v))).collect())
}

fn nest(base: &Ring, terms: &[(Vec<u32>, Elem)], var: usize, nvars: usize) -> Value {
    if var == nvars {
        return match terms.first() {
            Some((_, c)) => base.to_payload(c),
            None => base.to_payload(&base.zero()),
        };
    }
    let Some(maxe) = terms.iter().map(|(e, _)| e[var]).max() else {
        return Value::Array(Vec::new());
    };
    let out = (0..=maxe)
        .map(|k| {
            let sub: Vec<_> = terms.iter().filter(|(e, _)| e[var] == k).cloned().collect();
            nest(base, &sub, var + 1, nvars)
        })
        .collect();
    Value::Array(out)
}

fn reduce_to_u64(v: &Value, m: u64) -> Result<u64> {
    let b = json_to_bigint(v)?;
    Ok(b.mod_floor(&BigInt::from(m)).to_u64().unwrap())
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| malformed(format!("{what} payload must be an array")))
}

pub(super) fn from_json(ring: &Ring, v: &Value) -> Result<Elem> {
    match &ring.0.kind {
        Kind::Integers => Ok(Elem::Int(json_to_bigint(v)?)),
        Kind::Mod { m, .. } => Ok(Elem::Mod(reduce_to_u64(v, *m)?)),
        Kind::Galois(g) => {
            let a = array(v, "Galois ring")?;
            if a.len() != g.s {
                return Err(malformed(format!("expected {} coefficients", g.s)));
            }
            Ok(Elem::Gr(a.iter().map(|c| reduce_to_u64(c, g.q)).collect::<Result<_>>()?))
        }
        Kind::Tower(t) => {
            let a = array(v, "tower")?;
            if a.len() != t.e {
                return Err(malformed(format!("expected {} coefficient arrays", t.e)));
            }
            let mut out = Vec::with_capacity(t.e);
            for c in a {
                let c = array(c, "tower coefficient")?;
                if c.len() != t.g2.s {
                    return Err(malformed(format!("expected {} coefficients", t.g2.s)));
                }
                out.push(c.iter().map(|x| reduce_to_u64(x, t.g2.q)).collect::<Result<_>>()?);
            }
            Ok(Elem::Tower(t.normalize(out)))
        }
        Kind::Quotient(q) => {
            let mut raw: Terms = Vec::new();
            let mut e = vec![0u32; q.nvars()];
            unnest(&q.base, v, 0, q.nvars(), &mut e, &mut raw)?;
            Ok(Elem::Poly(q.normalize(raw, ReductionOrder::ModulusFirst)))
        }
    }
}

fn unnest(base: &Ring, v: &Value, var: usize, nvars: usize, e: &mut Vec<u32>, out: &mut Terms) -> Result<()> {
    if var == nvars {
        let c = base.from_payload(v)?;
        if !base.is_zero(&c) {
            out.push((e.clone(), c));
        }
        return Ok(());
    }
    for (k, sub) in array(v, "quotient")?.iter().enumerate() {
        e[var] = k as u32;
        unnest(base, sub, var + 1, nvars, e, out)?;
    }
    e[var] = 0;
    Ok(())
}
