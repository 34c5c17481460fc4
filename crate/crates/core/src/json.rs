//! JSON number conventions: integers below 2^53 in magnitude are emitted as
//! JSON numbers, larger ones as decimal strings. Both forms are accepted.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Deserializer, Serializer};
use serde_json::Value;

use crate::{Error, Result};

const SAFE: u64 = 1 << 53;

pub fn bigint_to_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) if v.unsigned_abs() < SAFE => Value::from(v),
        _ => Value::String(x.to_string()),
    }
}

pub fn i128_to_json(x: i128) -> Value {
    bigint_to_json(&BigInt::from(x))
}

pub fn u128_to_json(x: u128) -> Value {
    bigint_to_json(&BigInt::from(x))
}

pub fn json_to_bigint(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(Error::MalformedElement(format!("non-integer number {n}")))
            }
        }
        Value::String(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|_| Error::MalformedElement(format!("not a decimal integer: {s:?}"))),
        other => Err(Error::MalformedElement(format!("expected integer, got {other}"))),
    }
}

fn value_to_i64<E: serde::de::Error>(v: &Value) -> std::result::Result<i64, E> {
    let b = json_to_bigint(v).map_err(E::custom)?;
    b.to_i64().ok_or_else(|| E::custom("integer out of range"))
}

fn value_to_u64<E: serde::de::Error>(v: &Value) -> std::result::Result<u64, E> {
    let b = json_to_bigint(v).map_err(E::custom)?;
    if b.is_negative() {
        return Err(E::custom("expected a non-negative integer"));
    }
    b.to_u64().ok_or_else(|| E::custom("integer out of range"))
}

pub(crate) mod num_u64 {
    use super::*;

    pub fn serialize<S: Serializer>(x: &u64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if *x < SAFE {
            s.serialize_u64(*x)
        } else {
            s.serialize_str(&x.to_string())
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<u64, D::Error> {
        value_to_u64(&Value::deserialize(d)?)
    }
}

pub(crate) mod num_vec_i64 {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(xs: &[i64], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&bigint_to_json(&BigInt::from(*x)))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<i64>, D::Error> {
        let vs = Vec::<Value>::deserialize(d)?;
        vs.iter().map(value_to_i64).collect()
    }
}

pub(crate) mod opt_num_vec_i64 {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &Option<Vec<i64>>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match xs {
            Some(v) => num_vec_i64::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Vec<i64>>, D::Error> {
        let v = Option::<Vec<Value>>::deserialize(d)?;
        v.map(|vs| vs.iter().map(value_to_i64).collect()).transpose()
    }
}

pub(crate) mod num_vec_u64_opt {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(xs: &Option<Vec<u64>>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match xs {
            Some(v) => {
                let mut seq = s.serialize_seq(Some(v.len()))?;
                for x in v {
                    seq.serialize_element(&bigint_to_json(&BigInt::from(*x)))?;
                }
                seq.end()
            }
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Vec<u64>>, D::Error> {
        let v = Option::<Vec<Value>>::deserialize(d)?;
        v.map(|vs| vs.iter().map(value_to_u64).collect()).transpose()
    }
}

/// Accept either inline JSON or `@path` pointing to a JSON file.
pub fn parse_inline_or_file(arg: &str) -> Result<Value> {
    let text = if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {path}: {e}")))?
    } else {
        arg.to_string()
    };
    serde_json::from_str(&text).map_err(|e| Error::InvalidArgument(format!("invalid JSON: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn large_integers_become_strings() {
        assert_eq!(bigint_to_json(&BigInt::from(42)), Value::from(42));
        let big = BigInt::from(1u64 << 60);
        assert_eq!(bigint_to_json(&big), Value::String("1152921504606846976".into()));
        assert_eq!(json_to_bigint(&bigint_to_json(&big)).unwrap(), big);
        assert_eq!(json_to_bigint(&Value::from(-7)).unwrap(), BigInt::from(-7));
        assert!(json_to_bigint(&Value::from(1.5)).is_err());
    }
}
