//! Serializable ring descriptors.

use serde::{Deserialize, Serialize};

use crate::json::{num_u64, num_vec_i64, num_vec_u64_opt, opt_num_vec_i64};

/// Description of a coefficient ring. Tagged by `"kind"` in JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RingDescriptor {
    Integers {
        #[serde(default, skip_serializing)]
        schema: Option<u32>,
    },
    IntegersMod {
        #[serde(with = "num_u64")]
        m: u64,
        #[serde(default, skip_serializing)]
        schema: Option<u32>,
    },
    GaloisRing {
        p: u64,
        n: u32,
        s: u32,
        /// Monic modulus, little-endian; resolved to the default when absent.
        #[serde(default, with = "num_vec_u64_opt", skip_serializing_if = "Option::is_none")]
        modulus: Option<Vec<u64>>,
        #[serde(default, skip_serializing)]
        schema: Option<u32>,
    },
    Quotient {
        base: Box<RingDescriptor>,
        vars: Vec<String>,
        relations: Vec<Relation>,
        #[serde(default, skip_serializing)]
        schema: Option<u32>,
    },
    RamifiedTower {
        p: u64,
        s: u32,
        /// Eisenstein polynomial, little-endian; the versal ψ when absent.
        #[serde(default, with = "opt_num_vec_i64", skip_serializing_if = "Option::is_none")]
        psi: Option<Vec<i64>>,
        #[serde(default, skip_serializing)]
        schema: Option<u32>,
    },
}

/// The supported relation shapes of a quotient ring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Relation {
    /// `f(var) = 0` with `f` monic, little-endian integer coefficients.
    Modulus {
        var: String,
        #[serde(with = "num_vec_i64")]
        coeffs: Vec<i64>,
    },
    /// `var^exponent = 0`.
    Nilpotent { var: String, exponent: u32 },
    /// `vars[0]·vars[1] = 0`.
    Annihilate { vars: [String; 2] },
}

impl RingDescriptor {
    pub fn integers() -> Self {
        RingDescriptor::Integers { schema: None }
    }

    pub fn integers_mod(m: u64) -> Self {
        RingDescriptor::IntegersMod { m, schema: None }
    }

    pub fn galois(p: u64, n: u32, s: u32) -> Self {
        RingDescriptor::GaloisRing { p, n, s, modulus: None, schema: None }
    }

    pub fn quotient(base: RingDescriptor, vars: &[&str], relations: Vec<Relation>) -> Self {
        RingDescriptor::Quotient {
            base: Box::new(base),
            vars: vars.iter().map(|v| v.to_string()).collect(),
            relations,
            schema: None,
        }
    }

    pub fn ramified_tower(p: u64, s: u32) -> Self {
        RingDescriptor::RamifiedTower { p, s, psi: None, schema: None }
    }

    /// JSON with the `"schema": 1` version field.
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("descriptor serializes");
        if let Some(obj) = v.as_object_mut() {
            obj.insert("schema".into(), 1.into());
        }
        v
    }

    pub fn from_json(v: &serde_json::Value) -> crate::Result<Self> {
        if let Some(s) = v.get("schema") {
            if s != &serde_json::Value::from(1) {
                return Err(crate::Error::InvalidRing(format!("unsupported schema {s}")));
            }
        }
        serde_json::from_value(v.clone()).map_err(|e| crate::Error::InvalidRing(e.to_string()))
    }
}

impl Relation {
    pub fn modulus(var: &str, coeffs: Vec<i64>) -> Self {
        Relation::Modulus { var: var.into(), coeffs }
    }

    pub fn nilpotent(var: &str, exponent: u32) -> Self {
        Relation::Nilpotent { var: var.into(), exponent }
    }

    pub fn annihilate(a: &str, b: &str) -> Self {
        Relation::Annihilate { vars: [a.into(), b.into()] }
    }
}
