//! Explicit versal families and characteristic-zero lifts, with a verifier
//! for the group relations they must satisfy.

pub(crate) mod families;
pub(crate) mod group;
mod residue;
pub(crate) mod verify;


use serde_json::{json, Value};

pub use families::{equichar_generator, lift_generators, versal_table, LiftCase};
pub use group::GroupSpec;
pub use residue::ResidueMap;
pub use verify::{verify_relations, RelationCheck, RelationReport};

pub(crate) use group::has_exact_order;

use crate::mobius::MobiusElem;
use crate::rings::{Ring, RingDescriptor};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedGenerator {
    pub name: String,
    pub matrix: MobiusElem,
}

impl NamedGenerator {
    pub fn new(name: impl Into<String>, matrix: MobiusElem) -> Self {
        NamedGenerator { name: name.into(), matrix }
    }
}

/// A row of the deformation table: the versal ring (or an exact model of
/// it), the lifted generators and the characteristic of the ring.
#[derive(Clone, Debug)]
pub struct VersalPresentation {
    /// Which table row produced this presentation.
    pub row: String,
    pub ring: Ring,
    pub generators: Vec<NamedGenerator>,
    pub characteristic: u64,
    pub notes: Vec<String>,
    /// Reduction to the residue field of the local ring.
    pub residue: ResidueMap,
}

impl VersalPresentation {
    pub(crate) fn new(
        row: &str,
        ring: Ring,
        generators: Vec<NamedGenerator>,
        residue: ResidueMap,
        notes: Vec<String>,
    ) -> Self {
        let characteristic = ring.characteristic();
        VersalPresentation { row: row.into(), ring, generators, characteristic, notes, residue }
    }

    pub fn generator(&self, name: &str) -> Option<&MobiusElem> {
        self.generators.iter().find(|g| g.name == name).map(|g| &g.matrix)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "row": self.row,
            "ring": self.ring.descriptor().to_json(),
            "characteristic": self.characteristic,
            "generators": self
                .generators
                .iter()
                .map(|g| json!({"name": g.name, "matrix": g.matrix.to_json()}))
                .collect::<Vec<_>>(),
            "notes": self.notes,
            "residue": self.residue.to_json(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::InvalidArgument(format!("presentation: {m}"));
        let ring = Ring::new(&RingDescriptor::from_json(v.get("ring").ok_or_else(|| bad("missing ring"))?)?)?;
        let generators = v
            .get("generators")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing generators"))?
            .iter()
            .map(|g| {
                let name = g.get("name").and_then(Value::as_str).ok_or_else(|| bad("generator name"))?;
                let m = MobiusElem::from_json(&ring, g.get("matrix").ok_or_else(|| bad("generator matrix"))?)?;
                Ok(NamedGenerator::new(name, m))
            })
            .collect::<Result<Vec<_>>>()?;
        let residue = ResidueMap::from_json(&ring, v.get("residue").ok_or_else(|| bad("missing residue"))?)?;
        let notes = v
            .get("notes")
            .and_then(Value::as_array)
            .map(|a| a.iter().filter_map(|s| s.as_str().map(String::from)).collect())
            .unwrap_or_default();
        let row = v.get("row").and_then(Value::as_str).unwrap_or("custom");
        let pres = VersalPresentation::new(row, ring, generators, residue, notes);
        if let Some(c) = v.get("characteristic") {
            if c.as_u64() != Some(pres.characteristic) {
                return Err(bad("characteristic disagrees with the ring"));
            }
        }
        Ok(pres)
    }
}
