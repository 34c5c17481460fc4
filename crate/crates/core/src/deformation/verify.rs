//! Relation checks in PGL₂ over the presentation ring.

use serde::Serialize;
use serde_json::Value;

use super::families::word;
use super::group::prime_factors;
use super::{GroupSpec, ResidueMap, VersalPresentation};
use crate::mobius::MobiusElem;
use crate::rings::Elem;

#[derive(Clone, Debug, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub passed: bool,
    /// λ with lhs = λ·rhs (for orders: the scalar value of the power).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scalar: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub checks: Vec<RelationCheck>,
    #[serde(rename = "allPassed")]
    pub all_passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

impl RelationReport {
    pub fn check(&self, relation: &str) -> Option<&RelationCheck> {
        self.checks.iter().find(|c| c.relation == relation)
    }
}

/// λ with lhs = λ·rhs, where λ is a unit of the ring or at least of its
/// completion at the maximal ideal (the exact model rings are not complete).
pub(crate) fn projective_scalar(lhs: &MobiusElem, rhs: &MobiusElem, residue: &ResidueMap) -> Option<Elem> {
    if let Ok(Some(l)) = lhs.projective_equal(rhs) {
        return Some(l);
    }
    let r = lhs.ring();
    let i = (0..4).find(|&i| !r.is_zero(&rhs.entries()[i]))?;
    let l = r.try_div(&lhs.entries()[i], &rhs.entries()[i])?;
    (rhs.scale(&l) == *lhs && residue.is_local_unit(&l)).then_some(l)
}

pub(crate) fn order_check(name: &str, m: &MobiusElem, k: u64) -> RelationCheck {
    let r = m.ring();
    let power = m.pow(k);
    let scalar_ok = power.is_scalar() && !r.is_zero(power.a());
    let proper = prime_factors(k).into_iter().find(|q| m.pow(k / q).is_scalar());
    RelationCheck {
        relation: format!("{name}^{k} ~ 1"),
        passed: scalar_ok && proper.is_none(),
        scalar: scalar_ok.then(|| r.to_payload(power.a())),
        detail: if !scalar_ok {
            Some(format!("{name}^{k} is not scalar"))
        } else {
            proper.map(|q| format!("{name}^{} is already scalar", k / q))
        },
    }
}

fn projective_check(relation: String, lhs: &MobiusElem, rhs: &MobiusElem, residue: &ResidueMap) -> RelationCheck {
    let l = projective_scalar(lhs, rhs, residue);
    RelationCheck {
        relation,
        passed: l.is_some(),
        scalar: l.as_ref().map(|x| lhs.ring().to_payload(x)),
        detail: l.is_none().then(|| "sides are not proportional by a unit".into()),
    }
}

/// Checks orders, pairwise commutation of the p-part and the ζ-twist
/// g·σ_{u_i}·g⁻¹ ~ σ_{ζ⁻¹u_i} (written in the basis) in PGL₂ over the ring.
pub fn verify_relations(pres: &VersalPresentation, spec: &GroupSpec) -> RelationReport {
    let names = spec.generator_names();
    let mut checks = Vec::new();
    if pres.generators.is_empty() && !names.is_empty() {
        return RelationReport {
            checks,
            all_passed: true,
            skipped: Some("presentation carries no matrix generators".into()),
        };
    }
    for g in &pres.generators {
        if !names.contains(&g.name) {
            checks.push(RelationCheck {
                relation: format!("unexpected generator {}", g.name),
                passed: false,
                scalar: None,
                detail: None,
            });
        }
    }
    let mut found = Vec::new();
    for n in &names {
        match pres.generator(n) {
            Some(m) => found.push(Some(m)),
            None => {
                checks.push(RelationCheck {
                    relation: format!("missing generator {n}"),
                    passed: false,
                    scalar: None,
                    detail: None,
                });
                found.push(None);
            }
        }
    }
    let t = spec.t() as usize;
    let sig: Vec<Option<&MobiusElem>> = found[..t].to_vec();
    for (i, m) in sig.iter().enumerate() {
        if let Some(m) = m {
            checks.push(order_check(&names[i], m, spec.p()));
        }
    }
    for i in 0..t {
        for j in i + 1..t {
            if let (Some(a), Some(b)) = (sig[i], sig[j]) {
                let rel = format!("{}·{} ~ {}·{}", names[i], names[j], names[j], names[i]);
                checks.push(projective_check(rel, &a.mul(b), &b.mul(a), &pres.residue));
            }
        }
    }
    if spec.n() > 1 {
        if let Some(g) = found[t] {
            checks.push(order_check("g", g, spec.n()));
            for i in 0..t {
                let coords = spec.twist_coordinates(i);
                let Some(si) = sig[i] else { continue };
                if coords.iter().enumerate().any(|(j, &a)| a > 0 && sig[j].is_none()) {
                    continue;
                }
                let mut w = MobiusElem::identity(&pres.ring);
                for (j, &a) in coords.iter().enumerate() {
                    if a > 0 {
                        w = w.mul(&sig[j].unwrap().pow(a));
                    }
                }
                let lhs = g.mul(si).mul(&g.adjugate());
                let rel = format!("g·{}·g^-1 ~ {}", names[i], word(&coords));
                checks.push(projective_check(rel, &lhs, &w, &pres.residue));
            }
        }
    }
    let all_passed = checks.iter().all(|c| c.passed);
    RelationReport { checks, all_passed, skipped: None }
}
