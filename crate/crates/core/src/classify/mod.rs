//! From local actions to the global answer: ramification breaks, recognition
//! of (Z/p)^t ⋊ Z/n, the annihilator ν(X, G) and the Hurwitz example.

use std::collections::{HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::deformation::{has_exact_order, versal_table, GroupSpec};
use crate::json::u128_to_json;
use crate::mobius::MobiusElem;
use crate::rings::{is_prime, Elem, Ring};
use crate::series::{RamificationBreak, TruncatedSeries};
use crate::{Error, Result};

/// Closures larger than this are checked on a deterministic sample.
pub const SAMPLE_THRESHOLD: usize = 500;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalGenerator {
    Series(TruncatedSeries),
    Mobius(MobiusElem),
}

/// Generators of a local stabilizer acting on F_{p^s}[[y]].
#[derive(Clone, Debug)]
pub struct LocalActionInput {
    pub p: u64,
    pub s: u32,
    pub generators: Vec<LocalGenerator>,
    pub truncation: usize,
}

impl LocalActionInput {
    pub fn field(&self) -> Result<Ring> {
        Ring::finite_field(self.p, self.s)
    }

    /// The residue generators of a group spec as homographies.
    pub fn from_spec(spec: &GroupSpec, truncation: usize) -> Self {
        LocalActionInput {
            p: spec.p(),
            s: spec.field_degree(),
            generators: spec.residue_generators().into_iter().map(|(_, m)| LocalGenerator::Mobius(m)).collect(),
            truncation,
        }
    }

    fn series(&self) -> Result<Vec<TruncatedSeries>> {
        let f = self.field()?;
        let k = self.truncation;
        self.generators
            .iter()
            .map(|g| {
                let s = match g {
                    LocalGenerator::Series(s) => {
                        if s.ring() != &f {
                            return Err(Error::RingMismatch);
                        }
                        if s.truncation() != k {
                            return Err(Error::InvalidArgument("series truncation differs from K".into()));
                        }
                        s.clone()
                    }
                    LocalGenerator::Mobius(m) => {
                        if m.ring() != &f {
                            return Err(Error::RingMismatch);
                        }
                        if !f.is_zero(m.b()) || f.is_zero(m.d()) {
                            return Err(Error::InvalidArgument("homography does not fix y = 0".into()));
                        }
                        m.to_series(k)?
                    }
                };
                if !f.is_zero(s.coeff(0)) || k < 2 || !f.is_unit(s.coeff(1)) {
                    return Err(Error::InvalidArgument("generator must fix 0 and be invertible".into()));
                }
                Ok(s)
            })
            .collect()
    }

    /// {"p", "s", "K", "generators": [{"mobius": [[a,b],[c,d]]} | {"series": [c0, c1, …]}]}
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::InvalidArgument(m.into());
        let obj = v.as_object().ok_or_else(|| bad("local action must be an object"))?;
        if let Some(k) = obj.keys().find(|k| !["p", "s", "K", "generators"].contains(&k.as_str())) {
            return Err(bad(&format!("unknown local action field {k:?}")));
        }
        let p = obj.get("p").and_then(Value::as_u64).ok_or_else(|| bad("missing p"))?;
        let s = obj.get("s").map(|x| x.as_u64().ok_or_else(|| bad("s must be an integer"))).transpose()?.unwrap_or(1);
        let k = obj.get("K").map(|x| x.as_u64().ok_or_else(|| bad("K must be an integer"))).transpose()?.unwrap_or(4);
        if !is_prime(p) {
            return Err(bad(&format!("{p} is not prime")));
        }
        let f = Ring::finite_field(p, s as u32)?;
        let gens = obj
            .get("generators")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing generators"))?
            .iter()
            .map(|g| {
                if let Some(m) = g.get("mobius") {
                    Ok(LocalGenerator::Mobius(MobiusElem::from_json(&f, m)?))
                } else if let Some(cs) = g.get("series").and_then(Value::as_array) {
                    let coeffs = cs.iter().map(|c| f.from_payload(c)).collect::<Result<Vec<_>>>()?;
                    Ok(LocalGenerator::Series(TruncatedSeries::new(&f, coeffs)?))
                } else {
                    Err(bad("generator must have a mobius or series field"))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LocalActionInput { p, s: s as u32, generators: gens, truncation: k as usize })
    }

    pub fn to_json(&self) -> Value {
        let gens: Vec<Value> = self
            .generators
            .iter()
            .map(|g| match g {
                LocalGenerator::Mobius(m) => json!({ "mobius": m.to_json() }),
                LocalGenerator::Series(s) => {
                    json!({ "series": s.coeffs().iter().map(|c| s.ring().to_payload(c)).collect::<Vec<_>>() })
                }
            })
            .collect();
        json!({ "p": self.p, "s": self.s, "K": self.truncation, "generators": gens })
    }
}

fn key(s: &TruncatedSeries) -> String {
    s.coeffs().iter().map(|c| s.ring().to_payload(c).to_string()).collect::<Vec<_>>().join(",")
}

/// Breadth-first closure of the generators under composition mod y^K.
fn closure(field: &Ring, k: usize, gens: &[TruncatedSeries], bound: usize) -> Result<Vec<TruncatedSeries>> {
    let id = TruncatedSeries::identity(field, k);
    let mut seen = HashMap::new();
    seen.insert(key(&id), ());
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g.compose(&x)?;
            if seen.insert(key(&y), ()).is_none() {
                if out.len() >= bound {
                    return Err(Error::ClosureTooLarge(bound));
                }
                out.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FiltrationReport {
    /// Break of each generator (0 for tame generators).
    pub breaks: Vec<u64>,
    pub weak: bool,
    pub closure_size: usize,
    /// Elements whose break was checked.
    pub checked_elements: usize,
    /// True when only a sample of a closure above the threshold was checked.
    pub sampled: bool,
}

fn certified_break(s: &TruncatedSeries) -> Result<u64> {
    match s.ramification_break()? {
        RamificationBreak::Exact(i) => Ok(i),
        RamificationBreak::AtLeast(_) => Err(Error::TruncationTooSmall(
            "element is the identity to the available precision; raise K".into(),
        )),
    }
}

/// Breaks of the generators and whether the action is weakly ramified
/// (every nontrivial wild element has break 1). Closures above
/// [`SAMPLE_THRESHOLD`] are sampled unless `deterministic`.
pub fn ramification_filtration(
    input: &LocalActionInput,
    closure_bound: usize,
    deterministic: bool,
) -> Result<FiltrationReport> {
    if input.truncation < 3 {
        return Err(Error::TruncationTooSmall("K ≥ 3 is needed to see a break of 1".into()));
    }
    let gens = input.series()?;
    let mut breaks = Vec::new();
    for g in &gens {
        breaks.push(if g.is_identity() { 0 } else { certified_break(g)? });
    }
    let all = closure(&input.field()?, input.truncation, &gens, closure_bound)?;
    let mut elems: Vec<&TruncatedSeries> = all.iter().filter(|x| !x.is_identity()).collect();
    let sampled = !deterministic && elems.len() > SAMPLE_THRESHOLD;
    if sampled {
        elems.shuffle(&mut ChaCha8Rng::seed_from_u64(0));
        elems.truncate(SAMPLE_THRESHOLD);
    }
    let mut weak = true;
    for x in &elems {
        if certified_break(x)? > 1 {
            weak = false;
        }
    }
    Ok(FiltrationReport { breaks, weak, closure_size: all.len(), checked_elements: elems.len(), sampled })
}

/// The group generated by the input as a [`GroupSpec`]: t from the wild
/// part, n = |G|/p^t, the basis of V from the wild generators (then the
/// closure) via σ(y) = y − u·y² + …, and ζ = σ'(0) for the first generator
/// (then element) whose linear coefficient has exact order n.
pub fn recognize_group(input: &LocalActionInput, closure_bound: usize) -> Result<GroupSpec> {
    let rep = ramification_filtration(input, closure_bound, false)?;
    if !rep.weak {
        return Err(Error::InvalidArgument("the action is not weakly ramified".into()));
    }
    let f = input.field()?;
    let p = input.p;
    let gens = input.series()?;
    let all = closure(&input.field()?, input.truncation, &gens, closure_bound)?;
    let wild: Vec<&TruncatedSeries> = all.iter().filter(|x| f.is_one(x.coeff(1))).collect();
    let mut order_p = 1u128;
    let mut t = 0u32;
    while order_p < wild.len() as u128 {
        order_p *= p as u128;
        t += 1;
    }
    if order_p != wild.len() as u128 || !(all.len() as u128).is_multiple_of(order_p) {
        return Err(Error::Inconsistent("wild part is not a p-group".into()));
    }
    let n = (all.len() as u128 / order_p) as u64;
    if n.is_multiple_of(p) {
        return Err(Error::Inconsistent("quotient by the wild part has order divisible by p".into()));
    }
    // basis of V
    let u_of = |x: &TruncatedSeries| f.neg(x.coeff(2));
    let fp = Ring::finite_field(p, 1)?;
    let as_row = |x: &Elem| -> Vec<Elem> { f.galois_coeffs(x).iter().map(|&c| fp.from_i64(c as i64)).collect() };
    let mut basis: Vec<Elem> = Vec::new();
    let mut rows: Vec<Vec<Elem>> = Vec::new();
    let candidates = gens.iter().filter(|g| f.is_one(g.coeff(1))).chain(wild.iter().copied());
    for x in candidates {
        if basis.len() == t as usize {
            break;
        }
        let u = u_of(x);
        rows.push(as_row(&u));
        if crate::linalg::rank(&fp, &rows) > basis.len() {
            basis.push(u);
        } else {
            rows.pop();
        }
    }
    if basis.len() != t as usize {
        return Err(Error::Inconsistent("wild elements do not span a group of order p^t".into()));
    }
    let zeta = if n > 1 {
        let z = gens
            .iter()
            .chain(all.iter())
            .map(|x| x.coeff(1))
            .find(|a| has_exact_order(&f, a, n))
            .ok_or_else(|| Error::Inconsistent("the tame quotient is not cyclic".into()))?;
        Some(z.clone())
    } else {
        None
    };
    GroupSpec::with_data(f, basis, n, zeta)
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PerPoint {
    pub group: String,
    pub spec: Value,
    pub row: String,
    pub characteristic: u64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GlobalAnswer {
    pub p: Option<u64>,
    /// ν(X, G): 0 or p.
    pub nu: u64,
    /// Flat (relative complete intersection over W(k)) exactly when ν = 0.
    pub flat: bool,
    pub per_point: Vec<PerPoint>,
}

/// Whether a wild local group is one of Z/p, D_p, (Z/2)², A₄.
pub fn lifts_to_char_zero(spec: &GroupSpec) -> bool {
    matches!((spec.p(), spec.t(), spec.n()), (_, 0, _) | (_, 1, 1) | (3.., 1, 2) | (2, 2, 1) | (2, 2, 3))
}

/// ν = 0 iff every wild local group lifts to characteristic zero, else p.
pub fn nu_global(locals: &[GroupSpec]) -> Result<GlobalAnswer> {
    let p = locals.first().map(|s| s.p());
    if locals.iter().any(|s| Some(s.p()) != p) {
        return Err(Error::InvalidArgument("local groups have different primes".into()));
    }
    let nu = if locals.iter().all(lifts_to_char_zero) { 0 } else { p.unwrap() };
    let mut per_point = Vec::new();
    for s in locals {
        let pres = versal_table(s)?;
        per_point.push(PerPoint {
            group: s.group_name(),
            spec: s.to_json(),
            row: pres.row.clone(),
            characteristic: pres.characteristic,
        });
    }
    Ok(GlobalAnswer { p, nu, flat: nu == 0, per_point })
}

#[derive(Clone, Debug)]
pub struct HurwitzReport {
    pub p: u64,
    pub genus: u128,
    pub group_order: u128,
    pub hurwitz_bound: u128,
    pub liftable_char0: bool,
}

impl HurwitzReport {
    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "genus": u128_to_json(self.genus),
            "groupOrder": u128_to_json(self.group_order),
            "hurwitzBound": u128_to_json(self.hurwitz_bound),
            "liftableChar0": self.liftable_char0,
        })
    }
}

/// The curve (x^p − x)(y^p − y) = 1: genus (p−1)², automorphism group
/// (Z/p)² ⋊ D_{p−1} of order 2p²(p−1), Hurwitz bound 84(g − 1).
pub fn hurwitz_example(p: u64) -> Result<HurwitzReport> {
    if p < 3 || !is_prime(p) {
        return Err(Error::InvalidArgument(format!("p must be a prime ≥ 3, got {p}")));
    }
    let q = p as u128;
    let genus = (q - 1) * (q - 1);
    let group_order = 2 * q * q * (q - 1);
    let hurwitz_bound = 84 * (genus - 1);
    Ok(HurwitzReport { p, genus, group_order, hurwitz_bound, liftable_char0: group_order <= hurwitz_bound })
}

/// The least prime whose example exceeds the Hurwitz bound.
pub fn minimal_hurwitz_violation(limit: u64) -> Option<u64> {
    (3..=limit).filter(|&p| is_prime(p)).find(|&p| !hurwitz_example(p).unwrap().liftable_char0)
}
