//! Certified finite searches for lifts of a residue action.
//!
//! Two candidate shapes are supported:
//! - exact homographies [[1,b],[c,d]] whose entries are bounded elements of
//!   the ring congruent to the residue generator (relations checked exactly
//!   in PGL₂, up to local-unit scalars);
//! - perturbed lifts T = n + p·S, n the naive lift of the residue generator,
//!   deg S < D, with relations checked on series mod y^K. For D = K this
//!   covers every series mod (p^n, y^K) congruent to the residue generator.
//!
//! The enumeration is exhaustive: pruned subtrees are counted, so an
//! exhausted outcome has checked count equal to the cardinality.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::PerturbedLift;
use crate::deformation::verify::{order_check, projective_scalar};
use crate::deformation::{GroupSpec, NamedGenerator, ResidueMap};
use crate::deformation::group::prime_factors;
use crate::json::u128_to_json;
use crate::mobius::MobiusElem;
use crate::rings::{Elem, Ring};
use crate::series::TruncatedSeries;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumerationOrder {
    Natural,
    Reversed,
    /// Every candidate list shuffled with a seeded ChaCha generator.
    Shuffled(u64),
}

#[derive(Clone, Debug)]
pub struct SearchBounds {
    /// Height bound on entries; required for infinite rings.
    pub entry_bound: Option<i64>,
    /// D: the perturbation S has degree < D. Zero selects exact homographies.
    pub perturb_degree: usize,
    /// K: series are compared mod y^K (perturbed mode only).
    pub truncation: usize,
    /// Generators fixed to a single matrix (no perturbation).
    pub fixed: Vec<NamedGenerator>,
    pub order: EnumerationOrder,
    /// Refuse searches whose cardinality exceeds this.
    pub ceiling: u128,
}

impl SearchBounds {
    pub const DEFAULT_CEILING: u128 = 1_000_000_000_000_000_000;

    /// Exact homographies with entries of height ≤ bound.
    pub fn exact(bound: i64) -> Self {
        SearchBounds {
            entry_bound: Some(bound),
            perturb_degree: 0,
            truncation: 0,
            fixed: Vec::new(),
            order: EnumerationOrder::Natural,
            ceiling: Self::DEFAULT_CEILING,
        }
    }

    /// Naive lifts plus p·S with deg S < degree, compared mod y^k.
    pub fn perturbed(degree: usize, k: usize) -> Self {
        SearchBounds { entry_bound: None, perturb_degree: degree, truncation: k, ..Self::exact(0) }
    }

    pub fn with_fixed(mut self, g: NamedGenerator) -> Self {
        self.fixed.push(g);
        self
    }

    pub fn with_order(mut self, order: EnumerationOrder) -> Self {
        self.order = order;
        self
    }

    pub fn with_ceiling(mut self, ceiling: u128) -> Self {
        self.ceiling = ceiling;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchStatus {
    Found,
    Exhausted,
}

impl SearchStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchStatus::Found => "found",
            SearchStatus::Exhausted => "exhausted",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchSpace {
    /// "homography" or "perturbed".
    pub mode: String,
    pub description: String,
    /// Candidates per generator, in enumeration order.
    pub generators: Vec<(String, u128)>,
    pub cardinality: u128,
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub ring: Ring,
    /// Homographic parts, in generator-name order.
    pub generators: Vec<NamedGenerator>,
    /// The full perturbed lifts (perturbed mode only).
    pub lifts: Vec<(String, PerturbedLift)>,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    /// The first solution in enumeration order.
    pub witness: Option<Witness>,
    pub search_space: SearchSpace,
    pub checked_count: u128,
    pub solution_count: u128,
    pub relations: Vec<String>,
}

impl SearchOutcome {
    pub fn to_json(&self) -> Value {
        let witness = self.witness.as_ref().map(|w| {
            let mut v = json!({
                "ring": w.ring.descriptor().to_json(),
                "generators": w.generators.iter().map(|g| json!({"name": g.name, "matrix": g.matrix.to_json()})).collect::<Vec<_>>(),
            });
            if !w.lifts.is_empty() {
                v["lifts"] = w.lifts.iter().map(|(n, l)| json!({"name": n, "lift": l.to_json()})).collect();
            }
            v
        });
        json!({
            "status": self.status.as_str(),
            "witness": witness,
            "searchSpace": {
                "mode": self.search_space.mode,
                "description": self.search_space.description,
                "generators": self.search_space.generators.iter()
                    .map(|(n, c)| json!({"name": n, "candidates": u128_to_json(*c)})).collect::<Vec<_>>(),
                "cardinality": u128_to_json(self.search_space.cardinality),
            },
            "checkedCount": u128_to_json(self.checked_count),
            "solutionCount": u128_to_json(self.solution_count),
            "relations": self.relations,
        })
    }
}

#[derive(Clone, Debug)]
enum Cand {
    Mat(MobiusElem),
    Lift { lift: PerturbedLift, series: TruncatedSeries },
}

impl Cand {
    fn mat(&self) -> &MobiusElem {
        match self {
            Cand::Mat(m) => m,
            Cand::Lift { lift, .. } => lift.base(),
        }
    }

    fn series(&self) -> &TruncatedSeries {
        match self {
            Cand::Lift { series, .. } => series,
            Cand::Mat(_) => unreachable!("series of an exact candidate"),
        }
    }

    fn apply(&self, s: &TruncatedSeries) -> TruncatedSeries {
        match self {
            Cand::Lift { lift, .. } => lift.apply(s).expect("nilpotent constant term"),
            Cand::Mat(_) => unreachable!("series of an exact candidate"),
        }
    }
}

#[derive(Clone, Debug)]
enum Rel {
    Order { level: usize, k: u64 },
    Commute(usize, usize),
    /// g·σ·g⁻¹ ~ Π σ_j^{a_j}, levels of g and σ, word over levels.
    Twist { g: usize, sigma: usize, word: Vec<(usize, u64)> },
}

impl Rel {
    fn max_level(&self) -> usize {
        match self {
            Rel::Order { level, .. } => *level,
            Rel::Commute(a, b) => *a.max(b),
            Rel::Twist { g, sigma, word } => word.iter().map(|w| w.0).chain([*g, *sigma]).max().unwrap(),
        }
    }
}

/// A level derived from earlier ones: the twist relation determines it.
#[derive(Clone, Copy, Debug)]
enum Derive {
    /// σ = normalize(g·σ_i·g⁻¹).
    Forward { g: usize, from: usize },
    /// σ = normalize(g⁻¹·σ_i·g).
    Backward { g: usize, from: usize },
}

struct Level {
    name: String,
    residue: MobiusElem,
    raw: u128,
    candidates: Vec<Cand>,
    derive: Option<Derive>,
}

struct Searcher {
    exact: bool,
    ring: Ring,
    residue: ResidueMap,
    bound: i64,
    levels: Vec<Level>,
    /// Non-unary relations grouped by the last level they involve.
    checks: Vec<Vec<Rel>>,
    /// Unary order relations per level.
    orders: Vec<Option<u64>>,
    rest: Vec<u128>,
    identity: Option<TruncatedSeries>,
}

#[derive(Default)]
struct Partial {
    checked: u128,
    solutions: u128,
    witness: Option<Vec<Cand>>,
}

impl Partial {
    fn merge(&mut self, o: Partial) {
        self.checked += o.checked;
        self.solutions += o.solutions;
        if self.witness.is_none() {
            self.witness = o.witness;
        }
    }
}

impl Searcher {
    fn order_ok(&self, c: &Cand, k: u64) -> bool {
        match c {
            Cand::Mat(m) => order_check("", m, k).passed,
            Cand::Lift { .. } => {
                let id = self.identity.as_ref().unwrap();
                let pow = |n: u64| (0..n).fold(id.clone(), |s, _| c.apply(&s));
                pow(k) == *id && prime_factors(k).into_iter().all(|q| pow(k / q) != *id)
            }
        }
    }

    fn relation_ok(&self, rel: &Rel, a: &[Cand]) -> bool {
        match rel {
            Rel::Order { level, k } => self.order_ok(&a[*level], *k),
            Rel::Commute(i, j) => {
                if self.exact {
                    let (x, y) = (a[*i].mat(), a[*j].mat());
                    projective_scalar(&x.mul(y), &y.mul(x), &self.residue).is_some()
                } else {
                    a[*i].apply(a[*j].series()) == a[*j].apply(a[*i].series())
                }
            }
            Rel::Twist { g, sigma, word } => {
                if self.exact {
                    let gm = a[*g].mat();
                    let lhs = gm.mul(a[*sigma].mat()).mul(&gm.adjugate());
                    let mut rhs = MobiusElem::identity(&self.ring);
                    for &(j, e) in word {
                        rhs = rhs.mul(&a[j].mat().pow(e));
                    }
                    projective_scalar(&lhs, &rhs, &self.residue).is_some()
                } else {
                    let lhs = a[*g].apply(a[*sigma].series());
                    let mut rhs = a[*g].series().clone();
                    for &(j, e) in word.iter().rev() {
                        for _ in 0..e {
                            rhs = a[j].apply(&rhs);
                        }
                    }
                    lhs == rhs
                }
            }
        }
    }

    /// Whether m is one of the enumerated candidates of the level.
    fn is_member(&self, level: usize, m: &MobiusElem) -> bool {
        let r = &self.ring;
        let target = self.levels[level].residue.entries();
        r.is_one(m.a())
            && (1..4).all(|i| {
                let x = &m.entries()[i];
                r.within_bound(x, self.bound) && self.residue.reduce(x).map(|v| v == target[i]).unwrap_or(false)
            })
    }

    fn derive(&self, rule: Derive, a: &[Cand]) -> Option<MobiusElem> {
        let m = match rule {
            Derive::Forward { g, from } => {
                let gm = a[g].mat();
                gm.mul(a[from].mat()).mul(&gm.adjugate())
            }
            Derive::Backward { g, from } => {
                let gm = a[g].mat();
                gm.adjugate().mul(a[from].mat()).mul(gm)
            }
        };
        let r = &self.ring;
        let e = m.entries();
        let div = |x: &Elem| r.try_div(x, &e[0]);
        MobiusElem::new(r, r.one(), div(&e[1])?, div(&e[2])?, div(&e[3])?).ok()
    }

    fn visit(&self, level: usize, c: Cand, prefix: &mut Vec<Cand>) -> Partial {
        prefix.push(c);
        let ok = self.checks[level].iter().all(|rel| self.relation_ok(rel, prefix));
        let out = if ok {
            self.descend(level + 1, prefix)
        } else {
            Partial { checked: self.rest[level], ..Default::default() }
        };
        prefix.pop();
        out
    }

    fn descend(&self, level: usize, prefix: &mut Vec<Cand>) -> Partial {
        if level == self.levels.len() {
            return Partial { checked: 1, solutions: 1, witness: Some(prefix.clone()) };
        }
        let lv = &self.levels[level];
        let rest = self.rest[level];
        if let Some(rule) = lv.derive {
            let derived = self
                .derive(rule, prefix)
                .filter(|m| self.is_member(level, m))
                .map(Cand::Mat)
                .filter(|c| self.orders[level].is_none_or(|k| self.order_ok(c, k)));
            return match derived {
                Some(c) => {
                    let mut p = self.visit(level, c, prefix);
                    p.checked += (lv.raw - 1) * rest;
                    p
                }
                None => Partial { checked: lv.raw * rest, ..Default::default() },
            };
        }
        let mut total = Partial { checked: (lv.raw - lv.candidates.len() as u128) * rest, ..Default::default() };
        if level <= 1 {
            let parts: Vec<Partial> = lv
                .candidates
                .par_iter()
                .map(|c| self.visit(level, c.clone(), &mut prefix.clone()))
                .collect();
            for p in parts {
                total.merge(p);
            }
        } else {
            for c in &lv.candidates {
                total.merge(self.visit(level, c.clone(), prefix));
            }
        }
        total
    }
}

fn permute<T>(v: &mut [T], order: EnumerationOrder, salt: u64) {
    match order {
        EnumerationOrder::Natural => {}
        EnumerationOrder::Reversed => v.reverse(),
        EnumerationOrder::Shuffled(seed) => {
            v.shuffle(&mut ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ salt))
        }
    }
}

/// Lift a residue-field element coefficientwise (coefficients in [0, p)).
fn naive_lift(ring: &Ring, field: &Ring, x: &Elem) -> Result<Elem> {
    let cs: Vec<i64> = field.galois_coeffs(x).iter().map(|&c| c as i64).collect();
    if ring.galois_generator().is_ok() {
        ring.galois_elem(&cs)
    } else {
        Ok(ring.from_i64(cs[0]))
    }
}

/// Representatives of R/p^{n−1}: coefficient entries in [0, p^{n−1}).
fn perturbation_reps(ring: &Ring, p: u64, s: u32) -> Result<Vec<Elem>> {
    let m = ring.characteristic();
    let width = (m / p) as u128;
    let total = width.pow(s);
    (0..total)
        .map(|mut idx| {
            let cs: Vec<i64> = (0..s)
                .map(|_| {
                    let c = (idx % width) as i64;
                    idx /= width;
                    c
                })
                .collect();
            if s == 1 {
                Ok(ring.from_i64(cs[0]))
            } else {
                ring.galois_elem(&cs)
            }
        })
        .collect()
}

fn product(levels: impl Iterator<Item = u128>, ceiling: u128) -> Result<u128> {
    let mut acc: u128 = 1;
    for x in levels {
        acc = acc.checked_mul(x).filter(|&a| a <= ceiling).ok_or_else(|| Error::SearchTooLarge {
            size: "more than the ceiling".into(),
            ceiling: ceiling.to_string(),
        })?;
    }
    Ok(acc)
}

/// Exhaustive search for generators over `ring` lifting the residue action
/// of `spec` and satisfying its relations (orders, commutation, twist).
pub fn exhaustive_lift_search(spec: &GroupSpec, ring: &Ring, bounds: &SearchBounds) -> Result<SearchOutcome> {
    let p = spec.p();
    let exact = bounds.perturb_degree == 0;
    if ring.residue_characteristic().is_some_and(|q| q != p) {
        return Err(Error::InvalidArgument(format!("ring must have residue characteristic {p}")));
    }
    if !exact && bounds.truncation < 2 {
        return Err(Error::TruncationTooSmall("K must be at least 2".into()));
    }
    if exact && !ring.is_finite() && bounds.entry_bound.is_none() {
        return Err(Error::InvalidArgument("an entry bound is required over an infinite ring".into()));
    }
    let residue = if exact {
        ResidueMap::canonical(ring, p)?
    } else {
        if !ring.is_finite() || ring.base().is_some() {
            return Err(Error::InvalidArgument("perturbed search needs Z/p^n or a Galois ring".into()));
        }
        ResidueMap::new(ring, &ring.residue_field(p)?, Vec::new())?
    };
    let field = residue.field().clone();
    if &field != spec.field() {
        return Err(Error::InvalidArgument("the residue field of the ring differs from the group's field".into()));
    }
    for f in &bounds.fixed {
        if !spec.generator_names().contains(&f.name) {
            return Err(Error::InvalidArgument(format!("unknown fixed generator {}", f.name)));
        }
    }

    // levels: g first, then the σ's
    let mut residues = spec.residue_generators();
    if spec.n() > 1 {
        residues.rotate_right(1);
    }
    let level_of = |name: &str| residues.iter().position(|(n, _)| n == name).unwrap();
    let t = spec.t() as usize;
    let sigma_level = |i: usize| level_of(&format!("sigma_u{}", i + 1));
    let g_level = (spec.n() > 1).then(|| level_of("g"));

    let mut rels = Vec::new();
    let mut names_rel = Vec::new();
    for i in 0..t {
        rels.push(Rel::Order { level: sigma_level(i), k: p });
        names_rel.push(format!("sigma_u{}^{p} ~ 1", i + 1));
    }
    for i in 0..t {
        for j in i + 1..t {
            rels.push(Rel::Commute(sigma_level(i), sigma_level(j)));
            names_rel.push(format!("sigma_u{}·sigma_u{} ~ sigma_u{}·sigma_u{}", i + 1, j + 1, j + 1, i + 1));
        }
    }
    let mut twists = Vec::new();
    if let Some(g) = g_level {
        rels.push(Rel::Order { level: g, k: spec.n() });
        names_rel.push(format!("g^{} ~ 1", spec.n()));
        for i in 0..t {
            let coords = spec.twist_coordinates(i);
            let word: Vec<(usize, u64)> =
                coords.iter().enumerate().filter(|(_, &a)| a > 0).map(|(j, &a)| (sigma_level(j), a)).collect();
            rels.push(Rel::Twist { g, sigma: sigma_level(i), word });
            names_rel.push(format!("g·sigma_u{}·g^-1 ~ {}", i + 1, crate::deformation::families::word(&coords)));
            twists.push(coords);
        }
    }
    let unit = |coords: &[u64]| {
        let nz: Vec<usize> = (0..coords.len()).filter(|&j| coords[j] > 0).collect();
        (nz.len() == 1 && coords[nz[0]] == 1).then(|| nz[0])
    };

    let bound = bounds.entry_bound.unwrap_or(0);
    let (elems, reduced) = if exact {
        let e = ring.bounded_elements(bound)?;
        let r = e.iter().map(|x| residue.reduce(x)).collect::<Result<Vec<_>>>()?;
        (e, r)
    } else {
        (Vec::new(), Vec::new())
    };
    let bucket = |target: &Elem| -> Vec<Elem> {
        elems.iter().zip(&reduced).filter(|(_, r)| *r == target).map(|(e, _)| e.clone()).collect()
    };
    let reps = if exact { Vec::new() } else { perturbation_reps(ring, p, spec.field_degree())? };
    let identity = (!exact).then(|| TruncatedSeries::identity(ring, bounds.truncation));

    let mut levels = Vec::new();
    for (li, (name, res)) in residues.iter().enumerate() {
        let fixed = bounds.fixed.iter().find(|f| &f.name == name);
        let mut derive = None;
        if exact && fixed.is_none() && name != "g" {
            if let Some(g) = g_level.filter(|&g| g < li) {
                let k = (0..t).find(|&i| sigma_level(i) == li).unwrap();
                for i in 0..t {
                    if sigma_level(i) < li && derive.is_none() {
                        if unit(&twists[i]) == Some(k) {
                            derive = Some(Derive::Forward { g, from: sigma_level(i) });
                        } else if unit(&twists[k]) == Some(i) {
                            derive = Some(Derive::Backward { g, from: sigma_level(i) });
                        }
                    }
                }
            }
        }
        let (raw, mut candidates): (u128, Vec<Cand>) = if let Some(f) = fixed {
            let red = f.matrix.map(&field, |x| residue.reduce(x))?;
            if red.projective_equal(res)?.is_none() {
                return Err(Error::InvalidArgument(format!("fixed {name} does not reduce to the residue generator")));
            }
            let c = if exact {
                Cand::Mat(f.matrix.clone())
            } else {
                let lift = PerturbedLift::new(f.matrix.clone(), Vec::new(), bounds.truncation)?;
                Cand::Lift { series: lift.realized()?, lift }
            };
            (1, vec![c])
        } else if exact {
            let e = res.entries();
            let buckets: Vec<Vec<Elem>> = (1..4).map(|i| bucket(&e[i])).collect();
            let raw = buckets.iter().map(|b| b.len() as u128).product();
            let cands = if derive.is_some() {
                Vec::new()
            } else {
                let mut v = Vec::with_capacity(raw as usize);
                for b in &buckets[0] {
                    for c in &buckets[1] {
                        for d in &buckets[2] {
                            v.push(Cand::Mat(MobiusElem::new(ring, ring.one(), b.clone(), c.clone(), d.clone())?));
                        }
                    }
                }
                v
            };
            (raw, cands)
        } else {
            let base = res.map(ring, |x| naive_lift(ring, &field, x))?;
            let d = bounds.perturb_degree;
            let raw = product(std::iter::repeat_n(reps.len() as u128, d), bounds.ceiling)?;
            let mut v = Vec::with_capacity(raw as usize);
            for mut idx in 0..raw {
                let coeffs: Vec<Elem> = (0..d)
                    .map(|_| {
                        let c = reps[(idx % reps.len() as u128) as usize].clone();
                        idx /= reps.len() as u128;
                        c
                    })
                    .collect();
                let lift = PerturbedLift::new(base.clone(), coeffs, bounds.truncation)?;
                v.push(Cand::Lift { series: lift.realized()?, lift });
            }
            (raw, v)
        };
        permute(&mut candidates, bounds.order, li as u64);
        levels.push(Level { name: name.clone(), residue: res.clone(), raw, candidates, derive });
    }
    let cardinality = product(levels.iter().map(|l| l.raw), bounds.ceiling)?;

    let mut orders = vec![None; levels.len()];
    let mut checks = vec![Vec::new(); levels.len()];
    for r in rels {
        match r {
            Rel::Order { level, k } => orders[level] = Some(k),
            other => checks[other.max_level()].push(other),
        }
    }
    let mut rest = vec![1u128; levels.len()];
    for i in (0..levels.len().saturating_sub(1)).rev() {
        rest[i] = rest[i + 1] * levels[i + 1].raw;
    }
    let mut searcher = Searcher { exact, ring: ring.clone(), residue, bound, levels, checks, orders, rest, identity };
    // unary order filter
    let filtered: Vec<Vec<Cand>> = (0..searcher.levels.len())
        .map(|i| match searcher.orders[i] {
            Some(k) => searcher.levels[i].candidates.par_iter().filter(|c| searcher.order_ok(c, k)).cloned().collect(),
            None => searcher.levels[i].candidates.clone(),
        })
        .collect();
    for (lv, f) in searcher.levels.iter_mut().zip(filtered) {
        lv.candidates = f;
    }

    let result = searcher.descend(0, &mut Vec::new());
    debug_assert_eq!(result.checked, cardinality);

    let names = spec.generator_names();
    let witness = result.witness.map(|w| {
        let mut generators = Vec::new();
        let mut lifts = Vec::new();
        for n in &names {
            let c = &w[level_of(n)];
            generators.push(NamedGenerator::new(n.clone(), c.mat().clone()));
            if let Cand::Lift { lift, .. } = c {
                lifts.push((n.clone(), lift.clone()));
            }
        }
        Witness { ring: ring.clone(), generators, lifts }
    });
    let description = if exact {
        format!(
            "homographies [[1,b],[c,d]] with b, c, d congruent to the residue generator and of height <= {bound}; relations exact in PGL_2 up to local-unit scalars"
        )
    } else {
        format!(
            "naive lift of the residue generator plus p·S, deg S < {}, S coefficients in R/p^(n-1); relations on series mod y^{}",
            bounds.perturb_degree, bounds.truncation
        )
    };
    Ok(SearchOutcome {
        status: if result.solutions > 0 { SearchStatus::Found } else { SearchStatus::Exhausted },
        witness,
        search_space: SearchSpace {
            mode: if exact { "homography" } else { "perturbed" }.into(),
            description,
            generators: searcher.levels.iter().map(|l| (l.name.clone(), l.raw)).collect(),
            cardinality,
        },
        checked_count: result.checked,
        solution_count: result.solutions,
        relations: names_rel,
    })
}
