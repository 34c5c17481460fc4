//! The deformation table: one explicit presentation per row.

use std::collections::HashMap;
use std::sync::Mutex;

use num_traits::ToPrimitive;

use super::{GroupSpec, NamedGenerator, ResidueMap, VersalPresentation};
use crate::chebyshev::psi_poly;
use crate::linalg;
use crate::mobius::MobiusElem;
use crate::obstruction::{exhaustive_lift_search, SearchBounds, SearchStatus};
use crate::rings::{binom_in_ring, Elem, Relation, Ring};
use crate::{Error, Result};

/// Entry bound of the search that produces the A₄ lift.
pub const A4_ENTRY_BOUND: i64 = 6;

/// The explicitly lifted cases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LiftCase {
    CyclicP,
    Cyclic2,
    Klein,
    Dp,
    S3,
    A4,
}

impl LiftCase {
    pub const ALL: [LiftCase; 6] =
        [LiftCase::CyclicP, LiftCase::Cyclic2, LiftCase::Klein, LiftCase::Dp, LiftCase::S3, LiftCase::A4];

    pub fn name(self) -> &'static str {
        match self {
            LiftCase::CyclicP => "cyclic_p",
            LiftCase::Cyclic2 => "cyclic_2",
            LiftCase::Klein => "klein",
            LiftCase::Dp => "dp",
            LiftCase::S3 => "s3",
            LiftCase::A4 => "a4",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let mut norm = s.to_ascii_lowercase().replace('-', "_");
        if norm == "dihedral" {
            norm = "dp".into();
        }
        Self::ALL
            .into_iter()
            .find(|c| c.name() == norm || format!("{c:?}").to_ascii_lowercase() == norm)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown lift case {s:?}")))
    }

    /// The group this case lifts, in its default realization.
    pub fn group_spec(self, p: u64) -> Result<GroupSpec> {
        match self {
            LiftCase::CyclicP | LiftCase::Cyclic2 => GroupSpec::new(p, 1, 1),
            LiftCase::Klein => GroupSpec::new(p, 2, 1),
            LiftCase::Dp | LiftCase::S3 => GroupSpec::new(p, 1, 2),
            LiftCase::A4 => a4_spec(),
        }
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn matrix(ring: &Ring, e: [Elem; 4]) -> Result<MobiusElem> {
    let [a, b, c, d] = e;
    MobiusElem::new(ring, a, b, c, d)
}

fn psi_ring(p: u64) -> Result<Ring> {
    let coeffs = psi_poly(p)?
        .coeffs()
        .iter()
        .map(|c| c.to_i64().ok_or_else(|| Error::Unsupported("ψ coefficients exceed 64 bits".into())))
        .collect::<Result<Vec<_>>>()?;
    Ring::quotient(&Ring::integers(), &["alpha"], vec![Relation::modulus("alpha", coeffs)])
}

/// Coefficients of the n-th cyclotomic polynomial, constant term first.
pub(crate) fn cyclotomic(n: u64) -> Vec<i64> {
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        let den = cyclotomic(d);
        // exact division by a monic polynomial
        let mut q = vec![0i64; num.len() - den.len() + 1];
        for i in (0..q.len()).rev() {
            let c = num[i + den.len() - 1];
            q[i] = c;
            for (j, dj) in den.iter().enumerate() {
                num[i + j] -= c * dj;
            }
        }
        num = q;
    }
    num
}

/// The (u+j−1 choose 2j)-type matrix of the equicharacteristic family. `u`
/// lives in `spec.field()`; `alpha` and `xs` (x₁…x_{t−1}) in `ring`, which
/// must receive the canonical map from the field.
pub fn equichar_generator(u: &Elem, spec: &GroupSpec, ring: &Ring, alpha: &Elem, xs: &[Elem]) -> Result<MobiusElem> {
    let p = spec.p();
    if p < 5 {
        return Err(invalid("the equicharacteristic family needs p ≥ 5"));
    }
    if spec.t() < 2 {
        return Err(invalid("the equicharacteristic family needs t ≥ 2"));
    }
    if xs.len() != spec.t() as usize - 1 {
        return Err(invalid(format!("expected {} parameters x_i", spec.t() - 1)));
    }
    let x_term = x_term(u, spec, ring, xs)?;
    let ut = ring.coerce_from(spec.field(), u)?;
    let e = (p - 1) / 2;
    let binom = |shift: i64, k: u64| binom_in_ring(ring, &ring.add(&ut, &ring.from_i64(shift)), k);
    let mut a = ring.zero();
    let mut c = ring.zero();
    let mut d = ring.zero();
    for j in 0..=e {
        let aj = ring.pow(alpha, j);
        a = ring.add(&a, &ring.mul(&binom(j as i64 - 1, 2 * j)?, &aj));
        d = ring.add(&d, &ring.mul(&binom(j as i64, 2 * j)?, &aj));
        if j < e {
            c = ring.add(&c, &ring.mul(&binom(j as i64, 2 * j + 1)?, &aj));
        }
    }
    let b = ring.mul(alpha, &c);
    matrix(ring, [a, b, ring.add(&c, &x_term), d])
}

/// Σ_{i=1}^{t−1} x_i · a_{i+1}(u) · u_{i+1}, with a_k the F_p-coordinates of u.
fn x_term(u: &Elem, spec: &GroupSpec, ring: &Ring, xs: &[Elem]) -> Result<Elem> {
    let coords = spec.coordinates(u).ok_or_else(|| invalid("u is not in V"))?;
    let mut acc = ring.zero();
    for (i, x) in xs.iter().enumerate() {
        let ui = ring.coerce_from(spec.field(), &spec.basis()[i + 1])?;
        let t = ring.mul_i64(&ring.mul(x, &ui), coords[i + 1] as i64);
        acc = ring.add(&acc, &t);
    }
    Ok(acc)
}

fn var_names(prefix: &str, k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("{prefix}{i}")).collect()
}

fn quotient(base: &Ring, names: &[String], relations: Vec<Relation>) -> Result<Ring> {
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    Ring::quotient(base, &refs, relations)
}

/// k[α, x₁…x_{t−1}]/⟨α^{(p−1)/2}, αx_i⟩.
fn equichar_ring(spec: &GroupSpec) -> Result<Ring> {
    let e = ((spec.p() - 1) / 2) as u32;
    let mut names = vec!["alpha".to_string()];
    names.extend(var_names("x", spec.t() as usize - 1));
    let mut rels = vec![Relation::nilpotent("alpha", e)];
    rels.extend(names[1..].iter().map(|x| Relation::annihilate("alpha", x)));
    quotient(spec.field(), &names, rels)
}

fn equichar_family(spec: &GroupSpec, ring: &Ring) -> Result<Vec<NamedGenerator>> {
    let alpha = ring.var("alpha")?;
    let xs = var_names("x", spec.t() as usize - 1).iter().map(|x| ring.var(x)).collect::<Result<Vec<_>>>()?;
    spec.basis()
        .iter()
        .enumerate()
        .map(|(i, u)| Ok(NamedGenerator::new(format!("sigma_u{}", i + 1), equichar_generator(u, spec, ring, &alpha, &xs)?)))
        .collect()
}

fn residue_zero(ring: &Ring, field: &Ring) -> Result<ResidueMap> {
    let images = vec![field.zero(); ring.var_names().len()];
    ResidueMap::new(ring, field, images)
}

fn relation_notes(spec: &GroupSpec) -> Vec<String> {
    let names = spec.generator_names();
    let mut notes = Vec::new();
    for (i, n) in names.iter().enumerate().filter(|(_, n)| n.starts_with("sigma")) {
        notes.push(format!("{n}^{} ~ 1", spec.p()));
        for m in names[i + 1..].iter().filter(|m| m.starts_with("sigma")) {
            notes.push(format!("{n}·{m} ~ {m}·{n}"));
        }
    }
    if spec.n() > 1 {
        notes.push(format!("g^{} ~ 1", spec.n()));
        for i in 0..spec.t() as usize {
            notes.push(format!("g·sigma_u{}·g^-1 ~ {}", i + 1, word(&spec.twist_coordinates(i))));
        }
    }
    notes
}

pub(crate) fn word(coords: &[u64]) -> String {
    let parts: Vec<String> = coords
        .iter()
        .enumerate()
        .filter(|(_, &a)| a > 0)
        .map(|(j, &a)| if a == 1 { format!("sigma_u{}", j + 1) } else { format!("sigma_u{}^{a}", j + 1) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("·")
    }
}

/// Builds the presentation listed in the deformation table for this group.
pub fn versal_table(spec: &GroupSpec) -> Result<VersalPresentation> {
    let (p, t, n) = (spec.p(), spec.t(), spec.n());
    if t == 0 {
        return tame(spec);
    }
    match (p, t, n) {
        (_, 1, 1) if p >= 5 => relabel(lift_generators(LiftCase::CyclicP, p)?, spec, "Z/p, p != 2,3"),
        (3, 1, 1) => rigid_three_cyclic(spec),
        (2, 1, 1) => relabel(lift_generators(LiftCase::Cyclic2, 2)?, spec, "(Z/2)^t, p = 2, t <= 2"),
        (2, 2, 1) => klein(spec, "(Z/2)^t, p = 2, t <= 2"),
        (2, _, 1) => elementary_two(spec),
        (3, _, 1) => unipotent_family(spec, "(Z/3)^t, p = 3, t > 1"),
        (_, _, 1) => {
            let ring = equichar_ring(spec)?;
            let gens = equichar_family(spec, &ring)?;
            let residue = residue_zero(&ring, spec.field())?;
            let mut notes = vec![format!("k[[alpha, x_1..x_{}]]/<alpha^{}, alpha·x_i>", t - 1, (p - 1) / 2)];
            notes.extend(relation_notes(spec));
            Ok(VersalPresentation::new("(Z/p)^t, t > 1, p != 2,3", ring, gens, residue, notes))
        }
        (_, 1, 2) if p >= 5 => relabel(lift_generators(LiftCase::Dp, p)?, spec, "Z/p x| Z/2, p != 2,3"),
        (3, 1, 2) => relabel(lift_generators(LiftCase::S3, 3)?, spec, "Z/3 x| Z/2"),
        (2, 2, 3) => a4(spec),
        (_, _, 2) if p >= 5 => dihedral_equichar(spec),
        _ => twisted_unipotent(spec),
    }
}

fn relabel(mut pres: VersalPresentation, spec: &GroupSpec, row: &str) -> Result<VersalPresentation> {
    pres.row = row.into();
    if pres.residue.field() != spec.field() {
        // re-target the residue map at the spec's field when it is larger
        let images = pres
            .residue
            .images()
            .iter()
            .map(|x| spec.field().coerce_from(pres.residue.field(), x))
            .collect::<Result<Vec<_>>>();
        if let Ok(images) = images {
            pres.residue = ResidueMap::new(&pres.ring, spec.field(), images)?;
        }
    }
    Ok(pres)
}

fn tame(spec: &GroupSpec) -> Result<VersalPresentation> {
    let n = spec.n();
    let row = "Z/n, (n,p) = 1";
    if n == 1 {
        let z = Ring::integers();
        let residue = ResidueMap::new(&z, spec.field(), vec![])?;
        return Ok(VersalPresentation::new(row, z, vec![], residue, vec!["W(k): trivial group".into()]));
    }
    let ring = Ring::quotient(&Ring::integers(), &["z"], vec![Relation::modulus("z", cyclotomic(n))])?;
    let z = ring.var("z")?;
    let g = matrix(&ring, [z, ring.zero(), ring.zero(), ring.one()])?;
    let residue = ResidueMap::new(&ring, spec.field(), vec![spec.zeta().clone()])?;
    let notes = vec![
        "W(k); modelled by Z[z]/<Phi_n(z)> with z lifting zeta".into(),
        format!("g^{n} ~ 1"),
    ];
    Ok(VersalPresentation::new(row, ring, vec![NamedGenerator::new("g", g)], residue, notes))
}

fn rigid_three_cyclic(spec: &GroupSpec) -> Result<VersalPresentation> {
    let z = Ring::integers();
    let m = MobiusElem::from_ints(&z, [1, -3, 1, -2])?;
    let residue = ResidueMap::new(&z, spec.field(), vec![])?;
    let notes = vec!["W(k); psi(alpha) = alpha + 3 gives alpha = -3".into(), "sigma_u1^3 ~ 1".into()];
    Ok(VersalPresentation::new("Z/3, p = 3", z, vec![NamedGenerator::new("sigma_u1", m)], residue, notes))
}

fn klein(spec: &GroupSpec, row: &str) -> Result<VersalPresentation> {
    let mut pres = lift_generators(LiftCase::Klein, 2)?;
    pres.row = row.into();
    let f = spec.field();
    let u = f.mul(&spec.basis()[1], &f.inverse(&spec.basis()[0])?);
    pres.residue = ResidueMap::new(&pres.ring, f, vec![f.zero(), u])?;
    Ok(pres)
}

/// (Z/2)^t, t > 2: on W = {Σx_i = 0, Σu_i x_i = 0} the forms x_i u_j − x_j u_i
/// span the dual space, so the relations α(x_i u_j − x_j u_i) say exactly
/// that α kills W; in coordinates y_k of W the ring is k[α, y_k]/⟨α y_k⟩.
fn elementary_two(spec: &GroupSpec) -> Result<VersalPresentation> {
    let t = spec.t() as usize;
    let f = spec.field();
    let u = spec.basis();
    let rows = vec![vec![f.one(); t], u.to_vec()];
    let w = linalg::nullspace(f, &rows, t);
    let mut forms = Vec::new();
    for i in 0..t {
        for j in i + 1..t {
            forms.push(
                w.iter()
                    .map(|v| f.sub(&f.mul(&v[i], &u[j]), &f.mul(&v[j], &u[i])))
                    .collect::<Vec<_>>(),
            );
        }
    }
    let rank = linalg::rank(f, &forms);
    if w.len() != t - 2 || rank != t - 2 {
        return Err(Error::Inconsistent(format!(
            "expected the forms to span a space of dimension {}, got {rank}",
            t - 2
        )));
    }
    let mut names = vec!["alpha".to_string()];
    names.extend(var_names("y", t - 2));
    let rels = names[1..].iter().map(|y| Relation::annihilate("alpha", y)).collect();
    let ring = quotient(f, &names, rels)?;
    let residue = residue_zero(&ring, f)?;
    let notes = vec![
        format!(
            "k[[alpha, x_1..x_{t}]]/<x_1+...+x_{t}, u_1x_1+...+u_{t}x_{t}, alpha(x_iu_j - x_ju_i)>"
        ),
        format!("y_1..y_{} are coordinates on the solution space of the two linear relations", t - 2),
        format!("rank of alpha(x_iu_j - x_ju_i) restricted to that space: {rank} (full)"),
        "no lift to characteristic 4: see the (Z/2)^3 obstruction search".into(),
    ];
    Ok(VersalPresentation::new("(Z/2)^t, p = 2, t > 2", ring, vec![], residue, notes))
}

/// The rigid translation family [[1,0],[u + Σ x_i a_{i+1}(u) u_{i+1}, 1]] over k[x₁…x_{t−1}].
fn unipotent_family(spec: &GroupSpec, row: &str) -> Result<VersalPresentation> {
    let f = spec.field();
    let names = var_names("x", spec.t() as usize - 1);
    let ring = quotient(f, &names, vec![])?;
    let xs = names.iter().map(|x| ring.var(x)).collect::<Result<Vec<_>>>()?;
    let mut gens = Vec::new();
    for (i, u) in spec.basis().iter().enumerate() {
        let c = ring.add(&ring.coerce_from(f, u)?, &x_term(u, spec, &ring, &xs)?);
        gens.push(NamedGenerator::new(format!("sigma_u{}", i + 1), matrix(&ring, [ring.one(), ring.zero(), c, ring.one()])?));
    }
    let residue = residue_zero(&ring, f)?;
    let mut notes = vec![format!("k[[x_1..x_{}]]", spec.t() - 1)];
    notes.extend(relation_notes(spec));
    Ok(VersalPresentation::new(row, ring, gens, residue, notes))
}

/// n = 2, t ≥ 2, p ≥ 5: the equicharacteristic family with g = [[1,α],[0,−1]].
fn dihedral_equichar(spec: &GroupSpec) -> Result<VersalPresentation> {
    let ring = equichar_ring(spec)?;
    let mut gens = equichar_family(spec, &ring)?;
    let alpha = ring.var("alpha")?;
    gens.push(NamedGenerator::new("g", matrix(&ring, [ring.one(), alpha, ring.zero(), ring.from_i64(-1)])?));
    let residue = residue_zero(&ring, spec.field())?;
    let mut notes = vec![format!(
        "k[[alpha, x_1..x_{}]]/<alpha^{}, alpha·x_i>",
        spec.t() - 1,
        (spec.p() - 1) / 2
    )];
    notes.extend(relation_notes(spec));
    Ok(VersalPresentation::new("(Z/p)^t x| Z/2, t >= 2, p != 2,3", ring, gens, residue, notes))
}

/// Remaining semidirect products: V is a vector space over F_p(ζ) of
/// dimension r = t/s, and the family deforms along the F_p(ζ)-coordinates,
/// which commute with the twist: k[[x₁…x_{r−1}]].
fn twisted_unipotent(spec: &GroupSpec) -> Result<VersalPresentation> {
    let f = spec.field();
    let (s, zeta) = (spec.s() as usize, spec.zeta());
    let fp = Ring::finite_field(spec.p(), 1)?;
    let as_vec = |x: &Elem| f.galois_coeffs(x).iter().map(|&c| fp.from_i64(c as i64)).collect::<Vec<_>>();
    let span = |vs: &[Elem]| -> Vec<Elem> {
        vs.iter().flat_map(|v| (0..s).map(move |k| f.mul(&f.pow(zeta, k as u64), v))).collect()
    };
    // F_p(ζ)-basis chosen greedily from the F_p-basis
    let mut vs: Vec<Elem> = Vec::new();
    for u in spec.basis() {
        let cols: Vec<Vec<Elem>> = span(&vs).iter().map(as_vec).collect();
        if vs.is_empty() || linalg::solve(&fp, &cols, &as_vec(u)).is_none() {
            vs.push(u.clone());
        }
    }
    let r = vs.len();
    let coords = |x: &Elem| -> Result<Vec<Elem>> {
        let cols: Vec<Vec<Elem>> = span(&vs).iter().map(as_vec).collect();
        let c = linalg::solve(&fp, &cols, &as_vec(x)).ok_or_else(|| Error::Inconsistent("V is not ζ-stable".into()))?;
        Ok((0..r)
            .map(|j| {
                (0..s).fold(f.zero(), |acc, k| {
                    let ck = f.from_i64(fp.galois_coeffs(&c[j * s + k])[0] as i64);
                    f.add(&acc, &f.mul(&ck, &f.pow(zeta, k as u64)))
                })
            })
            .collect())
    };
    let names = var_names("x", r - 1);
    let ring = if names.is_empty() { f.clone() } else { quotient(f, &names, vec![])? };
    let xs = names.iter().map(|x| ring.var(x)).collect::<Result<Vec<_>>>()?;
    let mut gens = Vec::new();
    for (i, u) in spec.basis().iter().enumerate() {
        let b = coords(u)?;
        let mut c = ring.coerce_from(f, u)?;
        for (l, x) in xs.iter().enumerate() {
            let coef = ring.coerce_from(f, &f.mul(&b[l + 1], &vs[l + 1]))?;
            c = ring.add(&c, &ring.mul(x, &coef));
        }
        gens.push(NamedGenerator::new(format!("sigma_u{}", i + 1), matrix(&ring, [ring.one(), ring.zero(), c, ring.one()])?));
    }
    let zi = ring.coerce_from(f, &spec.zeta_inverse())?;
    gens.push(NamedGenerator::new("g", matrix(&ring, [ring.one(), ring.zero(), ring.zero(), zi])?));
    let residue = if names.is_empty() {
        ResidueMap::new(&ring, f, vec![])?
    } else {
        residue_zero(&ring, f)?
    };
    let mut notes = vec![if r > 1 { format!("k[[x_1..x_{}]]", r - 1) } else { "k".into() }];
    notes.extend(relation_notes(spec));
    Ok(VersalPresentation::new("(Z/p)^t x| Z/n, n != 2 or p = 2,3", ring, gens, residue, notes))
}

/// ζ = w² in F₄ = F₂[w]/(w²+w+1), so that conjugation by g sends σ₁ to σ_w.
fn a4_spec() -> Result<GroupSpec> {
    let f = Ring::finite_field(2, 2)?;
    let basis = vec![f.one(), f.galois_generator()?];
    let zeta = f.galois_elem(&[1, 1])?;
    GroupSpec::with_data(f, basis, 3, Some(zeta))
}

fn a4_ring() -> Result<Ring> {
    Ring::quotient(&Ring::integers(), &["j"], vec![Relation::modulus("j", vec![1, 1, 1])])
}

static A4_CACHE: Mutex<Option<HashMap<String, VersalPresentation>>> = Mutex::new(None);

fn a4(spec: &GroupSpec) -> Result<VersalPresentation> {
    let key = spec.to_json().to_string();
    if let Some(p) = A4_CACHE.lock().unwrap().get_or_insert_with(HashMap::new).get(&key) {
        return Ok(p.clone());
    }
    let ring = a4_ring()?;
    let bounds = SearchBounds::exact(A4_ENTRY_BOUND);
    let outcome = exhaustive_lift_search(spec, &ring, &bounds)?;
    if outcome.status != SearchStatus::Found {
        return Err(Error::Inconsistent("no A4 lift within the entry bound".into()));
    }
    let witness = outcome.witness.expect("found outcome has a witness");
    let residue = ResidueMap::canonical(&ring, 2)?;
    let mut notes = vec![
        "W(k)[j]/<j^2+j+1>".into(),
        format!(
            "found by exhaustive search: entries a+bj with |a|,|b| <= {A4_ENTRY_BOUND}, {} solutions among {} candidates",
            outcome.solution_count, outcome.search_space.cardinality
        ),
    ];
    notes.extend(relation_notes(spec));
    let pres = VersalPresentation::new("(Z/2)^2 x| Z/3", ring, witness.generators, residue, notes);
    A4_CACHE.lock().unwrap().get_or_insert_with(HashMap::new).insert(key, pres.clone());
    Ok(pres)
}

/// The explicit characteristic-zero (or free) lifts.
pub fn lift_generators(case: LiftCase, p: u64) -> Result<VersalPresentation> {
    let need = |ok: bool, what: &str| if ok { Ok(()) } else { Err(invalid(format!("{} needs {what}", case.name()))) };
    let z = Ring::integers();
    match case {
        LiftCase::CyclicP => {
            need(p >= 3 && crate::rings::is_prime(p), "an odd prime p")?;
            let ring = psi_ring(p)?;
            let a = ring.var("alpha")?;
            let m = matrix(&ring, [ring.one(), a.clone(), ring.one(), ring.add(&ring.one(), &a)])?;
            let residue = ResidueMap::canonical(&ring, p)?;
            let notes = vec!["W(k)[[alpha]]/<psi(alpha)>".into(), format!("sigma_u1^{p} ~ 1")];
            Ok(VersalPresentation::new("Z/p, p != 2", ring, vec![NamedGenerator::new("sigma_u1", m)], residue, notes))
        }
        LiftCase::Cyclic2 => {
            need(p == 2, "p = 2")?;
            let ring = Ring::quotient(&z, &["alpha"], vec![])?;
            let a = ring.var("alpha")?;
            let m = matrix(&ring, [ring.one(), a, ring.one(), ring.from_i64(-1)])?;
            let residue = ResidueMap::canonical(&ring, 2)?;
            let notes = vec!["W(k)[[alpha]]".into(), "sigma_u1^2 ~ 1".into()];
            Ok(VersalPresentation::new("Z/2", ring, vec![NamedGenerator::new("sigma_u1", m)], residue, notes))
        }
        LiftCase::Klein => {
            need(p == 2, "p = 2")?;
            let ring = Ring::quotient(&z, &["alpha", "u"], vec![])?;
            let (a, u) = (ring.var("alpha")?, ring.var("u")?);
            let s1 = matrix(&ring, [ring.one(), a.clone(), ring.one(), ring.from_i64(-1)])?;
            let b = ring.sub(&ring.neg(&ring.mul(&a, &u)), &ring.from_i64(2));
            let su = matrix(&ring, [ring.one(), b, u, ring.from_i64(-1)])?;
            let f = Ring::finite_field(2, 2)?;
            let residue = ResidueMap::new(&ring, &f, vec![f.zero(), f.galois_generator()?])?;
            let notes = vec![
                "W(k)[[alpha]]; u lifts a residue element outside F_2".into(),
                "sigma_u1^2 ~ sigma_u2^2 ~ 1".into(),
                "sigma_u1·sigma_u2 = -sigma_u2·sigma_u1".into(),
            ];
            let gens = vec![NamedGenerator::new("sigma_u1", s1), NamedGenerator::new("sigma_u2", su)];
            Ok(VersalPresentation::new("(Z/2)^2", ring, gens, residue, notes))
        }
        LiftCase::Dp => {
            need(p > 3 && crate::rings::is_prime(p), "a prime p > 3")?;
            let ring = psi_ring(p)?;
            let a = ring.var("alpha")?;
            let m = matrix(&ring, [ring.one(), a.clone(), ring.one(), ring.add(&ring.one(), &a)])?;
            let g = matrix(&ring, [ring.one(), a, ring.zero(), ring.from_i64(-1)])?;
            let residue = ResidueMap::canonical(&ring, p)?;
            let notes = vec![
                "W(k)[[alpha]]/<psi(alpha)>".into(),
                format!("sigma_u1^{p} ~ g^2 ~ (g·sigma_u1)^2 ~ 1"),
            ];
            let gens = vec![NamedGenerator::new("sigma_u1", m), NamedGenerator::new("g", g)];
            Ok(VersalPresentation::new("D_p", ring, gens, residue, notes))
        }
        LiftCase::S3 => {
            need(p == 3, "p = 3")?;
            let m = MobiusElem::from_ints(&z, [1, -3, 1, -2])?;
            let g = MobiusElem::from_ints(&z, [1, 0, 1, -1])?;
            let residue = ResidueMap::canonical(&z, 3)?;
            let notes = vec!["W(k)".into(), "m^3 = g^2 = (g·m)^2 = 1".into()];
            let gens = vec![NamedGenerator::new("sigma_u1", m), NamedGenerator::new("g", g)];
            Ok(VersalPresentation::new("S_3", z, gens, residue, notes))
        }
        LiftCase::A4 => {
            need(p == 2, "p = 2")?;
            a4(&a4_spec()?)
        }
    }
}
