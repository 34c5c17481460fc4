//! Exact coefficient rings with canonical normal forms: Z, Z/m, Galois rings
//! GR(p^n, s), polynomial quotients with restricted relation shapes, and the
//! ramified truncation O/pπ.

mod descriptor;
mod galois;
mod payload;
mod quotient;
mod tower;

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use descriptor::{Relation, RingDescriptor};
pub use galois::{default_modulus, is_prime};
pub use quotient::ReductionOrder;

pub(crate) use galois::{inv_mod, mulmod};
use galois::{factorize, is_irreducible_mod_p, Galois};
use quotient::{adjugate, det, QuotientData, Terms};
use tower::TowerData;

use crate::{Error, Result};

/// Largest ring enumerated by brute force when an exact quotient is needed.
const BRUTE_FORCE_LIMIT: u128 = 1 << 16;

/// A ring element in normal form. Only meaningful together with its [`Ring`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Int(BigInt),
    Mod(u64),
    Gr(Vec<u64>),
    /// Sorted (exponent vector, nonzero base coefficient) pairs.
    Poly(Vec<(Vec<u32>, Elem)>),
    Tower(Vec<Vec<u64>>),
}

#[derive(Debug)]
enum Kind {
    Integers,
    Mod { m: u64, factors: Vec<(u64, u32)> },
    Galois(Galois),
    Quotient(QuotientData),
    Tower(TowerData),
}

#[derive(Debug)]
struct Inner {
    desc: RingDescriptor,
    kind: Kind,
}

/// Shared handle to an immutable ring.
#[derive(Clone)]
pub struct Ring(Arc<Inner>);

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({})", self.descriptor().to_json())
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Ring) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.desc == other.0.desc
    }
}

impl Eq for Ring {}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidRing(msg.into())
}

fn expect_mod(x: &Elem) -> u64 {
    match x {
        Elem::Mod(v) => *v,
        _ => panic!("element does not belong to Z/m: {x:?}"),
    }
}

fn expect_gr(x: &Elem) -> &[u64] {
    match x {
        Elem::Gr(v) => v,
        _ => panic!("element does not belong to a Galois ring: {x:?}"),
    }
}

fn expect_poly(x: &Elem) -> &Terms {
    match x {
        Elem::Poly(v) => v,
        _ => panic!("element does not belong to a quotient ring: {x:?}"),
    }
}

fn expect_tower(x: &Elem) -> &Vec<Vec<u64>> {
    match x {
        Elem::Tower(v) => v,
        _ => panic!("element does not belong to a ramified tower: {x:?}"),
    }
}

fn expect_int(x: &Elem) -> &BigInt {
    match x {
        Elem::Int(v) => v,
        _ => panic!("element does not belong to Z: {x:?}"),
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut r = BigUint::one();
    for i in 0..k {
        r = r * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    r
}

impl Ring {
    /// Build a ring from a descriptor, validating it.
    pub fn new(desc: &RingDescriptor) -> Result<Ring> {
        let (desc, kind) = match desc {
            RingDescriptor::Integers { .. } => (RingDescriptor::integers(), Kind::Integers),
            RingDescriptor::IntegersMod { m, .. } => {
                if *m < 2 {
                    return Err(bad("modulus must be at least 2"));
                }
                (RingDescriptor::integers_mod(*m), Kind::Mod { m: *m, factors: factorize(*m) })
            }
            RingDescriptor::GaloisRing { p, n, s, modulus, .. } => {
                let (p, n, s) = (*p, *n, *s);
                if !is_prime(p) {
                    return Err(bad(format!("{p} is not prime")));
                }
                if n == 0 || s == 0 {
                    return Err(bad("exponent and degree must be at least 1"));
                }
                let q = p.checked_pow(n).filter(|q| *q < (1 << 62)).ok_or_else(|| bad("p^n too large"))?;
                let f = match modulus {
                    Some(f) => f.iter().map(|c| c % q).collect::<Vec<_>>(),
                    None => default_modulus(p, s as usize),
                };
                if f.len() != s as usize + 1 || f[s as usize] != 1 {
                    return Err(bad(format!("modulus must be monic of degree {s}")));
                }
                if !is_irreducible_mod_p(&f, p) {
                    return Err(bad("modulus is reducible mod p"));
                }
                let d = RingDescriptor::GaloisRing { p, n, s, modulus: Some(f.clone()), schema: None };
                (d, Kind::Galois(Galois::new(p, n, f)))
            }
            RingDescriptor::Quotient { base, vars, relations, .. } => {
                let base = Ring::new(base)?;
                let data = build_quotient(base, vars, relations)?;
                let d = RingDescriptor::Quotient {
                    base: Box::new(data.base.descriptor().clone()),
                    vars: vars.clone(),
                    relations: relations.clone(),
                    schema: None,
                };
                (d, Kind::Quotient(data))
            }
            RingDescriptor::RamifiedTower { p, s, psi, .. } => {
                let (p, s) = (*p, *s);
                if p == 2 || !is_prime(p) {
                    return Err(bad("ramified tower needs an odd prime"));
                }
                if s == 0 {
                    return Err(bad("degree must be at least 1"));
                }
                let e = ((p - 1) / 2) as usize;
                let psi: Vec<i64> = match psi {
                    Some(v) => v.clone(),
                    None => crate::chebyshev::psi_poly(p)?
                        .coeffs()
                        .iter()
                        .map(|c| c.to_i64().ok_or_else(|| bad("ψ coefficients overflow")))
                        .collect::<Result<_>>()?,
                };
                check_eisenstein(&psi, p, e)?;
                p.checked_pow(2 * s).ok_or_else(|| bad("p^(2s) too large"))?;
                let f = default_modulus(p, s as usize);
                let d = RingDescriptor::RamifiedTower { p, s, psi: Some(psi.clone()), schema: None };
                (d, Kind::Tower(TowerData::new(p, f, psi)))
            }
        };
        Ok(Ring(Arc::new(Inner { desc, kind })))
    }

    pub fn integers() -> Ring {
        Ring::new(&RingDescriptor::integers()).unwrap()
    }

    pub fn integers_mod(m: u64) -> Result<Ring> {
        Ring::new(&RingDescriptor::integers_mod(m))
    }

    pub fn galois(p: u64, n: u32, s: u32) -> Result<Ring> {
        Ring::new(&RingDescriptor::galois(p, n, s))
    }

    /// F_{p^s}, represented as GR(p, 1, s).
    pub fn finite_field(p: u64, s: u32) -> Result<Ring> {
        Ring::galois(p, 1, s)
    }

    pub fn quotient(base: &Ring, vars: &[&str], relations: Vec<Relation>) -> Result<Ring> {
        Ring::new(&RingDescriptor::quotient(base.descriptor().clone(), vars, relations))
    }

    pub fn ramified_tower(p: u64, s: u32) -> Result<Ring> {
        Ring::new(&RingDescriptor::ramified_tower(p, s))
    }

    /// The resolved descriptor (default moduli filled in).
    pub fn descriptor(&self) -> &RingDescriptor {
        &self.0.desc
    }

    // ---- constants ----

    pub fn zero(&self) -> Elem {
        match &self.0.kind {
            Kind::Integers => Elem::Int(BigInt::zero()),
            Kind::Mod { .. } => Elem::Mod(0),
            Kind::Galois(g) => Elem::Gr(g.zero()),
            Kind::Quotient(_) => Elem::Poly(Vec::new()),
            Kind::Tower(t) => Elem::Tower(t.zero()),
        }
    }

    pub fn one(&self) -> Elem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, c: i64) -> Elem {
        self.from_bigint(&BigInt::from(c))
    }

    pub fn from_bigint(&self, c: &BigInt) -> Elem {
        let red = |m: u64| -> u64 { c.mod_floor(&BigInt::from(m)).to_u64().unwrap() };
        match &self.0.kind {
            Kind::Integers => Elem::Int(c.clone()),
            Kind::Mod { m, .. } => Elem::Mod(red(*m)),
            Kind::Galois(g) => Elem::Gr(g.from_u64(red(g.q))),
            Kind::Quotient(q) => self.embed_base(&q.base.from_bigint(c)),
            Kind::Tower(t) => Elem::Tower(t.from_u64(red(t.g2.q))),
        }
    }

    /// Image of a base-ring element in a quotient ring.
    pub fn embed_base(&self, c: &Elem) -> Elem {
        let q = self.quotient_data().expect("embed_base needs a quotient ring");
        if q.base.is_zero(c) {
            return Elem::Poly(Vec::new());
        }
        Elem::Poly(vec![(vec![0; q.nvars()], c.clone())])
    }

    // ---- arithmetic ----

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match &self.0.kind {
            Kind::Integers => Elem::Int(expect_int(a) + expect_int(b)),
            Kind::Mod { m, .. } => Elem::Mod(galois::addmod(expect_mod(a), expect_mod(b), *m)),
            Kind::Galois(g) => Elem::Gr(g.add(expect_gr(a), expect_gr(b))),
            Kind::Quotient(q) => Elem::Poly(q.add(expect_poly(a), expect_poly(b))),
            Kind::Tower(t) => Elem::Tower(t.add(expect_tower(a), expect_tower(b))),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match &self.0.kind {
            Kind::Integers => Elem::Int(-expect_int(a)),
            Kind::Mod { m, .. } => Elem::Mod(galois::submod(0, expect_mod(a), *m)),
            Kind::Galois(g) => Elem::Gr(g.neg(expect_gr(a))),
            Kind::Quotient(q) => Elem::Poly(q.neg(expect_poly(a))),
            Kind::Tower(t) => Elem::Tower(t.neg(expect_tower(a))),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        match &self.0.kind {
            Kind::Integers => Elem::Int(expect_int(a) - expect_int(b)),
            Kind::Mod { m, .. } => Elem::Mod(galois::submod(expect_mod(a), expect_mod(b), *m)),
            Kind::Galois(g) => Elem::Gr(g.sub(expect_gr(a), expect_gr(b))),
            Kind::Tower(t) => Elem::Tower(t.sub(expect_tower(a), expect_tower(b))),
            Kind::Quotient(_) => self.add(a, &self.neg(b)),
        }
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match &self.0.kind {
            Kind::Integers => Elem::Int(expect_int(a) * expect_int(b)),
            Kind::Mod { m, .. } => Elem::Mod(mulmod(expect_mod(a), expect_mod(b), *m)),
            Kind::Galois(g) => Elem::Gr(g.mul(expect_gr(a), expect_gr(b))),
            Kind::Quotient(q) => Elem::Poly(q.mul(expect_poly(a), expect_poly(b))),
            Kind::Tower(t) => Elem::Tower(t.mul(expect_tower(a), expect_tower(b))),
        }
    }

    pub fn mul_i64(&self, a: &Elem, k: i64) -> Elem {
        self.mul(a, &self.from_i64(k))
    }

    pub fn pow(&self, a: &Elem, mut k: u64) -> Elem {
        let mut r = self.one();
        let mut b = a.clone();
        while k > 0 {
            if k & 1 == 1 {
                r = self.mul(&r, &b);
            }
            k >>= 1;
            if k > 0 {
                b = self.mul(&b, &b);
            }
        }
        r
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        match a {
            Elem::Int(v) => v.is_zero(),
            Elem::Mod(v) => *v == 0,
            Elem::Gr(v) => Galois::is_zero(v),
            Elem::Poly(v) => v.is_empty(),
            Elem::Tower(v) => v.iter().all(|c| Galois::is_zero(c)),
        }
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        *a == self.one()
    }

    // ---- structure ----

    /// 0 for characteristic zero.
    pub fn characteristic(&self) -> u64 {
        match &self.0.kind {
            Kind::Integers => 0,
            Kind::Mod { m, .. } => *m,
            Kind::Galois(g) => g.q,
            Kind::Quotient(q) => q.base.characteristic(),
            Kind::Tower(t) => t.g2.q,
        }
    }

    /// The prime p when the ring is local with residue characteristic p.
    pub fn residue_characteristic(&self) -> Option<u64> {
        match &self.0.kind {
            Kind::Integers => None,
            Kind::Mod { factors, .. } => (factors.len() == 1).then(|| factors[0].0),
            Kind::Galois(g) => Some(g.p),
            Kind::Quotient(q) => q.base.residue_characteristic(),
            Kind::Tower(t) => Some(t.p),
        }
    }

    pub fn is_finite(&self) -> bool {
        match &self.0.kind {
            Kind::Integers => false,
            Kind::Quotient(q) => q.base.is_finite() && q.exponent_bounds().is_some(),
            _ => true,
        }
    }

    /// Number of elements, `None` if infinite or beyond u128.
    pub fn cardinality(&self) -> Option<u128> {
        match &self.0.kind {
            Kind::Integers => None,
            Kind::Mod { m, .. } => Some(*m as u128),
            Kind::Galois(g) => g.cardinality(),
            Kind::Quotient(q) => {
                let b = q.base.cardinality()?;
                let n = q.standard_monomials()?.len() as u32;
                b.checked_pow(n)
            }
            Kind::Tower(t) => t.cardinality(),
        }
    }

    /// All elements of a finite ring, in a fixed deterministic order.
    pub fn elements(&self) -> Result<Vec<Elem>> {
        let card = self.cardinality().ok_or_else(|| Error::Unsupported("ring is not finite".into()))?;
        if card > 1 << 24 {
            return Err(Error::Unsupported(format!("refusing to enumerate {card} elements")));
        }
        Ok(match &self.0.kind {
            Kind::Integers => unreachable!(),
            Kind::Mod { m, .. } => (0..*m).map(Elem::Mod).collect(),
            Kind::Galois(g) => g.elements().into_iter().map(Elem::Gr).collect(),
            Kind::Tower(t) => t.elements().into_iter().map(Elem::Tower).collect(),
            Kind::Quotient(q) => {
                let mons = q.standard_monomials().unwrap();
                let base_elems = q.base.elements()?;
                let mut out: Vec<Terms> = vec![Vec::new()];
                for mon in mons.iter().rev() {
                    let mut next = Vec::with_capacity(out.len() * base_elems.len());
                    for t in &out {
                        for c in &base_elems {
                            let mut t2 = t.clone();
                            if !q.base.is_zero(c) {
                                t2.push((mon.clone(), c.clone()));
                            }
                            next.push(t2);
                        }
                    }
                    out = next;
                }
                out.into_iter()
                    .map(|mut t| {
                        t.sort_by(|a, b| a.0.cmp(&b.0));
                        Elem::Poly(t)
                    })
                    .collect()
            }
        })
    }

    /// An upper bound N with x^N = 0 for every nilpotent x.
    pub fn nilpotency_bound(&self) -> u64 {
        match &self.0.kind {
            Kind::Integers => 1,
            Kind::Mod { factors, .. } => factors.iter().map(|f| f.1 as u64).max().unwrap_or(1),
            Kind::Galois(g) => g.n as u64,
            Kind::Tower(t) => t.e as u64 + 1,
            Kind::Quotient(q) => {
                let mut b = q.base.nilpotency_bound();
                for v in q.modulus_vars() {
                    b *= q.modulus[v].as_ref().unwrap().len() as u64;
                }
                b + q.nil.iter().flatten().map(|e| (*e as u64).saturating_sub(1)).sum::<u64>()
            }
        }
    }

    pub fn is_nilpotent(&self, x: &Elem) -> bool {
        self.is_zero(&self.pow(x, self.nilpotency_bound()))
    }

    // ---- units and division ----

    pub fn is_unit(&self, x: &Elem) -> bool {
        match &self.0.kind {
            Kind::Integers => expect_int(x).abs().is_one(),
            Kind::Mod { m, .. } => inv_mod(expect_mod(x), *m).is_some(),
            Kind::Galois(g) => g.is_unit(expect_gr(x)),
            Kind::Tower(t) => t.is_unit(expect_tower(x)),
            Kind::Quotient(_) => self.inverse(x).is_ok(),
        }
    }

    /// Multiplicative inverse; `Error::NotUnit` for non-units.
    pub fn inverse(&self, x: &Elem) -> Result<Elem> {
        match &self.0.kind {
            Kind::Integers => {
                let v = expect_int(x);
                if v.abs().is_one() {
                    Ok(x.clone())
                } else {
                    Err(Error::NotUnit)
                }
            }
            Kind::Mod { m, .. } => inv_mod(expect_mod(x), *m).map(Elem::Mod).ok_or(Error::NotUnit),
            Kind::Galois(g) => g.inverse(expect_gr(x)).map(Elem::Gr).ok_or(Error::NotUnit),
            Kind::Tower(t) => t.inverse(expect_tower(x)).map(Elem::Tower).ok_or(Error::NotUnit),
            Kind::Quotient(q) => self.quotient_inverse(q, expect_poly(x)),
        }
    }

    fn quotient_inverse(&self, q: &QuotientData, x: &Terms) -> Result<Elem> {
        let mv = q.modulus_vars();
        let (xc, xr): (Terms, Terms) = x.iter().cloned().partition(|(e, _)| {
            e.iter().enumerate().all(|(v, k)| *k == 0 || mv.contains(&v))
        });
        let xr = Elem::Poly(xr);
        if !self.is_zero(&xr) && !self.is_nilpotent(&xr) {
            return Err(Error::NotUnit);
        }
        let basis = q.modulus_basis();
        let inv_c = if basis.len() == 1 {
            let c = QuotientData::coeff_of(&xc, &basis[0]).ok_or(Error::NotUnit)?;
            self.embed_base(&q.base.inverse(&c)?)
        } else {
            let m = q.mult_matrix(&xc, &basis);
            let d = det(&q.base, &m);
            let dinv = q.base.inverse(&d)?;
            let adj = adjugate(&q.base, &m);
            // Solve M·y = e_0 (the coordinates of 1).
            let coords = adj.iter().map(|row| q.base.mul(&row[0], &dinv)).collect();
            Elem::Poly(q.from_coords(&basis, coords))
        };
        let t = self.neg(&self.mul(&xr, &inv_c));
        let mut sum = self.one();
        if !self.is_zero(&t) {
            let mut pw = self.one();
            for _ in 1..self.nilpotency_bound() {
                pw = self.mul(&pw, &t);
                if self.is_zero(&pw) {
                    break;
                }
                sum = self.add(&sum, &pw);
            }
        }
        let inv = self.mul(&inv_c, &sum);
        if !self.is_one(&self.mul(&inv, &Elem::Poly(x.clone()))) {
            return Err(Error::NotUnit);
        }
        Ok(inv)
    }

    /// Some `q` with `q·b = a`, if one is found. Exact for units `b`, for Z,
    /// Z/m, quotients by moduli only, free polynomial rings over Z or a field,
    /// and for small finite rings; otherwise may return `None` conservatively.
    pub fn try_div(&self, a: &Elem, b: &Elem) -> Option<Elem> {
        if self.is_zero(a) {
            return Some(self.zero());
        }
        if self.is_zero(b) {
            return None;
        }
        if let Ok(inv) = self.inverse(b) {
            return Some(self.mul(a, &inv));
        }
        let found = match &self.0.kind {
            Kind::Integers => {
                let (qq, r) = expect_int(a).div_rem(expect_int(b));
                r.is_zero().then_some(Elem::Int(qq))
            }
            Kind::Mod { m, .. } => {
                let (av, bv) = (expect_mod(a), expect_mod(b));
                let g = bv.gcd(m);
                if av % g != 0 {
                    None
                } else {
                    let m2 = m / g;
                    let inv = inv_mod(bv / g, m2)?;
                    Some(Elem::Mod(mulmod(av / g, inv, m2)))
                }
            }
            Kind::Quotient(q) => self.quotient_div(q, expect_poly(a), expect_poly(b)),
            _ => None,
        };
        if found.is_some() {
            return found;
        }
        match self.cardinality() {
            Some(c) if c <= BRUTE_FORCE_LIMIT => {
                self.elements().ok()?.into_iter().find(|x| &self.mul(x, b) == a)
            }
            _ => None,
        }
    }

    fn quotient_div(&self, q: &QuotientData, a: &Terms, b: &Terms) -> Option<Elem> {
        let all_modulus = q.modulus.iter().all(|m| m.is_some());
        if all_modulus {
            let basis = q.modulus_basis();
            let m = q.mult_matrix(b, &basis);
            let d = det(&q.base, &m);
            let av = q.to_coords(a, &basis)?;
            let adj = adjugate(&q.base, &m);
            let mut coords = Vec::with_capacity(basis.len());
            for row in &adj {
                let mut s = q.base.zero();
                for (x, y) in row.iter().zip(&av) {
                    s = q.base.add(&s, &q.base.mul(x, y));
                }
                coords.push(q.base.try_div(&s, &d)?);
            }
            let res = Elem::Poly(q.from_coords(&basis, coords));
            return (self.mul(&res, &Elem::Poly(b.clone())) == Elem::Poly(a.clone())).then_some(res);
        }
        let free = q.modulus.iter().all(|m| m.is_none())
            && q.nil.iter().all(|n| n.is_none())
            && q.annihilate.is_empty();
        if free {
            // Multivariate exact division by leading terms (lex order).
            let mut rem = a.clone();
            let mut quot: Terms = Vec::new();
            let (lb_e, lb_c) = b.last().unwrap();
            while let Some((re, rc)) = rem.last() {
                if re.iter().zip(lb_e).any(|(x, y)| x < y) {
                    return None;
                }
                let c = q.base.try_div(rc, lb_c)?;
                let e: Vec<u32> = re.iter().zip(lb_e).map(|(x, y)| x - y).collect();
                let t = vec![(e, c)];
                rem = q.add(&rem, &q.neg(&q.mul(&t, b)));
                quot = q.add(&quot, &t);
            }
            return Some(Elem::Poly(quot));
        }
        None
    }

    // ---- quotient-ring helpers ----

    fn quotient_data(&self) -> Option<&QuotientData> {
        match &self.0.kind {
            Kind::Quotient(q) => Some(q),
            _ => None,
        }
    }

    /// Base ring of a quotient.
    pub fn base(&self) -> Option<&Ring> {
        self.quotient_data().map(|q| &q.base)
    }

    pub fn var_names(&self) -> Vec<String> {
        self.quotient_data().map(|q| q.vars.clone()).unwrap_or_default()
    }

    /// The variable `name` of a quotient ring, reduced.
    pub fn var(&self, name: &str) -> Result<Elem> {
        let q = self.quotient_data().ok_or_else(|| Error::InvalidArgument("ring has no variables".into()))?;
        let i = q
            .vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown variable {name}")))?;
        let mut e = vec![0; q.nvars()];
        e[i] = 1;
        Ok(Elem::Poly(q.normalize(vec![(e, q.base.one())], ReductionOrder::ModulusFirst)))
    }

    /// Terms of a quotient-ring element.
    pub fn terms<'a>(&self, x: &'a Elem) -> &'a [(Vec<u32>, Elem)] {
        expect_poly(x)
    }

    /// Build a quotient element from arbitrary (exponents, base coefficient)
    /// terms, reducing with the given rule order.
    pub fn from_terms(&self, terms: Vec<(Vec<u32>, Elem)>, order: ReductionOrder) -> Result<Elem> {
        let q = self.quotient_data().ok_or_else(|| Error::InvalidArgument("not a quotient ring".into()))?;
        if terms.iter().any(|(e, _)| e.len() != q.nvars()) {
            return Err(Error::MalformedElement("exponent vector length".into()));
        }
        Ok(Elem::Poly(q.normalize(terms, order)))
    }

    /// Re-run normalization of an element with a chosen rule order.
    pub fn normalize_with(&self, x: &Elem, order: ReductionOrder) -> Elem {
        match &self.0.kind {
            Kind::Quotient(q) => Elem::Poly(q.normalize(expect_poly(x).clone(), order)),
            Kind::Tower(t) => Elem::Tower(t.normalize(expect_tower(x).clone())),
            _ => x.clone(),
        }
    }

    /// The Eisenstein root `a` of a ramified tower.
    pub fn tower_root(&self) -> Result<Elem> {
        match &self.0.kind {
            Kind::Tower(t) => Ok(Elem::Tower(t.root())),
            _ => Err(Error::InvalidArgument("not a ramified tower".into())),
        }
    }

    /// The generator x of a Galois ring (class of the polynomial variable).
    pub fn galois_generator(&self) -> Result<Elem> {
        match &self.0.kind {
            Kind::Galois(g) => {
                let mut v = g.zero();
                if g.s == 1 {
                    v[0] = galois::submod(0, g.modulus[0], g.q);
                } else {
                    v[1] = 1;
                }
                Ok(Elem::Gr(v))
            }
            _ => Err(Error::InvalidArgument("not a Galois ring".into())),
        }
    }

    /// Coefficient vector of a Galois-ring element.
    pub fn galois_coeffs<'a>(&self, x: &'a Elem) -> &'a [u64] {
        expect_gr(x)
    }

    /// Galois-ring element from coefficients (reduced).
    pub fn galois_elem(&self, coeffs: &[i64]) -> Result<Elem> {
        match &self.0.kind {
            Kind::Galois(g) => {
                if coeffs.len() > g.s {
                    return Err(Error::MalformedElement("too many coefficients".into()));
                }
                let mut v = g.zero();
                for (slot, c) in v.iter_mut().zip(coeffs) {
                    *slot = c.rem_euclid(g.q as i64) as u64;
                }
                Ok(Elem::Gr(v))
            }
            _ => Err(Error::InvalidArgument("not a Galois ring".into())),
        }
    }

    /// Tower element from c_0 ∈ GR(p², s) and higher residue coefficients.
    pub fn tower_elem(&self, coeffs: Vec<Vec<u64>>) -> Result<Elem> {
        match &self.0.kind {
            Kind::Tower(t) => {
                if coeffs.len() != t.e || coeffs.iter().any(|c| c.len() != t.g2.s) {
                    return Err(Error::MalformedElement("tower payload shape".into()));
                }
                Ok(Elem::Tower(t.normalize(coeffs)))
            }
            _ => Err(Error::InvalidArgument("not a ramified tower".into())),
        }
    }

    /// Coefficient c_0 of a tower element as an element of GR(p², s).
    pub fn tower_constant(&self, x: &Elem) -> Result<Elem> {
        match &self.0.kind {
            Kind::Tower(_) => Ok(Elem::Gr(expect_tower(x)[0].clone())),
            _ => Err(Error::InvalidArgument("not a ramified tower".into())),
        }
    }

    /// The unramified subring GR(p², s) of a tower.
    pub fn tower_unramified(&self) -> Result<Ring> {
        match &self.0.kind {
            Kind::Tower(t) => {
                let d = RingDescriptor::GaloisRing {
                    p: t.p,
                    n: 2,
                    s: t.g2.s as u32,
                    modulus: Some(t.g2.modulus.clone()),
                    schema: None,
                };
                Ring::new(&d)
            }
            _ => Err(Error::InvalidArgument("not a ramified tower".into())),
        }
    }

    // ---- maps between rings ----

    /// The residue field F_{p^s} of a local ring with residue characteristic p
    /// (for Z and Z/m: F_p).
    pub fn residue_field(&self, p: u64) -> Result<Ring> {
        match &self.0.kind {
            Kind::Integers => Ring::finite_field(p, 1),
            Kind::Mod { m, .. } => {
                if m % p != 0 || !is_prime(p) {
                    return Err(Error::InvalidArgument(format!("{p} is not a prime dividing {m}")));
                }
                Ring::finite_field(p, 1)
            }
            Kind::Galois(g) if g.p == p => Ring::new(&RingDescriptor::GaloisRing {
                p,
                n: 1,
                s: g.s as u32,
                modulus: Some(g.residue().modulus),
                schema: None,
            }),
            Kind::Tower(t) if t.p == p => Ring::new(&RingDescriptor::GaloisRing {
                p,
                n: 1,
                s: t.g1.s as u32,
                modulus: Some(t.g1.modulus.clone()),
                schema: None,
            }),
            _ => Err(Error::InvalidArgument("no canonical residue field".into())),
        }
    }

    /// Image of `x` (an element of `src`) under the canonical map src → self.
    /// Supported: from Z to anything; reduction Z/m → Z/m' and into F_p;
    /// GR(p^n) → GR(p^n') with n' ≤ n and compatible moduli; GR(p², s) → tower;
    /// tower → residue field; quotient → quotient with matching variable names;
    /// anything → a quotient over a ring it maps to.
    pub fn coerce_from(&self, src: &Ring, x: &Elem) -> Result<Elem> {
        if src == self {
            return Ok(x.clone());
        }
        let unsupported = || Error::Unsupported(format!("no canonical map {:?} → {:?}", src, self));
        match (&src.0.kind, &self.0.kind) {
            (Kind::Integers, _) => Ok(self.from_bigint(expect_int(x))),
            (Kind::Mod { m, .. }, Kind::Mod { m: m2, .. }) if m % m2 == 0 => {
                Ok(Elem::Mod(expect_mod(x) % m2))
            }
            (Kind::Mod { m, .. }, Kind::Galois(g)) if g.s == 1 && m % g.q == 0 => {
                Ok(Elem::Gr(g.from_u64(expect_mod(x))))
            }
            (Kind::Galois(a), Kind::Galois(b))
                if a.p == b.p && a.s == b.s && b.n <= a.n
                    && a.modulus.iter().zip(&b.modulus).all(|(x, y)| x % b.q == *y) =>
            {
                Ok(Elem::Gr(expect_gr(x).iter().map(|c| c % b.q).collect()))
            }
            (Kind::Galois(a), Kind::Tower(t)) if a.p == t.p && a.n >= 2 && a.s == t.g2.s => {
                let mut v = t.zero();
                v[0] = expect_gr(x).iter().map(|c| c % t.g2.q).collect();
                Ok(Elem::Tower(t.normalize(v)))
            }
            (Kind::Tower(t), Kind::Galois(b)) if b.p == t.p && b.n == 1 && b.s == t.g1.s => {
                Ok(Elem::Gr(t.residue(expect_tower(x))))
            }
            (Kind::Quotient(a), Kind::Quotient(_)) => {
                let images = a.vars.iter().map(|v| self.var(v)).collect::<Result<Vec<_>>>()?;
                self.evaluate_terms(&a.base, expect_poly(x), &images)
            }
            (_, Kind::Quotient(b)) => Ok(self.embed_base(&b.base.coerce_from(src, x)?)),
            _ => Err(unsupported()),
        }
    }

    /// Evaluate a quotient element of `src` in `self`, sending base
    /// coefficients through the canonical map and variable `i` to
    /// `images[i]`. Fails unless the images satisfy every relation of `src`.
    pub fn evaluate(&self, src: &Ring, x: &Elem, images: &[Elem]) -> Result<Elem> {
        let q = src.quotient_data().ok_or_else(|| Error::InvalidArgument("source is not a quotient".into()))?;
        if images.len() != q.nvars() {
            return Err(Error::InvalidArgument("one image per variable required".into()));
        }
        for (v, img) in images.iter().enumerate() {
            if let Some(f) = &q.modulus[v] {
                let mut val = self.pow(img, f.len() as u64);
                for (i, c) in f.iter().enumerate() {
                    let t = self.mul(&self.coerce_from(&q.base, c)?, &self.pow(img, i as u64));
                    val = self.add(&val, &t);
                }
                if !self.is_zero(&val) {
                    return Err(Error::InvalidArgument(format!("image of {} violates its modulus", q.vars[v])));
                }
            }
            if let Some(n) = q.nil[v] {
                if !self.is_zero(&self.pow(img, n as u64)) {
                    return Err(Error::InvalidArgument(format!("image of {} is not nilpotent enough", q.vars[v])));
                }
            }
        }
        for &(i, j) in &q.annihilate {
            if !self.is_zero(&self.mul(&images[i], &images[j])) {
                return Err(Error::InvalidArgument("images violate an annihilation relation".into()));
            }
        }
        self.evaluate_terms(&q.base, expect_poly(x), images)
    }

    fn evaluate_terms(&self, base: &Ring, terms: &Terms, images: &[Elem]) -> Result<Elem> {
        let mut acc = self.zero();
        for (e, c) in terms {
            let mut t = self.coerce_from(base, c)?;
            for (v, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = self.mul(&t, &self.pow(&images[v], k as u64));
                }
            }
            acc = self.add(&acc, &t);
        }
        Ok(acc)
    }

    /// A random element; integers are drawn from [−bound, bound] and free
    /// variables get exponents below 4.
    pub fn random_elem<R: rand::Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> Elem {
        match &self.0.kind {
            Kind::Integers => Elem::Int(BigInt::from(rng.gen_range(-bound..=bound))),
            Kind::Mod { m, .. } => Elem::Mod(rng.gen_range(0..*m)),
            Kind::Galois(g) => Elem::Gr((0..g.s).map(|_| rng.gen_range(0..g.q)).collect()),
            Kind::Tower(t) => {
                let mut v = t.zero();
                for (i, c) in v.iter_mut().enumerate() {
                    let m = if i == 0 { t.g2.q } else { t.p };
                    for x in c.iter_mut() {
                        *x = rng.gen_range(0..m);
                    }
                }
                Elem::Tower(v)
            }
            Kind::Quotient(q) => {
                let bounds: Vec<u32> = (0..q.nvars())
                    .map(|v| match (&q.modulus[v], q.nil[v]) {
                        (Some(f), _) => f.len() as u32,
                        (None, Some(n)) => n,
                        _ => 4,
                    })
                    .collect();
                let nterms = rng.gen_range(0..=4);
                let raw = (0..nterms)
                    .map(|_| {
                        let e = bounds.iter().map(|&b| rng.gen_range(0..b)).collect();
                        (e, q.base.random_elem(rng, bound))
                    })
                    .collect();
                Elem::Poly(q.normalize(raw, ReductionOrder::ModulusFirst))
            }
        }
    }

    // ---- serialization ----

    /// JSON payload of an element (see the crate documentation).
    pub fn to_payload(&self, x: &Elem) -> serde_json::Value {
        payload::to_json(self, x)
    }

    /// Parse and normalize a payload.
    pub fn from_payload(&self, v: &serde_json::Value) -> Result<Elem> {
        payload::from_json(self, v)
    }

    /// Elements of small height: integers in [−bound, bound], and for
    /// quotients of Z by moduli the elements whose coordinates in the
    /// monomial basis lie in that range. Finite rings yield all elements.
    pub fn bounded_elements(&self, bound: i64) -> Result<Vec<Elem>> {
        if self.is_finite() {
            return self.elements();
        }
        match &self.0.kind {
            Kind::Integers => Ok((-bound..=bound).map(|c| Elem::Int(BigInt::from(c))).collect()),
            Kind::Quotient(q) if q.modulus.iter().all(|m| m.is_some()) && q.base == Ring::integers() => {
                let basis = q.modulus_basis();
                let width = (2 * bound + 1) as u128;
                let total = width.checked_pow(basis.len() as u32).filter(|t| *t <= 1 << 24).ok_or_else(|| {
                    Error::Unsupported("too many bounded elements".into())
                })?;
                let mut out = Vec::with_capacity(total as usize);
                for mut idx in 0..total {
                    let coords = (0..basis.len())
                        .map(|_| {
                            let c = (idx % width) as i64 - bound;
                            idx /= width;
                            Elem::Int(BigInt::from(c))
                        })
                        .collect();
                    out.push(Elem::Poly(q.from_coords(&basis, coords)));
                }
                Ok(out)
            }
            _ => Err(Error::Unsupported("bounded enumeration needs Z or a quotient of Z by moduli".into())),
        }
    }

    /// Whether x is among [`Ring::bounded_elements`].
    pub fn within_bound(&self, x: &Elem, bound: i64) -> bool {
        if self.is_finite() {
            return true;
        }
        let small = |c: &Elem| expect_int(c).abs() <= BigInt::from(bound);
        match &self.0.kind {
            Kind::Integers => small(x),
            Kind::Quotient(q) if q.modulus.iter().all(|m| m.is_some()) && q.base == Ring::integers() => q
                .to_coords(expect_poly(x), &q.modulus_basis())
                .is_some_and(|cs| cs.iter().all(small)),
            _ => false,
        }
    }
}

fn check_eisenstein(psi: &[i64], p: u64, e: usize) -> Result<()> {
    if psi.len() != e + 1 || psi[e] != 1 {
        return Err(bad(format!("ψ must be monic of degree {e}")));
    }
    let p = p as i64;
    if psi[..e].iter().any(|c| c % p != 0) {
        return Err(bad("ψ is not congruent to X^e mod p"));
    }
    if psi[0] % (p * p) == 0 {
        return Err(bad("constant term of ψ must have p-valuation exactly 1"));
    }
    Ok(())
}

fn build_quotient(base: Ring, vars: &[String], relations: &[Relation]) -> Result<QuotientData> {
    if vars.is_empty() {
        return Err(bad("quotient needs at least one variable"));
    }
    for (i, v) in vars.iter().enumerate() {
        if v.is_empty() || vars[..i].contains(v) {
            return Err(bad(format!("bad or duplicate variable name {v:?}")));
        }
    }
    let idx = |name: &str| {
        vars.iter().position(|v| v == name).ok_or_else(|| bad(format!("relation uses unknown variable {name}")))
    };
    let k = vars.len();
    let mut modulus: Vec<Option<Vec<Elem>>> = vec![None; k];
    let mut nil = vec![None; k];
    let mut annihilate = Vec::new();
    for r in relations {
        match r {
            Relation::Modulus { var, coeffs } => {
                let v = idx(var)?;
                if coeffs.len() < 2 || *coeffs.last().unwrap() != 1 {
                    return Err(bad("modulus must be monic of degree ≥ 1"));
                }
                if modulus[v].is_some() || nil[v].is_some() {
                    return Err(bad(format!("variable {var} has more than one univariate relation")));
                }
                let f = coeffs[..coeffs.len() - 1].iter().map(|c| base.from_i64(*c)).collect();
                modulus[v] = Some(f);
            }
            Relation::Nilpotent { var, exponent } => {
                let v = idx(var)?;
                if *exponent == 0 {
                    return Err(bad("nilpotency exponent must be at least 1"));
                }
                if modulus[v].is_some() || nil[v].is_some() {
                    return Err(bad(format!("variable {var} has more than one univariate relation")));
                }
                nil[v] = Some(*exponent);
            }
            Relation::Annihilate { vars: [a, b] } => {
                let (i, j) = (idx(a)?, idx(b)?);
                if i == j {
                    return Err(bad("annihilation needs two distinct variables (use nilpotent)"));
                }
                annihilate.push((i.min(j), i.max(j)));
            }
        }
    }
    for &(i, j) in &annihilate {
        if modulus[i].is_some() || modulus[j].is_some() {
            return Err(bad("annihilation relations may not involve a variable with a modulus"));
        }
    }
    let neg_modulus = modulus
        .iter()
        .map(|m| m.as_ref().map(|f| f.iter().map(|c| base.neg(c)).collect()))
        .collect();
    Ok(QuotientData { base, vars: vars.to_vec(), modulus, neg_modulus, nil, annihilate })
}

/// The falling-factorial binomial x(x−1)⋯(x−nn+1)/nn! in a ring whose
/// residue characteristic exceeds nn.
pub fn binom_in_ring(ring: &Ring, x: &Elem, nn: u64) -> Result<Elem> {
    if let Some(p) = ring.residue_characteristic() {
        if nn >= p {
            return Err(Error::InvalidArgument(format!("{nn}! is not a unit in residue characteristic {p}")));
        }
    }
    let mut num = ring.one();
    let mut fact = BigInt::one();
    for i in 0..nn {
        num = ring.mul(&num, &ring.sub(x, &ring.from_i64(i as i64)));
        fact *= i + 1;
    }
    let f = ring.from_bigint(&fact);
    match ring.inverse(&f) {
        Ok(inv) => Ok(ring.mul(&num, &inv)),
        Err(_) => ring
            .try_div(&num, &f)
            .ok_or_else(|| Error::InvalidArgument(format!("{nn}! does not divide the falling factorial"))),
    }
}

#[cfg(test)]
mod tests;
