//! The abstract local group (Z/p)^t ⋊ Z/n, realized inside PGL₂(F_{p^f}) as
//! translations σ_u(y) = y/(uy + 1), u ∈ V, twisted by the dilation y ↦ ζy.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::linalg;
use crate::mobius::MobiusElem;
use crate::rings::{is_prime, Elem, Ring};
use crate::{Error, Result};

/// Fields up to this size pick ζ by plain enumeration.
const ENUMERATION_LIMIT: u128 = 1 << 16;

#[derive(Clone, Debug)]
pub struct GroupSpec {
    p: u64,
    n: u64,
    field: Ring,
    basis: Vec<Elem>,
    zeta: Elem,
    s: u32,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Multiplicative order of p modulo n (1 for n = 1).
pub(crate) fn order_mod(p: u64, n: u64) -> u32 {
    if n == 1 {
        return 1;
    }
    let mut x = p % n;
    let mut k = 1;
    while x != 1 {
        x = ((x as u128 * p as u128) % n as u128) as u64;
        k += 1;
    }
    k
}

fn pow_big(ring: &Ring, x: &Elem, k: &BigUint) -> Elem {
    let mut acc = ring.one();
    for i in (0..k.bits()).rev() {
        acc = ring.mul(&acc, &acc);
        if k.bit(i) {
            acc = ring.mul(&acc, x);
        }
    }
    acc
}

/// Whether x has multiplicative order exactly n.
pub(crate) fn has_exact_order(ring: &Ring, x: &Elem, n: u64) -> bool {
    ring.is_one(&ring.pow(x, n)) && prime_factors(n).iter().all(|q| !ring.is_one(&ring.pow(x, n / q)))
}

/// The first element of exact order n: in enumeration order for small fields,
/// otherwise the first y^{(q−1)/n} of exact order n.
fn canonical_zeta(field: &Ring, n: u64) -> Result<Elem> {
    let p = field.residue_characteristic().ok_or_else(|| invalid("not a finite field"))?;
    let s = field.galois_coeffs(&field.zero()).len();
    let q = BigUint::from(p).pow(s as u32);
    let (cofactor, rem) = (&q - 1u32).div_rem(&BigUint::from(n));
    if !rem.is_zero() {
        return Err(invalid(format!("{n} does not divide {q} − 1")));
    }
    if q <= BigUint::from(ENUMERATION_LIMIT) {
        return field
            .elements()?
            .into_iter()
            .find(|x| has_exact_order(field, x, n))
            .ok_or_else(|| invalid("no element of the requested order"));
    }
    let p = p as i64;
    for idx in 2u64.. {
        let mut digits = Vec::with_capacity(s);
        let mut k = idx;
        while k > 0 && digits.len() < s {
            digits.push((k % p as u64) as i64);
            k /= p as u64;
        }
        let y = field.galois_elem(&digits)?;
        let z = pow_big(field, &y, &cofactor);
        if has_exact_order(field, &z, n) {
            return Ok(z);
        }
    }
    unreachable!()
}

impl GroupSpec {
    /// The default realization: V = F_{p^t} with basis 1, x, …, x^{t−1}
    /// (for t = 0 the field is F_p(ζ)) and the canonical ζ.
    pub fn new(p: u64, t: u32, n: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(invalid(format!("{p} is not prime")));
        }
        if n == 0 {
            return Err(invalid("n must be at least 1"));
        }
        let f = if t >= 1 {
            let q = (p as u128).checked_pow(t).ok_or_else(|| invalid("p^t too large"))?;
            if (q - 1) % n as u128 != 0 {
                return Err(invalid(format!("n = {n} does not divide p^t − 1 = {}", q - 1)));
            }
            t
        } else {
            if n.gcd(&p) != 1 {
                return Err(invalid(format!("tame order {n} is divisible by p = {p}")));
            }
            order_mod(p, n)
        };
        let field = Ring::finite_field(p, f)?;
        let basis = (0..t as usize)
            .map(|i| {
                let mut c = vec![0i64; f as usize];
                c[i] = 1;
                field.galois_elem(&c)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::with_data(field, basis, n, None)
    }

    /// A realization with explicit field, basis of V and (optionally) ζ.
    pub fn with_data(field: Ring, basis: Vec<Elem>, n: u64, zeta: Option<Elem>) -> Result<Self> {
        let p = field.residue_characteristic().ok_or_else(|| invalid("field must be F_{p^f}"))?;
        if field.characteristic() != p {
            return Err(invalid("field must have prime characteristic"));
        }
        if n == 0 {
            return Err(invalid("n must be at least 1"));
        }
        let t = basis.len() as u32;
        let zeta = match zeta {
            Some(z) => z,
            None => canonical_zeta(&field, n)?,
        };
        let spec = GroupSpec { p, n, s: order_mod(p, n), field, basis, zeta };
        spec.validate(t)?;
        Ok(spec)
    }

    fn validate(&self, t: u32) -> Result<()> {
        let f = &self.field;
        if !has_exact_order(f, &self.zeta, self.n) {
            return Err(invalid(format!("ζ does not have exact order {}", self.n)));
        }
        if t >= 1 {
            let q = (self.p as u128).checked_pow(t).ok_or_else(|| invalid("p^t too large"))?;
            if (q - 1) % self.n as u128 != 0 {
                return Err(invalid(format!("n = {} does not divide p^t − 1", self.n)));
            }
        } else if self.n.gcd(&self.p) != 1 {
            return Err(invalid("tame order divisible by p"));
        }
        let rows = self.basis_rows();
        if linalg::rank(&self.prime_field(), &rows) != self.basis.len() {
            return Err(invalid("basis is not linearly independent over F_p"));
        }
        for u in &self.basis {
            if self.coordinates(&f.mul(&self.zeta, u)).is_none() {
                return Err(invalid("ζ·V is not contained in V"));
            }
        }
        Ok(())
    }

    fn prime_field(&self) -> Ring {
        Ring::finite_field(self.p, 1).expect("prime field")
    }

    fn as_fp_vector(&self, x: &Elem) -> Vec<Elem> {
        let fp = self.prime_field();
        self.field.galois_coeffs(x).iter().map(|&c| fp.from_i64(c as i64)).collect()
    }

    fn basis_rows(&self) -> Vec<Vec<Elem>> {
        self.basis.iter().map(|u| self.as_fp_vector(u)).collect()
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn t(&self) -> u32 {
        self.basis.len() as u32
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Degree of F_p(ζ) over F_p.
    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn field(&self) -> &Ring {
        &self.field
    }

    pub fn field_degree(&self) -> u32 {
        self.field.galois_coeffs(&self.field.zero()).len() as u32
    }

    pub fn basis(&self) -> &[Elem] {
        &self.basis
    }

    pub fn zeta(&self) -> &Elem {
        &self.zeta
    }

    pub fn zeta_inverse(&self) -> Elem {
        self.field.inverse(&self.zeta).expect("ζ is a unit")
    }

    /// |G| = p^t · n.
    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.t()) * self.n as u128
    }

    /// F_p-coordinates of x in the basis, if x ∈ V.
    pub fn coordinates(&self, x: &Elem) -> Option<Vec<u64>> {
        let fp = self.prime_field();
        let cols = self.basis_rows();
        let target = self.as_fp_vector(x);
        let sol = linalg::solve(&fp, &cols, &target)?;
        Some(sol.iter().map(|c| fp.galois_coeffs(c)[0]).collect())
    }

    /// Coordinates of ζ⁻¹·u_i: conjugating σ_{u_i} by the dilation gives σ_{ζ⁻¹u_i}.
    pub fn twist_coordinates(&self, i: usize) -> Vec<u64> {
        let w = self.field.mul(&self.zeta_inverse(), &self.basis[i]);
        self.coordinates(&w).expect("V is ζ-stable")
    }

    /// Names of the abstract generators: "sigma_u1", …, then "g" when n > 1.
    pub fn generator_names(&self) -> Vec<String> {
        let mut names: Vec<String> = (1..=self.basis.len()).map(|i| format!("sigma_u{i}")).collect();
        if self.n > 1 {
            names.push("g".into());
        }
        names
    }

    /// The residue action: σ_{u_i} = [[1,0],[u_i,1]] and g = [[1,0],[0,ζ⁻¹]] (y ↦ ζy).
    pub fn residue_generators(&self) -> Vec<(String, MobiusElem)> {
        let f = &self.field;
        let mut out: Vec<(String, MobiusElem)> = self
            .basis
            .iter()
            .enumerate()
            .map(|(i, u)| {
                let m = MobiusElem::new(f, f.one(), f.zero(), u.clone(), f.one()).expect("unipotent");
                (format!("sigma_u{}", i + 1), m)
            })
            .collect();
        if self.n > 1 {
            let g = MobiusElem::new(f, f.one(), f.zero(), f.zero(), self.zeta_inverse()).expect("diagonal");
            out.push(("g".into(), g));
        }
        out
    }

    /// A short human-readable name of the abstract group.
    pub fn group_name(&self) -> String {
        let (p, t, n) = (self.p, self.t(), self.n);
        match (t, n) {
            (0, 1) => "1".into(),
            (0, _) => format!("Z/{n}"),
            (1, 1) => format!("Z/{p}"),
            (1, 2) if p == 3 => "S_3".into(),
            (1, 2) => format!("D_{p}"),
            (2, 3) if p == 2 => "A_4".into(),
            (_, 1) => format!("(Z/{p})^{t}"),
            (1, _) => format!("Z/{p} x| Z/{n}"),
            _ => format!("(Z/{p})^{t} x| Z/{n}"),
        }
    }

    /// Same p, field, V (as a set), n and ζ.
    pub fn equivalent(&self, other: &GroupSpec) -> bool {
        self.p == other.p
            && self.n == other.n
            && self.field == other.field
            && self.t() == other.t()
            && self.zeta == other.zeta
            && other.basis.iter().all(|u| self.coordinates(u).is_some())
    }

    pub fn to_json(&self) -> Value {
        let f = &self.field;
        json!({
            "p": self.p,
            "t": self.t(),
            "n": self.n,
            "s": self.s,
            "field_degree": self.field_degree(),
            "basis": self.basis.iter().map(|u| f.to_payload(u)).collect::<Vec<_>>(),
            "zeta": f.to_payload(&self.zeta),
        })
    }

    /// Accepts the full form produced by [`GroupSpec::to_json`] or the
    /// shorthand {"p", "t", "n"}; "s" is derived and ignored on input.
    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| invalid("group spec must be an object"))?;
        const KNOWN: [&str; 7] = ["p", "t", "n", "s", "field_degree", "basis", "zeta"];
        if let Some(k) = obj.keys().find(|k| !KNOWN.contains(&k.as_str())) {
            return Err(invalid(format!("unknown group spec field {k:?}")));
        }
        let get_u64 = |o: &Map<String, Value>, k: &str| -> Result<Option<u64>> {
            match o.get(k) {
                None => Ok(None),
                Some(x) => x.as_u64().map(Some).ok_or_else(|| invalid(format!("{k} must be a non-negative integer"))),
            }
        };
        let p = get_u64(obj, "p")?.ok_or_else(|| invalid("missing p"))?;
        let n = get_u64(obj, "n")?.unwrap_or(1);
        let t = get_u64(obj, "t")?;
        let fd = get_u64(obj, "field_degree")?;
        if !is_prime(p) {
            return Err(invalid(format!("{p} is not prime")));
        }
        let spec = match obj.get("basis") {
            None => {
                let t = t.ok_or_else(|| invalid("need t or basis"))? as u32;
                let mut spec = GroupSpec::new(p, t, n)?;
                if let Some(fd) = fd {
                    if fd as u32 != spec.field_degree() {
                        return Err(invalid("field_degree given without a basis must equal the default"));
                    }
                }
                if let Some(z) = obj.get("zeta") {
                    let zeta = spec.field.from_payload(z)?;
                    spec = GroupSpec::with_data(spec.field.clone(), spec.basis.clone(), n, Some(zeta))?;
                }
                spec
            }
            Some(b) => {
                let b = b.as_array().ok_or_else(|| invalid("basis must be an array"))?;
                let fd = fd.ok_or_else(|| invalid("an explicit basis needs field_degree"))?;
                let field = Ring::finite_field(p, fd as u32)?;
                let basis = b.iter().map(|x| field.from_payload(x)).collect::<Result<Vec<_>>>()?;
                if let Some(t) = t {
                    if t as usize != basis.len() {
                        return Err(invalid("t disagrees with the basis length"));
                    }
                }
                let zeta = obj.get("zeta").map(|z| field.from_payload(z)).transpose()?;
                GroupSpec::with_data(field, basis, n, zeta)?
            }
        };
        Ok(spec)
    }
}

impl PartialEq for GroupSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.n == other.n
            && self.field == other.field
            && self.basis == other.basis
            && self.zeta == other.zeta
    }
}

impl Eq for GroupSpec {}
