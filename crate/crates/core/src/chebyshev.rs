//! Chebyshev polynomials of both kinds, the versal polynomial ψ and the
//! divisibility of the Chebyshev ideal by ψ.
//!
//! Conventions: T_j(cos θ) = cos jθ and S_j(cos θ) = sin (j+1)θ / sin θ, so
//! e^{ijθ} = T_j(cos θ) + i sin θ · S_{j−1}(cos θ) and S_{−1} = 0.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::rings::{is_prime, Elem, Ring};
use crate::{Error, Result};

/// Integer polynomial, little-endian, trailing zeros stripped.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self::new(Vec::new())
    }

    pub fn constant(c: i64) -> Self {
        Self::from_i64s(&[c])
    }

    pub fn x() -> Self {
        Self::from_i64s(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let get = |v: &[BigInt], i: usize| v.get(i).cloned().unwrap_or_default();
        Self::new((0..n).map(|i| get(&self.coeffs, i) + get(&o.coeffs, i)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(1), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_string().parse::<f64>().unwrap())
    }

    /// Image of the polynomial evaluated at `x` in `ring`.
    pub fn eval_in(&self, ring: &Ring, x: &Elem) -> Elem {
        self.coeffs.iter().rev().fold(ring.zero(), |acc, c| ring.add(&ring.mul(&acc, x), &ring.from_bigint(c)))
    }

    /// Coefficients reduced into [0, m).
    pub fn reduce_mod(&self, m: u64) -> Self {
        let m = BigInt::from(m);
        Self::new(self.coeffs.iter().map(|c| c.mod_floor(&m)).collect())
    }

    fn to_rational(&self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }
}

/// Rational polynomials, used only for the exact divisibility checks.
#[derive(Clone, Debug, PartialEq, Eq)]
struct RatPoly(Vec<BigRational>);

impl RatPoly {
    fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        RatPoly(c)
    }

    fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let get = |v: &[BigRational], i: usize| v.get(i).cloned().unwrap_or_else(BigRational::zero);
        Self::new((0..n).map(|i| get(&self.0, i) + get(&o.0, i)).collect())
    }

    fn mul(&self, o: &Self) -> Self {
        if self.0.is_empty() || o.0.is_empty() {
            return RatPoly(Vec::new());
        }
        let mut out = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// p(1 + X/2)
    fn compose_half_shift(&self) -> Self {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let lin = RatPoly::new(vec![BigRational::one(), half]);
        self.0.iter().rev().fold(RatPoly(Vec::new()), |acc, c| acc.mul(&lin).add(&RatPoly::new(vec![c.clone()])))
    }

    /// Quotient and remainder by a nonzero divisor.
    fn divrem(&self, d: &Self) -> (Self, Self) {
        let mut r = self.0.clone();
        let dd = d.0.len() - 1;
        let lead = d.0[dd].clone();
        let mut q = vec![BigRational::zero(); r.len().saturating_sub(dd).max(1)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1;
            let c = &r[k] / &lead;
            for (i, di) in d.0.iter().enumerate() {
                r[k - dd + i] -= &c * di;
            }
            q[k - dd] = c;
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        (RatPoly::new(q), RatPoly::new(r))
    }

    fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    fn to_int(&self) -> Option<IntPolynomial> {
        self.is_integral().then(|| IntPolynomial::new(self.0.iter().map(|c| c.to_integer()).collect()))
    }

    fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(|c| c.to_string()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChebKind {
    /// T_j, j ≥ 0.
    First,
    /// S_j, j ≥ −1.
    Second,
}

fn binom(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    BigInt::from(crate::rings::binomial(n as u64, k as u64))
}

fn check_index(kind: ChebKind, j: i64) -> Result<()> {
    let min = match kind {
        ChebKind::First => 0,
        ChebKind::Second => -1,
    };
    if j < min {
        return Err(Error::InvalidArgument(format!("index {j} out of range for {kind:?} kind")));
    }
    Ok(())
}

/// Chebyshev polynomial from the explicit binomial sums:
/// T_j = ½ Σ_ℓ (j/(j−ℓ)) binom(j−ℓ, ℓ) (−1)^ℓ (2X)^{j−2ℓ},
/// S_m = Σ_ℓ binom(m−ℓ, ℓ) (−1)^ℓ (2X)^{m−2ℓ}.
pub fn cheb_poly(kind: ChebKind, j: i64) -> Result<IntPolynomial> {
    check_index(kind, j)?;
    let mut coeffs = vec![BigRational::zero(); j.max(0) as usize + 1];
    match kind {
        ChebKind::First if j == 0 => return Ok(IntPolynomial::constant(1)),
        ChebKind::First => {
            for l in 0..=(j + 1) / 2 {
                let b = binom(j - l, l);
                if b.is_zero() {
                    continue;
                }
                let sign = if l % 2 == 0 { 1 } else { -1 };
                let deg = (j - 2 * l) as usize;
                let c = BigRational::new(BigInt::from(j) * b * sign * BigInt::from(2).pow(deg as u32), BigInt::from(2 * (j - l)));
                coeffs[deg] += c;
            }
        }
        ChebKind::Second => {
            for l in 0..=(j + 1) / 2 {
                let b = binom(j - l, l);
                if b.is_zero() {
                    continue;
                }
                let sign = if l % 2 == 0 { 1 } else { -1 };
                let deg = (j - 2 * l) as usize;
                coeffs[deg] += BigRational::from_integer(b * sign * BigInt::from(2).pow(deg as u32));
            }
        }
    }
    RatPoly::new(coeffs)
        .to_int()
        .ok_or_else(|| Error::Inconsistent(format!("non-integral Chebyshev coefficient at index {j}")))
}

/// The same polynomials from the three-term recurrence P_{j+1} = 2X·P_j − P_{j−1}.
pub fn cheb_recurrence(kind: ChebKind, j: i64) -> Result<IntPolynomial> {
    check_index(kind, j)?;
    let two_x = IntPolynomial::from_i64s(&[0, 2]);
    let (mut prev, mut cur, start) = match kind {
        ChebKind::First => (IntPolynomial::constant(1), IntPolynomial::x(), 1),
        ChebKind::Second => (IntPolynomial::zero(), IntPolynomial::constant(1), 0),
    };
    if kind == ChebKind::First && j == 0 {
        return Ok(prev);
    }
    if kind == ChebKind::Second && j == -1 {
        return Ok(prev);
    }
    for _ in start..j {
        let next = two_x.mul(&cur).sub(&prev);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// ψ(α) = Σ_{ℓ=0}^{(p−1)/2} binom(p−1−ℓ, ℓ)(−1)^ℓ (α+4)^{(p−1)/2−ℓ}.
pub fn psi_poly(p: u64) -> Result<IntPolynomial> {
    if p == 2 || !is_prime(p) {
        return Err(Error::InvalidArgument(format!("ψ needs an odd prime, got {p}")));
    }
    let e = ((p - 1) / 2) as i64;
    let shift = IntPolynomial::from_i64s(&[4, 1]);
    let mut acc = IntPolynomial::zero();
    for l in 0..=e {
        let sign = if l % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        let term = shift.pow((e - l) as u32).scale(&(binom(p as i64 - 1 - l, l) * sign));
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// S_{j−1}(1 + X/2), which has integer coefficients.
pub fn second_kind_half_shift(j: i64) -> Result<IntPolynomial> {
    let s = cheb_poly(ChebKind::Second, j - 1)?;
    s.to_rational()
        .compose_half_shift()
        .to_int()
        .ok_or_else(|| Error::Inconsistent("S(1+X/2) not integral".into()))
}

/// 2·T_j(1 + X/2), which has integer coefficients.
pub fn twice_first_kind_half_shift(j: i64) -> Result<IntPolynomial> {
    let t = cheb_poly(ChebKind::First, j)?.scale(&BigInt::from(2));
    t.to_rational()
        .compose_half_shift()
        .to_int()
        .ok_or_else(|| Error::Inconsistent("2T(1+X/2) not integral".into()))
}

/// Outcome of dividing the Chebyshev ideal generators by ψ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PsiIdealReport {
    pub p: u64,
    pub psi: Vec<String>,
    /// (T_p(1+X/2) − 1)/ψ, rational coefficients as strings.
    pub first_cofactor: Vec<String>,
    /// S_{p−1}(1+X/2)/ψ.
    pub second_cofactor: Vec<String>,
    pub first_divisible: bool,
    pub second_divisible: bool,
    /// S_{p−1}(1+X/2) and its cofactor have integer coefficients.
    pub second_integral: bool,
}

/// Check that ψ divides T_p(1+X/2) − 1 and S_{p−1}(1+X/2) over ℚ.
pub fn psi_ideal_check(p: u64) -> Result<PsiIdealReport> {
    let psi = psi_poly(p)?;
    let psi_q = psi.to_rational();
    let t = cheb_poly(ChebKind::First, p as i64)?.to_rational().compose_half_shift();
    let t = t.add(&RatPoly::new(vec![-BigRational::one()]));
    let s = cheb_poly(ChebKind::Second, p as i64 - 1)?.to_rational().compose_half_shift();
    let (qt, rt) = t.divrem(&psi_q);
    let (qs, rs) = s.divrem(&psi_q);
    if !rt.0.is_empty() || !rs.0.is_empty() {
        return Err(Error::Inconsistent(format!("ψ does not divide the Chebyshev ideal at p = {p}")));
    }
    Ok(PsiIdealReport {
        p,
        psi: psi.coeffs.iter().map(|c| c.to_string()).collect(),
        first_cofactor: qt.to_strings(),
        second_cofactor: qs.to_strings(),
        first_divisible: true,
        second_divisible: true,
        second_integral: s.is_integral() && qs.is_integral(),
    })
}

/// Sanity check used by the tower constructor: ψ is Eisenstein at p.
pub fn is_eisenstein(f: &IntPolynomial, p: u64) -> bool {
    let p = BigInt::from(p);
    let Some(d) = f.degree() else { return false };
    f.coeffs[d].is_one()
        && f.coeffs[..d].iter().all(|c| (c % &p).is_zero())
        && !(&f.coeffs[0] % (&p * &p)).is_zero()
}
