//! Galois rings GR(p^n, s) = (Z/p^n)[x]/(f), plus the F_p[x] helpers used to
//! certify moduli.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};


#[inline]
pub(crate) fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    if m < 1 << 32 {
        (a * b) % m
    } else {
        ((a as u128 * b as u128) % m as u128) as u64
    }
}

#[inline]
pub(crate) fn addmod(a: u64, b: u64, m: u64) -> u64 {
    if m < 1 << 63 && a < m && b < m {
        let s = a + b;
        if s >= m {
            s - m
        } else {
            s
        }
    } else {
        ((a as u128 + b as u128) % m as u128) as u64
    }
}

#[inline]
pub(crate) fn submod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

pub(crate) fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub(crate) fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m < 1 << 62 {
        let (mut r0, mut r1) = (m as i64, (a % m) as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        return (r0 == 1).then(|| t0.rem_euclid(m as i64) as u64);
    }
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// x mod m by a precomputed reciprocal, for the lazily accumulated loops.
#[derive(Clone, Copy)]
struct Reducer {
    m: u64,
    recip: u64,
}

impl Reducer {
    fn new(m: u64) -> Self {
        let recip = if m > 1 { (u128::from(u64::MAX) / m as u128) as u64 } else { 0 };
        Reducer { m, recip }
    }

    #[inline]
    fn reduce(self, x: u64) -> u64 {
        if self.m == 1 {
            return 0;
        }
        let q = ((x as u128 * self.recip as u128) >> 64) as u64;
        let mut r = x - q * self.m;
        while r >= self.m {
            r -= self.m;
        }
        r
    }
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(sp) {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization by trial division (moduli here are small).
pub(crate) fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= m {
        if m.is_multiple_of(d) {
            let mut e = 0;
            while m.is_multiple_of(d) {
                m /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

// ---- F_p[x], little-endian, trimmed ----

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Product of coefficient vectors mod m, accumulating in u128 when the
/// products cannot overflow it.
fn poly_mul_mod(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let len = a.len() + b.len() - 1;
    if m >= 1 << 32 {
        let mut r = vec![0u64; len];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                r[i + j] = addmod(r[i + j], mulmod(x, y, m), m);
            }
        }
        return r;
    }
    if m < 1 << 20 && len < 1 << 20 {
        // products < 2^40, so fewer than 2^20 of them fit in a u64
        let mut acc = vec![0u64; len];
        if std::ptr::eq(a, b) {
            for (i, &x) in a.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                acc[2 * i] += x * x;
                let x2 = 2 * x;
                for (j, &y) in a.iter().enumerate().skip(i + 1) {
                    acc[i + j] += x2 * y;
                }
            }
            let red = Reducer::new(m);
            return acc.into_iter().map(|c| red.reduce(c)).collect();
        }
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                acc[i + j] += x * y;
            }
        }
        let red = Reducer::new(m);
        return acc.into_iter().map(|c| red.reduce(c)).collect();
    }
    let mut acc = vec![0u128; len];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            acc[i + j] += (x * y) as u128;
        }
    }
    acc.into_iter().map(|c| (c % m as u128) as u64).collect()
}

fn fp_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = poly_mul_mod(a, b, p);
    trim(&mut r);
    r
}

/// Inverse of `a` modulo the irreducible-or-not `f` over F_p, if coprime.
fn fp_inverse_mod(a: &[u64], f: &[u64], p: u64) -> Option<Vec<u64>> {
    let (mut r0, mut r1) = (f.to_vec(), a.to_vec());
    trim(&mut r0);
    trim(&mut r1);
    let (mut t0, mut t1): (Vec<u64>, Vec<u64>) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (quo, rem) = fp_divrem(&r0, &r1, p);
        let t2 = fp_sub(&t0, &fp_mul(&quo, &t1, p), p);
        (r0, r1) = (r1, rem);
        (t0, t1) = (t1, t2);
    }
    if r0.len() != 1 {
        return None;
    }
    let c = inv_mod(r0[0], p)?;
    let mut out: Vec<u64> = t0.iter().map(|&x| mulmod(x, c, p)).collect();
    out = fp_rem(&out, f, p);
    Some(out)
}

fn fp_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = vec![0u64; a.len().max(b.len())];
    for (i, x) in r.iter_mut().enumerate() {
        *x = submod(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0), p);
    }
    trim(&mut r);
    r
}

fn fp_divrem(a: &[u64], f: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let df = f.len() - 1;
    if r.len() <= df {
        return (Vec::new(), r);
    }
    let mut quo = vec![0u64; r.len() - df];
    let lead_inv = inv_mod(f[df], p).expect("nonzero leading coefficient");
    while r.len() > df {
        let k = r.len() - 1;
        let c = mulmod(r[k], lead_inv, p);
        quo[k - df] = c;
        for i in 0..=df {
            if f[i] != 0 {
                let idx = k - df + i;
                r[idx] = submod(r[idx], mulmod(c, f[i], p), p);
            }
        }
        trim(&mut r);
    }
    trim(&mut quo);
    (quo, r)
}

fn fp_rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    fp_rem_in_place(&mut r, f, p);
    r
}

/// r ← r mod f over F_p, trimmed. `f` must be trimmed.
fn fp_rem_in_place(r: &mut Vec<u64>, f: &[u64], p: u64) {
    trim(r);
    let df = f.len() - 1;
    if r.len() <= df {
        return;
    }
    let lead_inv = inv_mod(f[df], p).expect("nonzero leading coefficient");
    let lazy = p < 1 << 20 && r.len() < 1 << 20;
    let red = Reducer::new(p);
    let rows = r.len() - df;
    if lazy && rows > 8 {
        let support: Vec<(usize, u64)> = (0..df).filter(|&i| f[i] != 0).map(|i| (i, f[i])).collect();
        if support.len() * 4 < df {
            for k in (df..r.len()).rev() {
                let c = mulmod(red.reduce(r[k]), lead_inv, p);
                if c != 0 {
                    let nc = p - c;
                    for &(i, fi) in &support {
                        r[k - df + i] += nc * fi;
                    }
                }
            }
            r.truncate(df);
            for x in r.iter_mut() {
                *x = red.reduce(*x);
            }
            trim(r);
            return;
        }
    }
    for k in (df..r.len()).rev() {
        let c = mulmod(red.reduce(r[k]), lead_inv, p);
        if c == 0 {
            continue;
        }
        let nc = p - c;
        let row = &mut r[k - df..k];
        if lazy {
            // each coefficient gains < 2^40 per row, fewer than 2^20 rows
            for (x, &fi) in row.iter_mut().zip(f) {
                *x += nc * fi;
            }
        } else {
            for (x, &fi) in row.iter_mut().zip(f) {
                *x = addmod(*x % p, mulmod(nc, fi, p), p);
            }
        }
    }
    r.truncate(df);
    for x in r.iter_mut() {
        *x = red.reduce(*x);
    }
    trim(r);
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        fp_rem_in_place(&mut x, &y, p);
        std::mem::swap(&mut x, &mut y);
    }
    x
}

fn fp_powmod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut r = vec![1u64];
    let mut b = fp_rem(base, f, p);
    while e > 0 {
        if e & 1 == 1 {
            r = fp_rem(&fp_mul(&r, &b, p), f, p);
        }
        e >>= 1;
        if e > 0 {
            b = fp_rem(&fp_mul(&b, &b, p), f, p);
        }
    }
    r
}

/// Columns x^{p·j} mod f, j < d, of the Frobenius map on F_p[x]/(f), for
/// monic f = x^d − Σ_{(i, c) ∈ support} c·x^i; built by shifting.
fn frobenius_columns(support: &[(usize, u64)], d: usize, p: u64) -> Vec<Vec<u64>> {
    // ring buffer: the coefficient of x^j sits at buf[(o + j) % d]
    let mut buf = vec![0u64; d];
    let mut o = 0;
    buf[0] = 1;
    let mut cols = Vec::with_capacity(d);
    for j in 0..d {
        if j > 0 {
            for _ in 0..p {
                o = if o == 0 { d - 1 } else { o - 1 };
                let top = std::mem::take(&mut buf[o]);
                if top != 0 {
                    for &(i, c) in support {
                        let idx = if o + i >= d { o + i - d } else { o + i };
                        buf[idx] = addmod(buf[idx], mulmod(top, c, p), p);
                    }
                }
            }
        }
        cols.push((0..d).map(|k| buf[(o + k) % d]).collect());
    }
    cols
}

/// Q·h for the Frobenius columns Q; p < 2^20 and d < 2^20.
fn apply_columns(cols: &[Vec<u64>], h: &[u64], p: u64) -> Vec<u64> {
    let d = cols.len();
    let mut acc = vec![0u64; d];
    for (col, &c) in cols.iter().zip(h) {
        if c != 0 {
            for (a, &x) in acc.iter_mut().zip(col) {
                *a += c * x;
            }
        }
    }
    let red = Reducer::new(p);
    let mut out: Vec<u64> = acc.into_iter().map(|a| red.reduce(a)).collect();
    trim(&mut out);
    out
}

/// Ben-Or irreducibility test over F_p. `f` must have nonzero leading coefficient.
pub(crate) fn is_irreducible_mod_p(f: &[u64], p: u64) -> bool {
    let mut f: Vec<u64> = f.iter().map(|c| c % p).collect();
    trim(&mut f);
    if f.len() < 2 {
        return false;
    }
    let d = f.len() - 1;
    if d == 1 {
        return true;
    }
    // a root in F_p is a linear factor; cheap to rule out first when p is small,
    // which also settles the degree-one round below
    let roots_checked = p <= 1 << 12;
    if roots_checked {
        let terms: Vec<(u64, u64)> = f.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i as u64, c)).collect();
        let eval = |a: u64| -> u64 {
            if terms.len() * 8 < d {
                terms.iter().fold(0, |acc, &(i, c)| addmod(acc, mulmod(c, powmod(a, i, p), p), p))
            } else {
                f.iter().rev().fold(0, |acc, &c| addmod(mulmod(acc, a, p), c, p))
            }
        };
        if (0..p).any(|a| eval(a) == 0) {
            return false;
        }
    }
    // sparse moduli: x ↦ x^p is a d×d matrix that is cheap to build by shifting
    let support: Vec<(usize, u64)> = (0..d).filter(|&i| f[i] != 0).map(|i| (i, p - f[i])).collect();
    let frobenius = (p < 1 << 20 && d < 1 << 20 && (support.len() as u64) * p < (64 - p.leading_zeros() as u64) * d as u64)
        .then(|| frobenius_columns(&support, d, p));
    let x = vec![0u64, 1];
    let mut h = x.clone();
    for i in 1..=d / 2 {
        h = match &frobenius {
            Some(cols) => apply_columns(cols, &h, p),
            None => fp_powmod(&h, p, &f, p),
        };
        if i == 1 && roots_checked {
            continue;
        }
        let mut hx = h.clone();
        hx.resize(hx.len().max(2), 0);
        hx[1] = submod(hx[1], 1, p);
        trim(&mut hx);
        if fp_gcd(&f, &hx, p).len() != 1 {
            return false;
        }
    }
    true
}

/// Lexicographically smallest monic irreducible polynomial of degree `s` over
/// F_p, ordering the lower coefficients by `Σ c_i p^i`.
pub fn default_modulus(p: u64, s: usize) -> Vec<u64> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize), Vec<u64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = cache.lock().unwrap().get(&(p, s)) {
        return f.clone();
    }
    let mut digits = vec![0u64; s];
    let found = loop {
        let mut f = digits.clone();
        f.push(1);
        if is_irreducible_mod_p(&f, p) {
            break f;
        }
        let mut i = 0;
        loop {
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            i += 1;
            assert!(i < s, "an irreducible polynomial of every degree exists");
        }
    };
    cache.lock().unwrap().insert((p, s), found.clone());
    found
}

/// Arithmetic of GR(p^n, s); elements are coefficient vectors of length `s`.
#[derive(Debug, Clone)]
pub(crate) struct Galois {
    pub p: u64,
    pub n: u32,
    pub q: u64,
    pub s: usize,
    /// Monic modulus of degree `s`, coefficients reduced mod `q`.
    pub modulus: Vec<u64>,
    /// Indices below `s` where the modulus is nonzero.
    support: Vec<usize>,
}

impl Galois {
    pub fn new(p: u64, n: u32, modulus: Vec<u64>) -> Galois {
        let q = p.pow(n);
        let s = modulus.len() - 1;
        let modulus: Vec<u64> = modulus.into_iter().map(|c| c % q).collect();
        let support = (0..s).filter(|&i| modulus[i] != 0).collect();
        Galois { p, n, q, s, modulus, support }
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.s]
    }

    pub fn from_u64(&self, c: u64) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = c % self.q;
        v
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| addmod(x, y, self.q)).collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| submod(x, y, self.q)).collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|&x| submod(0, x, self.q)).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let (q, s) = (self.q, self.s);
        if s == 1 {
            return vec![mulmod(a[0], b[0], q)];
        }
        self.reduce_high(poly_mul_mod(a, b, q))
    }

    /// Reduce a coefficient vector of any length by the modulus.
    pub fn reduce_high(&self, mut r: Vec<u64>) -> Vec<u64> {
        let (q, s) = (self.q, self.s);
        for k in (s..r.len()).rev() {
            let c = r[k] % q;
            if c == 0 {
                continue;
            }
            for &i in &self.support {
                let idx = k - s + i;
                r[idx] = submod(r[idx], mulmod(c, self.modulus[i], q), q);
            }
            r[k] = 0;
        }
        r.truncate(s);
        r.resize(s, 0);
        r
    }

    pub fn is_zero(a: &[u64]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    pub fn is_unit(&self, a: &[u64]) -> bool {
        a.iter().any(|&x| x % self.p != 0)
    }

    pub fn inverse(&self, a: &[u64]) -> Option<Vec<u64>> {
        if !self.is_unit(a) {
            return None;
        }
        // Euclid in F_p[x] for the residue, then Newton steps x ← x(2 − ax)
        let f: Vec<u64> = self.modulus.iter().map(|c| c % self.p).collect();
        let res: Vec<u64> = a.iter().map(|c| c % self.p).collect();
        let mut x = fp_inverse_mod(&res, &f, self.p)?;
        x.resize(self.s, 0);
        let two = self.from_u64(2);
        let mut precision = 1;
        while precision < self.n {
            x = self.mul(&x, &self.sub(&two, &self.mul(a, &x)));
            precision *= 2;
        }
        Some(x)
    }

    /// Number of elements, when it fits.
    pub fn cardinality(&self) -> Option<u128> {
        (self.q as u128).checked_pow(self.s as u32)
    }

    /// Elements in increasing order of `Σ c_i q^i`.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let total = self.cardinality().expect("small ring") as usize;
        let mut out = Vec::with_capacity(total);
        let mut cur = self.zero();
        for _ in 0..total {
            out.push(cur.clone());
            for c in cur.iter_mut() {
                *c += 1;
                if *c < self.q {
                    break;
                }
                *c = 0;
            }
        }
        out
    }

    /// Residue data: the same modulus over F_p.
    pub fn residue(&self) -> Galois {
        Galois::new(self.p, 1, self.modulus.iter().map(|c| c % self.p).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_moduli_match_known_values() {
        assert_eq!(default_modulus(2, 2), vec![1, 1, 1]);
        assert_eq!(default_modulus(2, 3), vec![1, 1, 0, 1]);
        assert_eq!(default_modulus(3, 2), vec![1, 0, 1]);
        assert_eq!(default_modulus(5, 2), vec![2, 0, 1]);
        assert_eq!(default_modulus(7, 1), vec![0, 1]);
    }

    #[test]
    fn irreducibility_agrees_with_root_search_in_degree_two_and_three() {
        for p in [2u64, 3, 5, 7] {
            for c0 in 0..p {
                for c1 in 0..p {
                    for c2 in 0..p {
                        let f = vec![c0, c1, c2, 1];
                        let has_root = (0..p).any(|x| {
                            (c0 + c1 * x + c2 * x * x + x * x * x) % p == 0
                        });
                        assert_eq!(is_irreducible_mod_p(&f, p), !has_root, "{f:?} mod {p}");
                    }
                    let f = vec![c0, c1, 1];
                    let has_root = (0..p).any(|x| (c0 + c1 * x + x * x) % p == 0);
                    assert_eq!(is_irreducible_mod_p(&f, p), !has_root);
                }
            }
        }
    }

    #[test]
    fn primality_and_modular_inverse() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(3_215_031_751));
        assert_eq!(inv_mod(2, 9), Some(5));
        assert_eq!(inv_mod(3, 9), None);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
    }

    #[test]
    fn galois_inverse_by_unit_group_order() {
        let g = Galois::new(2, 2, default_modulus(2, 3));
        for a in g.elements() {
            match g.inverse(&a) {
                Some(b) => assert_eq!(g.mul(&a, &b), g.from_u64(1)),
                None => assert!(!g.is_unit(&a)),
            }
        }
    }
}
