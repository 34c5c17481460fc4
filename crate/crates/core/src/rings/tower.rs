//! The truncation O/pπ of a totally ramified extension W(F_q)[a]/(ψ(a)),
//! ψ Eisenstein of degree e. An element is Σ_{i<e} c_i a^i with c_0 taken
//! mod p² and the higher c_i mod p.

use super::galois::Galois;

#[derive(Debug, Clone)]
pub(crate) struct TowerData {
    pub p: u64,
    pub e: usize,
    /// ψ, little-endian, monic of degree e.
    pub psi: Vec<i64>,
    /// GR(p², s)
    pub g2: Galois,
    /// F_{p^s}
    pub g1: Galois,
    /// −ψ_i as elements of GR(p², s), i < e.
    neg_psi: Vec<Vec<u64>>,
}

pub(crate) type TowerElem = Vec<Vec<u64>>;

impl TowerData {
    pub fn new(p: u64, modulus: Vec<u64>, psi: Vec<i64>) -> TowerData {
        let g2 = Galois::new(p, 2, modulus.clone());
        let g1 = Galois::new(p, 1, modulus);
        let e = psi.len() - 1;
        let q = g2.q as i64;
        let neg_psi = psi[..e].iter().map(|&c| g2.from_u64((-c).rem_euclid(q) as u64)).collect();
        TowerData { p, e, psi, g2, g1, neg_psi }
    }

    pub fn zero(&self) -> TowerElem {
        vec![self.g2.zero(); self.e]
    }

    /// Truncate higher coefficients mod p.
    fn truncate(&self, mut v: TowerElem) -> TowerElem {
        for c in v.iter_mut().skip(1) {
            for x in c.iter_mut() {
                *x %= self.p;
            }
        }
        v
    }

    pub fn from_u64(&self, c: u64) -> TowerElem {
        let mut v = self.zero();
        v[0] = self.g2.from_u64(c);
        v
    }

    pub fn add(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        self.truncate(a.iter().zip(b).map(|(x, y)| self.g2.add(x, y)).collect())
    }

    pub fn neg(&self, a: &TowerElem) -> TowerElem {
        self.truncate(a.iter().map(|x| self.g2.neg(x)).collect())
    }

    pub fn mul(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        let e = self.e;
        let mut r = vec![self.g2.zero(); 2 * e - 1];
        for (i, x) in a.iter().enumerate() {
            if Galois::is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if Galois::is_zero(y) {
                    continue;
                }
                r[i + j] = self.g2.add(&r[i + j], &self.g2.mul(x, y));
            }
        }
        for k in (e..r.len()).rev() {
            let c = std::mem::replace(&mut r[k], self.g2.zero());
            if Galois::is_zero(&c) {
                continue;
            }
            for i in 0..e {
                let t = self.g2.mul(&c, &self.neg_psi[i]);
                r[k - e + i] = self.g2.add(&r[k - e + i], &t);
            }
        }
        r.truncate(e);
        self.truncate(r)
    }

    pub fn is_unit(&self, a: &TowerElem) -> bool {
        self.g2.is_unit(&a[0])
    }

    pub fn inverse(&self, a: &TowerElem) -> Option<TowerElem> {
        let inv0 = self.g2.inverse(&a[0])?;
        let mut nu = a.clone();
        nu[0] = self.g2.zero();
        let mut c = self.zero();
        c[0] = inv0;
        // x = x0(1 + ν x0⁻¹), ν nilpotent of index ≤ e + 1
        let t = self.neg(&self.mul(&nu, &c));
        let mut sum = self.from_u64(1);
        let mut pw = self.from_u64(1);
        for _ in 0..=self.e {
            pw = self.mul(&pw, &t);
            sum = self.add(&sum, &pw);
        }
        Some(self.mul(&c, &sum))
    }

    pub fn normalize(&self, v: TowerElem) -> TowerElem {
        let q = self.g2.q;
        self.truncate(v.into_iter().map(|c| c.into_iter().map(|x| x % q).collect()).collect())
    }

    /// The Eisenstein root a.
    pub fn root(&self) -> TowerElem {
        if self.e == 1 {
            let q = self.g2.q as i64;
            return self.from_u64((-self.psi[0]).rem_euclid(q) as u64);
        }
        let mut v = self.zero();
        v[1][0] = 1;
        v
    }

    pub fn cardinality(&self) -> Option<u128> {
        let fq = self.g1.cardinality()?;
        fq.checked_pow(self.e as u32 + 1)
    }

    pub fn elements(&self) -> Vec<TowerElem> {
        let lows = self.g2.elements();
        let highs = self.g1.elements();
        let mut out: Vec<TowerElem> = lows.into_iter().map(|c| {
            let mut v = self.zero();
            v[0] = c;
            v
        }).collect();
        for i in 1..self.e {
            let mut next = Vec::with_capacity(out.len() * highs.len());
            for h in &highs {
                for v in &out {
                    let mut w = v.clone();
                    w[i] = h.clone();
                    next.push(w);
                }
            }
            out = next;
        }
        out
    }

    pub fn residue(&self, a: &TowerElem) -> Vec<u64> {
        a[0].iter().map(|x| x % self.p).collect()
    }

    pub fn sub(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        self.truncate(a.iter().zip(b).map(|(x, y)| self.g2.sub(x, y)).collect())
    }
}
