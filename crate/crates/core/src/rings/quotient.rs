//! Polynomial quotients base[v_1..v_k]/(relations) for the supported relation
//! shapes: a monic modulus per variable, nilpotency v^e = 0 and annihilation
//! v_i v_j = 0 (only between variables without a modulus). Moduli rewrite only
//! their own variable's exponent while the monomial relations depend only on
//! the other exponents, so the two rewrite systems commute.

use std::collections::BTreeMap;

use super::{Elem, Ring};

pub(crate) type Terms = Vec<(Vec<u32>, Elem)>;

/// Order in which the rewrite rules are tried during normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionOrder {
    ModulusFirst,
    AnnihilationFirst,
}

#[derive(Debug)]
pub(crate) struct QuotientData {
    pub base: Ring,
    pub vars: Vec<String>,
    /// Per variable: coefficients f_0..f_{d−1} of the monic modulus, as base elements.
    pub modulus: Vec<Option<Vec<Elem>>>,
    pub neg_modulus: Vec<Option<Vec<Elem>>>,
    pub nil: Vec<Option<u32>>,
    pub annihilate: Vec<(usize, usize)>,
}

impl QuotientData {
    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn killed(&self, e: &[u32]) -> bool {
        for (v, n) in self.nil.iter().enumerate() {
            if let Some(n) = n {
                if e[v] >= *n {
                    return true;
                }
            }
        }
        self.annihilate.iter().any(|&(i, j)| e[i] > 0 && e[j] > 0)
    }

    pub fn normalize(&self, raw: Terms, order: ReductionOrder) -> Terms {
        let base = &self.base;
        let mut work = raw;
        let mut acc: BTreeMap<Vec<u32>, Elem> = BTreeMap::new();
        while let Some((e, c)) = work.pop() {
            if base.is_zero(&c) {
                continue;
            }
            if order == ReductionOrder::AnnihilationFirst && self.killed(&e) {
                continue;
            }
            let hit = (0..self.nvars()).find_map(|v| {
                self.neg_modulus[v].as_ref().filter(|f| e[v] as usize >= f.len()).map(|f| (v, f))
            });
            if let Some((v, f)) = hit {
                let d = f.len() as u32;
                for (i, fi) in f.iter().enumerate() {
                    if base.is_zero(fi) {
                        continue;
                    }
                    let mut e2 = e.clone();
                    e2[v] = e[v] - d + i as u32;
                    work.push((e2, base.mul(&c, fi)));
                }
                continue;
            }
            if self.killed(&e) {
                continue;
            }
            match acc.get_mut(&e) {
                Some(x) => *x = base.add(x, &c),
                None => {
                    acc.insert(e, c);
                }
            }
        }
        acc.into_iter().filter(|(_, c)| !base.is_zero(c)).collect()
    }

    pub fn add(&self, a: &Terms, b: &Terms) -> Terms {
        let base = &self.base;
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push(b[j].clone());
                j += 1;
            } else {
                let c = base.add(&a[i].1, &b[j].1);
                if !base.is_zero(&c) {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
        out
    }

    pub fn neg(&self, a: &Terms) -> Terms {
        a.iter().map(|(e, c)| (e.clone(), self.base.neg(c))).collect()
    }

    pub fn mul(&self, a: &Terms, b: &Terms) -> Terms {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut acc: BTreeMap<Vec<u32>, Elem> = BTreeMap::new();
        for (ea, ca) in a {
            for (eb, cb) in b {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let c = self.base.mul(ca, cb);
                match acc.get_mut(&e) {
                    Some(x) => *x = self.base.add(x, &c),
                    None => {
                        acc.insert(e, c);
                    }
                }
            }
        }
        self.normalize(acc.into_iter().collect(), ReductionOrder::ModulusFirst)
    }

    /// Per-variable exponent bound (exclusive), if every variable is bounded.
    pub fn exponent_bounds(&self) -> Option<Vec<u32>> {
        (0..self.nvars())
            .map(|v| match (&self.modulus[v], self.nil[v]) {
                (Some(f), _) => Some(f.len() as u32),
                (None, Some(n)) => Some(n),
                _ => None,
            })
            .collect()
    }

    /// Monomials surviving all relations, when the quotient is a finite free base-module.
    pub fn standard_monomials(&self) -> Option<Vec<Vec<u32>>> {
        let bounds = self.exponent_bounds()?;
        let mut out = Vec::new();
        let mut cur = vec![0u32; bounds.len()];
        if bounds.contains(&0) {
            return Some(out);
        }
        loop {
            if !self.killed(&cur) {
                out.push(cur.clone());
            }
            let mut i = 0;
            loop {
                if i == cur.len() {
                    return Some(out);
                }
                cur[i] += 1;
                if cur[i] < bounds[i] {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }

    pub fn modulus_vars(&self) -> Vec<usize> {
        (0..self.nvars()).filter(|&v| self.modulus[v].is_some()).collect()
    }

    /// Basis of the subalgebra generated by the modulus variables.
    pub fn modulus_basis(&self) -> Vec<Vec<u32>> {
        let mv = self.modulus_vars();
        let mut out = vec![vec![0u32; self.nvars()]];
        for v in mv {
            let d = self.modulus[v].as_ref().unwrap().len() as u32;
            let mut next = Vec::new();
            for k in 0..d {
                for e in &out {
                    let mut e2 = e.clone();
                    e2[v] = k;
                    next.push(e2);
                }
            }
            out = next;
        }
        out
    }

    pub fn coeff_of(terms: &Terms, e: &[u32]) -> Option<Elem> {
        terms.binary_search_by(|(x, _)| x.as_slice().cmp(e)).ok().map(|i| terms[i].1.clone())
    }

    /// Matrix of multiplication by `x` on the modulus basis; columns are images
    /// of basis vectors. `x` must only involve modulus variables.
    pub fn mult_matrix(&self, x: &Terms, basis: &[Vec<u32>]) -> Vec<Vec<Elem>> {
        let base = &self.base;
        let mut m = vec![vec![base.zero(); basis.len()]; basis.len()];
        for (j, bj) in basis.iter().enumerate() {
            let prod = self.mul(x, &vec![(bj.clone(), base.one())]);
            for (i, bi) in basis.iter().enumerate() {
                if let Some(c) = Self::coeff_of(&prod, bi) {
                    m[i][j] = c;
                }
            }
        }
        m
    }

    pub fn from_coords(&self, basis: &[Vec<u32>], coords: Vec<Elem>) -> Terms {
        let raw = basis.iter().cloned().zip(coords).collect();
        self.normalize(raw, ReductionOrder::ModulusFirst)
    }

    pub fn to_coords(&self, x: &Terms, basis: &[Vec<u32>]) -> Option<Vec<Elem>> {
        let mut seen = 0;
        let coords = basis
            .iter()
            .map(|b| match Self::coeff_of(x, b) {
                Some(c) => {
                    seen += 1;
                    c
                }
                None => self.base.zero(),
            })
            .collect();
        (seen == x.len()).then_some(coords)
    }
}

/// Determinant and adjugate of a square matrix over a commutative ring, by
/// cofactor expansion along the first row (the matrices here are tiny).
pub(crate) fn det(ring: &Ring, m: &[Vec<Elem>]) -> Elem {
    let n = m.len();
    match n {
        0 => ring.one(),
        1 => m[0][0].clone(),
        2 => ring.sub(&ring.mul(&m[0][0], &m[1][1]), &ring.mul(&m[0][1], &m[1][0])),
        _ => {
            let mut acc = ring.zero();
            for j in 0..n {
                if ring.is_zero(&m[0][j]) {
                    continue;
                }
                let minor = minor(m, 0, j);
                let t = ring.mul(&m[0][j], &det(ring, &minor));
                acc = if j % 2 == 0 { ring.add(&acc, &t) } else { ring.sub(&acc, &t) };
            }
            acc
        }
    }
}

fn minor(m: &[Vec<Elem>], r: usize, c: usize) -> Vec<Vec<Elem>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != r)
        .map(|(_, row)| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect())
        .collect()
}

pub(crate) fn adjugate(ring: &Ring, m: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![ring.one()]];
    }
    let mut adj = vec![vec![ring.zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let d = det(ring, &minor(m, i, j));
            adj[j][i] = if (i + j) % 2 == 0 { d } else { ring.neg(&d) };
        }
    }
    adj
}
