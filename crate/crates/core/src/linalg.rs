//! Gaussian elimination over a field given as a [`Ring`].

use crate::rings::{Elem, Ring};

/// Reduced row echelon form in place; returns the pivot columns.
pub(crate) fn rref(field: &Ring, rows: &mut [Vec<Elem>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| !field.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = field.inverse(&rows[r][c]).expect("nonzero element of a field");
        for x in rows[r].iter_mut() {
            *x = field.mul(x, &inv);
        }
        for i in 0..rows.len() {
            if i != r && !field.is_zero(&rows[i][c]) {
                let f = rows[i][c].clone();
                for j in 0..ncols {
                    let t = field.mul(&f, &rows[r][j]);
                    rows[i][j] = field.sub(&rows[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

pub(crate) fn rank(field: &Ring, rows: &[Vec<Elem>]) -> usize {
    rref(field, &mut rows.to_vec()).len()
}

/// A basis of {x : rows·x = 0}.
pub(crate) fn nullspace(field: &Ring, rows: &[Vec<Elem>], ncols: usize) -> Vec<Vec<Elem>> {
    let mut m = rows.to_vec();
    let pivots = rref(field, &mut m);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![field.zero(); ncols];
        v[free] = field.one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = field.neg(&m[r][free]);
        }
        basis.push(v);
    }
    basis
}

/// Coefficients x with Σ x_j·cols[j] = target, if any.
pub(crate) fn solve(field: &Ring, cols: &[Vec<Elem>], target: &[Elem]) -> Option<Vec<Elem>> {
    let n = cols.len();
    let mut rows: Vec<Vec<Elem>> = (0..target.len())
        .map(|i| {
            let mut row: Vec<Elem> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let pivots = rref(field, &mut rows);
    if pivots.contains(&n) {
        return None;
    }
    let mut x = vec![field.zero(); n];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = rows[r][n].clone();
    }
    Some(x)
}
