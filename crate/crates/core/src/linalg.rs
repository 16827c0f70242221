//! Dense linear algebra over GF(q), for interpolation systems and oracles.

use crate::gf::{Fe, Field};

/// Reduces `rows` to reduced row-echelon form in place and returns the pivot
/// column of each nonzero row.
pub fn rref(f: &Field, rows: &mut [Vec<Fe>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(rows[r][c]).expect("pivot is nonzero");
        for v in rows[r].iter_mut() {
            *v = f.mul(*v, inv);
        }
        let (head, tail) = rows.split_at_mut(r);
        let (prow, rest) = tail.split_first_mut().expect("row r exists");
        for other in head.iter_mut().chain(rest.iter_mut()) {
            let factor = other[c];
            if factor.is_zero() {
                continue;
            }
            for (o, &pv) in other.iter_mut().zip(prow.iter()) {
                if !pv.is_zero() {
                    *o = f.sub(*o, f.mul(factor, pv));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

#[cfg(test)]
pub fn rank(f: &Field, rows: &[Vec<Fe>]) -> usize {
    let mut m = rows.to_vec();
    rref(f, &mut m).len()
}

/// Solves `A u = b`. Free variables are set to zero; returns `None` when the
/// system is inconsistent.
pub fn solve(f: &Field, a: &[Vec<Fe>], b: &[Fe]) -> Option<Vec<Fe>> {
    let nvars = a.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<Fe>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    let pivots = rref(f, &mut aug);
    if pivots.last() == Some(&nvars) {
        return None;
    }
    let mut u = vec![Fe::ZERO; nvars];
    for (r, &c) in pivots.iter().enumerate() {
        u[c] = aug[r][nvars];
    }
    Some(u)
}
