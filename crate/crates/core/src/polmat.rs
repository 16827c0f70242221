//! Matrices over GF(q)[x]: shifted degrees, (weak) Popov forms, division with
//! remainder and pointwise interpolation bases.
//!
//! Shifts are `(scale, offsets)` pairs: the shifted degree of an entry `p` in
//! column `i` is `scale * deg p + offsets[i]`. This represents rational shifts
//! with a common denominator exactly. Pivots are the rightmost entries of
//! maximal shifted degree.

use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Fe, Field};
use crate::upoly::Poly;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolyMat {
    rows: usize,
    cols: usize,
    data: Vec<Poly>,
}

impl PolyMat {
    pub fn zeros(rows: usize, cols: usize) -> PolyMat {
        PolyMat { rows, cols, data: vec![Poly::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> PolyMat {
        let mut m = PolyMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Poly::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Poly>>) -> Result<PolyMat> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(PolyMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut Poly {
        &mut self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.data[i * self.cols + j] = p;
    }

    pub fn row(&self, i: usize) -> &[Poly] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Poly] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[Poly]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Poly::is_zero)
    }

    pub fn row_is_zero(&self, i: usize) -> bool {
        self.row(i).iter().all(Poly::is_zero)
    }

    /// Largest entry degree, `None` for the zero matrix.
    pub fn deg(&self) -> Option<usize> {
        self.data.iter().filter_map(Poly::deg).max()
    }

    /// Per-column maximal entry degree.
    pub fn col_degrees(&self) -> Vec<Option<usize>> {
        (0..self.cols)
            .map(|j| (0..self.rows).filter_map(|i| self.get(i, j).deg()).max())
            .collect()
    }

    pub fn row_degrees(&self) -> Vec<Option<usize>> {
        self.rows_iter().map(|r| r.iter().filter_map(Poly::deg).max()).collect()
    }

    pub fn mul(&self, f: &Field, b: &PolyMat) -> Result<PolyMat> {
        if self.cols != b.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, b.rows, b.cols
            )));
        }
        let mut out = PolyMat::zeros(self.rows, b.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..b.cols {
                    let bk = b.get(k, j);
                    if !bk.is_zero() {
                        let prod = a.mul(f, bk);
                        out.get_mut(i, j).add_assign(f, &prod);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, f: &Field, b: &PolyMat) -> Result<PolyMat> {
        self.same_shape(b)?;
        let data = self.data.iter().zip(&b.data).map(|(x, y)| x.add(f, y)).collect();
        Ok(PolyMat { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, f: &Field, b: &PolyMat) -> Result<PolyMat> {
        self.same_shape(b)?;
        let data = self.data.iter().zip(&b.data).map(|(x, y)| x.sub(f, y)).collect();
        Ok(PolyMat { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, f: &Field, a: Fe) -> PolyMat {
        PolyMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|p| p.scale(f, a)).collect(),
        }
    }

    pub fn neg(&self, f: &Field) -> PolyMat {
        PolyMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|p| p.neg(f)).collect(),
        }
    }

    fn same_shape(&self, b: &PolyMat) -> Result<()> {
        if self.rows != b.rows || self.cols != b.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, b.rows, b.cols
            )));
        }
        Ok(())
    }

    /// Copy of the `nr x nc` block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> PolyMat {
        let mut out = PolyMat::zeros(nr, nc);
        for i in 0..nr {
            for j in 0..nc {
                out.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &PolyMat) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    /// Stacks `self` on top of `b`.
    pub fn vstack(&self, b: &PolyMat) -> Result<PolyMat> {
        if self.cols != b.cols {
            return Err(Error::DimensionMismatch("column counts differ".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&b.data);
        Ok(PolyMat { rows: self.rows + b.rows, cols: self.cols, data })
    }

    /// Selects rows by index.
    pub fn select_rows(&self, idx: &[usize]) -> PolyMat {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        PolyMat { rows: idx.len(), cols: self.cols, data }
    }

    /// Determinant by fraction-free elimination.
    pub fn determinant(&self, f: &Field) -> Result<Poly> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Poly::one());
        }
        let mut a = self.clone();
        let mut prev = Poly::one();
        let mut negate = false;
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a.get(i, k).is_zero()) else {
                return Ok(Poly::zero());
            };
            if p != k {
                a.swap_rows(p, k);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a
                        .get(k, k)
                        .mul(f, a.get(i, j))
                        .sub(f, &a.get(i, k).mul(f, a.get(k, j)));
                    let (q, r) = v.divrem(f, &prev)?;
                    debug_assert!(r.is_zero());
                    a.set(i, j, q);
                }
                a.set(i, k, Poly::zero());
            }
            prev = a.get(k, k).clone();
        }
        let d = a.get(n - 1, n - 1).clone();
        Ok(if negate { d.neg(f) } else { d })
    }

    /// Text dump: a header line, then one line per row with each entry as a
    /// bracketed coefficient list.
    pub fn dump(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# {name} {}x{}", self.rows, self.cols);
        for row in self.rows_iter() {
            let cells: Vec<String> = row
                .iter()
                .map(|p| {
                    let c: Vec<String> = p.coeffs().iter().map(|v| v.0.to_string()).collect();
                    format!("[{}]", c.join(","))
                })
                .collect();
            let _ = writeln!(s, "{}", cells.join(" "));
        }
        s
    }
}

/// Column shift with a common scale.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShiftVec {
    pub scale: i64,
    pub offsets: Vec<i64>,
}

impl ShiftVec {
    pub fn new(scale: i64, offsets: Vec<i64>) -> Result<ShiftVec> {
        if scale <= 0 {
            return Err(Error::InvalidParams("shift scale must be positive".into()));
        }
        Ok(ShiftVec { scale, offsets })
    }

    pub fn zero(n: usize) -> ShiftVec {
        ShiftVec { scale: 1, offsets: vec![0; n] }
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    #[inline]
    pub fn entry_degree(&self, p: &Poly, col: usize) -> Option<i64> {
        p.deg().map(|d| self.scale * d as i64 + self.offsets[col])
    }

    fn check(&self, cols: usize) -> Result<()> {
        if self.offsets.len() != cols {
            return Err(Error::DimensionMismatch(format!(
                "shift of length {} for {} columns",
                self.offsets.len(),
                cols
            )));
        }
        Ok(())
    }
}

/// Shifted row degree and pivot index of a row, `None` for a zero row.
pub fn row_shifted_degree(v: &[Poly], shift: &ShiftVec) -> Option<(i64, usize)> {
    let mut best: Option<(i64, usize)> = None;
    for (i, p) in v.iter().enumerate() {
        if let Some(d) = shift.entry_degree(p, i) {
            if best.is_none_or(|(bd, _)| d >= bd) {
                best = Some((d, i));
            }
        }
    }
    best
}

/// Pivot index and pivot shifted degree of every row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PivotProfile {
    pub rows: Vec<Option<(usize, i64)>>,
}

impl PivotProfile {
    pub fn of(m: &PolyMat, shift: &ShiftVec) -> PivotProfile {
        PivotProfile {
            rows: m
                .rows_iter()
                .map(|r| row_shifted_degree(r, shift).map(|(d, p)| (p, d)))
                .collect(),
        }
    }
}

pub fn is_weak_popov(m: &PolyMat, shift: &ShiftVec) -> bool {
    let prof = PivotProfile::of(m, shift);
    let mut seen = vec![false; m.ncols()];
    let mut zero_seen = false;
    for r in prof.rows {
        match r {
            None => zero_seen = true,
            Some((p, _)) => {
                if zero_seen || seen[p] {
                    return false;
                }
                seen[p] = true;
            }
        }
    }
    true
}

/// Checks the shifted Popov conditions: distinct increasing pivots, monic
/// pivot entries, and every other entry of a pivot column of smaller degree.
pub fn is_popov(m: &PolyMat, shift: &ShiftVec) -> bool {
    let prof = PivotProfile::of(m, shift);
    let mut last: Option<usize> = None;
    for (i, r) in prof.rows.iter().enumerate() {
        let Some((p, _)) = *r else {
            if (i..m.nrows()).any(|k| !m.row_is_zero(k)) {
                return false;
            }
            break;
        };
        if last.is_some_and(|l| p <= l) {
            return false;
        }
        last = Some(p);
        let piv = m.get(i, p);
        if !piv.is_monic() {
            return false;
        }
        let d = piv.len();
        if (0..m.nrows()).any(|k| k != i && m.get(k, p).len() >= d) {
            return false;
        }
    }
    true
}

/// `row[dst] -= c * x^k * row[src]` applied to both `m` and, if given, `u`.
fn row_axpy(f: &Field, m: &mut PolyMat, dst: usize, src: usize, c: Fe, k: usize) {
    let neg = f.neg(c);
    for j in 0..m.ncols() {
        let s = m.get(src, j).clone();
        if !s.is_zero() {
            m.get_mut(dst, j).axpy_shifted(f, neg, k, &s);
        }
    }
}

/// Mulders–Storjohann reduction to shifted weak Popov form. Returns `(W, U)`
/// with `W = U M`, `U` unimodular and zero rows moved to the bottom.
pub fn weak_popov(f: &Field, m: &PolyMat, shift: &ShiftVec) -> Result<(PolyMat, PolyMat)> {
    shift.check(m.ncols())?;
    let mut w = m.clone();
    let mut u = PolyMat::identity(m.nrows());
    weak_popov_in_place(f, &mut w, Some(&mut u), shift);
    Ok((w, u))
}

fn weak_popov_in_place(f: &Field, w: &mut PolyMat, mut u: Option<&mut PolyMat>, shift: &ShiftVec) {
    let n = w.nrows();
    let mut prof: Vec<Option<(i64, usize)>> =
        (0..n).map(|i| row_shifted_degree(w.row(i), shift)).collect();
    loop {
        let mut owner: Vec<Option<usize>> = vec![None; w.ncols()];
        let mut clash = None;
        for i in 0..n {
            if let Some((_, p)) = prof[i] {
                if let Some(j) = owner[p] {
                    clash = Some((j, i, p));
                    break;
                }
                owner[p] = Some(i);
            }
        }
        let Some((a, b, p)) = clash else { break };
        let da = w.get(a, p).len();
        let db = w.get(b, p).len();
        // reduce the row whose pivot entry has the larger degree
        let (dst, src) = if da >= db { (a, b) } else { (b, a) };
        let k = w.get(dst, p).len() - w.get(src, p).len();
        let c = f.mul(
            w.get(dst, p).lead().expect("pivot entry nonzero"),
            f.inv_nz(w.get(src, p).lead().expect("pivot entry nonzero")),
        );
        row_axpy(f, w, dst, src, c, k);
        if let Some(u) = u.as_deref_mut() {
            row_axpy(f, u, dst, src, c, k);
        }
        prof[dst] = row_shifted_degree(w.row(dst), shift);
    }
    // stable move of zero rows to the bottom
    let order: Vec<usize> = (0..n)
        .filter(|&i| prof[i].is_some())
        .chain((0..n).filter(|&i| prof[i].is_none()))
        .collect();
    if order.iter().enumerate().any(|(k, &i)| k != i) {
        *w = w.select_rows(&order);
        if let Some(u) = u {
            *u = u.select_rows(&order);
        }
    }
}

/// Turns a shifted weak Popov matrix into the shifted Popov form of its row
/// space. Zero rows are kept at the bottom.
pub fn popov_normalize(f: &Field, w: &PolyMat, shift: &ShiftVec) -> Result<PolyMat> {
    let mut p = w.clone();
    normalize_in_place(f, &mut p, None, shift)?;
    Ok(p)
}

fn normalize_in_place(
    f: &Field,
    w: &mut PolyMat,
    mut u: Option<&mut PolyMat>,
    shift: &ShiftVec,
) -> Result<()> {
    shift.check(w.ncols())?;
    let n = w.nrows();
    let prof: Vec<Option<(i64, usize)>> =
        (0..n).map(|i| row_shifted_degree(w.row(i), shift)).collect();
    let mut seen = vec![false; w.ncols()];
    for &(_, p) in prof.iter().flatten() {
        if seen[p] {
            return Err(Error::NotWeakPopov);
        }
        seen[p] = true;
    }
    // sort nonzero rows by pivot index, zero rows last
    let mut order: Vec<usize> = (0..n).filter(|&i| prof[i].is_some()).collect();
    order.sort_by_key(|&i| prof[i].map(|(_, p)| p));
    let nonzero = order.len();
    order.extend((0..n).filter(|&i| prof[i].is_none()));
    *w = w.select_rows(&order);
    if let Some(u) = u.as_deref_mut() {
        *u = u.select_rows(&order);
    }
    let pivots: Vec<usize> = (0..nonzero)
        .map(|i| row_shifted_degree(w.row(i), shift).expect("nonzero row").1)
        .collect();
    // monic pivots
    for (i, &p) in pivots.iter().enumerate() {
        let inv = f.inv_nz(w.get(i, p).lead().expect("pivot entry nonzero"));
        if inv != Fe::ONE {
            for j in 0..w.ncols() {
                let e = w.get(i, j).scale(f, inv);
                w.set(i, j, e);
            }
            if let Some(u) = u.as_deref_mut() {
                for j in 0..u.ncols() {
                    let e = u.get(i, j).scale(f, inv);
                    u.set(i, j, e);
                }
            }
        }
    }
    let pivot_len: Vec<usize> = (0..nonzero).map(|i| w.get(i, pivots[i]).len()).collect();
    // Reduce each row against the other pivots, always cancelling the
    // reducible term that is largest in the shifted term order.
    for i in 0..nonzero {
        loop {
            let mut best: Option<(i64, usize, usize)> = None;
            for (k, &pk) in pivots.iter().enumerate() {
                if k == i {
                    continue;
                }
                let e = w.get(i, pk);
                if e.len() >= pivot_len[k] {
                    let sd = shift.entry_degree(e, pk).expect("nonzero");
                    if best.is_none_or(|(bd, bc, _)| (sd, pk) > (bd, bc)) {
                        best = Some((sd, pk, k));
                    }
                }
            }
            let Some((_, pk, k)) = best else { break };
            let e = w.get(i, pk);
            let c = e.lead().expect("nonzero");
            let deg_shift = e.len() - pivot_len[k];
            row_axpy(f, w, i, k, c, deg_shift);
            if let Some(u) = u.as_deref_mut() {
                row_axpy(f, u, i, k, c, deg_shift);
            }
        }
    }
    Ok(())
}

/// Shifted Popov form of the row space of `m`.
pub fn popov_form(f: &Field, m: &PolyMat, shift: &ShiftVec) -> Result<PolyMat> {
    shift.check(m.ncols())?;
    let mut w = m.clone();
    weak_popov_in_place(f, &mut w, None, shift);
    normalize_in_place(f, &mut w, None, shift)?;
    Ok(w)
}

/// Shifted Popov form together with a unimodular `U` such that `P = U M`.
pub fn popov_form_with_transform(
    f: &Field,
    m: &PolyMat,
    shift: &ShiftVec,
) -> Result<(PolyMat, PolyMat)> {
    shift.check(m.ncols())?;
    let mut w = m.clone();
    let mut u = PolyMat::identity(m.nrows());
    weak_popov_in_place(f, &mut w, Some(&mut u), shift);
    normalize_in_place(f, &mut w, Some(&mut u), shift)?;
    Ok((w, u))
}

/// Division with remainder `A = Q B + R` for a nonsingular square `B`.
///
/// `R` satisfies the column-wise bound `cdeg(R)_j < cdeg(P)_j`, where `P` is
/// the Popov form of `B` with zero shift; in particular `deg R < deg B`.
pub fn pm_divrem(f: &Field, a: &PolyMat, b: &PolyMat) -> Result<(PolyMat, PolyMat)> {
    let n = b.nrows();
    if b.ncols() != n || a.ncols() != n {
        return Err(Error::DimensionMismatch("divisor must be square and match A".into()));
    }
    let (p, v) = popov_form_with_transform(f, b, &ShiftVec::zero(n))?;
    if (0..n).any(|i| p.row_is_zero(i)) {
        return Err(Error::SingularMatrix);
    }
    // P is zero-shift Popov and square: row i has its monic pivot in column i,
    // which is also the unique entry of maximal degree in that column.
    let d: Vec<usize> = (0..n).map(|i| p.get(i, i).len() - 1).collect();
    let mut qp = PolyMat::zeros(a.nrows(), n);
    let mut r = a.clone();
    for row in 0..a.nrows() {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for (c, &dc) in d.iter().enumerate() {
                if let Some(dv) = r.get(row, c).deg() {
                    if dv >= dc {
                        let k = dv - dc;
                        if best.is_none_or(|(bk, _)| k > bk) {
                            best = Some((k, c));
                        }
                    }
                }
            }
            let Some((k, c)) = best else { break };
            let lc = r.get(row, c).lead().expect("nonzero");
            let neg = f.neg(lc);
            for j in 0..n {
                let pc = p.get(c, j).clone();
                r.get_mut(row, j).axpy_shifted(f, neg, k, &pc);
            }
            qp.get_mut(row, c).axpy_shifted(f, lc, k, &Poly::one());
        }
    }
    let q = qp.mul(f, &v)?;
    Ok((q, r))
}

/// One pointwise linear constraint `sum_i v_i(point) * values[i] = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub point: Fe,
    pub values: Vec<Fe>,
}

/// Shifted Popov basis of all `v` in `F_q[x]^{1 x n}` satisfying every
/// constraint, built by incremental (Kötter-style) updates from the identity.
pub fn koetter_basis(
    f: &Field,
    n: usize,
    constraints: &[Constraint],
    shift: &ShiftVec,
) -> Result<PolyMat> {
    shift.check(n)?;
    if let Some(c) = constraints.iter().find(|c| c.values.len() != n) {
        return Err(Error::DimensionMismatch(format!(
            "constraint of length {} for {} columns",
            c.values.len(),
            n
        )));
    }
    let mut m = PolyMat::identity(n);
    let mut prof: Vec<(i64, usize)> = (0..n)
        .map(|i| row_shifted_degree(m.row(i), shift).expect("identity row"))
        .collect();
    let mut disc = vec![Fe::ZERO; n];
    for con in constraints {
        for (r, d) in disc.iter_mut().enumerate() {
            let mut acc = Fe::ZERO;
            for (p, &a) in m.row(r).iter().zip(&con.values) {
                if !a.is_zero() && !p.is_zero() {
                    acc = f.add(acc, f.mul(p.eval(f, con.point), a));
                }
            }
            *d = acc;
        }
        let Some(pi) = (0..n)
            .filter(|&r| !disc[r].is_zero())
            .min_by_key(|&r| (prof[r].0, prof[r].1, r))
        else {
            continue;
        };
        let inv = f.inv_nz(disc[pi]);
        for r in 0..n {
            if r == pi || disc[r].is_zero() {
                continue;
            }
            let c = f.mul(disc[r], inv);
            row_axpy(f, &mut m, r, pi, c, 0);
        }
        let lin = Poly::linear_root(f, con.point);
        for j in 0..n {
            let e = m.get(pi, j).mul(f, &lin);
            m.set(pi, j, e);
        }
        prof[pi].0 += shift.scale;
    }
    normalize_in_place(f, &mut m, None, shift)?;
    Ok(m)
}

/// Random unimodular matrix built as a product of elementary row operations
/// (row additions with polynomial multipliers, nonzero scalings, swaps).
pub fn random_unimodular<R: Rng>(
    f: &Field,
    n: usize,
    ops: usize,
    max_deg: usize,
    rng: &mut R,
) -> PolyMat {
    let q = f.order();
    let mut u = PolyMat::identity(n);
    if n == 0 {
        return u;
    }
    for _ in 0..ops {
        match rng.gen_range(0..4) {
            0 if n > 1 => {
                let a = rng.gen_range(0..n);
                let b = (a + rng.gen_range(1..n)) % n;
                u.swap_rows(a, b);
            }
            1 => {
                let a = rng.gen_range(0..n);
                let c = Fe(rng.gen_range(1..q));
                for j in 0..n {
                    let e = u.get(a, j).scale(f, c);
                    u.set(a, j, e);
                }
            }
            _ if n > 1 => {
                let a = rng.gen_range(0..n);
                let b = (a + rng.gen_range(1..n)) % n;
                let mult = random_poly(rng, q, max_deg);
                for j in 0..n {
                    let add = u.get(b, j).mul(f, &mult);
                    u.get_mut(a, j).add_assign(f, &add);
                }
            }
            _ => {}
        }
    }
    u
}

/// Polynomial with uniformly random coefficients of degree at most `max_deg`.
pub fn random_poly<R: Rng>(rng: &mut R, q: u32, max_deg: usize) -> Poly {
    Poly::from_coeffs((0..=max_deg).map(|_| Fe(rng.gen_range(0..q))).collect())
}

pub fn random_matrix<R: Rng>(rng: &mut R, q: u32, rows: usize, cols: usize, max_deg: usize) -> PolyMat {
    let mut m = PolyMat::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, random_poly(rng, q, max_deg));
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rank;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(f: &Field, v: &[u64]) -> Poly {
        Poly::from_ints(f, v).unwrap()
    }

    fn mat(f: &Field, rows: &[&[&[u64]]]) -> PolyMat {
        PolyMat::from_rows(rows.iter().map(|r| r.iter().map(|e| p(f, e)).collect()).collect())
            .unwrap()
    }

    fn naive_mul(f: &Field, a: &PolyMat, b: &PolyMat) -> PolyMat {
        let mut out = PolyMat::zeros(a.nrows(), b.ncols());
        for i in 0..a.nrows() {
            for j in 0..b.ncols() {
                let mut coeffs = vec![Fe::ZERO; 64];
                for k in 0..a.ncols() {
                    for (x, &ca) in a.get(i, k).coeffs().iter().enumerate() {
                        for (y, &cb) in b.get(k, j).coeffs().iter().enumerate() {
                            coeffs[x + y] = f.add(coeffs[x + y], f.mul(ca, cb));
                        }
                    }
                }
                out.set(i, j, Poly::from_coeffs(coeffs));
            }
        }
        out
    }

    #[test]
    fn mul_examples() {
        let f = Field::gf(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_matrix(&mut rng, 7, 2, 2, 3);
        let b = random_matrix(&mut rng, 7, 2, 2, 3);
        assert_eq!(a.mul(&f, &PolyMat::identity(2)).unwrap(), a);
        assert!(a.mul(&f, &PolyMat::zeros(2, 2)).unwrap().is_zero());
        assert_eq!(a.mul(&f, &b).unwrap(), naive_mul(&f, &a, &b));
        assert!(a.mul(&f, &PolyMat::zeros(3, 2)).is_err());
    }

    #[test]
    fn shifted_degree_examples() {
        let f = Field::gf(5).unwrap();
        let e1 = vec![Poly::zero(), Poly::one(), Poly::zero()];
        assert_eq!(row_shifted_degree(&e1, &ShiftVec::zero(3)), Some((0, 1)));
        let v = vec![Poly::x(), Poly::one()];
        assert_eq!(row_shifted_degree(&v, &ShiftVec::new(1, vec![0, 5]).unwrap()), Some((5, 1)));
        let x2 = p(&f, &[0, 0, 1]);
        let v = vec![x2.clone(), x2];
        assert_eq!(row_shifted_degree(&v, &ShiftVec::new(2, vec![1, 0]).unwrap()), Some((5, 0)));
        assert_eq!(row_shifted_degree(&[Poly::zero()], &ShiftVec::zero(1)), None);
    }

    #[test]
    fn weak_popov_examples() {
        let f = Field::gf(2).unwrap();
        let m = mat(&f, &[&[&[0, 1]], &[&[0, 1]]]);
        let (w, u) = weak_popov(&f, &m, &ShiftVec::zero(1)).unwrap();
        assert_eq!(w, mat(&f, &[&[&[0, 1]], &[&[]]]));
        assert_eq!(u.mul(&f, &m).unwrap(), w);
        let already = mat(&f, &[&[&[1, 1], &[]], &[&[1], &[1]]]);
        let (w, u) = weak_popov(&f, &already, &ShiftVec::zero(2)).unwrap();
        assert_eq!(w, already);
        assert_eq!(u, PolyMat::identity(2));
    }

    #[test]
    fn popov_examples() {
        let f = Field::gf(5).unwrap();
        let z = ShiftVec::zero(2);
        assert_eq!(popov_form(&f, &PolyMat::identity(3), &ShiftVec::zero(3)).unwrap(), PolyMat::identity(3));
        let w = mat(&f, &[&[&[1, 2], &[]], &[&[1], &[1]]]);
        assert_eq!(popov_normalize(&f, &w, &z).unwrap(), mat(&f, &[&[&[3, 1], &[]], &[&[1], &[1]]]));
        let k = mat(&f, &[&[&[2, 1], &[]], &[&[3], &[1]]]);
        assert!(is_popov(&k, &z));
        assert_eq!(popov_form(&f, &k, &z).unwrap(), k);
        let bad = mat(&f, &[&[&[1, 1]], &[&[0, 1]]]);
        assert_eq!(popov_normalize(&f, &bad, &ShiftVec::zero(1)), Err(Error::NotWeakPopov));
    }

    /// Dimension over F_q of `{u M : deg(u M) <= d}`, computed as the kernel
    /// of the map sending `u` with bounded degrees to the coefficients of
    /// `u M` above degree `d`.
    fn bounded_dim(f: &Field, m: &PolyMat, d: usize, ubound: usize) -> usize {
        let (r, c) = (m.nrows(), m.ncols());
        let dm = m.deg().unwrap_or(0);
        let top = ubound + dm + 1;
        let nvars = r * (ubound + 1);
        let mut eqs: Vec<Vec<Fe>> = Vec::new();
        for j in 0..c {
            for e in d + 1..top {
                let mut row = vec![Fe::ZERO; nvars];
                for i in 0..r {
                    for k in 0..=ubound {
                        if e >= k {
                            row[i * (ubound + 1) + k] = m.get(i, j).coeff(e - k);
                        }
                    }
                }
                eqs.push(row);
            }
        }
        nvars - rank(f, &eqs)
    }

    #[test]
    fn minimal_degrees_match_bounded_span_oracle() {
        let f = Field::gf(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..6 {
            let m = random_matrix(&mut rng, 5, 4, 4, 3);
            let (w, _) = weak_popov(&f, &m, &ShiftVec::zero(4)).unwrap();
            let mut got: Vec<usize> = w.row_degrees().into_iter().flatten().collect();
            got.sort_unstable();
            // u = v adj(M) / det(M) has degree at most d + 3*3 for nonsingular M
            let maxd = *got.last().unwrap();
            let mut counts = Vec::new();
            let mut prev = 0;
            for d in 0..=maxd {
                let cur = bounded_dim(&f, &m, d, d + 9);
                counts.push(cur - prev);
                prev = cur;
            }
            // number of rows of degree <= d equals the increment of dim
            let mut oracle = Vec::new();
            let mut before = 0;
            for (d, &inc) in counts.iter().enumerate() {
                for _ in before..inc {
                    oracle.push(d);
                }
                before = inc;
            }
            assert_eq!(got, oracle);
        }
    }

    #[test]
    fn popov_is_canonical_under_unimodular_transforms() {
        let f = Field::gf(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..4 {
            let m = random_matrix(&mut rng, 5, 4, 4, 3);
            let shift = if trial % 2 == 0 {
                ShiftVec::zero(4)
            } else {
                ShiftVec::new(3, vec![0, 4, -2, 1]).unwrap()
            };
            let base = popov_form(&f, &m, &shift).unwrap();
            assert!(is_popov(&base, &shift));
            for _ in 0..10 {
                let u = random_unimodular(&f, 4, 8, 2, &mut rng);
                let um = u.mul(&f, &m).unwrap();
                assert_eq!(popov_form(&f, &um, &shift).unwrap(), base);
            }
        }
    }

    #[test]
    fn weak_popov_rank_deficient_keeps_transform() {
        let f = Field::gf(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_matrix(&mut rng, 3, 2, 3, 2);
        let mix = random_matrix(&mut rng, 3, 2, 2, 1);
        let m = a.vstack(&mix.mul(&f, &a).unwrap()).unwrap();
        let (w, u) = weak_popov(&f, &m, &ShiftVec::zero(3)).unwrap();
        assert_eq!(u.mul(&f, &m).unwrap(), w);
        assert!(w.row_is_zero(2) && w.row_is_zero(3));
        assert!(!u.determinant(&f).unwrap().is_zero());
        assert_eq!(u.determinant(&f).unwrap().len(), 1);
    }

    #[test]
    fn divrem_examples() {
        let f = Field::gf(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let b = random_matrix(&mut rng, 7, 3, 3, 2);
        let (q, r) = pm_divrem(&f, &b, &b).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, PolyMat::identity(3));
        let small = random_matrix(&mut rng, 7, 2, 3, 0);
        let big = PolyMat::identity(3).scale(&f, Fe(2));
        let diag = {
            let mut d = PolyMat::zeros(3, 3);
            for i in 0..3 {
                d.set(i, i, p(&f, &[1, 0, 1]));
            }
            d.add(&f, &big).unwrap()
        };
        let (q, r) = pm_divrem(&f, &small, &diag).unwrap();
        assert!(q.is_zero());
        assert_eq!(r, small);
        // scalar case agrees with polynomial division
        for _ in 0..20 {
            let a = random_poly(&mut rng, 7, 9);
            let d = random_poly(&mut rng, 7, 4);
            if d.is_zero() {
                continue;
            }
            let (qm, rm) = pm_divrem(
                &f,
                &PolyMat::from_rows(vec![vec![a.clone()]]).unwrap(),
                &PolyMat::from_rows(vec![vec![d.clone()]]).unwrap(),
            )
            .unwrap();
            let (qs, rs) = a.divrem(&f, &d).unwrap();
            assert_eq!(qm.get(0, 0), &qs);
            assert_eq!(rm.get(0, 0), &rs);
        }
        let sing = mat(&f, &[&[&[1], &[2]], &[&[2], &[4]]]);
        assert_eq!(pm_divrem(&f, &sing, &sing), Err(Error::SingularMatrix));
    }

    #[test]
    fn divrem_round_trip() {
        let f = Field::gf(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let b = random_matrix(&mut rng, 5, 3, 3, 3);
            if b.determinant(&f).unwrap().is_zero() {
                continue;
            }
            let a = random_matrix(&mut rng, 5, 3, 3, 7);
            let (q, r) = pm_divrem(&f, &a, &b).unwrap();
            assert_eq!(q.mul(&f, &b).unwrap().add(&f, &r).unwrap(), a);
            assert!(r.deg().map_or(true, |d| Some(d) < b.deg()));
            let (_, r2) = pm_divrem(&f, &r, &b).unwrap();
            assert_eq!(r2, r);
        }
    }

    #[test]
    fn koetter_examples() {
        let f = Field::gf(5).unwrap();
        let z = ShiftVec::zero(2);
        assert_eq!(koetter_basis(&f, 2, &[], &z).unwrap(), PolyMat::identity(2));
        let con = Constraint { point: Fe(3), values: vec![Fe(1), Fe(2)] };
        let basis = koetter_basis(&f, 2, &[con], &z).unwrap();
        assert_eq!(basis, mat(&f, &[&[&[2, 1], &[]], &[&[3], &[1]]]));
        assert_eq!(basis.determinant(&f).unwrap().deg(), Some(1));
    }

    #[test]
    fn koetter_rows_satisfy_constraints_and_count() {
        let f = Field::gf(16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let shift = ShiftVec::new(4, vec![0, 5, 10, 15, 3, 8, 13, 2]).unwrap();
        let mut cons = Vec::new();
        for k in 0..4u32 {
            for x in 0..5u32 {
                let mut values = vec![Fe::ZERO; 8];
                values[k as usize] = Fe(rng.gen_range(1..16));
                for v in values.iter_mut().skip(4) {
                    *v = Fe(rng.gen_range(0..16));
                }
                cons.push(Constraint { point: Fe(x + 3 * k), values });
            }
        }
        let b = koetter_basis(&f, 8, &cons, &shift).unwrap();
        assert!(is_popov(&b, &shift));
        for con in &cons {
            for row in b.rows_iter() {
                let mut acc = Fe::ZERO;
                for (p, &a) in row.iter().zip(&con.values) {
                    acc = f.add(acc, f.mul(p.eval(&f, con.point), a));
                }
                assert_eq!(acc, Fe::ZERO);
            }
        }
        assert_eq!(b.determinant(&f).unwrap().deg(), Some(cons.len()));
    }
}
