use super::{Code, Interpolant, Precomp};
use crate::error::{Error, Result};
use crate::funcfield::{FuncRep, Place};
use crate::gf::{Fe, Field};
use crate::upoly::Poly;

/// Default bound on `q^{l(G)}` for enumeration.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1 << 20;

/// Root-finding strategy; `Auto` picks Roth–Ruckenstein when `mu = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RootFinding {
    #[default]
    Auto,
    RothRuckenstein,
    Enumerate,
}

/// Decides `Q(f) = 0` for `f in L(G)`. Since `Q(f) in L(delta_G(Q) P_inf)`,
/// vanishing at more than `delta_G(Q)` affine places forces `Q(f) = 0`; if
/// the curve lacks that many places the check falls back to exact products.
struct RootCheck<'a> {
    code: &'a Code,
    q: &'a [FuncRep],
    places: Vec<Place>,
    q_vals: Vec<Vec<Fe>>,
    basis_vals: Vec<Vec<Fe>>,
    by_values: bool,
}

impl<'a> RootCheck<'a> {
    fn new(code: &'a Code, it: &'a Interpolant, precomp: Option<&Precomp>) -> Result<RootCheck<'a>> {
        let b = code.backend();
        let mut places: Vec<Place> = precomp.map(|p| p.e.clone()).unwrap_or_default();
        for p in b.affine_places() {
            if !places.contains(&p) {
                places.push(p);
            }
        }
        let needed = (it.delta.max(0) + 1) as usize;
        let by_values = places.len() >= needed;
        places.truncate(needed);
        let q_vals = it.q.iter().map(|qt| b.evaluate_function(qt, &places)).collect::<Result<_>>()?;
        let basis_vals = code.basis().iter().map(|f| b.evaluate_function(f, &places)).collect::<Result<_>>()?;
        Ok(RootCheck { code, q: &it.q, places, q_vals, basis_vals, by_values })
    }

    fn is_root(&self, msg: &[Fe]) -> Result<bool> {
        let f = self.code.field();
        if self.by_values {
            for j in 0..self.places.len() {
                let mut fv = Fe::ZERO;
                for (c, bv) in msg.iter().zip(&self.basis_vals) {
                    if !c.is_zero() {
                        fv = f.add(fv, f.mul(*c, bv[j]));
                    }
                }
                let mut acc = Fe::ZERO;
                for qv in self.q_vals.iter().rev() {
                    acc = f.add(f.mul(acc, fv), qv[j]);
                }
                if !acc.is_zero() {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
        let b = self.code.backend();
        let fr = b.raw(&self.code.message_function(msg)?);
        let mut acc = b.raw_constant(Fe::ZERO);
        for qt in self.q.iter().rev() {
            acc = b.raw_add(&b.raw_mul(&acc, &fr), &b.raw(qt));
        }
        Ok(acc.is_zero())
    }
}

/// All `f in L(G)` with `Q(f) = 0`, sorted by message coordinates.
pub fn root_find(
    it: &Interpolant,
    code: &Code,
    precomp: Option<&Precomp>,
    strategy: RootFinding,
    cap: u128,
) -> Result<Vec<FuncRep>> {
    if it.q.iter().all(FuncRep::is_zero) {
        return Err(Error::ZeroPolynomial);
    }
    let check = RootCheck::new(code, it, precomp)?;
    let rr = match strategy {
        RootFinding::Auto => code.mu() == 1,
        RootFinding::RothRuckenstein => {
            if code.mu() != 1 {
                return Err(Error::InvalidParams("Roth-Ruckenstein needs a rational backend".into()));
            }
            true
        }
        RootFinding::Enumerate => false,
    };
    let mut msgs = Vec::new();
    if rr {
        let bivar: Vec<Poly> = it.q.iter().map(|qt| qt.coords[0].clone()).collect();
        let mut cands = Vec::new();
        roth_ruckenstein(code.field(), bivar, code.k(), &mut Vec::new(), &mut cands)?;
        for c in cands {
            if check.is_root(&c)? {
                msgs.push(c);
            }
        }
    } else {
        let q = code.field().order() as u128;
        let total = (0..code.k()).try_fold(1u128, |acc, _| acc.checked_mul(q)).unwrap_or(u128::MAX);
        if total > cap {
            return Err(Error::EnumerationCap { candidates: total, cap });
        }
        let k = code.k();
        let mut msg = vec![Fe::ZERO; k];
        let q = code.field().order();
        'outer: loop {
            if check.is_root(&msg)? {
                msgs.push(msg.clone());
            }
            // odometer, least significant coordinate last
            let mut i = k;
            loop {
                if i == 0 {
                    break 'outer;
                }
                i -= 1;
                msg[i] = Fe(msg[i].0 + 1);
                if msg[i].0 < q {
                    continue 'outer;
                }
                msg[i] = Fe::ZERO;
            }
        }
    }
    msgs.sort_unstable();
    msgs.dedup();
    msgs.iter().map(|m| code.message_function(m)).collect()
}

/// Candidates `f_0 + f_1 x + ... + f_{k-1} x^{k-1}` for roots of `Q(x, z)`,
/// coefficient by coefficient: strip the largest power of `x`, take roots
/// `g` of `Q(0, z)`, recurse on `Q(x, x z + g)`.
fn roth_ruckenstein(
    f: &Field,
    mut q: Vec<Poly>,
    left: usize,
    prefix: &mut Vec<Fe>,
    out: &mut Vec<Vec<Fe>>,
) -> Result<()> {
    let v = q
        .iter()
        .filter_map(|p| p.coeffs().iter().position(|c| !c.is_zero()))
        .min()
        .ok_or(Error::ZeroPolynomial)?;
    if v > 0 {
        for p in q.iter_mut() {
            if !p.is_zero() {
                *p = Poly::from_coeffs(p.coeffs()[v..].to_vec());
            }
        }
    }
    if left == 0 {
        out.push(prefix.clone());
        return Ok(());
    }
    let q0 = Poly::from_coeffs(q.iter().map(|p| p.coeff(0)).collect());
    for g in q0.roots(f)? {
        // Horner in z with (x z + g)
        let mut acc: Vec<Poly> = Vec::new();
        for qt in q.iter().rev() {
            let mut next = vec![Poly::zero(); acc.len() + 1];
            for (i, a) in acc.iter().enumerate() {
                next[i].add_assign(f, &a.scale(f, g));
                next[i + 1].add_assign(f, &a.shift(1));
            }
            next[0].add_assign(f, qt);
            acc = next;
        }
        prefix.push(g);
        roth_ruckenstein(f, acc, left - 1, prefix, out)?;
        prefix.pop();
    }
    Ok(())
}
