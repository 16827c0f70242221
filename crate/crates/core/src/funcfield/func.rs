use serde::{Deserialize, Serialize};

use super::{Backend, CurveKind, DivisorSpec, Place};
use crate::error::{Error, Result};
use crate::gf::Fe;
use crate::linalg;
use crate::polmat::PolyMat;
use crate::upoly::Poly;

/// A function `sum_i a_i(x) y_i^{(A)}` in Apéry coordinates of `divisor`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FuncRep {
    pub divisor: DivisorSpec,
    pub coords: Vec<Poly>,
}

impl FuncRep {
    pub fn zero(divisor: DivisorSpec, mu: usize) -> FuncRep {
        FuncRep { divisor, coords: vec![Poly::zero(); mu] }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Poly::is_zero)
    }
}

/// A function written as `h^{-alpha} * sum_k c_k(x) y^k` with `k < mu`.
///
/// This is the coordinate-free form used for exact products and sums of
/// functions living in different modules `Y(A)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RawFn {
    pub alpha: i64,
    pub c: Vec<Poly>,
}

impl RawFn {
    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Poly::is_zero)
    }
}

impl Backend {
    pub fn raw(&self, f: &FuncRep) -> RawFn {
        let basis = self.apery(f.divisor);
        let mut c = vec![Poly::zero(); self.mu];
        for (i, a) in f.coords.iter().enumerate() {
            c[basis.ypow[i]] = a.clone();
        }
        RawFn { alpha: f.divisor.alpha, c }
    }

    pub fn raw_constant(&self, a: Fe) -> RawFn {
        let mut c = vec![Poly::zero(); self.mu];
        c[0] = Poly::constant(a);
        RawFn { alpha: 0, c }
    }

    /// Re-expresses `r` in the Apéry basis of `a`. Fails if `r` does not lie
    /// in `Y(a)`.
    pub fn to_func(&self, r: &RawFn, a: DivisorSpec) -> Result<FuncRep> {
        let f = &self.field;
        let c: Vec<Poly> = if r.alpha <= a.alpha {
            let lift = self.h.pow(f, (a.alpha - r.alpha) as u64);
            r.c.iter().map(|p| p.mul(f, &lift)).collect()
        } else {
            let div = self.h.pow(f, (r.alpha - a.alpha) as u64);
            r.c.iter()
                .map(|p| {
                    let (q, rem) = p.divrem(f, &div)?;
                    if rem.is_zero() {
                        Ok(q)
                    } else {
                        Err(Error::Internal("function has a pole on supp D".into()))
                    }
                })
                .collect::<Result<_>>()?
        };
        let basis = self.apery(a);
        let coords = basis.ypow.iter().map(|&k| c[k].clone()).collect();
        Ok(FuncRep { divisor: a, coords })
    }

    fn lift(&self, r: &RawFn, alpha: i64) -> RawFn {
        debug_assert!(alpha >= r.alpha);
        let f = &self.field;
        let lift = self.h.pow(f, (alpha - r.alpha) as u64);
        RawFn { alpha, c: r.c.iter().map(|p| p.mul(f, &lift)).collect() }
    }

    pub fn raw_add(&self, a: &RawFn, b: &RawFn) -> RawFn {
        let alpha = a.alpha.max(b.alpha);
        let (a, b) = (self.lift(a, alpha), self.lift(b, alpha));
        let f = &self.field;
        RawFn { alpha, c: a.c.iter().zip(&b.c).map(|(x, y)| x.add(f, y)).collect() }
    }

    pub fn raw_scale(&self, a: &RawFn, s: Fe) -> RawFn {
        RawFn { alpha: a.alpha, c: a.c.iter().map(|p| p.scale(&self.field, s)).collect() }
    }

    /// Exact product, reducing `y^{q0} = x^{q0+1} - y`.
    pub fn raw_mul(&self, a: &RawFn, b: &RawFn) -> RawFn {
        let f = &self.field;
        let mu = self.mu;
        let mut c = vec![Poly::zero(); 2 * mu - 1];
        for (i, ai) in a.c.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.c.iter().enumerate() {
                if !bj.is_zero() {
                    let prod = ai.mul(f, bj);
                    c[i + j].add_assign(f, &prod);
                }
            }
        }
        if let CurveKind::Hermitian { q0 } = self.kind {
            let xq = Poly::monomial(Fe::ONE, q0 as usize + 1);
            for e in (mu..c.len()).rev() {
                let top = std::mem::take(&mut c[e]);
                if top.is_zero() {
                    continue;
                }
                let shifted = top.mul(f, &xq);
                c[e - mu].add_assign(f, &shifted);
                let neg = top.neg(f);
                c[e - mu + 1].add_assign(f, &neg);
            }
        }
        c.truncate(mu);
        RawFn { alpha: a.alpha + b.alpha, c }
    }

    /// Pole order at infinity of `h^{alpha} r`, i.e. of the polynomial part.
    fn raw_pole_order(&self, r: &RawFn) -> Option<i64> {
        r.c.iter()
            .enumerate()
            .filter_map(|(k, p)| p.deg().map(|d| (self.mu * d + self.rho * k) as i64))
            .max()
    }

    /// `delta_A(r)` for the divisor `a`, with `None` meaning minus infinity.
    /// Lifting by `h^{a.alpha - r.alpha}` adds `(a.alpha - r.alpha) n` to the
    /// pole order.
    pub fn raw_delta(&self, r: &RawFn, a: DivisorSpec) -> Option<i64> {
        self.raw_pole_order(r)
            .map(|p| p + (a.alpha - r.alpha) * self.n() as i64 - a.degree(self.n()))
    }

    /// `delta_A(f) = max_i (mu deg a_i + delta_i)`, `None` for `f = 0`.
    pub fn delta_of(&self, f: &FuncRep) -> Option<i64> {
        let basis = self.apery(f.divisor);
        f.coords
            .iter()
            .zip(&basis.deltas)
            .filter_map(|(a, &d)| a.deg().map(|e| self.mu as i64 * e as i64 + d))
            .max()
    }

    pub fn raw_eval(&self, r: &RawFn, p: Place) -> Result<Fe> {
        let f = &self.field;
        let mut acc = Fe::ZERO;
        let mut ypow = Fe::ONE;
        for c in &r.c {
            if !c.is_zero() {
                acc = f.add(acc, f.mul(c.eval(f, p.x), ypow));
            }
            ypow = f.mul(ypow, p.y);
        }
        if r.alpha == 0 {
            return Ok(acc);
        }
        if r.alpha > 0 && self.h.eval(f, p.x).is_zero() {
            // removable singularity on supp D
            return Ok(self.raw_expansion(r, p, 1)?[0]);
        }
        Ok(f.mul(acc, self.h_power_at(r.alpha, p.x)?))
    }

    /// Values of `f` at the given places.
    pub fn evaluate_function(&self, fun: &FuncRep, places: &[Place]) -> Result<Vec<Fe>> {
        let r = self.raw(fun);
        places.iter().map(|&p| self.raw_eval(&r, p)).collect()
    }

    /// The function `R` in `Y(m P_inf)` with `R(P_j) = values[j]` on the
    /// places of `D` and `delta_G(R) <= n + 2g - 1 - m`.
    pub fn interpolate_function(&self, values: &[Fe], m: i64) -> Result<FuncRep> {
        let n = self.n();
        if values.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} values for {} places",
                values.len(),
                n
            )));
        }
        let g_div = DivisorSpec::new(0, m);
        let basis = self.apery(g_div);
        let bound = (n + 2 * self.genus) as i64 - 1 - m;
        let mu = self.mu as i64;
        let mut unknowns: Vec<(i64, usize, usize)> = Vec::new();
        for (i, &d) in basis.deltas.iter().enumerate() {
            let mut j = 0i64;
            while mu * j + d <= bound {
                unknowns.push((mu * j + d, i, j as usize));
                j += 1;
            }
        }
        unknowns.sort_unstable();
        let f = &self.field;
        let rows: Vec<Vec<Fe>> = self
            .d_places
            .iter()
            .map(|p| {
                unknowns
                    .iter()
                    .map(|&(_, i, j)| {
                        f.mul(f.pow_u64(p.x, j as u64), f.pow_u64(p.y, basis.ypow[i] as u64))
                    })
                    .collect()
            })
            .collect();
        let sol = linalg::solve(f, &rows, values)
            .ok_or_else(|| Error::Internal("interpolation system is infeasible".into()))?;
        let mut coeffs: Vec<Vec<Fe>> = vec![Vec::new(); self.mu];
        for (&(_, i, j), &v) in unknowns.iter().zip(&sol) {
            if coeffs[i].len() <= j {
                coeffs[i].resize(j + 1, Fe::ZERO);
            }
            coeffs[i][j] = v;
        }
        Ok(FuncRep { divisor: g_div, coords: coeffs.into_iter().map(Poly::from_coeffs).collect() })
    }

    /// First `precision` coefficients of `r` in the local parameter
    /// `t = x - x(P)` at an affine place.
    pub fn raw_expansion(&self, r: &RawFn, p: Place, precision: usize) -> Result<Vec<Fe>> {
        if precision == 0 {
            return Err(Error::InvalidPrecision);
        }
        let f = &self.field;
        let lin = Poly::linear_root(f, p.x);
        let hs_full = taylor_shift(f, &self.h, p.x);
        // h = t^v h1(t) with h1(0) != 0; v is 0 or 1 since h is squarefree
        let v = usize::from(hs_full.coeff(0).is_zero());
        let h1 = if v == 1 { self.h.divrem(f, &lin)?.0 } else { self.h.clone() };
        let extra = if r.alpha > 0 { r.alpha as usize * v } else { 0 };
        let n = precision + extra;
        let mut acc = Poly::zero();
        let mut ypow = Poly::one();
        let yser = self.y_series(p, n);
        for (k, c) in r.c.iter().enumerate() {
            if k > 0 {
                ypow = ypow.mul(f, &yser).truncate(n);
            }
            if c.is_zero() {
                continue;
            }
            let term = taylor_shift(f, c, p.x).truncate(n).mul(f, &ypow).truncate(n);
            acc.add_assign(f, &term);
        }
        if r.alpha != 0 {
            let h1s = taylor_shift(f, &h1, p.x).truncate(n);
            let factor = if r.alpha > 0 {
                series_inverse(f, &h1s, n).ok_or(Error::Pole)?.pow(f, r.alpha as u64)
            } else {
                hs_full.truncate(n).pow(f, (-r.alpha) as u64)
            };
            acc = acc.mul(f, &factor.truncate(n)).truncate(n);
        }
        let mut out = acc.into_coeffs();
        out.resize(n, Fe::ZERO);
        if out[..extra].iter().any(|c| !c.is_zero()) {
            return Err(Error::Pole);
        }
        Ok(out.split_off(extra))
    }

    pub fn local_expansion(&self, fun: &FuncRep, p: Place, precision: usize) -> Result<Vec<Fe>> {
        self.raw_expansion(&self.raw(fun), p, precision)
    }

    /// Power series of `y` at `p` in `t = x - x(p)`.
    pub(crate) fn y_series(&self, p: Place, n: usize) -> Poly {
        let CurveKind::Hermitian { q0 } = self.kind else {
            return Poly::zero();
        };
        let f = &self.field;
        let q0 = q0 as usize;
        let xs = Poly::from_coeffs(vec![p.x, Fe::ONE]).pow(f, q0 as u64 + 1);
        let mut c = vec![Fe::ZERO; n];
        c[0] = p.y;
        for k in 1..n {
            let mut v = xs.coeff(k);
            if k % q0 == 0 {
                v = f.sub(v, f.pow_u64(c[k / q0], q0 as u64));
            }
            c[k] = v;
        }
        Poly::from_coeffs(c)
    }

    /// `1` as an element of `Y(a)`; requires `a.alpha >= 0`.
    pub fn one_in(&self, a: DivisorSpec) -> Result<FuncRep> {
        if a.alpha < 0 {
            return Err(Error::InvalidParams("1 is not in Y(A) when alpha < 0".into()));
        }
        self.to_func(&self.raw_constant(Fe::ONE), a)
    }

    /// Matrix of `f in Y(B) -> a f in Y(A+B)` in Apéry bases, computed by
    /// exact arithmetic in the coordinate ring.
    pub fn product_matrix(&self, a: &FuncRep, b: DivisorSpec) -> Result<PolyMat> {
        let ab = a.divisor.add(b);
        let ra = self.raw(a);
        let basis_b = self.apery(b);
        let mut m = PolyMat::zeros(self.mu, self.mu);
        for (k, &yk) in basis_b.ypow.iter().enumerate() {
            let mut c = vec![Poly::zero(); self.mu];
            c[yk] = Poly::one();
            let prod = self.raw_mul(&ra, &RawFn { alpha: b.alpha, c });
            let fr = self.to_func(&prod, ab)?;
            for (i, e) in fr.coords.into_iter().enumerate() {
                m.set(k, i, e);
            }
        }
        Ok(m)
    }
}

/// `a(t + c)` as a polynomial in `t`.
pub(crate) fn taylor_shift(f: &crate::gf::Field, a: &Poly, c: Fe) -> Poly {
    let lin = Poly::from_coeffs(vec![c, Fe::ONE]);
    let mut acc = Poly::zero();
    for &coef in a.coeffs().iter().rev() {
        acc = acc.mul(f, &lin);
        acc.add_assign(f, &Poly::constant(coef));
    }
    acc
}

fn series_inverse(f: &crate::gf::Field, a: &Poly, n: usize) -> Option<Poly> {
    let a0 = a.coeff(0);
    if a0.is_zero() {
        return None;
    }
    let inv0 = f.inv(a0).ok()?;
    let mut b = vec![Fe::ZERO; n];
    b[0] = inv0;
    for k in 1..n {
        let mut s = Fe::ZERO;
        for i in 1..=k {
            s = f.add(s, f.mul(a.coeff(i), b[k - i]));
        }
        b[k] = f.neg(f.mul(s, inv0));
    }
    Some(Poly::from_coeffs(b))
}
