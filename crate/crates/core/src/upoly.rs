//! Dense univariate polynomials over GF(q).
//!
//! Coefficients are stored low degree first with no trailing zeros, so the
//! zero polynomial is the empty vector and its degree is `None`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Fe, Field};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly {
    c: Vec<Fe>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly { c: vec![Fe::ONE] }
    }

    pub fn x() -> Poly {
        Poly { c: vec![Fe::ZERO, Fe::ONE] }
    }

    pub fn constant(a: Fe) -> Poly {
        Poly::from_coeffs(vec![a])
    }

    /// `a * x^k`
    pub fn monomial(a: Fe, k: usize) -> Poly {
        if a.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Fe::ZERO; k + 1];
        c[k] = a;
        Poly { c }
    }

    /// `x - a`
    pub fn linear_root(f: &Field, a: Fe) -> Poly {
        Poly { c: vec![f.neg(a), Fe::ONE] }
    }

    pub fn from_coeffs(mut c: Vec<Fe>) -> Poly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    /// Builds from canonical integers, checking each against the field.
    pub fn from_ints(f: &Field, values: &[u64]) -> Result<Poly> {
        let c = values.iter().map(|&v| f.elem(v)).collect::<Result<Vec<_>>>()?;
        Ok(Poly::from_coeffs(c))
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<Fe> {
        self.c
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    #[inline]
    pub fn deg(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Number of stored coefficients (degree + 1, or 0).
    #[inline]
    pub fn len(&self) -> usize {
        self.c.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    #[inline]
    pub fn coeff(&self, i: usize) -> Fe {
        self.c.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn lead(&self) -> Option<Fe> {
        self.c.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == Some(Fe::ONE)
    }

    pub fn add(&self, f: &Field, b: &Poly) -> Poly {
        let (long, short) = if self.c.len() >= b.c.len() { (self, b) } else { (b, self) };
        let mut c = long.c.clone();
        for (i, &v) in short.c.iter().enumerate() {
            c[i] = f.add(c[i], v);
        }
        Poly::from_coeffs(c)
    }

    pub fn add_assign(&mut self, f: &Field, b: &Poly) {
        if b.c.len() > self.c.len() {
            self.c.resize(b.c.len(), Fe::ZERO);
        }
        for (i, &v) in b.c.iter().enumerate() {
            self.c[i] = f.add(self.c[i], v);
        }
        self.normalize();
    }

    pub fn neg(&self, f: &Field) -> Poly {
        Poly { c: self.c.iter().map(|&v| f.neg(v)).collect() }
    }

    pub fn sub(&self, f: &Field, b: &Poly) -> Poly {
        self.add(f, &b.neg(f))
    }

    pub fn scale(&self, f: &Field, a: Fe) -> Poly {
        if a.is_zero() {
            return Poly::zero();
        }
        Poly { c: self.c.iter().map(|&v| f.mul(v, a)).collect() }
    }

    /// `self * x^k`
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Fe::ZERO; k];
        c.extend_from_slice(&self.c);
        Poly { c }
    }

    /// `self + a * x^k * b`, in place.
    pub fn axpy_shifted(&mut self, f: &Field, a: Fe, k: usize, b: &Poly) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let need = b.c.len() + k;
        if need > self.c.len() {
            self.c.resize(need, Fe::ZERO);
        }
        for (i, &v) in b.c.iter().enumerate() {
            if !v.is_zero() {
                self.c[i + k] = f.add(self.c[i + k], f.mul(a, v));
            }
        }
        self.normalize();
    }

    pub fn mul(&self, f: &Field, b: &Poly) -> Poly {
        if self.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Fe::ZERO; self.c.len() + b.c.len() - 1];
        for (i, &x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.c.iter().enumerate() {
                if !y.is_zero() {
                    c[i + j] = f.add(c[i + j], f.mul(x, y));
                }
            }
        }
        Poly::from_coeffs(c)
    }

    pub fn pow(&self, f: &Field, mut e: u64) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base);
            }
            base = base.mul(f, &base);
            e >>= 1;
        }
        acc
    }

    /// Quotient and remainder with `deg r < deg b`.
    pub fn divrem(&self, f: &Field, b: &Poly) -> Result<(Poly, Poly)> {
        let db = b.deg().ok_or(Error::ZeroPolynomial)?;
        if self.c.len() <= db {
            return Ok((Poly::zero(), self.clone()));
        }
        let inv_lead = f.inv(b.c[db])?;
        let mut r = self.c.clone();
        let mut q = vec![Fe::ZERO; self.c.len() - db];
        for k in (0..q.len()).rev() {
            let coef = f.mul(r[k + db], inv_lead);
            if coef.is_zero() {
                continue;
            }
            q[k] = coef;
            for (i, &bi) in b.c.iter().enumerate() {
                if !bi.is_zero() {
                    r[k + i] = f.sub(r[k + i], f.mul(coef, bi));
                }
            }
        }
        r.truncate(db);
        Ok((Poly::from_coeffs(q), Poly::from_coeffs(r)))
    }

    pub fn rem(&self, f: &Field, b: &Poly) -> Result<Poly> {
        Ok(self.divrem(f, b)?.1)
    }

    /// Keeps only the terms of degree below `n`.
    pub fn truncate(&self, n: usize) -> Poly {
        Poly::from_coeffs(self.c.iter().take(n).copied().collect())
    }

    pub fn make_monic(&self, f: &Field) -> Result<Poly> {
        let l = self.lead().ok_or(Error::ZeroPolynomial)?;
        Ok(self.scale(f, f.inv(l)?))
    }

    /// Horner evaluation.
    pub fn eval(&self, f: &Field, x: Fe) -> Fe {
        self.c.iter().rev().fold(Fe::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn eval_many(&self, f: &Field, pts: &[Fe]) -> Vec<Fe> {
        pts.iter().map(|&x| self.eval(f, x)).collect()
    }

    /// Formal derivative.
    pub fn derivative(&self, f: &Field) -> Poly {
        Poly::from_coeffs(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(c, f.from_int(i as i64)))
                .collect(),
        )
    }

    /// Every root in the field, found by scanning all elements.
    pub fn roots(&self, f: &Field) -> Result<Vec<Fe>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.c.len() == 1 {
            return Ok(Vec::new());
        }
        Ok(f.elements().filter(|&x| self.eval(f, x).is_zero()).collect())
    }

    fn normalize(&mut self) {
        while self.c.last().is_some_and(|x| x.is_zero()) {
            self.c.pop();
        }
    }
}

pub fn poly_eval(f: &Field, a: &Poly, pts: &[Fe]) -> Vec<Fe> {
    a.eval_many(f, pts)
}

pub fn poly_roots(f: &Field, a: &Poly) -> Result<Vec<Fe>> {
    a.roots(f)
}

/// Monic polynomial with the given roots (with multiplicity).
pub fn product_from_roots(f: &Field, roots: &[Fe]) -> Poly {
    let mut c = vec![Fe::ONE];
    for &r in roots {
        let nr = f.neg(r);
        c.push(Fe::ZERO);
        for i in (0..c.len()).rev() {
            let lower = if i > 0 { c[i - 1] } else { Fe::ZERO };
            c[i] = f.add(lower, f.mul(nr, c[i]));
        }
    }
    Poly::from_coeffs(c)
}

/// The unique polynomial of degree below `pts.len()` through every point.
pub fn lagrange_interpolate(f: &Field, pts: &[(Fe, Fe)]) -> Result<Poly> {
    let xs: Vec<Fe> = pts.iter().map(|p| p.0).collect();
    let mut sorted = xs.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::RepeatedAbscissa);
    }
    let full = product_from_roots(f, &xs);
    let mut out = Poly::zero();
    for &(xi, yi) in pts {
        if yi.is_zero() {
            continue;
        }
        let (basis, _) = full.divrem(f, &Poly::linear_root(f, xi))?;
        let denom = basis.eval(f, xi);
        out.add_assign(f, &basis.scale(f, f.div(yi, denom)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(f: &Field, v: &[u64]) -> Poly {
        Poly::from_ints(f, v).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let f2 = Field::gf(2).unwrap();
        let xp1 = p(&f2, &[1, 1]);
        assert_eq!(xp1.mul(&f2, &xp1), p(&f2, &[1, 0, 1]));
        assert_eq!(xp1.add(&f2, &Poly::zero()), xp1);
        let f5 = Field::gf(5).unwrap();
        let a = p(&f5, &[2, 0, 1]);
        let b = p(&f5, &[3, 1]);
        // (x^2+2)(x+3) = x^3 + 3x^2 + 2x + 6
        assert_eq!(a.mul(&f5, &b), p(&f5, &[1, 2, 3, 1]));
    }

    #[test]
    fn divrem_examples() {
        let f2 = Field::gf(2).unwrap();
        let a = p(&f2, &[1, 0, 0, 1]);
        let b = p(&f2, &[0, 1, 1]);
        let (q, r) = a.divrem(&f2, &b).unwrap();
        assert_eq!(q, p(&f2, &[1, 1]));
        assert_eq!(r, p(&f2, &[1, 1]));
        assert_eq!(a.divrem(&f2, &a).unwrap(), (Poly::one(), Poly::zero()));
        assert_eq!(b.divrem(&f2, &a).unwrap(), (Poly::zero(), b.clone()));
        assert_eq!(a.divrem(&f2, &Poly::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn eval_examples() {
        let f5 = Field::gf(5).unwrap();
        assert_eq!(Poly::constant(Fe(3)).eval(&f5, Fe(4)), Fe(3));
        assert_eq!(p(&f5, &[1, 0, 1]).eval(&f5, Fe(2)), Fe(0));
    }

    #[test]
    fn eval_matches_monomial_sum() {
        let f = Field::gf(64).unwrap();
        let a = p(&f, &[5, 17, 0, 63, 2, 40, 9, 33]);
        for x in [0u32, 1, 2, 3, 10, 20, 30, 40, 50, 63] {
            let x = Fe(x);
            let mut sum = Fe::ZERO;
            for (i, &c) in a.coeffs().iter().enumerate() {
                sum = f.add(sum, f.mul(c, f.pow_u64(x, i as u64)));
            }
            assert_eq!(a.eval(&f, x), sum);
        }
    }

    #[test]
    fn interpolation_examples() {
        let f7 = Field::gf(7).unwrap();
        assert_eq!(lagrange_interpolate(&f7, &[(Fe(3), Fe(5))]).unwrap(), Poly::constant(Fe(5)));
        let zeros = [(Fe(1), Fe(0)), (Fe(2), Fe(0))];
        assert_eq!(lagrange_interpolate(&f7, &zeros).unwrap(), Poly::zero());
        let pts = [(Fe(0), Fe(4)), (Fe(1), Fe(6)), (Fe(5), Fe(2))];
        let r = lagrange_interpolate(&f7, &pts).unwrap();
        assert!(r.len() <= 3);
        for (x, y) in pts {
            assert_eq!(r.eval(&f7, x), y);
        }
        let dup = [(Fe(1), Fe(0)), (Fe(1), Fe(3))];
        assert_eq!(lagrange_interpolate(&f7, &dup), Err(Error::RepeatedAbscissa));
    }

    #[test]
    fn root_examples() {
        let f2 = Field::gf(2).unwrap();
        assert_eq!(p(&f2, &[1, 0, 1]).roots(&f2).unwrap(), vec![Fe(1)]);
        let f16 = Field::gf(16).unwrap();
        let xq_minus_x = Poly::monomial(Fe::ONE, 16).sub(&f16, &Poly::x());
        assert_eq!(xq_minus_x.roots(&f16).unwrap().len(), 16);
        let f7 = Field::gf(7).unwrap();
        let a = Poly::linear_root(&f7, Fe(2)).mul(&f7, &Poly::linear_root(&f7, Fe(3)));
        assert_eq!(a.roots(&f7).unwrap(), vec![Fe(2), Fe(3)]);
        assert_eq!(Poly::zero().roots(&f7), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn product_from_roots_examples() {
        let f5 = Field::gf(5).unwrap();
        assert_eq!(product_from_roots(&f5, &[]), Poly::one());
        assert_eq!(product_from_roots(&f5, &[Fe(2)]), p(&f5, &[3, 1]));
        // (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6
        assert_eq!(product_from_roots(&f5, &[Fe(1), Fe(2), Fe(3)]), p(&f5, &[4, 1, 4, 1]));
    }

    fn arb_poly(q: u32, max_len: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec(0..q, 0..max_len)
            .prop_map(|v| Poly::from_coeffs(v.into_iter().map(Fe).collect()))
    }

    proptest! {
        #[test]
        fn divrem_round_trip(a in arb_poly(49, 20), b in arb_poly(49, 8)) {
            let f = Field::gf(49).unwrap();
            prop_assume!(!b.is_zero());
            let (q, r) = a.divrem(&f, &b).unwrap();
            prop_assert_eq!(q.mul(&f, &b).add(&f, &r), a);
            prop_assert!(r.len() < b.len());
        }

        #[test]
        fn roots_of_product(set in prop::collection::btree_set(0u32..32, 0..10)) {
            let f = Field::gf(32).unwrap();
            let roots: Vec<Fe> = set.iter().copied().map(Fe).collect();
            let prod = product_from_roots(&f, &roots);
            prop_assert!(prod.is_monic());
            prop_assert_eq!(prod.roots(&f).unwrap(), roots);
        }

        #[test]
        fn interpolation_reproduces_values(
            xs in prop::collection::btree_set(0u32..27, 1..15),
            seed in prop::collection::vec(0u32..27, 15),
        ) {
            let f = Field::gf(27).unwrap();
            let pts: Vec<(Fe, Fe)> = xs.iter().zip(&seed).map(|(&x, &y)| (Fe(x), Fe(y))).collect();
            let r = lagrange_interpolate(&f, &pts).unwrap();
            prop_assert!(r.len() <= pts.len());
            for (x, y) in pts {
                prop_assert_eq!(r.eval(&f, x), y);
            }
        }
    }
}
