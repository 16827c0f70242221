//! Exact arithmetic in finite fields GF(p^m).
//!
//! Elements are stored as their canonical integer encoding: the base-p digits
//! of the coordinate vector in the power basis of the field modulus. All
//! arithmetic goes through a [`Field`] context, which owns the (immutable)
//! modulus and, for fields with at most 2^12 elements, log/antilog tables.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u64 = 1 << 16;

/// Fields up to this size get log/antilog tables.
const TABLE_LIMIT: u32 = 1 << 12;

/// Canonical encoding of a field element.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Characteristic, extension degree and modulus of GF(p^m).
///
/// `modulus` holds the coefficients `c_0..c_m` of a monic polynomial over
/// GF(p), low degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub m: u32,
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    /// The pinned modulus for GF(p^m).
    pub fn pinned(p: u32, m: u32) -> Result<FieldSpec> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        checked_size(p, m)?;
        let modulus = match pinned_modulus(p, m) {
            Some(c) => c.to_vec(),
            None => smallest_primitive_modulus(p, m),
        };
        Ok(FieldSpec { p, m, modulus })
    }

    /// Pinned spec for a field of size `q`, which must be a prime power.
    pub fn for_order(q: u32) -> Result<FieldSpec> {
        let (p, m) = prime_power(q).ok_or_else(|| {
            Error::InvalidField(format!("{q} is not a prime power"))
        })?;
        FieldSpec::pinned(p, m)
    }

    pub fn order(&self) -> u32 {
        self.p.pow(self.m)
    }
}

/// Moduli shipped with the crate so that encodings are stable.
fn pinned_modulus(p: u32, m: u32) -> Option<&'static [u32]> {
    Some(match (p, m) {
        (2, 1) => &[1, 1],
        (2, 2) => &[1, 1, 1],
        (2, 3) => &[1, 1, 0, 1],
        (2, 4) => &[1, 1, 0, 0, 1],
        (2, 5) => &[1, 0, 1, 0, 0, 1],
        (2, 6) => &[1, 1, 0, 0, 0, 0, 1],
        (2, 7) => &[1, 1, 0, 0, 0, 0, 0, 1],
        (2, 8) => &[1, 0, 1, 1, 1, 0, 0, 0, 1],
        (2, 9) => &[1, 0, 0, 0, 1, 0, 0, 0, 0, 1],
        (2, 10) => &[1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1],
        (2, 11) => &[1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1],
        (2, 12) => &[1, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 1],
        (2, 13) => &[1, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1],
        (2, 14) => &[1, 1, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1],
        (2, 15) => &[1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
        (2, 16) => &[1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1],
        (3, 2) => &[2, 2, 1],
        (3, 3) => &[1, 2, 0, 1],
        (3, 4) => &[2, 0, 0, 2, 1],
        (5, 2) => &[2, 4, 1],
        (5, 3) => &[3, 3, 0, 1],
        (7, 2) => &[3, 6, 1],
        (_, 1) => &[0, 1],
        _ => return None,
    })
}

fn checked_size(p: u32, m: u32) -> Result<u32> {
    if m == 0 {
        return Err(Error::InvalidField("extension degree must be positive".into()));
    }
    let mut q: u64 = 1;
    for _ in 0..m {
        q *= p as u64;
        if q > MAX_FIELD_SIZE {
            return Err(Error::InvalidField(format!(
                "{p}^{m} exceeds the supported field size {MAX_FIELD_SIZE}"
            )));
        }
    }
    Ok(q as u32)
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut m = 0;
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Small dense polynomial helpers over the prime field GF(p), used only for
// modulus validation.

fn gfp_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn gfp_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    gfp_trim(&mut r);
    let db = b.len() - 1;
    let inv_lead = pow_mod(b[db], p - 2, p);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = (r[r.len() - 1] as u64 * inv_lead as u64 % p as u64) as u32;
        for (i, &bi) in b.iter().enumerate() {
            let sub = (c as u64 * bi as u64 % p as u64) as u32;
            let idx = shift + i;
            r[idx] = (r[idx] + p - sub) % p;
        }
        gfp_trim(&mut r);
    }
    r
}

fn pow_mod(mut b: u32, mut e: u32, p: u32) -> u32 {
    let mut acc: u64 = 1;
    let mut base = b as u64 % p as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    b = acc as u32;
    b
}

/// Trial division by every monic polynomial of degree at most `m / 2`.
fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let m = modulus.len() - 1;
    for d in 1..=m / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut v = low;
            for _ in 0..d {
                cand.push((v % p as u64) as u32);
                v /= p as u64;
            }
            cand.push(1);
            if gfp_rem(modulus, &cand, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn smallest_primitive_modulus(p: u32, m: u32) -> Vec<u32> {
    let count = (p as u64).pow(m);
    for low in 0..count {
        let mut cand = Vec::with_capacity(m as usize + 1);
        let mut v = low;
        for _ in 0..m {
            cand.push((v % p as u64) as u32);
            v /= p as u64;
        }
        cand.push(1);
        if cand[0] == 0 || !is_irreducible(&cand, p) {
            continue;
        }
        if m == 1 {
            return cand;
        }
        let field = Field::build(FieldSpec { p, m, modulus: cand.clone() }, false);
        // the class of t has encoding p
        if field.is_primitive(Fe(p)) {
            return cand;
        }
    }
    unreachable!("every finite field has a primitive modulus")
}

#[derive(Clone)]
struct Tables {
    /// exp[i] = g^i for i in 0..2(q-1)
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// A finite field GF(p^m) with a fixed modulus.
#[derive(Clone)]
pub struct Field {
    spec: FieldSpec,
    q: u32,
    tables: Option<Tables>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.spec.p)
            .field("m", &self.spec.m)
            .field("modulus", &self.spec.modulus)
            .finish()
    }
}

impl Field {
    /// Builds a field from an explicit spec, checking the modulus.
    pub fn new(spec: FieldSpec) -> Result<Field> {
        if !is_prime(spec.p) {
            return Err(Error::InvalidField(format!("{} is not prime", spec.p)));
        }
        checked_size(spec.p, spec.m)?;
        if spec.modulus.len() != spec.m as usize + 1 {
            return Err(Error::InvalidField(format!(
                "modulus must have {} coefficients",
                spec.m + 1
            )));
        }
        if spec.modulus.iter().any(|&c| c >= spec.p) || spec.modulus[spec.m as usize] != 1 {
            return Err(Error::InvalidField(
                "modulus must be monic with coefficients in [0, p)".into(),
            ));
        }
        if !is_irreducible(&spec.modulus, spec.p) {
            return Err(Error::InvalidField("modulus is reducible".into()));
        }
        Ok(Field::build(spec, true))
    }

    /// GF(q) with the pinned modulus.
    pub fn gf(q: u32) -> Result<Field> {
        Field::new(FieldSpec::for_order(q)?)
    }

    fn build(spec: FieldSpec, with_tables: bool) -> Field {
        let q = spec.order();
        let mut field = Field { spec, q, tables: None };
        if with_tables && field.spec.m > 1 && q <= TABLE_LIMIT {
            let g = (1..q)
                .map(Fe)
                .find(|&g| field.is_primitive(g))
                .expect("multiplicative group is cyclic");
            let n = (q - 1) as usize;
            let mut exp = vec![0u32; 2 * n];
            let mut log = vec![0u32; q as usize];
            let mut cur = Fe::ONE;
            for i in 0..n {
                exp[i] = cur.0;
                exp[i + n] = cur.0;
                log[cur.0 as usize] = i as u32;
                cur = field.mul_slow(cur, g);
            }
            field.tables = Some(Tables { exp, log });
        }
        field
    }

    fn is_primitive(&self, g: Fe) -> bool {
        if g.is_zero() {
            return false;
        }
        let n = self.q - 1;
        if n == 1 {
            return g == Fe::ONE;
        }
        prime_factors(n)
            .into_iter()
            .all(|r| self.pow_u64(g, (n / r) as u64) != Fe::ONE)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    /// Number of elements.
    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.spec.p
    }

    pub fn degree(&self) -> u32 {
        self.spec.m
    }

    /// Checked conversion from a canonical integer.
    pub fn elem(&self, value: u64) -> Result<Fe> {
        if value >= self.q as u64 {
            return Err(Error::InvalidEncoding { value, q: self.q });
        }
        Ok(Fe(value as u32))
    }

    /// Wraps an encoding into a [`FieldElement`] bound to this field.
    pub fn element(&self, value: u64) -> Result<FieldElement<'_>> {
        Ok(FieldElement { field: self, value: self.elem(value)? })
    }

    /// All elements in increasing canonical order: 0, 1, ...
    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        (0..self.q).map(Fe)
    }

    /// Coordinate vector of `a` in the power basis.
    pub fn coords(&self, a: Fe) -> Vec<u32> {
        let p = self.spec.p;
        let mut v = a.0;
        (0..self.spec.m)
            .map(|_| {
                let d = v % p;
                v /= p;
                d
            })
            .collect()
    }

    /// Inverse of [`Field::coords`]; digits must already be reduced mod p.
    pub fn from_coords(&self, digits: &[u32]) -> Fe {
        let p = self.spec.p;
        Fe(digits.iter().rev().fold(0u32, |acc, &d| acc * p + d))
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, k: i64) -> Fe {
        let p = self.spec.p as i64;
        Fe(k.rem_euclid(p) as u32)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.spec.p == 2 {
            return Fe(a.0 ^ b.0);
        }
        let p = self.spec.p;
        if self.spec.m == 1 {
            let s = a.0 + b.0;
            return Fe(if s >= p { s - p } else { s });
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut place = 1u32;
        while x > 0 || y > 0 {
            let d = (x % p + y % p) % p;
            out += d * place;
            place *= p;
            x /= p;
            y /= p;
        }
        Fe(out)
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if self.spec.p == 2 {
            return a;
        }
        let p = self.spec.p;
        if self.spec.m == 1 {
            return Fe(if a.0 == 0 { 0 } else { p - a.0 });
        }
        let mut x = a.0;
        let mut out = 0u32;
        let mut place = 1u32;
        while x > 0 {
            let d = x % p;
            out += ((p - d) % p) * place;
            place *= p;
            x /= p;
        }
        Fe(out)
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        if self.spec.m == 1 {
            return Fe((a.0 as u64 * b.0 as u64 % self.spec.p as u64) as u32);
        }
        if let Some(t) = &self.tables {
            let i = t.log[a.0 as usize] + t.log[b.0 as usize];
            return Fe(t.exp[i as usize]);
        }
        self.mul_slow(a, b)
    }

    fn mul_slow(&self, a: Fe, b: Fe) -> Fe {
        let p = self.spec.p as u64;
        let m = self.spec.m as usize;
        if m == 1 {
            return Fe((a.0 as u64 * b.0 as u64 % p) as u32);
        }
        let da = self.coords(a);
        let db = self.coords(b);
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for k in (m..2 * m - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            // t^m = -(c_0 + ... + c_{m-1} t^{m-1})
            for (i, &mi) in self.spec.modulus[..m].iter().enumerate() {
                let idx = k - m + i;
                prod[idx] = (prod[idx] + (p - c) * mi as u64) % p;
            }
        }
        let digits: Vec<u32> = prod[..m].iter().map(|&d| d as u32).collect();
        self.from_coords(&digits)
    }

    /// Multiplicative inverse; `a` must be nonzero.
    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(t) = &self.tables {
            let n = self.q - 1;
            let l = t.log[a.0 as usize];
            return Ok(Fe(t.exp[((n - l) % n) as usize]));
        }
        Ok(self.pow_u64(a, self.q as u64 - 2))
    }

    /// Inverse of a nonzero element; panics on zero. For internal use where
    /// nonzero-ness is an invariant.
    #[inline]
    pub(crate) fn inv_nz(&self, a: Fe) -> Fe {
        self.inv(a).expect("inverse of a nonzero element")
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow_u64(&self, a: Fe, mut e: u64) -> Fe {
        let mut acc = Fe::ONE;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_any(acc, base);
            }
            base = self.mul_any(base, base);
            e >>= 1;
        }
        acc
    }

    #[inline]
    fn mul_any(&self, a: Fe, b: Fe) -> Fe {
        if self.tables.is_some() {
            self.mul(a, b)
        } else {
            self.mul_slow(a, b)
        }
    }

    /// `a^k` for any integer `k`; negative exponents invert first.
    pub fn pow(&self, a: Fe, k: i64) -> Result<Fe> {
        if k >= 0 {
            Ok(self.pow_u64(a, k as u64))
        } else {
            Ok(self.pow_u64(self.inv(a)?, k.unsigned_abs()))
        }
    }

    /// Binomial coefficient C(a, b) reduced into the prime subfield, via
    /// Lucas' theorem.
    pub fn binom(&self, a: u64, b: u64) -> Fe {
        if b > a {
            return Fe::ZERO;
        }
        let p = self.spec.p as u64;
        let (mut a, mut b) = (a, b);
        let mut acc = 1u64;
        while b > 0 || a > 0 {
            let (ai, bi) = (a % p, b % p);
            if bi > ai {
                return Fe::ZERO;
            }
            acc = acc * small_binom_mod(ai, bi, p) % p;
            a /= p;
            b /= p;
        }
        Fe(acc as u32)
    }
}

/// C(a, b) mod p for a < p.
fn small_binom_mod(a: u64, b: u64, p: u64) -> u64 {
    let b = b.min(a - b);
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..b {
        num = num * ((a - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    num * pow_mod(den as u32, (p - 2) as u32, p as u32) as u64 % p
}

/// The binomial coefficient C(a, b) as an element of `field`.
pub fn binom_in_field(a: u64, b: u64, field: &Field) -> Fe {
    field.binom(a, b)
}

/// A field element bound to its field, with checked arithmetic.
#[derive(Clone, Copy)]
pub struct FieldElement<'a> {
    field: &'a Field,
    value: Fe,
}

impl fmt::Debug for FieldElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value.0)
    }
}

impl PartialEq for FieldElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && self.field.spec == other.field.spec
    }
}

impl Eq for FieldElement<'_> {}

impl<'a> FieldElement<'a> {
    pub fn value(self) -> Fe {
        self.value
    }

    pub fn field(self) -> &'a Field {
        self.field
    }

    fn same(self, other: FieldElement<'_>) -> Result<()> {
        if std::ptr::eq(self.field, other.field) || self.field.spec == other.field.spec {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn wrap(self, value: Fe) -> FieldElement<'a> {
        FieldElement { field: self.field, value }
    }

    pub fn add(self, other: FieldElement<'_>) -> Result<FieldElement<'a>> {
        self.same(other)?;
        Ok(self.wrap(self.field.add(self.value, other.value)))
    }

    pub fn sub(self, other: FieldElement<'_>) -> Result<FieldElement<'a>> {
        self.same(other)?;
        Ok(self.wrap(self.field.sub(self.value, other.value)))
    }

    pub fn mul(self, other: FieldElement<'_>) -> Result<FieldElement<'a>> {
        self.same(other)?;
        Ok(self.wrap(self.field.mul(self.value, other.value)))
    }

    pub fn div(self, other: FieldElement<'_>) -> Result<FieldElement<'a>> {
        self.same(other)?;
        Ok(self.wrap(self.field.div(self.value, other.value)?))
    }

    pub fn inv(self) -> Result<FieldElement<'a>> {
        Ok(self.wrap(self.field.inv(self.value)?))
    }

    pub fn pow(self, k: i64) -> Result<FieldElement<'a>> {
        Ok(self.wrap(self.field.pow(self.value, k)?))
    }
}
