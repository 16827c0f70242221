//! Function-field backends: the rational function field (Reed–Solomon codes)
//! and the Hermitian function field `y^{q0} + y = x^{q0+1}` over GF(q0^2).
//!
//! Every divisor handled here has the form `alpha*D + beta*P_inf`, where `D`
//! is the sum of the code places and `h` is a polynomial in `x` with divisor
//! `D - n P_inf`. For such a divisor `A`, the ring of functions regular away
//! from `P_inf` and `supp D` satisfies
//! `Y(A) = h^{-alpha} * F_q[x, y]/(curve)`, which gives closed-form Apéry
//! systems made of `h^{-alpha} y^k`.

mod func;
mod partition;

pub use func::{FuncRep, RawFn};
pub use partition::x_partition;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Fe, Field};
use crate::upoly::{product_from_roots, Poly};

/// An affine rational place, given by its coordinates. The rational backend
/// uses `y = 0` throughout. The place at infinity is implicit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "(u32, u32)", into = "(u32, u32)")]
pub struct Place {
    pub x: Fe,
    pub y: Fe,
}

impl From<(u32, u32)> for Place {
    fn from((x, y): (u32, u32)) -> Place {
        Place { x: Fe(x), y: Fe(y) }
    }
}

impl From<Place> for (u32, u32) {
    fn from(p: Place) -> (u32, u32) {
        (p.x.0, p.y.0)
    }
}

/// The divisor `alpha*D + beta*P_inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DivisorSpec {
    pub alpha: i64,
    pub beta: i64,
}

impl DivisorSpec {
    pub const fn new(alpha: i64, beta: i64) -> DivisorSpec {
        DivisorSpec { alpha, beta }
    }

    pub fn add(self, o: DivisorSpec) -> DivisorSpec {
        DivisorSpec::new(self.alpha + o.alpha, self.beta + o.beta)
    }

    pub fn degree(self, n: usize) -> i64 {
        self.alpha * n as i64 + self.beta
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CurveKind {
    Rational,
    Hermitian { q0: u32 },
}

/// Apéry system of a divisor: `y_i = h^{-alpha} y^{ypow[i]}` with
/// `delta_A(y_i) = deltas[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AperyBasis {
    pub divisor: DivisorSpec,
    pub deltas: Vec<i64>,
    pub ypow: Vec<usize>,
}

/// A function field with a fixed code divisor `D` and the pool of remaining
/// affine rational places.
#[derive(Clone, Debug)]
pub struct Backend {
    field: Field,
    kind: CurveKind,
    mu: usize,
    rho: usize,
    genus: usize,
    selector: Vec<Fe>,
    h: Poly,
    d_places: Vec<Place>,
    pool: Vec<Place>,
}

impl Backend {
    /// Projective line with `D = P_1 + ... + P_n`, `P_j` the zero of `x - a_j`.
    pub fn rational(field: Field, points: &[Fe]) -> Result<Backend> {
        check_selector(&field, points)?;
        let d_places: Vec<Place> = points.iter().map(|&x| Place { x, y: Fe::ZERO }).collect();
        let pool = field
            .elements()
            .filter(|x| !points.contains(x))
            .map(|x| Place { x, y: Fe::ZERO })
            .collect();
        let h = product_from_roots(&field, points);
        Ok(Backend {
            field,
            kind: CurveKind::Rational,
            mu: 1,
            rho: 1,
            genus: 0,
            selector: points.to_vec(),
            h,
            d_places,
            pool,
        })
    }

    /// Hermitian curve over GF(q0^2) with `D` the full fibers above `fibers`.
    pub fn hermitian(field: Field, q0: u32, fibers: &[Fe]) -> Result<Backend> {
        if q0 < 2 || (q0 as u64) * (q0 as u64) != field.order() as u64 {
            return Err(Error::InvalidBackend(format!(
                "hermitian curve with q0 = {q0} needs a field of size q0^2, got {}",
                field.order()
            )));
        }
        if field.order() != field.characteristic().pow(field.degree())
            || !q0_is_power_of_characteristic(q0, field.characteristic())
        {
            return Err(Error::InvalidBackend("q0 must be a power of the characteristic".into()));
        }
        check_selector(&field, fibers)?;
        let fiber_of = hermitian_fibers(&field, q0);
        let mut d_places = Vec::new();
        for &x in fibers {
            d_places.extend(fiber_of[x.0 as usize].iter().map(|&y| Place { x, y }));
        }
        let pool = field
            .elements()
            .filter(|x| !fibers.contains(x))
            .flat_map(|x| fiber_of[x.0 as usize].iter().map(move |&y| Place { x, y }))
            .collect();
        let h = product_from_roots(&field, fibers);
        let q0u = q0 as usize;
        Ok(Backend {
            field,
            kind: CurveKind::Hermitian { q0 },
            mu: q0u,
            rho: q0u + 1,
            genus: q0u * (q0u - 1) / 2,
            selector: fibers.to_vec(),
            h,
            d_places,
            pool,
        })
    }

    pub fn build(kind: CurveKind, field: Field, selector: &[Fe]) -> Result<Backend> {
        match kind {
            CurveKind::Rational => Backend::rational(field, selector),
            CurveKind::Hermitian { q0 } => Backend::hermitian(field, q0, selector),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    /// Pole order of `x` at infinity.
    pub fn mu(&self) -> usize {
        self.mu
    }

    /// Pole order of `y` at infinity (1 for the rational backend, unused).
    pub fn rho(&self) -> usize {
        self.rho
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn n(&self) -> usize {
        self.d_places.len()
    }

    pub fn selector(&self) -> &[Fe] {
        &self.selector
    }

    /// Polynomial in `x` with divisor `D - n P_inf`.
    pub fn h(&self) -> &Poly {
        &self.h
    }

    pub fn d_places(&self) -> &[Place] {
        &self.d_places
    }

    /// Affine rational places outside `supp D`, in `(x, y)` order.
    pub fn pool(&self) -> &[Place] {
        &self.pool
    }

    /// Every affine rational place of the curve.
    pub fn affine_places(&self) -> Vec<Place> {
        let mut all: Vec<Place> = self.d_places.iter().chain(&self.pool).copied().collect();
        all.sort_unstable();
        all
    }

    /// Checks the curve equation at a point.
    pub fn on_curve(&self, p: Place) -> bool {
        let f = &self.field;
        match self.kind {
            CurveKind::Rational => p.y.is_zero(),
            CurveKind::Hermitian { q0 } => {
                f.add(f.pow_u64(p.y, q0 as u64), p.y) == f.pow_u64(p.x, q0 as u64 + 1)
            }
        }
    }

    /// Closed-form Apéry system of `A`.
    pub fn apery(&self, a: DivisorSpec) -> AperyBasis {
        let deg = a.degree(self.n());
        let mu = self.mu as i64;
        let ypow: Vec<usize> = (0..mu).map(|i| (i + deg).rem_euclid(mu) as usize).collect();
        let deltas = ypow.iter().map(|&k| (k * self.rho) as i64 - deg).collect();
        AperyBasis { divisor: a, deltas, ypow }
    }

    /// Index `i` of the Apéry basis element `h^{-alpha} y^k` of `A`.
    pub fn apery_index(&self, a: DivisorSpec, k: usize) -> usize {
        let mu = self.mu as i64;
        (k as i64 - a.degree(self.n())).rem_euclid(mu) as usize
    }

    /// `h(x)^{-alpha}` at a place, or `Pole` if undefined.
    pub(crate) fn h_power_at(&self, alpha: i64, x: Fe) -> Result<Fe> {
        let hv = self.h.eval(&self.field, x);
        self.field.pow(hv, -alpha).map_err(|_| Error::Pole)
    }

    /// Table `y_i^{(A)}(E_j)`, `mu` rows by `places.len()` columns.
    pub fn eval_table(&self, a: DivisorSpec, places: &[Place]) -> Result<Vec<Vec<Fe>>> {
        let basis = self.apery(a);
        let f = &self.field;
        let hp: Vec<Fe> = places
            .iter()
            .map(|p| self.h_power_at(a.alpha, p.x))
            .collect::<Result<_>>()?;
        Ok(basis
            .ypow
            .iter()
            .map(|&k| {
                places
                    .iter()
                    .zip(&hp)
                    .map(|(p, &hv)| f.mul(hv, f.pow_u64(p.y, k as u64)))
                    .collect()
            })
            .collect())
    }

    /// Basis `x^j y^k` of `L(m P_inf)`, sorted by pole order and represented
    /// over the divisor `(0, m)`.
    pub fn lg_basis(&self, m: i64) -> Vec<FuncRep> {
        let g_div = DivisorSpec::new(0, m);
        let mut terms: Vec<(i64, usize, usize)> = Vec::new();
        for k in 0..self.mu {
            let mut j = 0usize;
            loop {
                let pole = (self.mu * j + self.rho * k) as i64;
                if pole > m {
                    break;
                }
                terms.push((pole, j, k));
                j += 1;
            }
            if self.mu == 1 {
                break;
            }
        }
        terms.sort_unstable();
        terms
            .into_iter()
            .map(|(_, j, k)| {
                let mut coords = vec![Poly::zero(); self.mu];
                coords[self.apery_index(g_div, k)] = Poly::monomial(Fe::ONE, j);
                FuncRep { divisor: g_div, coords }
            })
            .collect()
    }
}

fn q0_is_power_of_characteristic(q0: u32, p: u32) -> bool {
    let mut v = q0;
    while v % p == 0 {
        v /= p;
    }
    v == 1
}

fn check_selector(field: &Field, xs: &[Fe]) -> Result<()> {
    if let Some(x) = xs.iter().find(|x| x.0 >= field.order()) {
        return Err(Error::InvalidEncoding { value: x.0 as u64, q: field.order() });
    }
    let mut sorted = xs.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidBackend("repeated evaluation point".into()));
    }
    if xs.is_empty() {
        return Err(Error::InvalidBackend("empty evaluation divisor".into()));
    }
    Ok(())
}

/// For each `x`, the sorted `y` with `y^{q0} + y = x^{q0+1}`.
fn hermitian_fibers(field: &Field, q0: u32) -> Vec<Vec<Fe>> {
    let q = field.order() as usize;
    let mut by_trace: Vec<Vec<Fe>> = vec![Vec::new(); q];
    for y in field.elements() {
        let t = field.add(field.pow_u64(y, q0 as u64), y);
        by_trace[t.0 as usize].push(y);
    }
    field
        .elements()
        .map(|x| by_trace[field.pow_u64(x, q0 as u64 + 1).0 as usize].clone())
        .collect()
}
