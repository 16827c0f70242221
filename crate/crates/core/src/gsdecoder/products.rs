use std::sync::atomic::{AtomicU64, Ordering};

use super::fmt_row;
use crate::error::{Error, Result};
use crate::funcfield::{Backend, DivisorSpec, FuncRep, Place};
use crate::gf::Fe;
use crate::polmat::{koetter_basis, row_shifted_degree, Constraint, PolyMat, ShiftVec};

/// The multiplier `a` of a product call.
#[derive(Clone, Copy, Debug)]
pub enum Multiplier<'a> {
    One,
    Func(&'a FuncRep),
}

/// Inputs of one pointwise product computation: the matrix of
/// `f in Y(B) -> a f in Y(A+B)` from values on `E`.
#[derive(Clone, Copy, Debug)]
pub struct ProductCall<'a> {
    pub a_div: DivisorSpec,
    pub b_div: DivisorSpec,
    pub e: &'a [Place],
    pub partition: &'a [Vec<usize>],
    pub a_evals: &'a [Fe],
    /// `delta_A(a)`, `None` for `a = 0`.
    pub a_delta: Option<i64>,
    /// `y_i^{(A+B)}(E_j)`.
    pub tab_ab: &'a [Vec<Fe>],
    /// `y_i^{(B)}(E_j)`.
    pub tab_b: &'a [Vec<Fe>],
}

/// Matrix `[p_{k,i}]` with `a y_k^{(B)} = sum_i p_{k,i} y_i^{(A+B)}`, found as
/// the relation rows of a shifted Popov basis of the vanishing module on `E`.
pub fn basis_products(backend: &Backend, call: &ProductCall<'_>) -> Result<PolyMat> {
    let f = backend.field();
    let mu = backend.mu();
    let n_e = call.e.len();
    if call.a_evals.len() != n_e || call.tab_ab.len() != mu || call.tab_b.len() != mu {
        return Err(Error::DimensionMismatch("product call tables".into()));
    }
    let Some(a_delta) = call.a_delta.filter(|_| call.a_evals.iter().any(|v| !v.is_zero())) else {
        return Ok(PolyMat::zeros(mu, mu));
    };
    let n = backend.n();
    let deg_a = call.a_div.degree(n);
    let deg_b = call.b_div.degree(n);
    let need = deg_a + a_delta + 2 * backend.genus() as i64 + mu as i64;
    if (n_e as i64) < need {
        return Err(Error::InvalidParams(format!(
            "product needs deg E >= {need}, have {n_e}"
        )));
    }
    let ab = backend.apery(call.a_div.add(call.b_div));
    let bb = backend.apery(call.b_div);
    let mut offsets: Vec<i64> = ab.deltas.iter().map(|d| d + deg_b).collect();
    offsets.extend(bb.deltas.iter().map(|d| d + a_delta + deg_b));
    let shift = ShiftVec::new(mu as i64, offsets)?;

    let mut constraints = Vec::with_capacity(n_e);
    for part in call.partition {
        for &j in part {
            let mut values: Vec<Fe> = (0..mu).map(|i| call.tab_ab[i][j]).collect();
            values.extend((0..mu).map(|i| f.mul(call.a_evals[j], call.tab_b[i][j])));
            constraints.push(Constraint { point: call.e[j].x, values });
        }
    }
    if constraints.len() != n_e {
        return Err(Error::Internal("x-partition does not cover E".into()));
    }
    let p = koetter_basis(f, 2 * mu, &constraints, &shift)?;

    let bound = n_e as i64 - deg_a;
    let mut selected: Vec<(usize, usize)> = Vec::new();
    for r in 0..p.nrows() {
        if let Some((d, piv)) = row_shifted_degree(p.row(r), &shift) {
            if d < bound {
                selected.push((piv, r));
            }
        }
    }
    selected.sort_unstable();
    let pivots_ok = selected.len() == mu
        && selected.iter().enumerate().all(|(k, &(piv, r))| {
            piv == mu + k
                && (0..mu).all(|c| {
                    let e = p.get(r, mu + c);
                    if c == k {
                        *e == crate::upoly::Poly::one()
                    } else {
                        e.is_zero()
                    }
                })
        });
    if !pivots_ok {
        let rows: Vec<String> = (0..p.nrows())
            .map(|r| format!("{:?} {}", row_shifted_degree(p.row(r), &shift), fmt_row(p.row(r))))
            .collect();
        return Err(Error::Internal(format!(
            "product basis selection found {} rows below {bound}, expected {mu} relation rows: {}",
            selected.len(),
            rows.join("; ")
        )));
    }
    let mut out = PolyMat::zeros(mu, mu);
    for (k, &(_, r)) in selected.iter().enumerate() {
        for i in 0..mu {
            out.set(k, i, p.get(r, i).neg(f));
        }
    }
    check_pointwise(backend, &out, call.e, call.a_evals, call.tab_ab, call.tab_b)?;
    Ok(out)
}

/// The same matrix by exact arithmetic in the coordinate ring. The result is
/// still checked pointwise on `check_places`.
pub fn basis_products_exact(
    backend: &Backend,
    a_div: DivisorSpec,
    a: Multiplier<'_>,
    b_div: DivisorSpec,
    check_places: &[Place],
) -> Result<PolyMat> {
    let one;
    let a = match a {
        Multiplier::One => {
            one = backend.one_in(a_div)?;
            &one
        }
        Multiplier::Func(fun) => fun,
    };
    if a.divisor != a_div {
        return Err(Error::InvalidParams("multiplier is not expressed over A".into()));
    }
    let out = backend.product_matrix(a, b_div)?;
    let a_evals = backend.evaluate_function(a, check_places)?;
    let tab_ab = backend.eval_table(a_div.add(b_div), check_places)?;
    let tab_b = backend.eval_table(b_div, check_places)?;
    check_pointwise(backend, &out, check_places, &a_evals, &tab_ab, &tab_b)?;
    Ok(out)
}

static IDENTITY_CHECKS: AtomicU64 = AtomicU64::new(0);
static IDENTITY_PLACES: AtomicU64 = AtomicU64::new(0);

/// Number of product matrices verified pointwise so far in this process, and
/// the total number of places those checks used.
pub fn identity_checks() -> (u64, u64) {
    (IDENTITY_CHECKS.load(Ordering::Relaxed), IDENTITY_PLACES.load(Ordering::Relaxed))
}

/// `sum_i p_{k,i}(x_j) y_i^{(A+B)}(E_j) = a(E_j) y_k^{(B)}(E_j)` for all `j, k`.
fn check_pointwise(
    backend: &Backend,
    p: &PolyMat,
    e: &[Place],
    a_evals: &[Fe],
    tab_ab: &[Vec<Fe>],
    tab_b: &[Vec<Fe>],
) -> Result<()> {
    let f = backend.field();
    let mu = backend.mu();
    for (j, place) in e.iter().enumerate() {
        for k in 0..mu {
            let mut lhs = Fe::ZERO;
            for i in 0..mu {
                lhs = f.add(lhs, f.mul(p.get(k, i).eval(f, place.x), tab_ab[i][j]));
            }
            if lhs != f.mul(a_evals[j], tab_b[k][j]) {
                return Err(Error::Internal(format!(
                    "product matrix fails the pointwise identity at E_{j}, row {k}"
                )));
            }
        }
    }
    IDENTITY_CHECKS.fetch_add(1, Ordering::Relaxed);
    IDENTITY_PLACES.fetch_add(e.len() as u64, Ordering::Relaxed);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::super::Precomp;
    use super::*;
    use crate::polmat::random_poly;
    use crate::upoly::{lagrange_interpolate, Poly};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn call_for<'a>(
        p: &'a Precomp,
        a_div: DivisorSpec,
        b_div: DivisorSpec,
        a_evals: &'a [Fe],
        a_delta: Option<i64>,
    ) -> ProductCall<'a> {
        ProductCall {
            a_div,
            b_div,
            e: &p.e,
            partition: &p.partition,
            a_evals,
            a_delta,
            tab_ab: &p.table(a_div.add(b_div)).unwrap().values,
            tab_b: &p.table(b_div).unwrap().values,
        }
    }

    #[test]
    fn zero_and_identity() {
        let c = herm(4, 3, 7);
        let p = Precomp::new(&c, 2, 2).unwrap();
        let b = c.backend();
        let zeros = vec![Fe::ZERO; p.n_places()];
        let g0 = DivisorSpec::new(0, 0);
        let b_div = DivisorSpec::new(0, -7);
        let call = call_for(&p, g0, b_div, &zeros, Some(0));
        assert!(basis_products(b, &call).unwrap().is_zero());
        let ones = vec![Fe::ONE; p.n_places()];
        let call = call_for(&p, g0, b_div, &ones, Some(0));
        assert_eq!(basis_products(b, &call).unwrap(), PolyMat::identity(4));
    }

    #[test]
    fn rational_recovers_the_multiplier() {
        let c = rs(64, 12, 2);
        let p = Precomp::new(&c, 2, 3).unwrap();
        let b = c.backend();
        let f = b.field();
        let a = Poly::from_ints(f, &[1, 0, 1]).unwrap();
        let evals = a.eval_many(f, &p.x);
        // A = 2 P_inf is (0, 2); B = 0; the tables for (0, 2) and (0, 0) are precomputed (t = -1, 0)
        let call = call_for(&p, DivisorSpec::new(0, 2), DivisorSpec::new(0, 0), &evals, Some(0));
        let m = basis_products(b, &call).unwrap();
        let pts: Vec<(Fe, Fe)> = p.x.iter().copied().zip(evals.iter().copied()).collect();
        assert_eq!(m.get(0, 0), &lagrange_interpolate(f, &pts).unwrap());
        assert_eq!(m.get(0, 0), &a);
    }

    #[test]
    fn pointwise_matches_exact_on_pipeline_divisors() {
        let c = herm(4, 3, 7);
        let p = Precomp::new(&c, 2, 2).unwrap();
        let b = c.backend();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = 7;
        let vals: Vec<Fe> = (0..12).map(|_| Fe(rng.gen_range(0..16))).collect();
        let r = b.interpolate_function(&vals, m).unwrap();
        let r_evals = b.evaluate_function(&r, &p.e).unwrap();
        let ones = vec![Fe::ONE; p.n_places()];
        let s = 2i64;
        let mut cases: Vec<(DivisorSpec, Multiplier, DivisorSpec, &[Fe], Option<i64>)> = Vec::new();
        for t in 0..s {
            cases.push((DivisorSpec::new(s - t, 0), Multiplier::One, DivisorSpec::new(t - s, -t * m), &ones, Some(0)));
            cases.push((DivisorSpec::new(s, 0), Multiplier::One, DivisorSpec::new(-s, -t * m), &ones, Some(0)));
        }
        for t in 1..=2 {
            cases.push((DivisorSpec::new(0, m), Multiplier::Func(&r), DivisorSpec::new(0, -t * m), &r_evals, b.delta_of(&r)));
        }
        for (a_div, mult, b_div, evals, delta) in cases {
            let call = call_for(&p, a_div, b_div, evals, delta);
            let pw = basis_products(b, &call).unwrap();
            let ex = basis_products_exact(b, a_div, mult, b_div, b.pool()).unwrap();
            assert_eq!(pw, ex, "A = {a_div:?}, B = {b_div:?}");
        }
    }

    #[test]
    fn delta_is_additive_through_products() {
        let c = herm(4, 3, 7);
        let p = Precomp::new(&c, 2, 2).unwrap();
        let b = c.backend();
        let fld = b.field();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a_div = DivisorSpec::new(0, 7);
        let b_div = DivisorSpec::new(0, -7);
        for _ in 0..10 {
            let a = FuncRep {
                divisor: a_div,
                coords: vec![random_poly(&mut rng, 16, 2), random_poly(&mut rng, 16, 2), Poly::zero(), Poly::zero()],
            };
            let g = FuncRep {
                divisor: b_div,
                coords: (0..4).map(|_| random_poly(&mut rng, 16, 3)).collect(),
            };
            let evals = b.evaluate_function(&a, &p.e).unwrap();
            let call = call_for(&p, a_div, b_div, &evals, b.delta_of(&a));
            let Ok(mm) = basis_products(b, &call) else {
                // delta_A(a) too large for this E; skip
                continue;
            };
            let mut prod = FuncRep::zero(a_div.add(b_div), 4);
            for k in 0..4 {
                for i in 0..4 {
                    let t = g.coords[k].mul(fld, mm.get(k, i));
                    prod.coords[i].add_assign(fld, &t);
                }
            }
            let want = b.delta_of(&a).zip(b.delta_of(&g)).map(|(x, y)| x + y);
            assert_eq!(b.delta_of(&prod), want);
        }
    }

    #[test]
    fn precondition_is_enforced() {
        let c = rs(64, 12, 2);
        let p = Precomp::new(&c, 1, 1).unwrap();
        let b = c.backend();
        let ones = vec![Fe::ONE; p.n_places()];
        let mut call = call_for(&p, DivisorSpec::new(0, 0), DivisorSpec::new(0, 0), &ones, Some(0));
        let big = DivisorSpec::new(2, 0);
        call.a_div = big;
        assert!(matches!(basis_products(b, &call), Err(Error::InvalidParams(_))));
    }
}
