use super::{Code, InterpolantBasis};
use crate::error::{Error, Result};
use crate::funcfield::{Backend, DivisorSpec, FuncRep, Place};
use crate::gf::{binom_in_field, Fe};
use crate::polmat::{popov_form, row_shifted_degree};
use crate::upoly::Poly;

/// `Q(z) = sum_t Q_t z^t` with `Q_t in Y(-tG)`, and `delta_G(Q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interpolant {
    pub q: Vec<FuncRep>,
    pub delta: i64,
}

/// Maps a row of the basis to the coefficients `Q_t = sum_k p_{t,k} y_k^{(-tG)}`.
pub fn interpolant_of_row(code: &Code, row: &[Poly]) -> Vec<FuncRep> {
    let mu = code.mu();
    row.chunks(mu)
        .enumerate()
        .map(|(t, c)| FuncRep { divisor: DivisorSpec::new(0, -(t as i64) * code.m()), coords: c.to_vec() })
        .collect()
}

/// Shifted Popov form of the basis, then the row of least shifted degree
/// (ties broken towards the smallest pivot index).
pub fn reduce_and_select(basis: &InterpolantBasis, code: &Code) -> Result<Interpolant> {
    let p = popov_form(code.field(), &basis.matrix, &basis.shift)?;
    let (_, row) = (0..p.nrows())
        .filter_map(|r| row_shifted_degree(p.row(r), &basis.shift).map(|dp| (dp, r)))
        .min()
        .ok_or_else(|| Error::Internal("interpolation basis has no nonzero row".into()))?;
    let (delta, _) = row_shifted_degree(p.row(row), &basis.shift).expect("nonzero row");
    Ok(Interpolant { q: interpolant_of_row(code, p.row(row)), delta })
}

/// Whether `Q` has a root of multiplicity at least `s` at `(P, r)`: every
/// Hasse shift `C_b = sum_{t >= b} C(t, b) r^{t-b} Q_t` vanishes to order
/// `s - b` at `P`.
pub fn multiplicity_check(backend: &Backend, q: &[FuncRep], p: Place, r: Fe, s: usize) -> Result<bool> {
    let f = backend.field();
    for b in 0..s {
        let mut acc = backend.raw_constant(Fe::ZERO);
        for (t, qt) in q.iter().enumerate().skip(b) {
            let c = f.mul(binom_in_field(t as u64, b as u64, f), f.pow_u64(r, (t - b) as u64));
            acc = backend.raw_add(&acc, &backend.raw_scale(&backend.raw(qt), c));
        }
        if backend.raw_expansion(&acc, p, s - b)?.iter().any(|c| !c.is_zero()) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::super::{interpolant_matrix_basis, Route};
    use super::*;
    use crate::polmat::{random_unimodular, PolyMat, ShiftVec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_basis_selects_first_row() {
        let c = rs(16, 8, 2);
        let basis = InterpolantBasis {
            s: 1,
            l: 1,
            mu: 1,
            matrix: PolyMat::identity(2),
            shift: ShiftVec::zero(2),
            r_func: FuncRep::zero(c.g_div(), 1),
            d: vec![],
            e: vec![],
            r: vec![],
            rbar: vec![],
        };
        let q = reduce_and_select(&basis, &c).unwrap();
        assert_eq!(q.delta, 0);
        assert_eq!(q.q[0].coords[0], Poly::one());
        assert!(q.q[1].is_zero());
    }

    #[test]
    fn multiplicity_examples() {
        let c = rs(16, 8, 2);
        let b = c.backend();
        let f = c.field();
        let vals: Vec<Fe> = (0..8).map(|i| Fe(i * 3 % 16)).collect();
        let r = b.interpolate_function(&vals, 2).unwrap();
        // (z - R)^2 = R^2 - 2 R z + z^2, with -2 = 0 in characteristic 2
        let r2 = b.to_func(&b.raw_mul(&b.raw(&r), &b.raw(&r)), DivisorSpec::new(0, 0)).unwrap();
        let q = vec![
            r2,
            FuncRep { divisor: DivisorSpec::new(0, -2), coords: vec![r.coords[0].scale(f, f.from_int(-2))] },
            FuncRep { divisor: DivisorSpec::new(0, -4), coords: vec![Poly::one()] },
        ];
        for (j, p) in b.d_places().iter().enumerate() {
            assert!(multiplicity_check(b, &q, *p, vals[j], 2).unwrap());
        }
        let lin = vec![
            FuncRep { divisor: DivisorSpec::new(0, 0), coords: vec![Poly::constant(Fe(5))] },
            FuncRep { divisor: DivisorSpec::new(0, -2), coords: vec![Poly::one()] },
        ];
        // z - 5 in characteristic 2 is z + 5
        let p0 = b.d_places()[0];
        assert!(!multiplicity_check(b, &lin, p0, Fe(4), 1).unwrap());
        assert!(multiplicity_check(b, &lin, p0, Fe(5), 1).unwrap());
    }

    #[test]
    fn basis_rows_are_in_the_module_and_selection_is_canonical() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (code, s, l) in [(rs(16, 12, 2), 2, 3), (herm(4, 3, 7), 2, 2)] {
            let r: Vec<Fe> = (0..12).map(|_| Fe(rng.gen_range(0..16))).collect();
            let basis = interpolant_matrix_basis(&r, &code, s, l, Route::Exact).unwrap();
            for i in 0..basis.matrix.nrows() {
                let q = interpolant_of_row(&code, basis.matrix.row(i));
                for (j, p) in code.backend().d_places().iter().enumerate() {
                    assert!(multiplicity_check(code.backend(), &q, *p, r[j], s).unwrap());
                }
            }
            let sel = reduce_and_select(&basis, &code).unwrap();
            let f = code.field();
            let u = random_unimodular(f, basis.matrix.nrows(), 12, 1, &mut rng);
            let mut mixed = basis.clone();
            mixed.matrix = u.mul(f, &basis.matrix).unwrap();
            assert_eq!(reduce_and_select(&mixed, &code).unwrap(), sel);
            let delta = sel
                .q
                .iter()
                .filter_map(|qt| code.backend().delta_of(qt))
                .max()
                .unwrap();
            assert_eq!(delta, sel.delta);
        }
    }
}
