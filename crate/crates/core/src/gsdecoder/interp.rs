use std::fmt::Write as _;

use super::products::{basis_products, basis_products_exact, Multiplier, ProductCall};
use super::{Code, Precomp};
use crate::error::{Error, Result};
use crate::funcfield::{DivisorSpec, FuncRep};
use crate::gf::{binom_in_field, Fe, Field};
use crate::polmat::{pm_divrem, PolyMat, ShiftVec};

/// How multiplication matrices are obtained: from values on the precomputed
/// places `E`, or by exact arithmetic in the coordinate ring.
#[derive(Clone, Copy, Debug)]
pub enum Route<'a> {
    Pointwise(&'a Precomp),
    Exact,
}

/// `gamma_{t,j}`: the coefficient of `R^{t-j} z^j` in `(z - R)^t` for
/// `j <= t < s`, and in `g_t(z) (z - R)^s` for `j < s <= t`.
pub fn gamma_coeff(t: usize, j: usize, s: usize, field: &Field) -> Result<Fe> {
    if t < s {
        if j > t {
            return Err(Error::InvalidParams(format!("gamma needs j <= t, got j = {j}, t = {t}")));
        }
        let c = binom_in_field(t as u64, j as u64, field);
        return Ok(if (t - j) % 2 == 1 { field.neg(c) } else { c });
    }
    if j >= s {
        return Err(Error::InvalidParams(format!("gamma needs j < s, got j = {j}, s = {s}")));
    }
    let mut acc = Fe::ZERO;
    for i in (s - j)..=s {
        let top = (t + s) as i64 - 1 - (j + i) as i64;
        if top < 0 {
            continue;
        }
        let term = field.mul(
            binom_in_field(s as u64, i as u64, field),
            binom_in_field(top as u64, s as u64 - 1, field),
        );
        acc = if i % 2 == 1 { field.sub(acc, term) } else { field.add(acc, term) };
    }
    Ok(acc)
}

/// A basis of `M_{s,l}` in the block form `[[D, 0], [Rbar, I]]`, with the
/// building blocks kept for inspection.
#[derive(Clone, Debug)]
pub struct InterpolantBasis {
    pub s: usize,
    pub l: usize,
    pub mu: usize,
    pub matrix: PolyMat,
    /// `h[t mu + k] = delta_{-tG}(y_k^{(-tG)})`, scale `mu`.
    pub shift: ShiftVec,
    /// The interpolating function `R in L(G)`-space with `R(P_j) = r_j`.
    pub r_func: FuncRep,
    /// `D_t` for `t = 0..s`.
    pub d: Vec<PolyMat>,
    /// `E_t` for `t = 0..s`.
    pub e: Vec<PolyMat>,
    /// `R_t` for `t = 1..=l`, stored at index `t - 1`.
    pub r: Vec<PolyMat>,
    /// Unscaled remainders `Rbar^{(t,j)}` for `s <= t <= l`, `j < s`.
    pub rbar: Vec<((usize, usize), PolyMat)>,
}

struct Blocks {
    r_func: FuncRep,
    d: Vec<PolyMat>,
    e: Vec<PolyMat>,
    r: Vec<PolyMat>,
}

fn build_blocks(r: &[crate::gf::Fe], code: &Code, s: usize, l: usize, route: Route<'_>) -> Result<Blocks> {
    code.check_word(r)?;
    let b = code.backend();
    let m = code.m();
    let s64 = s as i64;
    let r_func = b.interpolate_function(r, m)?;
    let g = code.g_div();
    let ones;
    let r_evals;
    let mul = |a_div: DivisorSpec, a: Multiplier<'_>, b_div: DivisorSpec, evals: &[Fe]| -> Result<PolyMat> {
        match route {
            Route::Pointwise(p) => {
                let a_delta = match a {
                    Multiplier::One => Some(0),
                    Multiplier::Func(f) => b.delta_of(f),
                };
                let call = ProductCall {
                    a_div,
                    b_div,
                    e: &p.e,
                    partition: &p.partition,
                    a_evals: evals,
                    a_delta,
                    tab_ab: &p.table(a_div.add(b_div))?.values,
                    tab_b: &p.table(b_div)?.values,
                };
                basis_products(b, &call)
            }
            Route::Exact => basis_products_exact(b, a_div, a, b_div, b.pool()),
        }
    };
    match route {
        Route::Pointwise(p) => {
            p.check(code, s, l)?;
            ones = vec![Fe::ONE; p.n_places()];
            r_evals = b.evaluate_function(&r_func, &p.e)?;
        }
        Route::Exact => {
            ones = Vec::new();
            r_evals = Vec::new();
        }
    }
    let mut d = Vec::with_capacity(s);
    let mut e = Vec::with_capacity(s);
    for t in 0..s64 {
        let tm = t * m;
        d.push(mul(DivisorSpec::new(s64 - t, 0), Multiplier::One, DivisorSpec::new(t - s64, -tm), &ones)?);
        e.push(mul(DivisorSpec::new(s64, 0), Multiplier::One, DivisorSpec::new(-s64, -tm), &ones)?);
    }
    let mut rt = Vec::with_capacity(l);
    for t in 1..=l as i64 {
        rt.push(mul(g, Multiplier::Func(&r_func), DivisorSpec::new(0, -t * m), &r_evals)?);
    }
    Ok(Blocks { r_func, d, e, r: rt })
}

fn reduction_shift(code: &Code, l: usize) -> ShiftVec {
    let b = code.backend();
    let mut offsets = Vec::with_capacity(b.mu() * (l + 1));
    for t in 0..=l as i64 {
        offsets.extend(b.apery(DivisorSpec::new(0, -t * code.m())).deltas);
    }
    ShiftVec { scale: b.mu() as i64, offsets }
}

/// `D^{(t,j)} = D_t R_t R_{t-1} ... R_{j+1}` for all `j <= t < s`, scaled
/// by `gamma_{t,j}` and placed into `out`.
fn place_d_blocks(f: &Field, blk: &Blocks, s: usize, mu: usize, out: &mut PolyMat) -> Result<()> {
    for t in 0..s {
        let mut cur = blk.d[t].clone();
        out.set_block(t * mu, t * mu, &cur.scale(f, gamma_coeff(t, t, s, f)?));
        for j in (0..t).rev() {
            cur = cur.mul(f, &blk.r[j])?;
            out.set_block(t * mu, j * mu, &cur.scale(f, gamma_coeff(t, j, s, f)?));
        }
    }
    Ok(())
}

/// Builds the basis `[[D, 0], [Rbar, I]]` of `M_{s,l}` for the received
/// word `r`.
pub fn interpolant_matrix_basis(
    r: &[Fe],
    code: &Code,
    s: usize,
    l: usize,
    route: Route<'_>,
) -> Result<InterpolantBasis> {
    if s == 0 || l < s {
        return Err(Error::InvalidParams(format!("need 1 <= s <= l, got s = {s}, l = {l}")));
    }
    let blk = build_blocks(r, code, s, l, route)?;
    let f = code.field();
    let mu = code.mu();
    let dim = mu * (l + 1);
    let mut out = PolyMat::zeros(dim, dim);
    place_d_blocks(f, &blk, s, mu, &mut out)?;
    let mut rbar = Vec::new();
    for j in 0..s {
        // R_s R_{s-1} ... R_{j+1}
        let mut chain = blk.r[s - 1].clone();
        for i in (j + 1..s).rev() {
            chain = chain.mul(f, &blk.r[i - 1])?;
        }
        let mut cur = pm_divrem(f, &chain, &blk.e[j])?.1;
        out.set_block(s * mu, j * mu, &cur.scale(f, gamma_coeff(s, j, s, f)?));
        rbar.push(((s, j), cur.clone()));
        for t in s + 1..=l {
            cur = pm_divrem(f, &blk.r[t - 1].mul(f, &cur)?, &blk.e[j])?.1;
            out.set_block(t * mu, j * mu, &cur.scale(f, gamma_coeff(t, j, s, f)?));
            rbar.push(((t, j), cur.clone()));
        }
    }
    for i in s * mu..dim {
        out.set(i, i, crate::upoly::Poly::one());
    }
    Ok(InterpolantBasis {
        s,
        l,
        mu,
        matrix: out,
        shift: reduction_shift(code, l),
        r_func: blk.r_func,
        d: blk.d,
        e: blk.e,
        r: blk.r,
        rbar,
    })
}

/// The unreduced basis of `M_{s,l}`: lower blocks are the full products
/// `gamma_{t,j} R_t ... R_{j+1}`. Always uses exact products, so it is
/// independent of the pointwise machinery. Meant for small instances.
pub fn build_matm_oracle(r: &[Fe], code: &Code, s: usize, l: usize) -> Result<PolyMat> {
    if s == 0 || l < s {
        return Err(Error::InvalidParams(format!("need 1 <= s <= l, got s = {s}, l = {l}")));
    }
    let blk = build_blocks(r, code, s, l, Route::Exact)?;
    let f = code.field();
    let mu = code.mu();
    let dim = mu * (l + 1);
    let mut out = PolyMat::zeros(dim, dim);
    place_d_blocks(f, &blk, s, mu, &mut out)?;
    for t in s..=l {
        let mut cur = blk.r[t - 1].clone();
        for j in (0..t).rev() {
            if j < s {
                out.set_block(t * mu, j * mu, &cur.scale(f, gamma_coeff(t, j, s, f)?));
            }
            if j > 0 {
                cur = cur.mul(f, &blk.r[j - 1])?;
            }
        }
        for k in 0..mu {
            out.set(t * mu + k, t * mu + k, crate::upoly::Poly::one());
        }
    }
    Ok(out)
}

/// One degree bound, `value <= bound` or `value < bound` when `strict`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeCheck {
    pub name: String,
    pub value: i64,
    pub bound: i64,
    pub strict: bool,
}

impl DegreeCheck {
    pub fn ok(&self) -> bool {
        if self.strict {
            self.value < self.bound
        } else {
            self.value <= self.bound
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct DegreeReport {
    pub checks: Vec<DegreeCheck>,
}

impl DegreeReport {
    pub fn violations(&self) -> Vec<&DegreeCheck> {
        self.checks.iter().filter(|c| !c.ok()).collect()
    }
}

fn deg_i64(m: &PolyMat) -> i64 {
    m.deg().map_or(-1, |d| d as i64)
}

impl InterpolantBasis {
    /// Degree bounds on every block and on the column-degree sum.
    pub fn degree_report(&self, code: &Code) -> DegreeReport {
        let (n, g, mu, s) = (code.n() as i64, code.genus() as i64, self.mu as i64, self.s as i64);
        let mut checks = Vec::new();
        let mut push = |name: String, value: i64, bound: i64, strict: bool| {
            checks.push(DegreeCheck { name, value, bound, strict })
        };
        for (t, d) in self.d.iter().enumerate() {
            let bound = (2 * g - 1 + mu + (s - t as i64) * n).div_euclid(mu);
            push(format!("deg D_{t}"), deg_i64(d), bound, false);
        }
        let e_bound = (2 * g - 1 + mu + s * n).div_euclid(mu);
        for (t, e) in self.e.iter().enumerate() {
            push(format!("deg E_{t}"), deg_i64(e), e_bound, false);
        }
        for (i, r) in self.r.iter().enumerate() {
            push(format!("deg R_{}", i + 1), deg_i64(r), 1 + (n + 4 * g - 2).div_euclid(mu), false);
        }
        for ((t, j), rb) in &self.rbar {
            push(format!("deg Rbar({t},{j})"), deg_i64(rb), deg_i64(&self.e[*j]), true);
        }
        let colsum: i64 = self.matrix.col_degrees().iter().map(|d| d.map_or(0, |d| d as i64)).sum();
        push("column degree sum".into(), colsum, mu * s * (1 + e_bound), false);
        DegreeReport { checks }
    }

    /// Text dump of the basis and its blocks.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.matrix.dump("B"));
        for (t, d) in self.d.iter().enumerate() {
            out.push_str(&d.dump(&format!("D_{t}")));
        }
        for (t, e) in self.e.iter().enumerate() {
            out.push_str(&e.dump(&format!("E_{t}")));
        }
        for (i, r) in self.r.iter().enumerate() {
            out.push_str(&r.dump(&format!("R_{}", i + 1)));
        }
        for ((t, j), rb) in &self.rbar {
            out.push_str(&rb.dump(&format!("Rbar_{t}_{j}")));
        }
        let _ = writeln!(out, "# shift scale {} offsets {:?}", self.shift.scale, self.shift.offsets);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;
    use crate::polmat::popov_form;
    use crate::upoly::Poly;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Coefficients of `z^j` in `g_t(z) (z - R)^s` with `R = 1`, where
    /// `g_t(z) = sum_{i <= t-s} C(i+s-1, i) R^i z^{t-s-i}`. Homogeneity makes
    /// `R = 1` enough to read off `gamma_{t,j}`.
    fn expansion(t: usize, s: usize, f: &Field) -> Vec<Fe> {
        let mut g = vec![Fe::ZERO; t - s + 1];
        for i in 0..=t - s {
            g[t - s - i] = binom_in_field((i + s - 1) as u64, i as u64, f);
        }
        let zr = Poly::from_coeffs(vec![f.neg(Fe::ONE), Fe::ONE]).pow(f, s as u64);
        let mut c = Poly::from_coeffs(g).mul(f, &zr).into_coeffs();
        c.resize(t + 1, Fe::ZERO);
        c
    }

    #[test]
    fn gamma_examples() {
        let f = Field::gf(5).unwrap();
        for t in 1..6 {
            assert_eq!(gamma_coeff(t, 0, 1, &f).unwrap(), f.neg(Fe::ONE));
        }
        assert_eq!(gamma_coeff(3, 1, 2, &f).unwrap(), f.from_int(-3));
        assert_eq!(gamma_coeff(3, 0, 2, &f).unwrap(), f.from_int(2));
        assert_eq!(gamma_coeff(2, 0, 3, &f).unwrap(), Fe::ONE);
        assert!(gamma_coeff(2, 2, 2, &f).is_err());
        assert!(gamma_coeff(1, 2, 3, &f).is_err());
    }

    #[test]
    fn gamma_matches_symbolic_expansion() {
        for q in [2u32, 5, 16] {
            let f = Field::gf(q).unwrap();
            for s in 1..=4 {
                for t in s..=8 {
                    let c = expansion(t, s, &f);
                    assert_eq!(c[t], Fe::ONE);
                    for (j, &cj) in c.iter().enumerate().take(t).skip(s) {
                        assert!(cj.is_zero(), "q={q} s={s} t={t} j={j}");
                    }
                    for (j, &cj) in c.iter().enumerate().take(s) {
                        assert_eq!(gamma_coeff(t, j, s, &f).unwrap(), cj);
                    }
                }
            }
        }
    }

    fn random_word(code: &Code, rng: &mut ChaCha8Rng) -> Vec<Fe> {
        (0..code.n()).map(|_| Fe(rng.gen_range(0..code.field().order()))).collect()
    }

    #[test]
    fn small_shapes() {
        let c = rs(64, 12, 2);
        let p = Precomp::new(&c, 1, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let r = random_word(&c, &mut rng);
        let b = interpolant_matrix_basis(&r, &c, 1, 1, Route::Pointwise(&p)).unwrap();
        assert_eq!(b.matrix.nrows(), 2);
        assert_eq!(b.matrix.block(0, 0, 1, 1), b.d[0]);
        let oracle = build_matm_oracle(&r, &c, 1, 1).unwrap();
        assert_eq!(oracle.get(1, 0), &b.r[0].get(0, 0).neg(c.field()));
        assert_eq!(oracle.get(1, 1), &Poly::one());

        let zero = vec![Fe::ZERO; 12];
        let p = Precomp::new(&c, 2, 3).unwrap();
        let b = interpolant_matrix_basis(&zero, &c, 2, 3, Route::Pointwise(&p)).unwrap();
        assert!(b.r.iter().all(PolyMat::is_zero));
        assert!(b.matrix.block(2, 0, 2, 2).is_zero());
        assert!(b.matrix.block(0, 0, 2, 2).get(1, 0).is_zero());
    }

    #[test]
    fn routes_agree_and_match_the_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (code, s, l) in [(rs(64, 12, 2), 2, 3), (herm(4, 3, 7), 2, 2), (rs(64, 8, 2), 2, 2)] {
            let p = Precomp::new(&code, s, l).unwrap();
            for _ in 0..3 {
                let r = random_word(&code, &mut rng);
                let pw = interpolant_matrix_basis(&r, &code, s, l, Route::Pointwise(&p)).unwrap();
                let ex = interpolant_matrix_basis(&r, &code, s, l, Route::Exact).unwrap();
                assert_eq!(pw.matrix, ex.matrix);
                let f = code.field();
                let oracle = build_matm_oracle(&r, &code, s, l).unwrap();
                let zero = ShiftVec::zero(pw.matrix.ncols());
                assert_eq!(popov_form(f, &pw.matrix, &zero).unwrap(), popov_form(f, &oracle, &zero).unwrap());
                assert!(pw.degree_report(&code).violations().is_empty(), "{:?}", pw.degree_report(&code));
                let det = pw.matrix.determinant(f).unwrap();
                let mut prod = Poly::one();
                for d in &pw.d {
                    prod = prod.mul(f, &d.determinant(f).unwrap());
                }
                assert_eq!(det.make_monic(f).unwrap(), prod.make_monic(f).unwrap());
            }
        }
    }
}
