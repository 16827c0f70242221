//! Guruswami–Sudan list decoding of one-point AG codes `C_L(D, m P_inf)`.
//!
//! The pipeline builds a small-degree `F_q[x]`-basis of the interpolation
//! module `M_{s,l}` from multiplication matrices between Apéry systems,
//! reduces it to shifted Popov form, reads off a minimal interpolant and
//! finds its roots in `L(G)`.

mod decode;
mod interp;
mod precomp;
mod products;
mod reduce;
mod roots;

pub use decode::{brute_force_decode, DEFAULT_BRUTE_FORCE_CAP, Candidate, DecodeOutcome, Decoder, RoutePolicy};
pub use interp::{
    build_matm_oracle, gamma_coeff, interpolant_matrix_basis, DegreeCheck, DegreeReport,
    InterpolantBasis, Route,
};
pub use precomp::{required_places, EvalTable, Precomp};
pub use products::{basis_products, basis_products_exact, identity_checks, Multiplier, ProductCall};
pub use reduce::{interpolant_of_row, multiplicity_check, reduce_and_select, Interpolant};
pub use roots::{root_find, RootFinding, DEFAULT_ENUMERATION_CAP};

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcfield::{Backend, CurveKind, DivisorSpec, FuncRep};
use crate::gf::{Fe, Field, FieldSpec};
use crate::upoly::Poly;

/// Serializable description of a code: field, curve, evaluation divisor and
/// `m = deg G`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeConfig {
    pub field: FieldSpec,
    pub backend: CurveKind,
    /// x-values of the code places (rational) or of the full fibers (Hermitian).
    #[serde(rename = "D")]
    pub points: Vec<u32>,
    pub m: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl CodeConfig {
    pub fn build(&self) -> Result<Code> {
        let field = Field::new(self.field.clone())?;
        let pts = self
            .points
            .iter()
            .map(|&v| field.elem(v as u64))
            .collect::<Result<Vec<_>>>()?;
        Code::new(Backend::build(self.backend, field, &pts)?, self.m)
    }
}

/// One-point AG code with `G = m P_inf`.
#[derive(Clone, Debug)]
pub struct Code {
    backend: Backend,
    m: i64,
    basis: Vec<FuncRep>,
    /// `(j, k)` of each basis monomial `x^j y^k`.
    monomials: Vec<(usize, usize)>,
}

impl Code {
    pub fn new(backend: Backend, m: i64) -> Result<Code> {
        let n = backend.n() as i64;
        if m < 0 || m >= n {
            return Err(Error::InvalidParams(format!(
                "need 0 <= m < n for an injective encoding, got m = {m}, n = {n}"
            )));
        }
        let basis = backend.lg_basis(m);
        let g_div = DivisorSpec::new(0, m);
        let monomials = basis
            .iter()
            .map(|b| {
                let (i, p) = b
                    .coords
                    .iter()
                    .enumerate()
                    .find(|(_, p)| !p.is_zero())
                    .expect("basis element is nonzero");
                let k = backend.apery(g_div).ypow[i];
                (p.deg().expect("nonzero"), k)
            })
            .collect();
        Ok(Code { backend, m, basis, monomials })
    }

    pub fn config(&self, label: Option<String>) -> CodeConfig {
        CodeConfig {
            field: self.field().spec().clone(),
            backend: self.backend.kind(),
            points: self.backend.selector().iter().map(|x| x.0).collect(),
            m: self.m,
            label,
        }
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn field(&self) -> &Field {
        self.backend.field()
    }

    pub fn n(&self) -> usize {
        self.backend.n()
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    /// Dimension `l(G)`; equals `l(G) - l(G - D)` since `m < n`.
    pub fn k(&self) -> usize {
        self.basis.len()
    }

    pub fn genus(&self) -> usize {
        self.backend.genus()
    }

    pub fn mu(&self) -> usize {
        self.backend.mu()
    }

    pub fn designed_distance(&self) -> usize {
        self.n() - self.m as usize
    }

    pub fn g_div(&self) -> DivisorSpec {
        DivisorSpec::new(0, self.m)
    }

    /// Basis of `L(G)` used for encoding.
    pub fn basis(&self) -> &[FuncRep] {
        &self.basis
    }

    /// The function `sum_b msg[b] * basis[b]`.
    pub fn message_function(&self, msg: &[Fe]) -> Result<FuncRep> {
        if msg.len() != self.k() {
            return Err(Error::DimensionMismatch(format!(
                "message of length {} for dimension {}",
                msg.len(),
                self.k()
            )));
        }
        let f = self.field();
        let mut out = FuncRep::zero(self.g_div(), self.mu());
        for (b, &c) in self.basis.iter().zip(msg) {
            for (o, p) in out.coords.iter_mut().zip(&b.coords) {
                o.add_assign(f, &p.scale(f, c));
            }
        }
        Ok(out)
    }

    /// Message coordinates of `f in L(G)`, or `None` if `f` is not in `L(G)`.
    pub fn message_of(&self, fun: &FuncRep) -> Option<Vec<Fe>> {
        let r = self.backend.raw(fun);
        if r.alpha != 0 || self.backend.raw_delta(&r, self.g_div()).is_some_and(|d| d > 0) {
            return None;
        }
        let msg: Vec<Fe> = self.monomials.iter().map(|&(j, k)| r.c[k].coeff(j)).collect();
        let back = self.message_function(&msg).ok()?;
        (back.coords == self.backend.to_func(&r, self.g_div()).ok()?.coords).then_some(msg)
    }

    pub fn encode(&self, msg: &[Fe]) -> Result<Vec<Fe>> {
        let fun = self.message_function(msg)?;
        self.backend.evaluate_function(&fun, self.backend.d_places())
    }

    /// Values of each basis element at the code places, `k x n`.
    pub fn generator_matrix(&self) -> Result<Vec<Vec<Fe>>> {
        self.basis
            .iter()
            .map(|b| self.backend.evaluate_function(b, self.backend.d_places()))
            .collect()
    }

    /// Number of field entries in a word, checked against `q`.
    pub fn check_word(&self, r: &[Fe]) -> Result<()> {
        if r.len() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "word of length {} for n = {}",
                r.len(),
                self.n()
            )));
        }
        if let Some(v) = r.iter().find(|v| v.0 >= self.field().order()) {
            return Err(Error::InvalidEncoding { value: v.0 as u64, q: self.field().order() });
        }
        Ok(())
    }
}

/// Multiplicity `s`, list size `l` and radius `tau`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeParams {
    pub s: usize,
    pub l: usize,
    pub tau: usize,
}

impl DecodeParams {
    /// Parameters with `tau` set to the guaranteed radius.
    pub fn with_guaranteed_radius(code: &Code, s: usize, l: usize) -> Result<DecodeParams> {
        let p = DecodeParams { s, l, tau: 0 };
        p.validate(code)?;
        Ok(DecodeParams { tau: guaranteed_radius(code, s, l), ..p })
    }

    pub fn validate(&self, code: &Code) -> Result<()> {
        if self.s == 0 {
            return Err(Error::InvalidParams("multiplicity must be at least 1".into()));
        }
        if self.l < self.s {
            return Err(Error::InvalidParams(format!(
                "list size {} is smaller than multiplicity {}",
                self.l, self.s
            )));
        }
        if self.l as i64 * code.m() > (self.s * code.n()) as i64 {
            return Err(Error::InvalidParams(format!(
                "l * m = {} exceeds s * n = {}",
                self.l as i64 * code.m(),
                self.s * code.n()
            )));
        }
        if self.tau > code.n() {
            return Err(Error::InvalidParams(format!("radius {} exceeds n", self.tau)));
        }
        Ok(())
    }
}

/// Largest `tau` for which the dimension count
/// `(l+1)(d+1-g) - m l(l+1)/2 > n s(s+1)/2`, `d = s(n - tau) - 1`, holds.
/// Clamped to 0 when no radius passes the count.
pub fn guaranteed_radius(code: &Code, s: usize, l: usize) -> usize {
    let (n, g, m) = (code.n() as i128, code.genus() as i128, code.m() as i128);
    let (s, l) = (s as i128, l as i128);
    let rhs = n * s * (s + 1) / 2;
    let holds = |tau: i128| {
        let d = s * (n - tau) - 1;
        (l + 1) * (d + 1 - g) - m * l * (l + 1) / 2 > rhs
    };
    (0..=n).rev().find(|&tau| holds(tau)).unwrap_or(0) as usize
}

pub fn hamming_distance(a: &[Fe], b: &[Fe]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Replaces `e` distinct positions of `word` by different values.
pub fn corrupt<R: Rng>(field: &Field, word: &[Fe], e: usize, rng: &mut R) -> Result<(Vec<Fe>, Vec<usize>)> {
    if e > word.len() {
        return Err(Error::InvalidParams(format!(
            "cannot corrupt {e} positions of a word of length {}",
            word.len()
        )));
    }
    let q = field.order();
    let mut pos = sample(rng, word.len(), e).into_vec();
    pos.sort_unstable();
    let mut out = word.to_vec();
    for &p in &pos {
        out[p] = field.add(out[p], Fe(rng.gen_range(1..q)));
    }
    Ok((out, pos))
}

/// A row vector of polynomials as a string such as `[1 + x, 0]`, for diagnostics.
pub(crate) fn fmt_row(row: &[Poly]) -> String {
    let body: Vec<String> = row.iter().map(|p| format!("{:?}", p.coeffs().iter().map(|c| c.0).collect::<Vec<_>>())).collect();
    format!("[{}]", body.join(", "))
}
