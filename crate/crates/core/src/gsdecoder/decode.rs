use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::{
    guaranteed_radius, hamming_distance, interpolant_matrix_basis, reduce_and_select, root_find, Code,
    DecodeParams, DegreeReport, Interpolant, InterpolantBasis, Precomp, Route, RootFinding, DEFAULT_ENUMERATION_CAP,
};
use crate::error::{Error, Result};
use crate::gf::Fe;

/// Default bound on `q^k` for the brute-force oracle.
pub const DEFAULT_BRUTE_FORCE_CAP: u128 = 1 << 22;

/// Which product route the decoder uses. `Auto` takes the pointwise route
/// when the curve has enough rational places and the exact one otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoutePolicy {
    #[default]
    Auto,
    Pointwise,
    Exact,
}

/// A decoded codeword.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Candidate {
    pub distance: usize,
    pub message: Vec<Fe>,
    pub codeword: Vec<Fe>,
}

#[derive(Clone, Debug)]
pub struct DecodeOutcome {
    pub candidates: Vec<Candidate>,
    pub interpolant: Interpolant,
    pub degrees: DegreeReport,
    pub t_basis: Duration,
    pub t_reduce: Duration,
    pub t_root: Duration,
}

/// A configured list decoder: code, parameters and precomputed data.
#[derive(Clone, Debug)]
pub struct Decoder {
    code: Code,
    params: DecodeParams,
    precomp: Option<Precomp>,
    force: bool,
    root_finding: RootFinding,
    cap: u128,
}

impl Decoder {
    pub fn new(code: Code, params: DecodeParams, policy: RoutePolicy) -> Result<Decoder> {
        params.validate(&code)?;
        let precomp = match policy {
            RoutePolicy::Exact => None,
            RoutePolicy::Pointwise => Some(Precomp::new(&code, params.s, params.l)?),
            RoutePolicy::Auto => match Precomp::new(&code, params.s, params.l) {
                Ok(p) => Some(p),
                Err(Error::InsufficientPlaces { .. }) => None,
                Err(e) => return Err(e),
            },
        };
        Ok(Decoder { code, params, precomp, force: false, root_finding: RootFinding::Auto, cap: DEFAULT_ENUMERATION_CAP })
    }

    /// A decoder over an existing precomputation (pointwise route).
    pub fn with_precomp(code: Code, params: DecodeParams, precomp: Precomp) -> Result<Decoder> {
        params.validate(&code)?;
        precomp.check(&code, params.s, params.l)?;
        Ok(Decoder {
            code,
            params,
            precomp: Some(precomp),
            force: false,
            root_finding: RootFinding::Auto,
            cap: DEFAULT_ENUMERATION_CAP,
        })
    }

    /// Allows `tau` above the guaranteed radius.
    pub fn force(mut self, force: bool) -> Decoder {
        self.force = force;
        self
    }

    pub fn root_finding(mut self, strategy: RootFinding, cap: u128) -> Decoder {
        self.root_finding = strategy;
        self.cap = cap;
        self
    }

    pub fn code(&self) -> &Code {
        &self.code
    }

    pub fn params(&self) -> DecodeParams {
        self.params
    }

    pub fn precomp(&self) -> Option<&Precomp> {
        self.precomp.as_ref()
    }

    pub fn route(&self) -> Route<'_> {
        match &self.precomp {
            Some(p) => Route::Pointwise(p),
            None => Route::Exact,
        }
    }

    pub fn basis(&self, r: &[Fe]) -> Result<InterpolantBasis> {
        interpolant_matrix_basis(r, &self.code, self.params.s, self.params.l, self.route())
    }

    /// Every codeword within distance `tau` of `r`, sorted by distance and
    /// then by message.
    pub fn decode(&self, r: &[Fe]) -> Result<DecodeOutcome> {
        let DecodeParams { s, l, tau } = self.params;
        let guaranteed = guaranteed_radius(&self.code, s, l);
        if tau > guaranteed && !self.force {
            return Err(Error::InvalidParams(format!(
                "radius {tau} exceeds the guaranteed radius {guaranteed}; use force to try anyway"
            )));
        }
        let t0 = Instant::now();
        let basis = self.basis(r)?;
        let t1 = Instant::now();
        let degrees = basis.degree_report(&self.code);
        let interpolant = reduce_and_select(&basis, &self.code)?;
        let t2 = Instant::now();
        let bound = (s * (self.code.n() - tau)) as i64;
        if interpolant.delta >= bound {
            return Err(Error::RadiusTooLarge { delta: interpolant.delta, bound });
        }
        let roots = root_find(&interpolant, &self.code, self.precomp.as_ref(), self.root_finding, self.cap)?;
        let mut candidates = Vec::new();
        for f in roots {
            let message = self.code.message_of(&f).ok_or_else(|| Error::Internal("root outside L(G)".into()))?;
            let codeword = self.code.encode(&message)?;
            let distance = hamming_distance(&codeword, r);
            if distance <= tau {
                candidates.push(Candidate { distance, message, codeword });
            }
        }
        candidates.sort();
        let t3 = Instant::now();
        Ok(DecodeOutcome { candidates, interpolant, degrees, t_basis: t1 - t0, t_reduce: t2 - t1, t_root: t3 - t2 })
    }
}

/// Every codeword within distance `tau` of `r`, by enumerating all `q^k`
/// messages.
pub fn brute_force_decode(code: &Code, r: &[Fe], tau: usize, cap: Option<u128>) -> Result<Vec<Candidate>> {
    code.check_word(r)?;
    let cap = cap.unwrap_or(DEFAULT_BRUTE_FORCE_CAP);
    let q = code.field().order();
    let k = code.k();
    let total = (0..k).try_fold(1u128, |acc, _| acc.checked_mul(q as u128)).unwrap_or(u128::MAX);
    if total > cap {
        return Err(Error::EnumerationCap { candidates: total, cap });
    }
    let f = code.field();
    let gen = code.generator_matrix()?;
    let n = code.n();
    let mut out = Vec::new();
    let mut msg = vec![Fe::ZERO; k];
    'outer: loop {
        let mut cw = vec![Fe::ZERO; n];
        for (c, row) in msg.iter().zip(&gen) {
            if !c.is_zero() {
                for (w, &g) in cw.iter_mut().zip(row) {
                    *w = f.add(*w, f.mul(*c, g));
                }
            }
        }
        let distance = hamming_distance(&cw, r);
        if distance <= tau {
            out.push(Candidate { distance, message: msg.clone(), codeword: cw });
        }
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
    out.sort();
    Ok(out)
}
