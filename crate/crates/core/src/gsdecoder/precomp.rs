use serde::{Deserialize, Serialize};

use super::Code;
use crate::error::{Error, Result};
use crate::funcfield::{x_partition, DivisorSpec, Place};
use crate::gf::Fe;

/// Values `y_i^{(A)}(E_j)` of an Apéry system on the evaluation places.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalTable {
    pub divisor: DivisorSpec,
    pub deltas: Vec<i64>,
    /// `mu` rows, one column per place of `E`.
    pub values: Vec<Vec<Fe>>,
}

/// Code-dependent data for the pointwise route: the evaluation places `E`,
/// their x-partition, and every Apéry table the pipeline reads.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Precomp {
    pub s: usize,
    pub l: usize,
    pub e: Vec<Place>,
    pub x: Vec<Fe>,
    pub partition: Vec<Vec<usize>>,
    pub tables: Vec<EvalTable>,
}

/// Smallest `deg E` that satisfies the precondition of every product the
/// pipeline forms: `sn + 2g + mu` for `D_0` and `E_t`, `n + 4g + mu - 1` for
/// `R_t`. The larger of `sn + 4g + mu - 1` and `sn + 2g + mu` covers both.
pub fn required_places(code: &Code, s: usize) -> usize {
    let (n, g, mu) = (code.n(), code.genus(), code.mu());
    (s * n + 4 * g + mu - 1).max(s * n + 2 * g + mu)
}

impl Precomp {
    /// Precomputation with exactly the minimal number of places.
    pub fn new(code: &Code, s: usize, l: usize) -> Result<Precomp> {
        Precomp::with_places(code, s, l, None)
    }

    /// Precomputation with `places` evaluation places, at least the minimum.
    pub fn with_places(code: &Code, s: usize, l: usize, places: Option<usize>) -> Result<Precomp> {
        let b = code.backend();
        let needed = required_places(code, s).max(places.unwrap_or(0));
        if b.pool().len() < needed {
            return Err(Error::InsufficientPlaces { needed, available: b.pool().len() });
        }
        let e: Vec<Place> = b.pool()[..needed].to_vec();
        let partition = x_partition(&e, b.mu())?;
        let (s64, m) = (s as i64, code.m());
        let mut divs = Vec::new();
        for t in -1..=l as i64 {
            divs.push(DivisorSpec::new(0, -t * m));
        }
        for t in 0..s64 {
            divs.push(DivisorSpec::new(t - s64, -t * m));
            divs.push(DivisorSpec::new(-s64, -t * m));
        }
        // D_0 and E_0 share the divisor (-s, 0)
        let mut seen = Vec::new();
        divs.retain(|d| !seen.contains(d) && {
            seen.push(*d);
            true
        });
        let tables = divs
            .into_iter()
            .map(|d| {
                Ok(EvalTable { divisor: d, deltas: b.apery(d).deltas, values: b.eval_table(d, &e)? })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Precomp { s, l, x: e.iter().map(|p| p.x).collect(), e, partition, tables })
    }

    pub fn n_places(&self) -> usize {
        self.e.len()
    }

    pub fn table(&self, d: DivisorSpec) -> Result<&EvalTable> {
        self.tables
            .iter()
            .find(|t| t.divisor == d)
            .ok_or_else(|| Error::Internal(format!("no precomputed table for {d:?}")))
    }

    /// Checks that this precomputation belongs to `code` with these `s, l`.
    pub fn check(&self, code: &Code, s: usize, l: usize) -> Result<()> {
        if self.s != s || self.l != l {
            return Err(Error::InvalidParams(format!(
                "precomputation is for s = {}, l = {}, not s = {s}, l = {l}",
                self.s, self.l
            )));
        }
        let b = code.backend();
        if self.e.len() < required_places(code, s)
            || self.e.iter().any(|p| !b.pool().contains(p))
            || self.partition.iter().map(Vec::len).sum::<usize>() != self.e.len()
        {
            return Err(Error::InvalidParams("precomputation does not match the code".into()));
        }
        Ok(())
    }
}
