use std::process::ExitCode;
use std::time::Duration;

use anyhow::{Context, Result};
use aglist::funcfield::{Backend, CurveKind};
use aglist::gf::{Fe, Field};
use aglist::gsdecoder::{corrupt, Code, DecodeParams, Decoder, RoutePolicy};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::files::{parse_int_list, read_code_spec};
use crate::BenchArgs;

pub const HEADER: &str = "backend,q,n,g,mu,s,l,N,t_basis_ms,t_reduce_ms,t_root_ms";

/// Mean stage times over `reps` words with exactly `tau` errors.
fn row(code: &Code, s: usize, l: usize, reps: usize, rng: &mut ChaCha8Rng) -> Result<String> {
    let params = DecodeParams::with_guaranteed_radius(code, s, l)?;
    let dec = Decoder::new(code.clone(), params, RoutePolicy::Auto)?.force(true);
    let q = code.field().order();
    let mut tot = [Duration::ZERO; 3];
    for _ in 0..reps.max(1) {
        let msg: Vec<Fe> = (0..code.k()).map(|_| Fe(rng.gen_range(0..q))).collect();
        let (r, _) = corrupt(code.field(), &code.encode(&msg)?, params.tau, rng)?;
        let out = dec.decode(&r)?;
        for (acc, t) in tot.iter_mut().zip([out.t_basis, out.t_reduce, out.t_root]) {
            *acc += t;
        }
    }
    let ms = |d: Duration| d.as_secs_f64() * 1e3 / reps.max(1) as f64;
    let backend = match code.backend().kind() {
        CurveKind::Rational => "rational",
        CurveKind::Hermitian { .. } => "hermitian",
    };
    Ok(format!(
        "{backend},{q},{},{},{},{s},{l},{},{:.3},{:.3},{:.3}",
        code.n(),
        code.genus(),
        code.mu(),
        dec.precomp().map_or(0, |p| p.n_places()),
        ms(tot[0]),
        ms(tot[1]),
        ms(tot[2])
    ))
}

pub fn run(a: &BenchArgs) -> Result<ExitCode> {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let ss: Vec<usize> = parse_int_list(&a.s)?.into_iter().map(|s| s as usize).collect();
    let codes: Vec<Code> = match &a.code {
        Some(p) => vec![read_code_spec(p)?.build()?],
        None => {
            let field = Field::gf(a.q)?;
            parse_int_list(&a.n)?
                .into_iter()
                .map(|n| {
                    let pts: Vec<Fe> = (0..n).map(Fe).collect();
                    let m = (n as i64 / 4 - 1).max(0);
                    Ok(Code::new(Backend::rational(field.clone(), &pts)?, m)?)
                })
                .collect::<Result<_>>()
                .context("building sweep codes")?
        }
    };
    println!("{HEADER}");
    for code in &codes {
        for &s in &ss {
            println!("{}", row(code, s, a.l.max(s), a.reps, &mut rng)?);
        }
    }
    Ok(ExitCode::SUCCESS)
}
