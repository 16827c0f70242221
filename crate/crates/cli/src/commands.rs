use std::fs;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use aglist::funcfield::CurveKind;
use aglist::gf::{Fe, FieldSpec};
use aglist::gsdecoder::{
    corrupt as corrupt_word, guaranteed_radius, Code, CodeConfig, DecodeParams, Decoder, Precomp, RootFinding,
    RoutePolicy,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::files::{
    code_spec_text, format_word, parse_int_list, read_code_spec, read_words, words_text, write_output,
};
use crate::{CorruptArgs, DecodeArgs, EncodeArgs, MakeCodeArgs, PrecomputeArgs, RootArg, RouteArg};

fn load_code(path: &Path) -> Result<Code> {
    let cfg = read_code_spec(path)?;
    cfg.build().with_context(|| format!("invalid code spec {}", path.display()))
}

pub fn summary(code: &Code) -> String {
    format!(
        "n={} k={} g={} mu={} designed_distance={}",
        code.n(),
        code.k(),
        code.genus(),
        code.mu(),
        code.designed_distance()
    )
}

pub fn make_code(a: &MakeCodeArgs) -> Result<ExitCode> {
    let (field, backend, points) = if a.rational {
        let q = a.q.context("--rational needs --q")?;
        let pts = a.points.as_deref().context("--rational needs --points")?;
        (FieldSpec::for_order(q)?, CurveKind::Rational, parse_int_list(pts)?)
    } else {
        let q0 = a.q0.context("--hermitian needs --q0")?;
        let xs = match (a.fibers, a.fiber_xs.as_deref()) {
            (Some(k), None) => (0..k).collect(),
            (None, Some(list)) => parse_int_list(list)?,
            _ => bail!("--hermitian needs --fibers or --fiber-xs"),
        };
        let q = q0.checked_mul(q0).context("q0 too large")?;
        (FieldSpec::for_order(q)?, CurveKind::Hermitian { q0 }, xs)
    };
    let cfg = CodeConfig { field, backend, points, m: a.m, label: a.label.clone() };
    let code = cfg.build()?;
    let text = code_spec_text(&cfg)?;
    match &a.out {
        Some(p) => {
            fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
            println!("{}", summary(&code));
        }
        None => {
            print!("{text}");
            eprintln!("{}", summary(&code));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn precompute(a: &PrecomputeArgs) -> Result<ExitCode> {
    let code = load_code(&a.code)?;
    DecodeParams { s: a.s, l: a.l, tau: 0 }.validate(&code)?;
    let pre = Precomp::with_places(&code, a.s, a.l, a.places)?;
    let text = serde_json::to_string(&pre)? + "\n";
    fs::write(&a.out, &text).with_context(|| format!("writing {}", a.out.display()))?;
    println!("N={}", pre.n_places());
    for t in &pre.tables {
        let bytes = serde_json::to_vec(t)?;
        println!("table alpha={} beta={} sha256={}", t.divisor.alpha, t.divisor.beta, sha256_hex(&bytes));
    }
    println!("file sha256={}", sha256_hex(text.as_bytes()));
    Ok(ExitCode::SUCCESS)
}

pub fn encode(a: &EncodeArgs) -> Result<ExitCode> {
    let code = load_code(&a.code)?;
    let msgs = read_words(&a.input, code.field(), code.k())?;
    let words = msgs.iter().map(|m| code.encode(m)).collect::<aglist::Result<Vec<_>>>()?;
    write_output(a.out.as_deref(), &words_text(&words))?;
    Ok(ExitCode::SUCCESS)
}

pub fn corrupt(a: &CorruptArgs) -> Result<ExitCode> {
    let code = load_code(&a.code)?;
    let words = read_words(&a.input, code.field(), code.n())?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut out = Vec::with_capacity(words.len());
    for w in &words {
        out.push(corrupt_word(code.field(), w, a.errors, &mut rng)?.0);
    }
    write_output(a.out.as_deref(), &words_text(&out))?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct Record<'a> {
    word: usize,
    distance: usize,
    message: &'a [Fe],
    codeword: &'a [Fe],
}

pub fn decode(a: &DecodeArgs) -> Result<ExitCode> {
    let code = load_code(&a.code)?;
    let words = read_words(&a.input, code.field(), code.n())?;
    let guaranteed = guaranteed_radius(&code, a.s, a.l);
    let tau = a.tau.unwrap_or(guaranteed);
    if tau > guaranteed && !a.force {
        bail!("tau = {tau} exceeds the guaranteed radius {guaranteed}; pass --force to try anyway");
    }
    let params = DecodeParams { s: a.s, l: a.l, tau };
    let dec = match &a.precomp {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            let pre: Precomp = serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?;
            Decoder::with_precomp(code.clone(), params, pre)?
        }
        None => {
            let policy = match a.route.unwrap_or(RouteArg::Auto) {
                RouteArg::Auto => RoutePolicy::Auto,
                RouteArg::Pointwise => RoutePolicy::Pointwise,
                RouteArg::Exact => RoutePolicy::Exact,
            };
            Decoder::new(code.clone(), params, policy)?
        }
    };
    let strategy = match a.root_finding {
        RootArg::Auto => RootFinding::Auto,
        RootArg::RothRuckenstein => RootFinding::RothRuckenstein,
        RootArg::Enumerate => RootFinding::Enumerate,
    };
    let dec = dec.force(a.force).root_finding(strategy, a.enumeration_cap);
    if let Some(dir) = &a.dump_matrices {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }

    let pool = rayon::ThreadPoolBuilder::new().num_threads(a.jobs.max(1)).build()?;
    let results: Vec<Result<String>> = pool.install(|| {
        words
            .par_iter()
            .enumerate()
            .map(|(i, r)| {
                if let Some(dir) = &a.dump_matrices {
                    let path = dir.join(format!("word_{i}.txt"));
                    fs::write(&path, dec.basis(r)?.dump()).with_context(|| format!("writing {}", path.display()))?;
                }
                let out = dec.decode(r).with_context(|| format!("word {i} ({})", format_word(r)))?;
                let mut lines = String::new();
                for c in &out.candidates {
                    let rec = Record { word: i, distance: c.distance, message: &c.message, codeword: &c.codeword };
                    lines.push_str(&serde_json::to_string(&rec)?);
                    lines.push('\n');
                }
                Ok(lines)
            })
            .collect()
    });

    let mut text = String::new();
    let mut found = 0;
    for res in &results {
        match res {
            Ok(lines) if !lines.is_empty() => {
                found += 1;
                text.push_str(lines);
            }
            Ok(_) => {}
            Err(e) => eprintln!("warning: {e:#}"),
        }
    }
    write_output(a.out.as_deref(), &text)?;
    let route = if dec.precomp().is_some() { "pointwise" } else { "exact" };
    eprintln!("{found}/{} words with a nonempty list (s={} l={} tau={tau}, route={route})", words.len(), a.s, a.l);
    Ok(if found == words.len() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
