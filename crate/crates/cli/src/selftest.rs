//! Invariant checks on pinned configurations. One line per check; each
//! names the module and the property it exercises.

use std::process::ExitCode;

use aglist::funcfield::Backend;
use aglist::gf::{Fe, Field};
use aglist::gsdecoder::{
    brute_force_decode, build_matm_oracle, corrupt, interpolant_of_row, multiplicity_check, Code, DecodeParams,
    Decoder, RoutePolicy,
};
use aglist::polmat::{pm_divrem, popov_form, random_matrix, random_unimodular, ShiftVec};
use aglist::upoly::Poly;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn rs16() -> Code {
    let pts: Vec<Fe> = (0..12).map(Fe).collect();
    Code::new(Backend::rational(Field::gf(16).unwrap(), &pts).unwrap(), 2).unwrap()
}

fn herm16() -> Code {
    Code::new(Backend::hermitian(Field::gf(16).unwrap(), 4, &[Fe(0), Fe(1), Fe(2)]).unwrap(), 7).unwrap()
}

fn rand_fe(f: &Field, rng: &mut ChaCha8Rng) -> Fe {
    Fe(rng.gen_range(0..f.order()))
}

fn field_axioms(rng: &mut ChaCha8Rng) -> Check {
    let mut n = 0;
    for q in [5, 9, 16, 256, 3125] {
        let f = Field::gf(q).map_err(|e| e.to_string())?;
        for _ in 0..2000 {
            let (a, b, c) = (rand_fe(&f, rng), rand_fe(&f, rng), rand_fe(&f, rng));
            let ok = f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
                && f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
                && f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
                && f.mul(a, b) == f.mul(b, a)
                && (a.is_zero() || f.mul(a, f.inv(a).unwrap()) == Fe::ONE);
            if !ok {
                return Err(format!("GF({q}) fails on ({}, {}, {})", a.0, b.0, c.0));
            }
            n += 1;
        }
    }
    Ok(format!("{n} random triples over 5 fields"))
}

fn poly_divrem(rng: &mut ChaCha8Rng) -> Check {
    let f = Field::gf(5).unwrap();
    for _ in 0..200 {
        let a = random_poly(&f, rng, 12);
        let mut b = random_poly(&f, rng, 5);
        if b.is_zero() {
            b = Poly::one();
        }
        let (q, r) = a.divrem(&f, &b).map_err(|e| e.to_string())?;
        if q.mul(&f, &b).add(&f, &r) != a || r.deg().is_some_and(|d| Some(d) >= b.deg()) {
            return Err("a != q b + r or deg r >= deg b".into());
        }
    }
    Ok("200 divisions over GF(5)".into())
}

fn random_poly(f: &Field, rng: &mut ChaCha8Rng, d: usize) -> Poly {
    Poly::from_coeffs((0..=d).map(|_| rand_fe(f, rng)).collect())
}

fn popov_canonicity(rng: &mut ChaCha8Rng) -> Check {
    let f = Field::gf(5).unwrap();
    let shift = ShiftVec::zero(3);
    for _ in 0..10 {
        let m = random_matrix(rng, 5, 3, 3, 3);
        let p = popov_form(&f, &m, &shift).map_err(|e| e.to_string())?;
        for _ in 0..5 {
            let u = random_unimodular(&f, 3, 8, 2, rng);
            let um = u.mul(&f, &m).map_err(|e| e.to_string())?;
            if popov_form(&f, &um, &shift).map_err(|e| e.to_string())? != p {
                return Err("Popov form changed under a unimodular transform".into());
            }
        }
    }
    Ok("10 matrices x 5 transforms over GF(5)".into())
}

fn divrem_round_trip(rng: &mut ChaCha8Rng) -> Check {
    let f = Field::gf(5).unwrap();
    let mut done = 0;
    while done < 30 {
        let b = random_matrix(rng, 5, 3, 3, 2);
        if b.determinant(&f).map_or(true, |d| d.is_zero()) {
            continue;
        }
        let a = random_matrix(rng, 5, 2, 3, 5);
        let (q, r) = pm_divrem(&f, &a, &b).map_err(|e| e.to_string())?;
        let back = q.mul(&f, &b).and_then(|qb| qb.add(&f, &r)).map_err(|e| e.to_string())?;
        if back != a || (!r.is_zero() && r.deg() >= b.deg()) {
            return Err("A != Q B + R or deg R >= deg B".into());
        }
        done += 1;
    }
    Ok(format!("{done} divisions, 3x3 divisors over GF(5)"))
}

fn code_round_trip(rng: &mut ChaCha8Rng) -> Check {
    for code in [rs16(), herm16()] {
        for _ in 0..20 {
            let msg: Vec<Fe> = (0..code.k()).map(|_| rand_fe(code.field(), rng)).collect();
            let f = code.message_function(&msg).map_err(|e| e.to_string())?;
            if code.message_of(&f).as_deref() != Some(&msg[..]) {
                return Err(format!("message {msg:?} does not round-trip"));
            }
        }
    }
    Ok("40 messages on RS and Hermitian codes".into())
}

fn module_checks(rng: &mut ChaCha8Rng) -> Check {
    let (mut oracle, mut member, mut degree) = (0, 0, 0);
    for (code, s, l) in [(rs16(), 2, 3), (herm16(), 2, 2)] {
        let dec = Decoder::new(code.clone(), DecodeParams { s, l, tau: 0 }, RoutePolicy::Auto)
            .map_err(|e| e.to_string())?;
        for _ in 0..3 {
            let r: Vec<Fe> = (0..code.n()).map(|_| rand_fe(code.field(), rng)).collect();
            let basis = dec.basis(&r).map_err(|e| e.to_string())?;
            let f = code.field();
            let want = build_matm_oracle(&r, &code, s, l).map_err(|e| e.to_string())?;
            let a = popov_form(f, &basis.matrix, &basis.shift).map_err(|e| e.to_string())?;
            let b = popov_form(f, &want, &basis.shift).map_err(|e| e.to_string())?;
            if a != b {
                return Err("gsdecoder/module equality: popov(B) differs from the oracle".into());
            }
            oracle += 1;
            for i in 0..basis.matrix.nrows() {
                let q = interpolant_of_row(&code, basis.matrix.row(i));
                for (j, p) in code.backend().d_places().iter().enumerate() {
                    if !multiplicity_check(code.backend(), &q, *p, r[j], s).map_err(|e| e.to_string())? {
                        return Err(format!("gsdecoder/membership: row {i} fails at position {j}"));
                    }
                    member += 1;
                }
            }
            let rep = basis.degree_report(&code);
            if let Some(v) = rep.violations().first() {
                return Err(format!("gsdecoder/degree bounds: {} = {} vs {}", v.name, v.value, v.bound));
            }
            degree += rep.checks.len();
        }
    }
    Ok(format!("{oracle} oracle comparisons, {member} multiplicity checks, {degree} degree bounds"))
}

fn decode_vs_brute_force(rng: &mut ChaCha8Rng) -> Check {
    let code = rs16();
    let params = DecodeParams::with_guaranteed_radius(&code, 2, 3).map_err(|e| e.to_string())?;
    let dec = Decoder::new(code.clone(), params, RoutePolicy::Auto).map_err(|e| e.to_string())?;
    for i in 0..20 {
        let r: Vec<Fe> = if i % 2 == 0 {
            (0..code.n()).map(|_| rand_fe(code.field(), rng)).collect()
        } else {
            let msg: Vec<Fe> = (0..code.k()).map(|_| rand_fe(code.field(), rng)).collect();
            corrupt(code.field(), &code.encode(&msg).unwrap(), params.tau, rng).unwrap().0
        };
        let got = dec.decode(&r).map_err(|e| e.to_string())?.candidates;
        let want = brute_force_decode(&code, &r, params.tau, None).map_err(|e| e.to_string())?;
        if got != want {
            return Err(format!("lists differ on word {i}: {} vs {}", got.len(), want.len()));
        }
    }
    Ok(format!("20 words at tau={} on RS GF(16) n=12", params.tau))
}

fn hermitian_end_to_end(rng: &mut ChaCha8Rng) -> Check {
    let code = herm16();
    let params = DecodeParams::with_guaranteed_radius(&code, 2, 2).map_err(|e| e.to_string())?;
    let dec = Decoder::new(code.clone(), params, RoutePolicy::Auto).map_err(|e| e.to_string())?;
    for _ in 0..5 {
        let msg: Vec<Fe> = (0..code.k()).map(|_| rand_fe(code.field(), rng)).collect();
        let (r, _) = corrupt(code.field(), &code.encode(&msg).unwrap(), params.tau, rng).unwrap();
        let out = dec.decode(&r).map_err(|e| e.to_string())?;
        if !out.candidates.iter().any(|c| c.message == msg) {
            return Err("sent codeword missing from the list".into());
        }
    }
    let route = if dec.precomp().is_some() { "pointwise" } else { "exact" };
    Ok(format!("5 words at tau={} on the Hermitian code over GF(16), route={route}", params.tau))
}

pub fn run() -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let checks: [(&str, fn(&mut ChaCha8Rng) -> Check); 8] = [
        ("gf/field axioms", field_axioms),
        ("upoly/division with remainder", poly_divrem),
        ("polmat/popov canonicity", popov_canonicity),
        ("polmat/pm_divrem round trip", divrem_round_trip),
        ("gsdecoder/message round trip", code_round_trip),
        ("gsdecoder/module equality, membership, degree bounds", module_checks),
        ("gsdecoder/decode equals brute force", decode_vs_brute_force),
        ("gsdecoder/hermitian end to end", hermitian_end_to_end),
    ];
    let mut failed = 0;
    for (name, check) in checks {
        match check(&mut rng) {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    println!("selftest: {} of {} checks pass", checks.len() - failed, checks.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
