use aglist::funcfield::{Backend, CurveKind};
use aglist::gf::{Fe, Field, FieldSpec};
use aglist::gsdecoder::{
    brute_force_decode, corrupt, guaranteed_radius, hamming_distance, Code, CodeConfig, DecodeParams, Decoder,
    Precomp, RoutePolicy,
};
use aglist::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rs(q: u32, n: u32, m: i64) -> Code {
    let pts: Vec<Fe> = (0..n).map(Fe).collect();
    Code::new(Backend::rational(Field::gf(q).unwrap(), &pts).unwrap(), m).unwrap()
}

fn herm(q0: u32, fibers: u32, m: i64) -> Code {
    let xs: Vec<Fe> = (0..fibers).map(Fe).collect();
    Code::new(Backend::hermitian(Field::gf(q0 * q0).unwrap(), q0, &xs).unwrap(), m).unwrap()
}

fn random_msg(code: &Code, rng: &mut ChaCha8Rng) -> Vec<Fe> {
    (0..code.k()).map(|_| Fe(rng.gen_range(0..code.field().order()))).collect()
}

#[test]
fn pointwise_and_exact_routes_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (code, s, l, tau) in [(rs(64, 12, 2), 2, 3, 5), (herm(4, 3, 7), 2, 2, 1), (herm(4, 2, 3), 1, 1, 1)] {
        let p = DecodeParams { s, l, tau };
        let pw = Decoder::new(code.clone(), p, RoutePolicy::Pointwise).unwrap().force(true);
        let ex = Decoder::new(code.clone(), p, RoutePolicy::Exact).unwrap().force(true);
        for _ in 0..6 {
            let msg = random_msg(&code, &mut rng);
            let (r, _) = corrupt(code.field(), &code.encode(&msg).unwrap(), tau, &mut rng).unwrap();
            let a = pw.basis(&r).unwrap();
            let b = ex.basis(&r).unwrap();
            assert_eq!(a.matrix, b.matrix);
            let (da, db) = (pw.decode(&r), ex.decode(&r));
            assert_eq!(da.as_ref().map(|o| &o.candidates).ok(), db.as_ref().map(|o| &o.candidates).ok());
        }
    }
}

#[test]
fn rs_radius_monte_carlo() {
    let code = rs(64, 16, 3);
    let params = DecodeParams::with_guaranteed_radius(&code, 2, 4).unwrap();
    // Johnson-type improvement over unique decoding: (16 - 3 - 1) / 2 = 6
    assert!(params.tau > 6, "tau = {}", params.tau);
    let dec = Decoder::new(code.clone(), params, RoutePolicy::Auto).unwrap();
    assert!(dec.precomp().is_some());
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let msg = random_msg(&code, &mut rng);
        let cw = code.encode(&msg).unwrap();
        let (r, pos) = corrupt(code.field(), &cw, params.tau, &mut rng).unwrap();
        assert_eq!(pos.len(), params.tau);
        let out = dec.decode(&r).unwrap();
        assert!(out.candidates.iter().any(|c| c.codeword == cw));
        assert!(out.degrees.violations().is_empty());
        assert!(out.candidates.windows(2).all(|w| w[0] <= w[1]));
    }
}

/// The dimension count behind `guaranteed_radius`, evaluated at `tau`.
fn count_holds(code: &Code, s: usize, l: usize, tau: usize) -> bool {
    let (n, g, m) = (code.n() as i64, code.genus() as i64, code.m());
    let (s, l, tau) = (s as i64, l as i64, tau as i64);
    let d = s * (n - tau) - 1;
    (l + 1) * (d + 1 - g) - m * l * (l + 1) / 2 > n * s * (s + 1) / 2
}

#[test]
fn hermitian_q0_2_matches_brute_force() {
    // GF(4), two full fibers, n = 4, g = 1
    let code = herm(2, 2, 2);
    assert_eq!((code.n(), code.genus(), code.mu(), code.k()), (4, 1, 2, 2));
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut compared = 0;
    for (s, l) in [(1, 1), (2, 2), (2, 3), (3, 4)] {
        let tau = guaranteed_radius(&code, s, l);
        let dec = Decoder::new(code.clone(), DecodeParams { s, l, tau }, RoutePolicy::Auto).unwrap();
        for _ in 0..20 {
            let r: Vec<Fe> = (0..4).map(|_| Fe(rng.gen_range(0..4))).collect();
            match dec.decode(&r) {
                Ok(out) => {
                    assert_eq!(out.candidates, brute_force_decode(&code, &r, tau, None).unwrap());
                    compared += 1;
                }
                // without a guarantee the interpolant may be too large
                Err(Error::RadiusTooLarge { .. }) => assert!(!count_holds(&code, s, l, tau), "s={s} l={l}"),
                Err(e) => panic!("{e}"),
            }
        }
    }
    assert!(compared >= 60);
}

#[test]
fn serialization_round_trips() {
    let cfg = CodeConfig {
        field: FieldSpec::for_order(16).unwrap(),
        backend: CurveKind::Hermitian { q0: 4 },
        points: vec![0, 1, 2],
        m: 7,
        label: Some("h".into()),
    };
    let code = cfg.build().unwrap();
    assert_eq!(code.config(Some("h".into())), cfg);
    let text = serde_json::to_string(&cfg).unwrap();
    assert!(text.contains("\"D\":[0,1,2]"));
    assert_eq!(serde_json::from_str::<CodeConfig>(&text).unwrap(), cfg);

    let pre = Precomp::new(&code, 2, 2).unwrap();
    assert_eq!(pre.n_places(), 51);
    let back: Precomp = serde_json::from_str(&serde_json::to_string(&pre).unwrap()).unwrap();
    assert_eq!(back, pre);
    Decoder::with_precomp(code, DecodeParams { s: 2, l: 2, tau: 0 }, back).unwrap();
}

fn rs_decoder() -> (Code, Decoder) {
    let code = rs(16, 12, 2);
    let p = DecodeParams::with_guaranteed_radius(&code, 2, 3).unwrap();
    let dec = Decoder::new(code.clone(), p, RoutePolicy::Auto).unwrap();
    (code, dec)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn list_is_the_ball_around_the_word(msg in prop::collection::vec(0u32..16, 3), e in 0usize..=5, seed: u64) {
        let (code, dec) = rs_decoder();
        let msg: Vec<Fe> = msg.into_iter().map(Fe).collect();
        let cw = code.encode(&msg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (r, _) = corrupt(code.field(), &cw, e, &mut rng).unwrap();
        let out = dec.decode(&r).unwrap();
        let sent = out.candidates.iter().find(|c| c.message == msg);
        prop_assert_eq!(sent.map(|c| c.distance), Some(e));
        for c in &out.candidates {
            prop_assert!(c.distance <= dec.params().tau);
            prop_assert_eq!(hamming_distance(&c.codeword, &r), c.distance);
            prop_assert_eq!(&code.encode(&c.message).unwrap(), &c.codeword);
        }
    }

    #[test]
    fn random_words_agree_with_brute_force(r in prop::collection::vec(0u32..16, 12)) {
        let (code, dec) = rs_decoder();
        let r: Vec<Fe> = r.into_iter().map(Fe).collect();
        let got = dec.decode(&r).unwrap().candidates;
        prop_assert_eq!(got, brute_force_decode(&code, &r, dec.params().tau, None).unwrap());
    }
}
