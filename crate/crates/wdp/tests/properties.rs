mod common;

use common::{catalog, minus_k, surface, CASE_C};
use proptest::prelude::*;
use wdp::expr;
use wdp::report::{self, ReportJson, RunOptions};
use wdp_core::basisbound;
use wdp_core::positivity::{self, QDivisor};
use wdp_core::{q, Rational};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn case_c() -> impl Strategy<Value = &'static str> {
    prop::sample::select(CASE_C.to_vec())
}

fn fraction() -> impl Strategy<Value = Rational> {
    (0i64..=256).prop_map(|n| Rational::frac(n, 256))
}

fn brute_sections(m: i64, w: [u64; 4], d: u64) -> u128 {
    let count = |m: i64| -> u128 {
        let mut n = 0;
        for i in 0..=m.max(-1) {
            for j in 0..=m.max(-1) {
                let rest = m - i * w[0] as i64 - j * w[1] as i64;
                if rest < 0 {
                    break;
                }
                for k in 0..=rest / w[2] as i64 {
                    n += u128::from((rest - k * w[2] as i64) % w[3] as i64 == 0);
                }
            }
        }
        n
    };
    count(m) - count(m - d as i64)
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn profile_matches_pointwise_volume(name in case_c(), t in fraction(), along_l in any::<bool>()) {
        let s = surface(name);
        let dir = if along_l { "L_xz" } else { "R_x" };
        let prof = positivity::volume_profile(&minus_k(&s), dir, &s).unwrap();
        let x = &prof.pe_threshold * &t;
        let direct = positivity::volume(&(&minus_k(&s) - &QDivisor::curve(dir).scale(&x)), &s).unwrap();
        prop_assert_eq!(prof.eval(&x).unwrap(), direct);
    }

    #[test]
    fn zariski_invariants_hold_along_rays(name in case_c(), t in fraction(), along_l in any::<bool>()) {
        let s = surface(name);
        let dir = if along_l { "L_xz" } else { "R_x" };
        let tau = positivity::pe_threshold(&minus_k(&s), dir, &s).unwrap();
        let d = &minus_k(&s) - &QDivisor::curve(dir).scale(&(&tau * &t));
        prop_assert_eq!(common::zariski_invariants(&d, &s), Ok(()));
    }

    #[test]
    fn volume_is_homogeneous_of_degree_two(name in case_c(), t in fraction(), c in 1i64..8) {
        let s = surface(name);
        let tau = positivity::pe_threshold(&minus_k(&s), "L_xz", &s).unwrap();
        let d = &minus_k(&s) - &QDivisor::curve("L_xz").scale(&(&tau * &t));
        let scaled = d.scale(&q!(c));
        prop_assert_eq!(positivity::volume(&scaled, &s).unwrap(), positivity::volume(&d, &s).unwrap() * q!(c * c));
    }

    #[test]
    fn rationals_round_trip_through_the_parser(n in -10_000i64..10_000, d in 1i64..10_000) {
        let r = Rational::frac(n, d);
        prop_assert_eq!(expr::parse_rational(&r.to_string()).unwrap(), r);
    }

    #[test]
    fn lambda_polynomials_round_trip(c1 in -50i64..50, d1 in 1i64..50, c0 in -50i64..50, d0 in 1i64..50, l in 1i64..40) {
        let text = format!("{}*lambda + {}", Rational::frac(c1, d1), Rational::frac(c0, d0)).replace("+ -", "- ");
        let p = expr::parse_lambda_poly(&text).unwrap();
        let lambda = Rational::frac(l, 17);
        prop_assert_eq!(p.eval(&lambda).unwrap(), Rational::frac(c1, d1) * &lambda + Rational::frac(c0, d0));
        prop_assert_eq!(expr::parse_lambda_poly(&p.to_string()).unwrap(), p);
    }
}

#[test]
fn filtration_counts_match_enumeration() {
    for name in ["S15", "S12", "S64", "S82"] {
        let s = surface(name);
        let w = s.quintuple().weights();
        let d = s.quintuple().degree();
        for k in 1..=30u64 {
            let top = k as i64 * s.amplitude();
            let result = basisbound::discrete_filtration(&s, "C_x", k);
            if brute_sections(top, w, d) == 0 {
                assert!(result.is_err(), "{name} k={k}: h0 vanishes");
                continue;
            }
            let f = result.unwrap();
            for (i, r) in f.r.iter().enumerate() {
                assert_eq!(*r, brute_sections(top - i as i64 * w[0] as i64, w, d), "{name} k={k} i={i}");
            }
            let next = top - f.r.len() as i64 * w[0] as i64;
            assert_eq!(brute_sections(next, w, d), 0, "{name} k={k}: counts stop early");
            assert!(f.r.windows(2).all(|p| p[0] >= p[1]), "{name} k={k}");
            let tail: u128 = f.r.iter().skip(1).sum();
            assert_eq!(f.discrete_bound, Rational::from_u128(tail) / (q!(k as i64) * Rational::from_u128(f.r[0])));
        }
    }
}

#[test]
fn filtration_undefined_off_coordinate_sections() {
    let s = surface("S45");
    for c in ["L_xz", "R_x", "C_x"] {
        assert!(basisbound::discrete_filtration(&s, c, 10).is_err(), "{c}");
    }
    assert!(basisbound::discrete_filtration(&surface("S15"), "C_x", 0).is_err());
}

#[test]
fn s_invariants_and_caps() {
    let expected = [
        ("S15", "C_x", q!(1, 3)),
        ("S45", "L_xz", q!(118, 315)),
        ("S45", "R_x", q!(97, 315)),
        ("S81", "L_xz", q!(760, 1701)),
        ("S81", "R_x", q!(676, 1701)),
        ("S117", "L_xz", q!(1310, 2457)),
        ("S117", "R_x", q!(1205, 2457)),
    ];
    for (name, c, v) in expected {
        let s = surface(name);
        let b = basisbound::s_invariant(&minus_k(&s), c, &s).unwrap();
        assert_eq!(b.s_value, v, "{name} {c}");
        assert!(b.s_value.is_positive() && b.s_value <= b.tau);
    }
    let s15 = surface("S15");
    let b = basisbound::s_invariant(&minus_k(&s15), "C_x", &s15).unwrap();
    assert_eq!(b.method, basisbound::Method::Proportional);
    assert_eq!(b.s_value, basisbound::proportional_bound(&q!(1)).unwrap());
    let s64 = surface("S64");
    let b = basisbound::s_invariant(&minus_k(&s64), "C_x", &s64).unwrap();
    assert_eq!(b.s_value, basisbound::proportional_bound(&q!(7, 9)).unwrap());
    assert_eq!(b.s_value, q!(3, 7));
    assert_eq!(basisbound::proportional_bound(&q!(2)).unwrap(), q!(1, 6));
    assert!(basisbound::proportional_bound(&q!(0)).is_err());
}

#[test]
fn admissibility_against_shipped_caps() {
    let cat = catalog();
    let sel: Vec<_> = cat.surfaces.iter().collect();
    let r = report::run(&cat, &sel, &RunOptions { lambda: None, basis_bounds: true }).unwrap();
    let mut failing: Vec<(String, String)> = r
        .surfaces
        .iter()
        .flat_map(|s| s.basis_bounds.iter().filter(|b| !b.admissible()).map(move |b| (s.surface.clone(), b.curve.clone())))
        .collect();
    failing.sort();
    assert_eq!(failing, [("S117".to_string(), "R_x".to_string()), ("S81".to_string(), "R_x".to_string())]);
    assert!(r.pass(), "warnings do not fail the report");
}

#[test]
fn json_report_round_trips_and_is_deterministic() {
    let cat = catalog();
    let sel: Vec<_> = cat.surfaces.iter().collect();
    let opts = RunOptions { lambda: None, basis_bounds: true };
    let first = report::render_json(&report::to_json(&report::run(&cat, &sel, &opts).unwrap()));
    let second = report::render_json(&report::to_json(&report::run(&cat, &sel, &opts).unwrap()));
    assert_eq!(first, second);
    let parsed: ReportJson = serde_json::from_str(&first).unwrap();
    assert_eq!(report::render_json(&parsed), first);
}

#[test]
fn lambda_override_produces_witnesses() {
    let cat = catalog();
    let s45 = surface("S45");
    let opts = RunOptions { lambda: Some(q!(3, 2)), basis_bounds: false };
    let r = report::run(&cat, &[&s45], &opts).unwrap();
    assert!(!r.pass());
    let json = report::to_json(&r);
    let failing: Vec<_> = json.surfaces[0].claims.iter().filter(|c| c.verdict == "fail").collect();
    assert!(!failing.is_empty());
    assert!(failing.iter().all(|c| c.witness_vertex.is_some()));
    assert!(json.surfaces[0].claims.iter().filter(|c| c.verdict == "pass").all(|c| c.witness_vertex.is_none()));
}
