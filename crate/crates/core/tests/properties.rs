use proptest::prelude::*;
use wdp_core::blowup_lc::{self, blowup_chart};
use wdp_core::exactnum::{verify_affine, Assignment, ClaimRelation, Relation};
use wdp_core::geometry::QuotientSingularity;
use wdp_core::wps::{self, Quintuple};
use wdp_core::{q, AffineForm, PiecewiseQuadratic, Polytope, QuadPoly, Rational};

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn rat() -> impl Strategy<Value = Rational> {
    (-60i64..=60, 1i64..=24).prop_map(|(n, d)| Rational::frac(n, d))
}

fn nonneg_rat() -> impl Strategy<Value = Rational> {
    (0i64..=60, 1i64..=24).prop_map(|(n, d)| Rational::frac(n, d))
}

fn simpson(p: &QuadPoly, lo: &Rational, hi: &Rational) -> Rational {
    let mid = (lo + hi) * q!(1, 2);
    (hi - lo) * q!(1, 6) * (p.eval(lo) + p.eval(&mid) * q!(4) + p.eval(hi))
}

/// A box `[0, ha] × [0, hb]` cut by `a + b ≤ s`.
fn clipped_box(ha: &Rational, hb: &Rational, s: &Rational) -> Polytope {
    Polytope::new(&["a", "b"])
        .unwrap()
        .with_range("a", Rational::zero(), ha.clone())
        .unwrap()
        .with_range("b", Rational::zero(), hb.clone())
        .unwrap()
        .with(AffineForm::var("a").with_term(q!(1), "b"), Relation::Le, s.clone())
        .unwrap()
}

fn singularity() -> impl Strategy<Value = (u64, u64, u64)> {
    (2u64..60).prop_flat_map(|n| (Just(n), 1..n, 1..n))
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn rational_field_laws(x in rat(), y in rat(), z in rat()) {
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        if !y.is_zero() {
            prop_assert_eq!(&x.checked_div(&y).unwrap() * &y, x.clone());
        }
        prop_assert!(x.checked_div(&Rational::zero()).is_err());
    }

    #[test]
    fn reduced_form_is_canonical(n in -500i64..500, d in 1i64..500, k in 1i64..40) {
        prop_assert_eq!(Rational::frac(n * k, d * k), Rational::frac(n, d));
        prop_assert_eq!(Rational::frac(n, d).to_string().parse::<String>().unwrap(), Rational::frac(n * k, d * k).to_string());
    }

    #[test]
    fn quadratic_integral_matches_simpson(c0 in rat(), c1 in rat(), c2 in rat(), lo in rat(), w in 1i64..30) {
        let p = QuadPoly::new(c0, c1, c2);
        let hi = &lo + &Rational::frac(w, 7);
        prop_assert_eq!(p.integrate(&lo, &hi), simpson(&p, &lo, &hi));
    }

    #[test]
    fn piecewise_integral_is_additive(c0 in rat(), c1 in rat(), c2 in rat(), cut in 1i64..9) {
        let p = QuadPoly::new(c0, c1, c2);
        let whole = PiecewiseQuadratic::single(q!(0), q!(1), p.clone()).unwrap();
        let split = whole.refine(&Rational::frac(cut, 10)).unwrap();
        prop_assert_eq!(split.breakpoints().len(), 3);
        prop_assert_eq!(split.integrate(), whole.integrate());
        prop_assert_eq!(whole.integrate(), simpson(&p, &q!(0), &q!(1)));
    }

}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn verify_affine_agrees_with_grid(
        ha in 1i64..=8, hb in 1i64..=8, s in 1i64..=12,
        ca in rat(), cb in rat(), c0 in rat(), bound in rat(),
    ) {
        let (ha, hb, s) = (Rational::frac(ha, 8), Rational::frac(hb, 8), Rational::frac(s, 8));
        let p = clipped_box(&ha, &hb, &s);
        let form = AffineForm::constant(c0).with_term(ca, "a").with_term(cb, "b");
        let verdict = p.check(&form, ClaimRelation::Le, &bound).unwrap();
        prop_assert!(p.contains(&verdict.witness).unwrap());
        prop_assert_eq!(form.eval(&verdict.witness).unwrap(), verdict.max.clone());
        let mut grid_max: Option<Rational> = None;
        for i in 0..=64 {
            for j in 0..=64 {
                let mut at = Assignment::new();
                at.insert("a".into(), Rational::frac(i, 64));
                at.insert("b".into(), Rational::frac(j, 64));
                if !p.contains(&at).unwrap() {
                    continue;
                }
                let v = form.eval(&at).unwrap();
                if grid_max.as_ref().is_none_or(|m| v > *m) {
                    grid_max = Some(v);
                }
            }
        }
        let grid_max = grid_max.unwrap();
        prop_assert!(grid_max <= verdict.max);
        // every vertex of this polytope lies on the 1/64 grid
        prop_assert_eq!(&grid_max, &verdict.max);
        prop_assert_eq!(verify_affine(&form, &p, &bound, ClaimRelation::Le).unwrap(), grid_max <= bound);
        prop_assert_eq!(verify_affine(&form, &p, &bound, ClaimRelation::Lt).unwrap(), grid_max < bound);
    }

}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn blowup_satisfies_orbifold_adjunction((n, a, b) in singularity()) {
        prop_assume!(gcd(a, n) == 1 && gcd(b, n) == 1 && gcd(a, b) == 1);
        let sing = QuotientSingularity::new("O", n, a, b).unwrap();
        let c = blowup_chart(&sing).unwrap();
        prop_assert_eq!(&c.e_selfint * &Rational::frac((a * b) as i64, 1), Rational::frac(-(n as i64), 1));
        // (K + E)·E = -2 + Σ (1 - 1/r) over the points of E
        let lhs = (&c.discrepancy + &q!(1)) * &c.e_selfint;
        let rhs = c.e_sings.iter().fold(q!(-2), |acc, p| acc + q!(1) - Rational::frac(1, p.n as i64));
        prop_assert_eq!(lhs, rhs);
        let mut orders: Vec<u64> = c.e_sings.iter().map(|p| p.n).collect();
        orders.sort_unstable();
        let mut expected: Vec<u64> = [a, b].into_iter().filter(|&r| r > 1).collect();
        expected.sort_unstable();
        prop_assert_eq!(orders, expected);
    }

    #[test]
    fn lct_is_monotone_and_capped(w1 in 1u64..40, w2 in 1u64..40, d in 1u64..200, extra in 0u64..50) {
        let l = blowup_lc::lct_germ(w1, w2, d).unwrap();
        let l2 = blowup_lc::lct_germ(w1, w2, d + extra).unwrap();
        prop_assert!(l2 <= l);
        prop_assert!(l <= q!(1) && l.is_positive());
        if w1 + w2 <= d {
            prop_assert_eq!(l, Rational::frac((w1 + w2) as i64, d as i64));
        }
    }

    #[test]
    fn transform_coefficient_is_min_weighted_degree(
        monos in proptest::collection::vec((0u64..10, 0u64..10), 1..6),
        w1 in 1u64..20, w2 in 1u64..20, n in 1u64..40,
    ) {
        let t = blowup_lc::transform_coefficient(&monos, (w1, w2), n).unwrap();
        let brute = monos.iter().map(|&(e1, e2)| Rational::frac((e1 * w1 + e2 * w2) as i64, n as i64)).min().unwrap();
        prop_assert_eq!(t, brute);
    }

    #[test]
    fn window_doubles(alpha in nonneg_rat()) {
        prop_assume!(alpha.is_positive());
        let (lo, hi) = blowup_lc::alpha_delta_window(&alpha).unwrap();
        prop_assert_eq!(&lo * &q!(2), hi.clone());
        prop_assert_eq!(hi, &alpha * &q!(3));
    }

    #[test]
    fn section_dims_are_clamped_hilbert_differences(w0 in 1u64..6, w1 in 1u64..8, w2 in 1u64..10, w3 in 1u64..12, d in 1u64..30, m in 0i64..80) {
        let mut w = [w0, w1, w2, w3];
        w.sort_unstable();
        let q = Quintuple::new(w, d).unwrap();
        let diff = wps::count_monomials(m, &q) as i128 - wps::count_monomials(m - d as i64, &q) as i128;
        prop_assert_eq!(wps::section_dim(m, &q) as i128, diff.max(0));
    }
}

#[test]
fn shipped_blowup_closed_forms() {
    let cases = [
        ((7, 3, 5), q!(1, 7), q!(-7, 15)),
        ((5, 3, 4), q!(2, 5), q!(-5, 12)),
        ((19, 2, 3), q!(-14, 19), q!(-19, 6)),
        ((25, 2, 3), q!(-4, 5), q!(-25, 6)),
        ((37, 2, 3), q!(-32, 37), q!(-37, 6)),
        ((55, 2, 3), q!(-10, 11), q!(-55, 6)),
    ];
    for ((n, a, b), disc, e2) in cases {
        let c = blowup_chart(&QuotientSingularity::new("O", n, a, b).unwrap()).unwrap();
        assert_eq!(c.discrepancy, disc, "1/{n}({a},{b})");
        assert_eq!(c.e_selfint, e2, "1/{n}({a},{b})");
    }
}

#[test]
fn lct_germ_values() {
    assert_eq!(blowup_lc::lct_germ(1, 7, 15).unwrap(), q!(8, 15));
    assert_eq!(blowup_lc::lct_germ(2, 5, 12).unwrap(), q!(7, 12));
    assert_eq!(blowup_lc::lct_germ(3, 4, 2).unwrap(), q!(1));
    assert!(blowup_lc::lct_germ(1, 1, 0).is_err());
}
