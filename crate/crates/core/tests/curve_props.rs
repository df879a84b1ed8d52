use num_complex::Complex64;
use proptest::prelude::*;
use qgrowth::calculus::{self, DiffSpec, FnCurve, Grid, Thresholds};
use qgrowth::growth::{self, QuadratureSpec};
use qgrowth::harmonic_ref::{Basis, HarmonicCombo};
use qgrowth::qfun::{self, QFunction};

fn cfg() -> ProptestConfig {
    ProptestConfig {
        cases: 24,
        ..ProptestConfig::default()
    }
}

fn plane_combo() -> impl Strategy<Value = HarmonicCombo> {
    prop::collection::vec((0u32..=4, any::<bool>(), -2.0f64..2.0), 1..4).prop_filter_map("trivial", |terms| {
        let terms: Vec<(Basis, f64)> = terms
            .into_iter()
            .map(|(k, re, c)| (if re || k == 0 { Basis::Re(k) } else { Basis::Im(k) }, c))
            .collect();
        let u = HarmonicCombo::new(2, terms).ok()?;
        (!u.is_trivial() && u.polynomial().max_abs_coefficient() > 1e-3).then_some(u)
    })
}

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn branches_solve_the_defining_equation(q in 2usize..=4, ar in -2.0f64..2.0, br in -2.0f64..2.0, r in 0.05f64..0.95, t in 0.0f64..std::f64::consts::TAU) {
        let (a, b) = (Complex64::new(ar, 0.3), Complex64::new(br, -0.2));
        let z = Complex64::from_polar(r, t);
        let c = a * z + b;
        prop_assume!(c.norm() > 1e-3);
        for w in qfun::branched_roots(q, a, b, z).unwrap() {
            prop_assert!((w.powu(q as u32) - c).norm() <= 1e-12 * c.norm().max(1.0));
        }
    }

    #[test]
    fn homogeneous_maps_scale_with_predicted_frequency(alpha in 0.2f64..2.0, r in 0.1f64..0.9, lambda in 0.2f64..1.0) {
        let quad = QuadratureSpec::default();
        let f = qfun::lookup(&format!("homog:{alpha},roots3")).unwrap();
        let ratio = growth::h_bar(&f, lambda * r, &quad).unwrap() / growth::h_bar(&f, r, &quad).unwrap();
        prop_assert!((ratio / lambda.powf(2.0 * alpha) - 1.0).abs() < 1e-10);
        // |g|^2 sums to 3 and |g'|^2 to 1/3 on the circle, so I = (α^2 + 1/9) / (2α)
        let expected = (alpha * alpha + 1.0 / 9.0) / (2.0 * alpha);
        prop_assert!((growth::frequency(&f, r, &quad).unwrap() - expected).abs() < 1e-8 * expected);
    }

    #[test]
    fn scaling_the_values_scales_hbar_quadratically(c in 0.3f64..3.0, r in 0.1f64..0.9) {
        let quad = QuadratureSpec::default();
        let f = QFunction::branched(2, Complex64::new(1.0, 0.0), Complex64::new(0.4, 0.1)).unwrap();
        let g = QFunction::branched(2, Complex64::new(c * c, 0.0), Complex64::new(0.4 * c * c, 0.1 * c * c)).unwrap();
        let hf = growth::h_bar(&f, r, &quad).unwrap();
        let hg = growth::h_bar(&g, r, &quad).unwrap();
        prop_assert!((hg / (c * c * hf) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn harmonic_closed_form_matches_quadrature(u in plane_combo(), r in 0.05f64..0.95) {
        let quad = QuadratureSpec::default();
        let exact = u.h_bar_closed_form();
        prop_assert!(exact.has_nonnegative_coefficients());
        let f = QFunction::harmonic(u);
        let v = growth::h_bar(&f, r, &quad).unwrap();
        let e = exact.eval(r);
        prop_assert!((v - e).abs() <= 1e-10 * e.abs().max(1.0));
    }

    #[test]
    fn normalized_growth_is_monotone_for_harmonic_combos(u in plane_combo()) {
        let quad = QuadratureSpec::default();
        let f = QFunction::harmonic(u);
        let grid: Vec<f64> = calculus::linspace(0.1, 0.9, 9).unwrap();
        let v: Vec<f64> = grid.iter().map(|&r| growth::h_bar(&f, r, &quad).unwrap()).collect();
        for w in v.windows(2) {
            prop_assert!(w[1] >= w[0] * (1.0 - 1e-12));
        }
    }

    #[test]
    fn polynomial_derivatives(c in prop::collection::vec(-3.0f64..3.0, 1..6), x in 0.2f64..0.8, order in 1usize..=3) {
        let coeffs = c.clone();
        let curve = FnCurve::new((0.0, 1.0), move |x| Ok(coeffs.iter().rev().fold(0.0, |a, k| a * x + k)));
        let est = calculus::derivative(&curve, x, order, &DiffSpec::default()).unwrap();
        let mut d = c.clone();
        for _ in 0..order {
            d = d.iter().enumerate().skip(1).map(|(i, v)| i as f64 * v).collect();
        }
        let exact = d.iter().rev().fold(0.0, |a, k| a * x + k);
        let scale = c.iter().map(|v| v.abs()).sum::<f64>().max(1.0);
        prop_assert!((est.value - exact).abs() <= 1e-6 * scale, "{} vs {}", est.value, exact);
    }

    #[test]
    fn monotonicity_verdict_follows_the_sign(k in 0.2f64..5.0, sign in prop::bool::ANY) {
        let s = if sign { 1.0 } else { -1.0 };
        let curve = FnCurve::new((0.0, 1.0), move |x| Ok((s * k * x).exp()));
        let grid = Grid::linspace(0.1, 0.9, 12).unwrap();
        let r = calculus::check_monotone(&curve, &grid, &Thresholds::closed_form()).unwrap();
        prop_assert_eq!(r.passed, sign);
    }

    #[test]
    fn affine_curves_are_convex_and_concave(m in -5.0f64..5.0, b in -5.0f64..5.0) {
        let up = FnCurve::new((0.0, 1.0), move |x| Ok(m * x + b));
        let down = FnCurve::new((0.0, 1.0), move |x| Ok(-(m * x + b)));
        let grid = Grid::linspace(0.1, 0.9, 10).unwrap();
        let thr = Thresholds::closed_form();
        prop_assert!(calculus::check_convex(&up, &grid, &thr).unwrap().passed);
        prop_assert!(calculus::check_convex(&down, &grid, &thr).unwrap().passed);
    }
}

#[test]
fn guarded_grids_avoid_critical_points() {
    let g = Grid::guarded(0.05, 0.95, 31, &[0.5], calculus::DEFAULT_GUARD).unwrap();
    assert!(g.points().iter().all(|x| (x - 0.5).abs() >= calculus::DEFAULT_GUARD));
    assert!(g.is_guarded(0.5));
}
