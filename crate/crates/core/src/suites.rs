//! Named verification suites. Each suite checks one statement on sampled
//! grids for the registered examples and returns one report per claim.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::calculus::{
    self, DiffSpec, Expectation, FnCurve, Grid, Thresholds, VerificationReport, DEFAULT_GUARD,
};
use crate::error::{Error, Result};
use crate::growth::{self, Functional, FunctionalCurve, QuadratureSpec};
use crate::harmonic_ref::{self, WeightSpec};
use crate::qfun::{self, QFunction};

/// Suite names in the order `all` runs them.
pub const SUITES: &[&str] = &[
    "prop1.2",
    "thm1.2",
    "prop4.4",
    "thm3.2b",
    "prop3.1",
    "prop3.6i",
    "cor4.8",
    "thm1.1",
    "prop5.1",
    "cex-cube-root",
    "cex-dellis-3rd",
    "lemma5.2-finiteness",
];

/// Planar harmonic combinations checked to order 6.
pub const PLANE_COMBOS: &[&str] = &[
    "1+Re(z)+Im(z^2)",
    "Re(z^3)",
    "0.5-Re(z)+2*Im(z)",
    "0.1+Re(z^2)-0.3*Im(z^4)",
    "2*Re(z^4)+Im(z^3)-1",
];

/// Solid harmonic combinations checked to order 4.
pub const SOLID_COMBOS: &[&str] = &["Y(2,0)", "1+Y(1,1)-0.5*Y(3,-2)"];

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SuiteConfig {
    pub quad: QuadratureSpec,
    /// Replaces the derivative tolerance of every sign check.
    pub tol: Option<f64>,
    /// Replaces the default grid sizes.
    pub grid_points: Option<usize>,
    /// α_m for homogeneity bounds in m > 2.
    pub alpha_m: Option<f64>,
}

impl SuiteConfig {
    fn points(&self, default: usize) -> usize {
        self.grid_points.unwrap_or(default)
    }

    fn thresholds(&self, base: Thresholds) -> Thresholds {
        Thresholds {
            derivative: self.tol.unwrap_or(base.derivative),
            ..base
        }
    }

    fn quad_thresholds(&self) -> Thresholds {
        self.thresholds(Thresholds {
            noise: self.quad.rel_tol,
            ..Thresholds::quadrature()
        })
    }
}

/// The registered Q-valued examples in the plane.
pub fn q_examples() -> Vec<QFunction> {
    ["cube-root", "dellis", "roots:2,1,0", "homog:0.5,roots2", "homog:1.5,roots3"]
        .iter()
        .map(|id| qfun::lookup(id).expect("registered"))
        .collect()
}

fn branched_examples() -> Vec<QFunction> {
    vec![QFunction::cube_root(), QFunction::dellis(), qfun::lookup("roots:2,1,0").expect("registered")]
}

fn name(f: &QFunction) -> String {
    match f.id().as_str() {
        "roots:3,1,0" => "cube-root".into(),
        "roots:2,2,-1" => "dellis".into(),
        id => id.to_string(),
    }
}

/// `n` radii in [a, b] keeping the default guard band around the critical radii of `f`.
fn radii(f: &QFunction, a: f64, b: f64, n: usize) -> Result<Grid> {
    Grid::guarded(a, b, n, &f.critical_radii(), DEFAULT_GUARD)
}

/// Report from the worst of several (margin, witness) samples.
fn scalar(id: &str, grid: &[f64], tol: f64, samples: &[(f64, f64)]) -> VerificationReport {
    let (margin, witness) = samples
        .iter()
        .copied()
        .fold((f64::INFINITY, f64::NAN), |acc, s| if s.0 < acc.0 { s } else { acc });
    VerificationReport::from_margin(grid, tol, margin, witness).with_claim(id, Expectation::MustHold)
}

/// Runs a suite by name; `all` runs every suite in [`SUITES`] order.
pub fn run_suite(suite: &str, cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    cfg.quad.validate()?;
    match suite {
        "all" => {
            let mut out = Vec::new();
            for s in SUITES {
                out.extend(run_suite(s, cfg)?);
            }
            Ok(out)
        }
        "prop1.2" => prop_1_2(cfg),
        "thm1.2" => thm_1_2(cfg),
        "prop4.4" => prop_4_4(cfg),
        "thm3.2b" => thm_3_2b(cfg),
        "prop3.1" => prop_3_1(cfg),
        "prop3.6i" => prop_3_6i(cfg),
        "cor4.8" => cor_4_8(cfg),
        "thm1.1" => thm_1_1(cfg),
        "prop5.1" => prop_5_1(cfg),
        "cex-cube-root" => cex_cube_root(cfg),
        "cex-dellis-3rd" => cex_dellis(cfg),
        "lemma5.2-finiteness" => lemma_5_2(cfg),
        other => Err(Error::InvalidParameter(format!("unknown suite `{other}`"))),
    }
}

/// Whether every report matches its expectation.
pub fn all_passed(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.passed)
}

fn prop_1_2(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    let dellis = QFunction::dellis();
    let curve = FunctionalCurve::new(&dellis, Functional::LogGrowth, &cfg.quad);
    let n = cfg.points(40);
    let kink = 0.5f64.ln();
    let grid = Grid::segments(&[(-3.0, -0.75, n * 3 / 4), (-0.6, -0.1, n - n * 3 / 4)])?.excluding(&[kink], DEFAULT_GUARD);
    let thr = cfg.quad_thresholds();
    out.push(calculus::check_monotone(&curve, &grid, &thr)?.with_claim("prop1.2.i.dellis", Expectation::MustHold));
    out.push(calculus::check_convex(&curve, &grid, &thr)?.with_claim("prop1.2.ii.dellis", Expectation::MustHold));

    let t_grid = calculus::linspace(-3.0, -0.1, cfg.points(20))?;
    for f in q_examples().iter().filter(|f| !matches!(name(f).as_str(), "dellis")) {
        let a: Vec<f64> = t_grid
            .par_iter()
            .map(|&t| growth::log_growth(f, t, &cfg.quad))
            .collect::<Result<_>>()?;
        let (slope, intercept) = line_fit(&t_grid, &a);
        let samples: Vec<(f64, f64)> = t_grid
            .iter()
            .zip(&a)
            .map(|(t, v)| (-(v - intercept - slope * t).abs(), *t))
            .collect();
        out.push(scalar(&format!("prop1.2.affine.{}", name(f)), &t_grid, 1e-8, &samples));
    }
    Ok(out)
}

fn line_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

fn thm_1_2(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    let thr = cfg.quad_thresholds();
    for f in branched_examples() {
        let functional = Functional::HN(f.q() as f64 / 2.0);
        let curve = FunctionalCurve::new(&f, functional.clone(), &cfg.quad);
        let singular = functional.critical_points(&f);
        let grid = Grid::guarded(0.05, 0.95, cfg.points(30), &singular, DEFAULT_GUARD)?;
        let id = name(&f);
        out.push(calculus::check_monotone(&curve, &grid, &thr)?.with_claim(&format!("thm1.2.i.{id}"), Expectation::MustHold));
        out.push(calculus::check_convex(&curve, &grid, &thr)?.with_claim(&format!("thm1.2.ii.{id}"), Expectation::MustHold));
    }
    Ok(out)
}

fn r_times_h_bar(f: &QFunction, quad: &QuadratureSpec) -> FnCurve {
    let g = f.clone();
    let quad = quad.clone();
    FnCurve::new((0.0, 1.0), move |r| Ok(r * growth::h_bar(&g, r, &quad)?)).with_singular(f.critical_radii())
}

fn prop_4_4(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    let thr = cfg.quad_thresholds();
    for f in q_examples() {
        let curve = r_times_h_bar(&f, &cfg.quad);
        let grid = radii(&f, 0.05, 0.95, cfg.points(30))?;
        let id = name(&f);
        out.push(calculus::check_monotone(&curve, &grid, &thr)?.with_claim(&format!("prop4.4.i.{id}"), Expectation::MustHold));
        out.push(calculus::check_convex(&curve, &grid, &thr)?.with_claim(&format!("prop4.4.ii.{id}"), Expectation::MustHold));
    }
    Ok(out)
}

fn thm_3_2b(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    let dellis = QFunction::dellis();
    let curve = FunctionalCurve::new(&dellis, Functional::I, &cfg.quad);
    let n = cfg.points(20);
    let grid = Grid::segments(&[(0.05, 0.45, n / 2), (0.55, 0.95, n - n / 2)])?.excluding(&[0.5], DEFAULT_GUARD);
    let thr = cfg.thresholds(Thresholds {
        derivative: 1e-7,
        noise: cfg.quad.rel_tol,
        ..Thresholds::quadrature()
    });
    out.push(calculus::check_monotone(&curve, &grid, &thr)?.with_claim("thm3.2b.monotone.dellis", Expectation::MustHold));

    let r20 = calculus::linspace(0.05, 0.95, cfg.points(20))?;
    for (id, alpha) in [("roots:2,1,0", 0.5), ("cube-root", 1.0 / 3.0)] {
        let f = qfun::lookup(id)?;
        let samples: Vec<(f64, f64)> = r20
            .par_iter()
            .map(|&r| Ok((-(growth::frequency(&f, r, &cfg.quad)? - alpha).abs(), r)))
            .collect::<Result<_>>()?;
        out.push(scalar(&format!("thm3.2b.constant.{id}"), &r20, 1e-6, &samples));
    }

    for f in branched_examples() {
        let grid = radii(&f, 0.05, 0.95, cfg.points(50))?;
        let samples: Vec<(f64, f64)> = grid
            .points()
            .par_iter()
            .map(|&r| {
                let (res, h_prime) = growth::energy_identity_residual(&f, r, &cfg.quad)?;
                Ok((-res.abs() / h_prime.abs().max(1.0), r))
            })
            .collect::<Result<_>>()?;
        out.push(scalar(&format!("thm3.2b.identity.{}", name(&f)), grid.points(), 1e-8, &samples));
    }
    Ok(out)
}

fn prop_3_1(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for f in branched_examples() {
        let grid = radii(&f, 0.05, 0.95, cfg.points(20))?;
        let rows: Vec<(f64, f64, f64)> = grid
            .points()
            .par_iter()
            .map(|&r| {
                let b = growth::boundary_integrals(&f, r, &cfg.quad)?;
                let (normal, _) = growth::boundary_energies_by_matching(&f, r, &cfg.quad)?;
                let d = growth::dirichlet(&f, r, &cfg.quad)?;
                let first = (b.grad_sq - 2.0 * normal).abs() / b.grad_sq.max(1.0);
                let second = (d - b.normal_dot).abs() / d.max(1.0);
                Ok((r, first, second))
            })
            .collect::<Result<_>>()?;
        let id = name(&f);
        let first: Vec<(f64, f64)> = rows.iter().map(|(r, a, _)| (-a, *r)).collect();
        let second: Vec<(f64, f64)> = rows.iter().map(|(r, _, b)| (-b, *r)).collect();
        out.push(scalar(&format!("prop3.1.i.{id}"), grid.points(), 1e-8, &first));
        out.push(scalar(&format!("prop3.1.ii.{id}"), grid.points(), 1e-8, &second));
    }
    Ok(out)
}

fn prop_3_6i(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for f in [QFunction::dellis(), QFunction::cube_root()] {
        let grid = radii(&f, 0.05, 0.95, cfg.points(20))?;
        let q = f.q() as f64;
        let samples: Vec<(f64, f64)> = grid
            .points()
            .par_iter()
            .map(|&r| {
                let (_, tangential) = growth::boundary_energies_by_matching(&f, r, &cfg.quad)?;
                Ok((q * r * tangential - growth::dirichlet(&f, r, &cfg.quad)?, r))
            })
            .collect::<Result<_>>()?;
        out.push(scalar(&format!("prop3.6i.{}", name(&f)), grid.points(), 1e-8, &samples));
    }
    Ok(out)
}

/// Homogeneity exponent α from the log-log slope 2α of H̄.
pub fn fitted_alpha(f: &QFunction, grid: &Grid, quad: &QuadratureSpec) -> Result<f64> {
    let curve = FunctionalCurve::new(f, Functional::Hbar, quad);
    Ok(calculus::fit_log_slope(&curve, grid)? / 2.0)
}

fn cor_4_8(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    let grid = Grid::linspace(0.05, 0.95, cfg.points(20))?;
    let tol = 1e-6;
    for f in q_examples().into_iter().filter(|f| name(f) != "dellis") {
        let alpha = fitted_alpha(&f, &grid, &cfg.quad)?;
        out.push(
            calculus::check_homogeneity_bound(alpha, f.q(), 2, None, tol)?
                .with_claim(&format!("cor4.8.{}", name(&f)), Expectation::MustHold),
        );
    }
    let cube = fitted_alpha(&QFunction::cube_root(), &grid, &cfg.quad)?;
    out.push(scalar(
        "cor4.8.equality.cube-root",
        &[cube],
        tol,
        &[(-(cube - 1.0 / 3.0).abs(), cube)],
    ));
    let synthetic = FnCurve::new((0.0, 1.0), |r: f64| Ok(r.powf(0.1)));
    let alpha = calculus::fit_log_slope(&synthetic, &grid)? / 2.0;
    out.push(calculus::check_homogeneity_bound(alpha, 2, 2, None, tol)?.with_claim("cor4.8.synthetic", Expectation::MustFail));
    if let Some(alpha_m) = cfg.alpha_m {
        let u = QFunction::harmonic(harmonic_ref::parse_combo(3, "Y(2,0)")?);
        let alpha = fitted_alpha(&u, &grid, &cfg.quad)?;
        out.push(
            calculus::check_homogeneity_bound(alpha, 1, 3, Some(alpha_m), tol)?
                .with_claim("cor4.8.m3.Y(2,0)", Expectation::MustHold),
        );
    }
    Ok(out)
}

fn thm_1_1(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    let grid = Grid::linspace(0.3, 0.7, cfg.points(9))?;
    let combos: Vec<(usize, &str, usize)> = PLANE_COMBOS
        .iter()
        .map(|c| (2, *c, 6))
        .chain(SOLID_COMBOS.iter().map(|c| (3, *c, 4)))
        .collect();
    let r20 = calculus::linspace(0.05, 0.95, 20)?;
    let mut path_samples = Vec::new();
    for (m, body, order) in combos {
        let u = harmonic_ref::parse_combo(m, body)?;
        let report = harmonic_ref::verify_theorem_1_1(&u, order, &grid, &cfg.quad)?;
        out.push(report.with_claim(&format!("thm1.1.m{m}.{body}"), Expectation::MustHold));
        let closed = u.h_bar_closed_form();
        let f = QFunction::harmonic(u);
        for &r in &r20 {
            let q = growth::h_bar(&f, r, &cfg.quad)?;
            path_samples.push((-(q - closed.eval(r)).abs() / closed.eval(r).abs().max(1.0), r));
        }
    }
    out.push(scalar("thm1.1.paths", &r20, 1e-10, &path_samples));

    let u = harmonic_ref::parse_combo(2, PLANE_COMBOS[0])?;
    let h = u.h_closed_form();
    let curve = FnCurve::new((0.0, 1.0), move |r| Ok(h.eval(r)));
    out.push(
        calculus::check_abs_monotonic(&curve, 6, &grid, &cfg.thresholds(Thresholds::closed_form()))?
            .with_claim("thm1.1.unnormalized", Expectation::MustHold),
    );
    Ok(out)
}

fn prop_5_1(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    let grid = Grid::linspace(0.3, 0.7, cfg.points(9))?;
    let thr = cfg.quad_thresholds();
    let u = harmonic_ref::parse_combo(2, PLANE_COMBOS[0])?;
    for weight in ["t", "t^2", "exp"] {
        let w = WeightSpec::by_name(weight)?;
        let (uc, wc) = (u.clone(), w.clone());
        let d = FnCurve::new((0.0, 1.0), move |r| harmonic_ref::weighted_d(&uc, &wc, r));
        out.push(calculus::check_abs_monotonic(&d, 4, &grid, &thr)?.with_claim(&format!("prop5.1.abs.{weight}"), Expectation::MustHold));
        let spec = DiffSpec {
            noise: 1e-13,
            ..DiffSpec::default()
        };
        let samples: Vec<(f64, f64)> = grid
            .points()
            .par_iter()
            .map(|&r| {
                let fd = calculus::derivative(&d, r, 1, &spec)?.value;
                let exact = harmonic_ref::weighted_d_prime(&u, &w, r)?;
                Ok((-(fd - exact).abs(), r))
            })
            .collect::<Result<_>>()?;
        out.push(scalar(&format!("prop5.1.identity.{weight}"), grid.points(), 1e-7, &samples));
    }

    // C_m r^(m-1) H̄(r) against the radial derivative of the ball integral
    let f = QFunction::harmonic(u.clone());
    let uc = u.clone();
    let ball = FnCurve::new((0.0, 1.0), move |r| harmonic_ref::ball_l2(&uc, r));
    let samples: Vec<(f64, f64)> = grid
        .points()
        .par_iter()
        .map(|&r| {
            let fd = calculus::derivative(&ball, r, 1, &DiffSpec { noise: 1e-13, ..DiffSpec::default() })?.value;
            let h = growth::h_sphere(&f, r, &cfg.quad)?;
            Ok((-(h - fd).abs() / h.abs().max(1e-300), r))
        })
        .collect::<Result<_>>()?;
    out.push(scalar("prop5.1.corollary", grid.points(), 1e-8, &samples));

    let (_, derivative) = harmonic_ref::converse_example();
    let expected = [0.0, 0.0, 0.0, 0.0, 2.0];
    let diff = derivative
        .coeffs
        .iter()
        .zip(expected.iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        + if derivative.coeffs.len() == expected.len() { 0.0 } else { 1.0 };
    out.push(scalar("prop5.1.converse", &[1.0], 0.0, &[(-diff, 1.0)]));
    out.push(
        VerificationReport::from_margin(&[1.0], 0.0, if derivative.has_nonnegative_coefficients() { 0.0 } else { -1.0 }, 1.0)
            .with_claim("prop5.1.converse.abs", Expectation::MustHold),
    );
    Ok(out)
}

fn cex_cube_root(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    let f = QFunction::cube_root();
    let r50 = calculus::linspace(0.02, 0.98, cfg.points(50))?;
    let samples: Vec<(f64, f64)> = r50
        .par_iter()
        .map(|&r| {
            let exact = 3.0 * r.powf(2.0 / 3.0);
            Ok((-((growth::h_bar(&f, r, &cfg.quad)? - exact) / exact).abs(), r))
        })
        .collect::<Result<_>>()?;
    out.push(scalar("cex-cube-root.hbar", &r50, 1e-10, &samples));

    let r10 = calculus::linspace(0.1, 0.9, 9)?;
    let samples: Vec<(f64, f64)> = r10
        .par_iter()
        .map(|&r| {
            let exact = 9.0 * PI * r.powf(8.0 / 3.0) / 4.0;
            let direct = growth::ball_l2(&f, r, &cfg.quad)?;
            let radial = growth::ball_l2_radial(&f, r, &cfg.quad)?;
            let worst = ((direct - exact) / exact).abs().max(((radial - exact) / exact).abs());
            Ok((-worst, r))
        })
        .collect::<Result<_>>()?;
    out.push(scalar("cex-cube-root.ball", &r10, 1e-8, &samples));

    let curve = FunctionalCurve::new(&f, Functional::Hbar, &cfg.quad);
    let grid = Grid::linspace(0.1, 0.9, cfg.points(17))?;
    out.push(
        calculus::check_abs_monotonic(&curve, 2, &grid, &cfg.quad_thresholds())?
            .with_claim("cex-cube-root.order2", Expectation::MustFail),
    );
    let at = calculus::derivative(&curve, 0.9, 2, &cfg.quad_thresholds().diff_spec())?;
    out.push(scalar("cex-cube-root.order2.at0.9", &[0.9], 0.0, &[(-0.1 - at.value, 0.9)]));
    Ok(out)
}

fn a_curve(order: usize, quad: &QuadratureSpec) -> FnCurve {
    let quad = quad.clone();
    FnCurve::new((0.0, 1.0), move |rho| growth::a_integral(rho, order, &quad)).with_singular(vec![0.5])
}

fn cex_dellis(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    let all = Grid::guarded(0.02, 0.98, cfg.points(40), &[0.5], DEFAULT_GUARD)?;
    let second: Vec<(f64, f64)> = all
        .points()
        .par_iter()
        .map(|&r| Ok((growth::a_integral(r, 2, &cfg.quad)?, r)))
        .collect::<Result<_>>()?;
    out.push(scalar("cex-dellis-3rd.A2.positive", all.points(), 0.0, &second));

    let upper = calculus::linspace(0.55, 0.95, cfg.points(20))?;
    let third: Vec<(f64, f64)> = upper
        .par_iter()
        .map(|&r| Ok((-0.01 - growth::a_integral(r, 3, &cfg.quad)?, r)))
        .collect::<Result<_>>()?;
    out.push(scalar("cex-dellis-3rd.A3.negative", &upper, 0.0, &third));

    let a = a_curve(0, &cfg.quad);
    let spec = DiffSpec {
        noise: cfg.quad.rel_tol,
        ..DiffSpec::default()
    };
    let paths = Grid::guarded(0.1, 0.9, 12, &[0.5], 0.08)?;
    let mut agreement = Vec::new();
    for order in 1..=3 {
        for &r in paths.points() {
            let fd = calculus::derivative(&a, r, order, &spec)?.value;
            let exact = growth::a_integral(r, order, &cfg.quad)?;
            agreement.push((-((fd - exact) / exact).abs(), r));
        }
    }
    out.push(scalar("cex-dellis-3rd.paths", paths.points(), 1e-5, &agreement));

    let f = QFunction::dellis();
    let h1 = FunctionalCurve::new(&f, Functional::HN(1.0), &cfg.quad);
    let grid = Grid::linspace(0.55, 0.95, cfg.points(20))?;
    out.push(
        calculus::check_abs_monotonic(&h1, 3, &grid, &cfg.quad_thresholds())?
            .with_claim("cex-dellis-3rd.h1", Expectation::MustFail),
    );
    Ok(out)
}

/// Trapezoid estimates of ∫|h'|^2 for the convergence and blow-up claims.
pub const CONVERGENCE_NODES: usize = 1 << 12;
pub const BLOWUP_NODES: usize = 1 << 18;

fn lemma_5_2(_cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for r in [0.3, 0.7] {
        let coarse = growth::boundary_root_energy(r, CONVERGENCE_NODES);
        let fine = growth::boundary_root_energy(r, 2 * CONVERGENCE_NODES);
        out.push(scalar(
            &format!("lemma5.2.converge.{r}"),
            &[r],
            1e-6,
            &[(-((fine - coarse) / fine).abs(), r)],
        ));
    }
    let near = [0.5 - 1e-6, 0.5 + 1e-6];
    let samples: Vec<(f64, f64)> = near
        .iter()
        .map(|&r| (growth::boundary_root_energy(r, BLOWUP_NODES) - 1e3, r))
        .collect();
    out.push(scalar("lemma5.2.blowup", &near, 0.0, &samples));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(run_suite("nope", &SuiteConfig::default()).is_err());
    }

    #[test]
    fn finiteness_suite_reports_three_claims() {
        let r = run_suite("lemma5.2-finiteness", &SuiteConfig::default()).unwrap();
        assert_eq!(r.len(), 3);
        assert!(r[0].passed && r[1].passed);
    }

    #[test]
    fn cor_suite_needs_no_alpha_m_in_the_plane() {
        let r = run_suite("cor4.8", &SuiteConfig::default()).unwrap();
        assert!(all_passed(&r), "{r:#?}");
        let with = SuiteConfig {
            alpha_m: Some(4.0),
            ..SuiteConfig::default()
        };
        assert_eq!(run_suite("cor4.8", &with).unwrap().len(), r.len() + 1);
    }
}
