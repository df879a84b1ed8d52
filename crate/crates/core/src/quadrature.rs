//! Low-level integration rules shared by the growth and harmonic modules.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = (n + 1) / 2;
        for i in 0..m {
            // Newton on P_n starting from the Chebyshev-like guess.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Integral of `f` over [a, b].
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    pub fn try_integrate<F: FnMut(f64) -> Result<f64>>(&self, a: f64, b: f64, mut f: F) -> Result<f64> {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x)?;
        }
        Ok(acc * half)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p, d)
}

/// The 20-point rule used for panels of the adaptive radial integrator.
pub fn gl20() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(20))
}

/// Tolerances for the adaptive rules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    fn accepts(&self, diff: f64, value: f64) -> bool {
        diff <= self.abs.max(self.rel * value.abs())
    }
}

/// Result of a periodic trapezoid integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicIntegral {
    pub value: f64,
    pub nodes: usize,
}

/// Integral of a 2π-periodic function over one period.
///
/// The node count starts at `initial_nodes` and doubles, reusing previous
/// samples, until two successive estimates agree within `tol`.
pub fn periodic_trapezoid<F>(
    mut f: F,
    initial_nodes: usize,
    max_nodes: usize,
    tol: Tolerance,
) -> Result<PeriodicIntegral>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut n = initial_nodes.max(2);
    let mut sum = 0.0;
    for k in 0..n {
        let theta = 2.0 * PI * k as f64 / n as f64;
        sum += finite(f(theta)?, theta)?;
    }
    let mut estimate = 2.0 * PI * sum / n as f64;
    while n < max_nodes {
        let n2 = 2 * n;
        for k in 0..n {
            let theta = 2.0 * PI * (2 * k + 1) as f64 / n2 as f64;
            sum += finite(f(theta)?, theta)?;
        }
        let refined = 2.0 * PI * sum / n2 as f64;
        let diff = (refined - estimate).abs();
        n = n2;
        estimate = refined;
        if tol.accepts(diff, refined) {
            return Ok(PeriodicIntegral { value: refined, nodes: n });
        }
    }
    Err(Error::QuadratureBudget(format!(
        "periodic trapezoid did not converge with {max_nodes} nodes"
    )))
}

/// Plain periodic trapezoid sum with exactly `nodes` nodes.
pub fn periodic_trapezoid_fixed<F: FnMut(f64) -> f64>(mut f: F, nodes: usize) -> f64 {
    let h = 2.0 * PI / nodes as f64;
    (0..nodes).map(|k| f(h * k as f64)).sum::<f64>() * h
}

fn finite(v: f64, at: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { at })
    }
}

/// Adaptive composite Gauss-Legendre integral of `f` over [a, b].
///
/// `breakpoints` are points inside or at the ends of [a, b] toward which the
/// initial panels are graded geometrically (integrable endpoint
/// singularities, or kinks of the integrand).
pub fn adaptive_gauss<F>(
    f: &F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    tol: Tolerance,
    rule: RadialRule,
) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + ?Sized,
{
    let max_depth = rule.max_depth;
    let panels = graded_panels(a, b, breakpoints, rule.ratio);
    let rule = gl20();
    let mut total = 0.0;
    let count = panels.len() as f64;
    for (lo, hi) in panels {
        let coarse = rule.try_integrate(lo, hi, f)?;
        let local = Tolerance {
            abs: tol.abs / count,
            rel: tol.rel,
        };
        total += refine(f, rule, lo, hi, coarse, local, max_depth)?;
    }
    Ok(total)
}

fn refine<F>(
    f: &F,
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    whole: f64,
    tol: Tolerance,
    depth: usize,
) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + ?Sized,
{
    if (b - a).abs() <= 1e3 * f64::EPSILON * a.abs().max(b.abs()) {
        // nodes would collapse onto the endpoints
        return Ok(whole);
    }
    let mid = 0.5 * (a + b);
    let left = rule.try_integrate(a, mid, f)?;
    let right = rule.try_integrate(mid, b, f)?;
    let both = left + right;
    if tol.accepts((both - whole).abs(), both) {
        return Ok(both);
    }
    if depth == 0 {
        return Err(Error::QuadratureBudget(format!(
            "adaptive Gauss-Legendre did not converge on [{a}, {b}]"
        )));
    }
    Ok(refine(f, rule, a, mid, left, tol, depth - 1)? + refine(f, rule, mid, b, right, tol, depth - 1)?)
}

/// Subdivision budget and grading ratio for [`adaptive_gauss`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialRule {
    pub max_depth: usize,
    pub ratio: f64,
}

impl Default for RadialRule {
    fn default() -> Self {
        Self { max_depth: 30, ratio: 2.0 }
    }
}

/// Splits [a, b] into panels graded toward each breakpoint. Panels shrink by
/// `ratio` per step down to a width of about 1e-14 relative to the interval
/// length.
pub fn graded_panels(a: f64, b: f64, breakpoints: &[f64], ratio: f64) -> Vec<(f64, f64)> {
    assert!(ratio > 1.0);
    let len = b - a;
    let mut cuts = vec![a, b];
    for &p in breakpoints {
        if p < a || p > b {
            continue;
        }
        cuts.push(p);
        let mut w = 0.5 * len;
        while w > 1e-14 * len {
            if p - w > a {
                cuts.push(p - w);
            }
            if p + w < b {
                cuts.push(p + w);
            }
            w /= ratio;
        }
    }
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup_by(|x, y| (*x - *y).abs() <= 1e-15 * len.abs().max(1.0));
    cuts.windows(2).map(|w| (w[0], w[1])).collect()
}
