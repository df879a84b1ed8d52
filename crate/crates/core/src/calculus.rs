//! Numerical differentiation and the sign checkers behind every inequality:
//! monotonicity, convexity, absolute monotonicity and the homogeneity bound.
//!
//! Derivatives are central differences refined by Richardson extrapolation.
//! Several base steps are tried and the one with the smallest combined
//! truncation and rounding estimate wins, so that high orders stay usable on
//! curves that are only known to quadrature accuracy.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Highest derivative order the engine will estimate.
pub const MAX_ORDER: usize = 6;

/// A real function of one variable on an open interval.
pub trait ScalarCurve: Send + Sync {
    /// Open interval on which `eval` is defined.
    fn domain(&self) -> (f64, f64);

    fn eval(&self, x: f64) -> Result<f64>;

    /// Interior points where the curve is not smooth; stencils never straddle them.
    fn singular_points(&self) -> &[f64] {
        &[]
    }
}

type CurveFn = dyn Fn(f64) -> Result<f64> + Send + Sync;

/// A [`ScalarCurve`] backed by a closure.
#[derive(Clone)]
pub struct FnCurve {
    domain: (f64, f64),
    singular: Vec<f64>,
    f: Arc<CurveFn>,
}

impl FnCurve {
    pub fn new<F>(domain: (f64, f64), f: F) -> Self
    where
        F: Fn(f64) -> Result<f64> + Send + Sync + 'static,
    {
        Self {
            domain,
            singular: Vec::new(),
            f: Arc::new(f),
        }
    }

    pub fn with_singular(mut self, points: Vec<f64>) -> Self {
        self.singular = points;
        self
    }
}

impl fmt::Debug for FnCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnCurve")
            .field("domain", &self.domain)
            .field("singular", &self.singular)
            .finish()
    }
}

impl ScalarCurve for FnCurve {
    fn domain(&self) -> (f64, f64) {
        self.domain
    }

    fn eval(&self, x: f64) -> Result<f64> {
        (self.f)(x)
    }

    fn singular_points(&self) -> &[f64] {
        &self.singular
    }
}

/// Step control for [`derivative`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffSpec {
    /// Richardson levels (step halvings), at least 2.
    pub levels: usize,
    /// Number of base steps tried, each twice the previous.
    pub candidates: usize,
    /// Relative accuracy of the curve's samples.
    pub noise: f64,
    /// Fixed base step; disables candidate selection.
    pub step: Option<f64>,
}

impl Default for DiffSpec {
    fn default() -> Self {
        Self {
            levels: 3,
            candidates: 14,
            noise: 1e-15,
            step: None,
        }
    }
}

/// One finite-difference derivative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivativeEstimate {
    pub order: usize,
    pub value: f64,
    pub step: f64,
    pub richardson_levels: usize,
    pub error_estimate: f64,
    /// False when the Richardson tail grows above the rounding floor.
    pub reliable: bool,
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// k-th central difference: offsets (k/2 - j) h, weights (-1)^j C(k, j).
fn central_difference(curve: &dyn ScalarCurve, x: f64, order: usize, h: f64) -> Result<(f64, f64)> {
    let mut acc = 0.0;
    let mut scale = 0.0f64;
    for j in 0..=order {
        let offset = (order as f64 / 2.0 - j as f64) * h;
        let g = curve.eval(x + offset)?;
        if !g.is_finite() {
            return Err(Error::NonFinite { at: x + offset });
        }
        let w = if j % 2 == 0 { 1.0 } else { -1.0 } * binomial(order, j);
        acc += w * g;
        scale = scale.max(g.abs());
    }
    Ok((acc / h.powi(order as i32), scale))
}

fn stencil_fits(curve: &dyn ScalarCurve, x: f64, reach: f64) -> bool {
    let (lo, hi) = curve.domain();
    if !(x - reach > lo && x + reach < hi) {
        return false;
    }
    curve
        .singular_points()
        .iter()
        .all(|&s| (s - x).abs() > reach)
}

/// Diagonal of the Richardson tableau built from steps h, h/2, h/4, ...
fn richardson(curve: &dyn ScalarCurve, x: f64, order: usize, h: f64, levels: usize) -> Result<(Vec<f64>, f64)> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(levels);
    let mut scale = 0.0f64;
    for i in 0..levels {
        let (d, s) = central_difference(curve, x, order, h / 2f64.powi(i as i32))?;
        scale = scale.max(s);
        let mut row = vec![d];
        for j in 1..=i {
            let factor = 4f64.powi(j as i32);
            let prev = &rows[i - 1];
            let v = row[j - 1] + (row[j - 1] - prev[j - 1]) / (factor - 1.0);
            row.push(v);
        }
        rows.push(row);
    }
    Ok((rows.iter().enumerate().map(|(i, r)| r[i]).collect(), scale))
}

/// Derivative of `curve` of the given order at `x`.
///
/// Every base step h = max(|x| 1e-3, 1e-4) 2^j whose stencil fits is tried
/// with each extrapolation depth; the estimate with the smallest sum of
/// truncation estimate (last tableau difference) and rounding bound is kept.
pub fn derivative(curve: &dyn ScalarCurve, x: f64, order: usize, spec: &DiffSpec) -> Result<DerivativeEstimate> {
    if order > MAX_ORDER {
        return Err(Error::InvalidParameter(format!("order {order} exceeds {MAX_ORDER}")));
    }
    if spec.levels < 2 {
        return Err(Error::InvalidParameter("at least two Richardson levels are required".into()));
    }
    let (lo, hi) = curve.domain();
    if !(x > lo && x < hi) {
        return Err(Error::Domain(format!("{x} outside ({lo}, {hi})")));
    }
    if order == 0 {
        return Ok(DerivativeEstimate {
            order,
            value: curve.eval(x)?,
            step: 0.0,
            richardson_levels: 0,
            error_estimate: 0.0,
            reliable: true,
        });
    }
    let base = spec.step.unwrap_or((x.abs() * 1e-3).max(1e-4));
    let count = if spec.step.is_some() { 1 } else { spec.candidates.max(1) };
    let half_width = order as f64 / 2.0;

    let mut best: Option<DerivativeEstimate> = None;
    for j in 0..count {
        let h = base * 2f64.powi(j as i32);
        if !stencil_fits(curve, x, half_width * h) {
            break;
        }
        let (diag, scale) = richardson(curve, x, order, h, spec.levels)?;
        let tail: Vec<f64> = diag.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        let rounding = |finest: f64| spec.noise * scale * 2f64.powi(order as i32) / finest.powi(order as i32);
        for depth in 0..spec.levels {
            // depth 0 is the plain difference at step h, judged against h/2
            let (truncation, noise) = if depth == 0 {
                (4.0 / 3.0 * tail[0], rounding(h / 2.0))
            } else {
                (tail[depth - 1], 1.5 * rounding(h / 2f64.powi(depth as i32)))
            };
            let total = truncation + noise;
            let monotone = depth < 2 || tail[depth - 1] <= tail[depth - 2];
            if best.as_ref().is_none_or(|b| total < b.error_estimate) {
                best = Some(DerivativeEstimate {
                    order,
                    value: diag[depth],
                    step: h,
                    richardson_levels: depth + 1,
                    error_estimate: total,
                    reliable: monotone || truncation <= 10.0 * noise,
                });
            }
        }
    }
    best.ok_or_else(|| {
        Error::Domain(format!(
            "order-{order} stencil at {x} with step {base} leaves the domain or crosses a singular point"
        ))
    })
}

/// Sample points, possibly split into segments that skip excluded points.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    points: Vec<f64>,
    excluded: Vec<f64>,
    guard: f64,
}

/// Guard band width around excluded points.
pub const DEFAULT_GUARD: f64 = 0.02;

impl Grid {
    pub fn from_points(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidParameter("empty grid".into()));
        }
        if points.iter().any(|p| !p.is_finite()) || points.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidParameter("grid must be finite and strictly increasing".into()));
        }
        Ok(Self {
            points,
            excluded: Vec::new(),
            guard: 0.0,
        })
    }

    /// `n` equispaced points on [a, b].
    pub fn linspace(a: f64, b: f64, n: usize) -> Result<Self> {
        Self::from_points(linspace(a, b, n)?)
    }

    /// Union of equispaced segments `(a, b, n)`.
    pub fn segments(parts: &[(f64, f64, usize)]) -> Result<Self> {
        let mut points = Vec::new();
        for &(a, b, n) in parts {
            points.extend(linspace(a, b, n)?);
        }
        Self::from_points(points)
    }

    /// About `n` points on [a, b] keeping a band of half-width `guard` around
    /// each of `critical`. Points are shared between the remaining pieces in
    /// proportion to their length.
    pub fn guarded(a: f64, b: f64, n: usize, critical: &[f64], guard: f64) -> Result<Self> {
        if !(a < b) {
            return Err(Error::InvalidParameter(format!("empty interval [{a}, {b}]")));
        }
        let mut cuts: Vec<f64> = critical.iter().copied().filter(|&c| c + guard > a && c - guard < b).collect();
        cuts.sort_by(|x, y| x.total_cmp(y));
        let mut pieces = Vec::new();
        let mut start = a;
        for &c in &cuts {
            if c - guard > start {
                pieces.push((start, c - guard));
            }
            start = start.max(c + guard);
        }
        if start < b {
            pieces.push((start, b));
        }
        if pieces.is_empty() {
            return Err(Error::InvalidParameter("guard bands cover the whole interval".into()));
        }
        let total: f64 = pieces.iter().map(|(x, y)| y - x).sum();
        let mut parts = Vec::new();
        for (x, y) in pieces {
            let k = ((n as f64 * (y - x) / total).round() as usize).max(2);
            parts.push((x, y, k));
        }
        let mut g = Self::segments(&parts)?;
        g.excluded = cuts;
        g.guard = guard;
        Ok(g)
    }

    /// Marks bands of half-width `guard` around `points` that midpoint tests skip.
    pub fn excluding(mut self, points: &[f64], guard: f64) -> Self {
        self.excluded = points.to_vec();
        self.guard = guard;
        self
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Whether `x` lies inside a guard band.
    pub fn is_guarded(&self, x: f64) -> bool {
        self.excluded.iter().any(|&c| (x - c).abs() < self.guard)
    }

    /// The grid with every gap halved.
    pub fn refined(&self) -> Self {
        let mut points = Vec::with_capacity(2 * self.points.len());
        for w in self.points.windows(2) {
            points.push(w[0]);
            let mid = 0.5 * (w[0] + w[1]);
            if !self.is_guarded(mid) {
                points.push(mid);
            }
        }
        points.push(*self.points.last().unwrap());
        Self {
            points,
            excluded: self.excluded.clone(),
            guard: self.guard,
        }
    }
}

pub fn linspace(a: f64, b: f64, n: usize) -> Result<Vec<f64>> {
    if n == 0 || (n == 1 && a != b) || !(a <= b) {
        return Err(Error::InvalidParameter(format!("bad linspace {a}:{b}:{n}")));
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    let step = (b - a) / (n - 1) as f64;
    Ok((0..n).map(|i| if i == n - 1 { b } else { a + step * i as f64 }).collect())
}

/// Tolerances of a check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// Allowed negative margin of a derivative.
    pub derivative: f64,
    /// Allowed violation of a derivative-free sample inequality.
    pub sample: f64,
    /// Relative accuracy of the curve's samples.
    pub noise: f64,
}

impl Thresholds {
    /// Curves with a closed form.
    pub fn closed_form() -> Self {
        Self {
            derivative: 1e-7,
            sample: 1e-9,
            noise: 1e-15,
        }
    }

    /// Curves known only to quadrature accuracy.
    pub fn quadrature() -> Self {
        Self {
            derivative: 1e-5,
            sample: 1e-9,
            noise: 1e-13,
        }
    }

    pub fn diff_spec(&self) -> DiffSpec {
        DiffSpec {
            noise: self.noise,
            ..DiffSpec::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    MustHold,
    MustFail,
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Expectation::MustHold => "must_hold",
            Expectation::MustFail => "must_fail",
        })
    }
}

/// Failure margins of a must-fail claim must exceed this multiple of the tolerance.
pub const MUST_FAIL_FACTOR: f64 = 10.0;

/// Outcome of one checked inequality on a sampled grid. Verdicts are sampled:
/// an inequality holding on the grid is not a proof that it holds everywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub claim_id: String,
    pub grid: Vec<f64>,
    pub tolerance: f64,
    pub passed: bool,
    /// Smallest derivative margin over the grid (and orders).
    pub worst_margin: f64,
    pub witness: f64,
    /// Derivative order at the witness, for absolute-monotonicity checks.
    pub witness_order: Option<usize>,
    /// Smallest margin of the derivative-free sample inequality, if any.
    pub sample_margin: Option<f64>,
    pub sample_tolerance: f64,
    /// Some derivative estimates were unreliable and left to the sample test.
    pub degraded: bool,
    pub expectation: Expectation,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    claim_id: &'a str,
    passed: bool,
    tolerance: f64,
    worst_margin: f64,
    witness: f64,
    grid_size: usize,
    expectation: Expectation,
}

impl VerificationReport {
    /// A must-hold report from a precomputed margin.
    pub fn from_margin(grid: &[f64], tolerance: f64, worst_margin: f64, witness: f64) -> Self {
        let mut r = Self {
            claim_id: String::new(),
            grid: grid.to_vec(),
            tolerance,
            passed: false,
            worst_margin,
            witness,
            witness_order: None,
            sample_margin: None,
            sample_tolerance: 0.0,
            degraded: false,
            expectation: Expectation::MustHold,
        };
        r.passed = r.decide();
        r
    }

    /// Whether the inequality is violated beyond `factor` times the tolerances.
    fn violated(&self, factor: f64) -> bool {
        self.worst_margin < -factor * self.tolerance
            || self.sample_margin.is_some_and(|s| s < -factor * self.sample_tolerance)
    }

    fn decide(&self) -> bool {
        match self.expectation {
            Expectation::MustHold => !self.violated(1.0),
            Expectation::MustFail => self.violated(MUST_FAIL_FACTOR),
        }
    }

    /// Names the claim and sets its expectation, recomputing the verdict.
    pub fn with_claim(mut self, id: &str, expectation: Expectation) -> Self {
        self.claim_id = id.to_string();
        self.expectation = expectation;
        self.passed = self.decide();
        self
    }

    /// Conjunction of several reports of one claim: the worst margin wins.
    pub fn combine(id: &str, expectation: Expectation, parts: &[VerificationReport]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidParameter("nothing to combine".into()))?;
        let mut out = first.clone();
        for p in &parts[1..] {
            out.grid.extend_from_slice(&p.grid);
            if p.worst_margin / p.tolerance < out.worst_margin / out.tolerance {
                out.worst_margin = p.worst_margin;
                out.tolerance = p.tolerance;
                out.witness = p.witness;
                out.witness_order = p.witness_order;
            }
            out.sample_margin = match (out.sample_margin, p.sample_margin) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            };
            out.sample_tolerance = out.sample_tolerance.max(p.sample_tolerance);
            out.degraded |= p.degraded;
        }
        Ok(out.with_claim(id, expectation))
    }

    fn json_view(&self) -> ReportJson<'_> {
        ReportJson {
            claim_id: &self.claim_id,
            passed: self.passed,
            tolerance: self.tolerance,
            worst_margin: self.worst_margin,
            witness: self.witness,
            grid_size: self.grid.len(),
            expectation: self.expectation,
        }
    }

    /// `{claim_id, passed, tolerance, worst_margin, witness, grid_size, expectation}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.json_view()).expect("report serializes")
    }
}

/// A suite as a pretty JSON array.
pub fn suite_json(reports: &[VerificationReport]) -> String {
    let values: Vec<ReportJson<'_>> = reports.iter().map(|r| r.json_view()).collect();
    serde_json::to_string_pretty(&values).expect("suite serializes")
}

/// The summary line `PASSED k/N`.
pub fn suite_summary(reports: &[VerificationReport]) -> String {
    let k = reports.iter().filter(|r| r.passed).count();
    format!("PASSED {k}/{}", reports.len())
}

fn check_grid(curve: &dyn ScalarCurve, grid: &Grid) -> Result<()> {
    let (lo, hi) = curve.domain();
    if let Some(x) = grid.points().iter().find(|&&x| !(x > lo && x < hi)) {
        return Err(Error::Domain(format!("grid point {x} outside ({lo}, {hi})")));
    }
    Ok(())
}

fn derivatives(curve: &dyn ScalarCurve, grid: &Grid, order: usize, spec: &DiffSpec) -> Result<Vec<DerivativeEstimate>> {
    grid.points()
        .par_iter()
        .map(|&x| derivative(curve, x, order, spec))
        .collect()
}

/// (worst margin, witness, degraded) over reliable estimates.
fn worst(grid: &Grid, est: &[DerivativeEstimate]) -> (f64, f64, bool) {
    let mut worst = (f64::INFINITY, grid.points()[0]);
    let mut degraded = false;
    for (x, e) in grid.points().iter().zip(est) {
        if !e.reliable {
            degraded = true;
            continue;
        }
        if e.value < worst.0 {
            worst = (e.value, *x);
        }
    }
    (worst.0, worst.1, degraded)
}

/// g' >= 0 on the grid, backed by g(x_{k+1}) >= g(x_k) on the raw samples.
pub fn check_monotone(curve: &dyn ScalarCurve, grid: &Grid, thr: &Thresholds) -> Result<VerificationReport> {
    check_grid(curve, grid)?;
    let est = derivatives(curve, grid, 1, &thr.diff_spec())?;
    let (margin, witness, degraded) = worst(grid, &est);
    let values: Vec<f64> = grid.points().par_iter().map(|&x| curve.eval(x)).collect::<Result<_>>()?;
    let sample = values
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    let mut r = VerificationReport::from_margin(grid.points(), thr.derivative, margin, witness);
    r.sample_margin = Some(sample);
    r.sample_tolerance = thr.sample;
    r.degraded = degraded;
    r.passed = r.decide();
    Ok(r)
}

/// g'' >= 0 on the grid together with midpoint convexity
/// g((x+y)/2) <= (g(x)+g(y))/2 on all grid pairs whose midpoint is not guarded.
pub fn check_convex(curve: &dyn ScalarCurve, grid: &Grid, thr: &Thresholds) -> Result<VerificationReport> {
    check_grid(curve, grid)?;
    let est = derivatives(curve, grid, 2, &thr.diff_spec())?;
    let (margin, witness, degraded) = worst(grid, &est);
    let pts = grid.points();
    let values: Vec<f64> = pts.par_iter().map(|&x| curve.eval(x)).collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..pts.len())
        .flat_map(|i| (i + 1..pts.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| {
            let mid = 0.5 * (pts[i] + pts[j]);
            !grid.is_guarded(mid) && curve.singular_points().iter().all(|&s| s != mid)
        })
        .collect();
    let sample = pairs
        .par_iter()
        .map(|&(i, j)| {
            let mid = curve.eval(0.5 * (pts[i] + pts[j]))?;
            Ok(0.5 * (values[i] + values[j]) - mid)
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let mut r = VerificationReport::from_margin(pts, thr.derivative, margin, witness);
    r.sample_margin = Some(sample);
    r.sample_tolerance = thr.sample;
    r.degraded = degraded;
    r.passed = r.decide();
    Ok(r)
}

/// g^(k) >= 0 for every order k = 0..=max_order on the grid.
pub fn check_abs_monotonic(
    curve: &dyn ScalarCurve,
    max_order: usize,
    grid: &Grid,
    thr: &Thresholds,
) -> Result<VerificationReport> {
    if max_order > MAX_ORDER {
        return Err(Error::InvalidParameter(format!("order {max_order} exceeds {MAX_ORDER}")));
    }
    check_grid(curve, grid)?;
    let spec = thr.diff_spec();
    let mut overall = (f64::INFINITY, grid.points()[0], 0usize);
    let mut any_degraded = false;
    for order in 0..=max_order {
        let est = derivatives(curve, grid, order, &spec)?;
        let (margin, witness, degraded) = worst(grid, &est);
        any_degraded |= degraded;
        if margin < overall.0 {
            overall = (margin, witness, order);
        }
    }
    let mut r = VerificationReport::from_margin(grid.points(), thr.derivative, overall.0, overall.1);
    r.witness_order = Some(overall.2);
    r.degraded = any_degraded;
    Ok(r)
}

/// Least-squares slope of log g against log r, i.e. 2α for H̄ = κ r^{2α}.
pub fn fit_log_slope(curve: &dyn ScalarCurve, grid: &Grid) -> Result<f64> {
    check_grid(curve, grid)?;
    let pts = grid.points();
    if pts.len() < 2 || pts[0] <= 0.0 {
        return Err(Error::InvalidParameter("slope fit needs at least two positive radii".into()));
    }
    let mut xs = Vec::with_capacity(pts.len());
    let mut ys = Vec::with_capacity(pts.len());
    for &r in pts {
        let v = curve.eval(r)?;
        if !(v > 0.0) {
            return Err(Error::LogDomain { value: v });
        }
        xs.push(r.ln());
        ys.push(v.ln());
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}

/// The lower bound β_m on homogeneity exponents: 1/Q for m = 2, 1/α_m otherwise.
pub fn homogeneity_floor(q: usize, m: usize, alpha_m: Option<f64>) -> Result<f64> {
    if q == 0 {
        return Err(Error::InvalidParameter("Q must be positive".into()));
    }
    match (m, alpha_m) {
        (2, _) => Ok(1.0 / q as f64),
        (m, Some(a)) if m > 2 && a > 0.0 => Ok(1.0 / a),
        (m, Some(a)) if m > 2 => Err(Error::InvalidParameter(format!("α_m = {a} must be positive"))),
        (m, None) if m > 2 => Err(Error::UnconfiguredConstant(format!("alpha_m for m = {m}"))),
        (m, _) => Err(Error::InvalidParameter(format!("dimension m = {m} below 2"))),
    }
}

/// α >= β_m, with margin α - β_m and the exponent as witness.
pub fn check_homogeneity_bound(
    alpha: f64,
    q: usize,
    m: usize,
    alpha_m: Option<f64>,
    tol: f64,
) -> Result<VerificationReport> {
    let beta = homogeneity_floor(q, m, alpha_m)?;
    Ok(VerificationReport::from_margin(&[alpha], tol, alpha - beta, alpha))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(domain: (f64, f64), c: Vec<f64>) -> FnCurve {
        FnCurve::new(domain, move |x| Ok(c.iter().rev().fold(0.0, |a, k| a * x + k)))
    }

    #[test]
    fn cubic_third_derivative() {
        let g = poly((f64::NEG_INFINITY, f64::INFINITY), vec![0.0, 0.0, 0.0, 1.0]);
        for x in [-2.0, 0.0, 0.3, 5.0] {
            let d = derivative(&g, x, 3, &DiffSpec::default()).unwrap();
            assert!((d.value - 6.0).abs() < 1e-7, "{x}: {}", d.value);
            assert!(d.error_estimate >= 0.0 && d.step > 0.0);
        }
    }

    #[test]
    fn order_zero_is_the_value() {
        let g = poly((0.0, 1.0), vec![1.0, 2.0]);
        let d = derivative(&g, 0.25, 0, &DiffSpec::default()).unwrap();
        assert_eq!(d.value, 1.5);
    }

    #[test]
    fn stencil_outside_domain_is_an_error() {
        let g = poly((0.0, 1.0), vec![1.0, 2.0]);
        assert!(matches!(
            derivative(&g, 1e-6, 4, &DiffSpec::default()),
            Err(Error::Domain(_))
        ));
        assert!(derivative(&g, 1.5, 1, &DiffSpec::default()).is_err());
        assert!(derivative(&g, 0.5, 7, &DiffSpec::default()).is_err());
    }

    #[test]
    fn stencils_avoid_singular_points() {
        let g = FnCurve::new((0.0, 1.0), |x| Ok((x - 0.5).abs())).with_singular(vec![0.5]);
        let d = derivative(&g, 0.52, 1, &DiffSpec::default()).unwrap();
        assert!((d.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn guarded_grid_skips_the_band() {
        let g = Grid::guarded(0.05, 0.95, 40, &[0.5], 0.05).unwrap();
        assert!(g.points().iter().all(|x| (x - 0.5).abs() >= 0.05 - 1e-15));
        assert!(g.is_guarded(0.5));
        assert!(!g.is_guarded(0.4));
        let r = g.refined();
        assert!(r.len() >= 2 * g.len() - 3);
        assert!(r.points().iter().all(|x| !r.is_guarded(*x) || (x - 0.5).abs() >= 0.05 - 1e-15));
    }

    #[test]
    fn decreasing_function_is_a_detected_failure() {
        let g = poly((-1.0, 2.0), vec![0.0, -1.0]);
        let grid = Grid::linspace(0.1, 0.9, 9).unwrap();
        let r = check_monotone(&g, &grid, &Thresholds::closed_form())
            .unwrap()
            .with_claim("neg", Expectation::MustFail);
        assert!(r.passed);
        assert!((r.worst_margin + 1.0).abs() < 1e-9);
        let held = r.clone().with_claim("neg", Expectation::MustHold);
        assert!(!held.passed);
    }

    #[test]
    fn convexity_checks() {
        let grid = Grid::linspace(0.1, 0.9, 12).unwrap();
        let convex = poly((0.0, 1.0), vec![0.0, 0.0, 1.0]);
        assert!(check_convex(&convex, &grid, &Thresholds::closed_form()).unwrap().passed);
        let concave = FnCurve::new((0.0, 1.0), |x: f64| Ok(x.sqrt()));
        assert!(!check_convex(&concave, &grid, &Thresholds::closed_form()).unwrap().passed);
    }

    #[test]
    fn abs_monotonic_reports_witness_order() {
        let grid = Grid::linspace(0.2, 0.8, 10).unwrap();
        let g = FnCurve::new((0.0, 1.0), |x: f64| Ok(3.0 * x.powf(2.0 / 3.0)));
        let r = check_abs_monotonic(&g, 3, &grid, &Thresholds::closed_form()).unwrap();
        assert!(!r.passed);
        assert_eq!(r.witness_order, Some(2));
        let e = poly((0.0, 1.0), vec![1.0, 1.0, 0.5, 1.0 / 6.0]);
        let inner = Grid::linspace(0.35, 0.65, 10).unwrap();
        let r = check_abs_monotonic(&e, 6, &inner, &Thresholds::closed_form()).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn homogeneity_floor_needs_alpha_m_above_two() {
        assert_eq!(homogeneity_floor(3, 2, None).unwrap(), 1.0 / 3.0);
        assert!(matches!(homogeneity_floor(2, 3, None), Err(Error::UnconfiguredConstant(_))));
        assert_eq!(homogeneity_floor(2, 3, Some(4.0)).unwrap(), 0.25);
        let r = check_homogeneity_bound(0.05, 2, 2, None, 1e-6).unwrap();
        assert!(!r.passed);
    }

    #[test]
    fn log_slope_of_power() {
        let g = FnCurve::new((0.0, 1.0), |x: f64| Ok(2.0 * x.powf(0.7)));
        let grid = Grid::linspace(0.1, 0.9, 20).unwrap();
        assert!((fit_log_slope(&g, &grid).unwrap() - 0.7).abs() < 1e-12);
    }

    #[test]
    fn json_schema() {
        let r = VerificationReport::from_margin(&[0.1, 0.2], 1e-7, 0.5, 0.1).with_claim("x", Expectation::MustHold);
        assert_eq!(
            r.to_json(),
            r#"{"claim_id":"x","passed":true,"tolerance":1e-7,"worst_margin":0.5,"witness":0.1,"grid_size":2,"expectation":"must_hold"}"#
        );
        assert_eq!(suite_summary(&[r.clone(), r]), "PASSED 2/2");
    }
}
