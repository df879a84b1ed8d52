//! Real harmonic functions on the unit ball of R^2 or R^3, built from
//! homogeneous harmonic polynomials.
//!
//! These are the single-valued baseline: their spherical L^2 averages are
//! even polynomials in r with nonnegative coefficients, which gives a
//! closed-form oracle for absolute monotonicity.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::calculus::{self, Expectation, FnCurve, Grid, Thresholds, VerificationReport};
use crate::error::{Error, Result};
use crate::growth::{self, QuadratureSpec};
use crate::poly::{Poly1, PolyN};
use crate::qfun::QFunction;
use crate::quadrature::{self, GaussLegendre, RadialRule, Tolerance};

/// Highest degree accepted for planar terms.
pub const MAX_DEGREE_PLANE: u32 = 6;
/// Highest degree accepted for solid harmonics in R^3.
pub const MAX_DEGREE_SOLID: u32 = 4;

/// One element of the harmonic basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Basis {
    /// Re z^k (m = 2).
    Re(u32),
    /// Im z^k (m = 2), k >= 1.
    Im(u32),
    /// Solid harmonic r^k P_k^|l|(cos θ) cos(lφ) for l >= 0, sin(|l|φ) for
    /// l < 0 (m = 3).
    Solid(u32, i32),
}

impl Basis {
    pub fn degree(&self) -> u32 {
        match *self {
            Basis::Re(k) | Basis::Im(k) | Basis::Solid(k, _) => k,
        }
    }

    fn dim(&self) -> usize {
        match self {
            Basis::Re(_) | Basis::Im(_) => 2,
            Basis::Solid(..) => 3,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Basis::Re(k) if k > MAX_DEGREE_PLANE => {
                Err(Error::InvalidParameter(format!("degree {k} exceeds {MAX_DEGREE_PLANE}")))
            }
            Basis::Im(k) if k == 0 || k > MAX_DEGREE_PLANE => {
                Err(Error::InvalidParameter(format!("Im(z^{k}) is not a basis element")))
            }
            Basis::Solid(k, l) if k > MAX_DEGREE_SOLID || l.unsigned_abs() > k => Err(
                Error::InvalidParameter(format!("Y({k},{l}) is not a supported solid harmonic")),
            ),
            _ => Ok(()),
        }
    }

    /// The basis element as an explicit polynomial.
    pub fn polynomial(&self) -> PolyN {
        match *self {
            Basis::Re(k) => complex_power(2, k).0,
            Basis::Im(k) => complex_power(2, k).1,
            Basis::Solid(k, l) => solid_harmonic(k, l),
        }
    }

    /// Mean of the square of the basis element over the unit sphere.
    pub fn sphere_mean_square(&self) -> f64 {
        match *self {
            Basis::Re(0) => 1.0,
            Basis::Re(_) | Basis::Im(_) => 0.5,
            Basis::Solid(k, 0) => 1.0 / (2 * k + 1) as f64,
            Basis::Solid(k, l) => {
                let l = l.unsigned_abs();
                let ratio: f64 = ((k - l + 1)..=(k + l)).map(|i| i as f64).product();
                ratio / (2.0 * (2 * k + 1) as f64)
            }
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Basis::Re(0) => write!(f, "1"),
            Basis::Re(1) => write!(f, "Re(z)"),
            Basis::Re(k) => write!(f, "Re(z^{k})"),
            Basis::Im(1) => write!(f, "Im(z)"),
            Basis::Im(k) => write!(f, "Im(z^{k})"),
            Basis::Solid(k, l) => write!(f, "Y({k},{l})"),
        }
    }
}

/// Real and imaginary parts of (x_0 + i x_1)^k as polynomials in `dim` variables.
fn complex_power(dim: usize, k: u32) -> (PolyN, PolyN) {
    let x = PolyN::variable(dim, 0);
    let y = PolyN::variable(dim, 1);
    let mut re = PolyN::constant(dim, 1.0);
    let mut im = PolyN::zero(dim);
    for _ in 0..k {
        let next_re = re.mul(&x).add(&im.mul(&y).scale(-1.0));
        let next_im = re.mul(&y).add(&im.mul(&x));
        re = next_re;
        im = next_im;
    }
    (re, im)
}

fn solid_harmonic(k: u32, l: i32) -> PolyN {
    let m = l.unsigned_abs();
    let (re, im) = complex_power(3, m);
    let azimuthal = if l >= 0 { re } else { im };
    let dp = Poly1::legendre(k as usize).nth_derivative(m as usize);
    let z = PolyN::variable(3, 2);
    let r2 = (0..3).fold(PolyN::zero(3), |acc, i| acc.add(&PolyN::variable(3, i).pow(2)));
    let mut polar = PolyN::zero(3);
    for (i, c) in dp.coeffs.iter().enumerate() {
        if *c == 0.0 {
            continue;
        }
        let rest = (k - m) as usize - i;
        debug_assert!(rest % 2 == 0);
        polar = polar.add(&z.pow(i as u32).mul(&r2.pow((rest / 2) as u32)).scale(*c));
    }
    azimuthal.mul(&polar)
}

/// A finite combination of harmonic basis polynomials on B_1 in R^m.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicCombo {
    m: usize,
    terms: Vec<(Basis, f64)>,
    poly: PolyN,
    grad: Vec<PolyN>,
}

impl HarmonicCombo {
    pub fn new(m: usize, terms: Vec<(Basis, f64)>) -> Result<Self> {
        if m != 2 && m != 3 {
            return Err(Error::InvalidParameter(format!("domain dimension {m} not in {{2, 3}}")));
        }
        let mut poly = PolyN::zero(m);
        for (b, c) in &terms {
            b.validate()?;
            if b.dim() != m {
                return Err(Error::DimensionMismatch(format!("basis {b} does not live in R^{m}")));
            }
            poly = poly.add(&b.polynomial().scale(*c));
        }
        let grad = poly.gradient();
        Ok(Self { m, terms, poly, grad })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> &[(Basis, f64)] {
        &self.terms
    }

    pub fn polynomial(&self) -> &PolyN {
        &self.poly
    }

    pub fn degree(&self) -> u32 {
        self.poly.degree()
    }

    /// True when every coefficient is zero.
    pub fn is_trivial(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.poly.eval(x)
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        self.grad.iter().map(|g| g.eval(x)).collect()
    }

    pub fn grad_sq(&self, x: &[f64]) -> f64 {
        self.grad.iter().map(|g| g.eval(x).powi(2)).sum()
    }

    /// Coefficients grouped by basis element.
    fn grouped(&self) -> BTreeMap<Basis, f64> {
        let mut map = BTreeMap::new();
        for (b, c) in &self.terms {
            *map.entry(*b).or_insert(0.0) += c;
        }
        map
    }

    /// Spherical L^2 average as an even polynomial in r.
    pub fn h_bar_closed_form(&self) -> Poly1 {
        let mut coeffs = vec![0.0; 2 * self.degree() as usize + 1];
        for (b, c) in self.grouped() {
            coeffs[2 * b.degree() as usize] += b.sphere_mean_square() * c * c;
        }
        Poly1::new(coeffs)
    }

    /// Un-normalized H(r) = C_m r^(m-1) H̄(r) as a polynomial.
    pub fn h_closed_form(&self) -> Poly1 {
        Poly1::monomial(self.m - 1, sphere_area(self.m)).mul(&self.h_bar_closed_form())
    }
}

impl fmt::Display for HarmonicCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "harm:m={};", self.m)?;
        for (i, (b, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{c}*{b}")?;
        }
        Ok(())
    }
}

/// |∂B_1| in R^m.
pub fn sphere_area(m: usize) -> f64 {
    match m {
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => panic!("unsupported dimension {m}"),
    }
}

/// Volume of the unit ball in R^m.
pub fn ball_volume(m: usize) -> f64 {
    sphere_area(m) / m as f64
}

/// Average of `f` over the unit sphere of R^m with a fixed product rule
/// exact for polynomials of total degree <= `degree`.
pub fn sphere_mean_exact<F: Fn(&[f64]) -> f64>(m: usize, degree: u32, f: F) -> f64 {
    let deg = degree as usize;
    match m {
        2 => {
            let n = deg + 2;
            quadrature::periodic_trapezoid_fixed(|t| f(&[t.cos(), t.sin()]), n) / (2.0 * PI)
        }
        3 => {
            let rule = GaussLegendre::new(deg / 2 + 2);
            let nphi = deg + 2;
            let mut acc = 0.0;
            for (t, w) in rule.nodes.iter().zip(&rule.weights) {
                let s = (1.0 - t * t).sqrt();
                let ring = quadrature::periodic_trapezoid_fixed(|p| f(&[s * p.cos(), s * p.sin(), *t]), nphi);
                acc += w * ring;
            }
            acc / (4.0 * PI)
        }
        _ => panic!("unsupported dimension {m}"),
    }
}

/// Average of `f` over the unit sphere with node doubling until two
/// successive product rules agree within `tol`.
pub fn sphere_mean_adaptive<F: Fn(&[f64]) -> f64>(m: usize, start: usize, tol: Tolerance, f: F) -> Result<f64> {
    match m {
        2 => {
            let r = quadrature::periodic_trapezoid(|t| Ok(f(&[t.cos(), t.sin()])), start, 1 << 16, tol)?;
            Ok(r.value / (2.0 * PI))
        }
        3 => {
            let rule_at = |n: usize| {
                let rule = GaussLegendre::new(n);
                let nphi = 2 * n;
                let mut acc = 0.0;
                for (t, w) in rule.nodes.iter().zip(&rule.weights) {
                    let s = (1.0 - t * t).sqrt();
                    acc += w * quadrature::periodic_trapezoid_fixed(|p| f(&[s * p.cos(), s * p.sin(), *t]), nphi);
                }
                acc / (4.0 * PI)
            };
            let mut n = start.max(4);
            let mut prev = rule_at(n);
            while n < 512 {
                n *= 2;
                let next = rule_at(n);
                if (next - prev).abs() <= tol.abs.max(tol.rel * next.abs()) {
                    return Ok(next);
                }
                prev = next;
            }
            Err(Error::QuadratureBudget("sphere product rule did not converge".into()))
        }
        _ => Err(Error::InvalidParameter(format!("sphere rule for m = {m}"))),
    }
}

/// A smooth nondecreasing weight φ on [0, 1].
#[derive(Clone)]
pub struct WeightSpec {
    pub name: String,
    pub phi: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub phi_prime: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightSpec").field("name", &self.name).finish()
    }
}

impl WeightSpec {
    pub fn new(
        name: impl Into<String>,
        phi: impl Fn(f64) -> f64 + Send + Sync + 'static,
        phi_prime: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let w = Self {
            name: name.into(),
            phi: Arc::new(phi),
            phi_prime: Arc::new(phi_prime),
        };
        for i in 0..=1000 {
            let t = i as f64 / 1000.0;
            if (w.phi_prime)(t) < 0.0 {
                return Err(Error::InvalidParameter(format!("weight `{}` decreases at t = {t}", w.name)));
            }
        }
        Ok(w)
    }

    /// φ(t) = t.
    pub fn identity() -> Self {
        Self::new("t", |t| t, |_| 1.0).expect("identity weight is nondecreasing")
    }

    /// φ(t) = t^2.
    pub fn square() -> Self {
        Self::new("t^2", |t| t * t, |t| 2.0 * t).expect("t^2 is nondecreasing on [0,1]")
    }

    /// φ(t) = e^t.
    pub fn exponential() -> Self {
        Self::new("exp", f64::exp, f64::exp).expect("exp is nondecreasing")
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "t" | "identity" => Ok(Self::identity()),
            "t^2" | "square" => Ok(Self::square()),
            "exp" => Ok(Self::exponential()),
            other => Err(Error::UnknownFunction(format!("weight {other}"))),
        }
    }

    /// Derivative of the derived weight φ̃(ρ) = φ(1)ρ − Φ(ρ), i.e. φ(1) − φ(ρ).
    pub fn derived_prime(&self, rho: f64) -> f64 {
        (self.phi)(1.0) - (self.phi)(rho)
    }
}

fn ball_radial_tol() -> Tolerance {
    Tolerance { abs: 1e-15, rel: 1e-14 }
}

/// ∫_{B_1} F(x) w(|x|^2) dx for a polynomial integrand `F` of degree <= `degree`.
fn ball_integral<F, W>(m: usize, degree: u32, integrand: F, weight: W) -> Result<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
    W: Fn(f64) -> f64 + Sync,
{
    let area = sphere_area(m);
    let radial = |s: f64| -> Result<f64> {
        let mean = sphere_mean_exact(m, degree, |w| {
            let x: Vec<f64> = w.iter().map(|c| c * s).collect();
            integrand(&x)
        });
        Ok(area * s.powi(m as i32 - 1) * weight(s * s) * mean)
    };
    quadrature::adaptive_gauss(&radial, 0.0, 1.0, &[], ball_radial_tol(), RadialRule::default())
}

/// d(r) = ∫_{B_1} u^2(rx) φ'(|x|^2) dx.
pub fn weighted_d(u: &HarmonicCombo, w: &WeightSpec, r: f64) -> Result<f64> {
    if !(0.0 < r && r < 1.0) {
        return Err(Error::Domain(format!("radius {r} outside (0, 1)")));
    }
    let deg = 2 * u.degree();
    ball_integral(
        u.m,
        deg,
        |x| {
            let y: Vec<f64> = x.iter().map(|c| c * r).collect();
            u.eval(&y).powi(2)
        },
        |t| (w.phi_prime)(t),
    )
}

/// r ∫_{B_1} |∇u|^2(rx) φ̃'(|x|^2) dx, the derivative of [`weighted_d`]
/// predicted by the divergence-theorem computation (with Δ(u²) = 2|∇u|²).
pub fn weighted_d_prime(u: &HarmonicCombo, w: &WeightSpec, r: f64) -> Result<f64> {
    if !(0.0 < r && r < 1.0) {
        return Err(Error::Domain(format!("radius {r} outside (0, 1)")));
    }
    let deg = 2 * u.degree().saturating_sub(1);
    let integral = ball_integral(
        u.m,
        deg,
        |x| {
            let y: Vec<f64> = x.iter().map(|c| c * r).collect();
            u.grad_sq(&y)
        },
        |t| w.derived_prime(t),
    )?;
    Ok(r * integral)
}

/// ∫_{B_r} u^2 dx.
pub fn ball_l2(u: &HarmonicCombo, r: f64) -> Result<f64> {
    Ok(r.powi(u.m as i32) * weighted_d(u, &WeightSpec::identity(), r)?)
}

/// Largest 5-point (7-point in R^3) Laplacian residual of `u` over `points`.
pub fn stencil_laplacian_residual(u: &HarmonicCombo, points: &[Vec<f64>], h: f64) -> f64 {
    points
        .iter()
        .map(|x| {
            let centre = u.eval(x);
            let mut lap = 0.0;
            for i in 0..u.m {
                let mut p = x.clone();
                p[i] += h;
                let plus = u.eval(&p);
                p[i] -= 2.0 * h;
                let minus = u.eval(&p);
                lap += (plus - 2.0 * centre + minus) / (h * h);
            }
            lap.abs()
        })
        .fold(0.0, f64::max)
}

/// The one-dimensional converse example u(x) = x^2, which is not harmonic.
///
/// Returns (∫_{-r}^{r} u^2 dx, its derivative) as polynomials in r.
pub fn converse_example() -> (Poly1, Poly1) {
    // u^2 = x^4; the integral over [-r, r] is 2 r^5 / 5.
    let u_sq = Poly1::monomial(4, 1.0);
    let mut anti = vec![0.0; u_sq.coeffs.len() + 1];
    for (k, c) in u_sq.coeffs.iter().enumerate() {
        anti[k + 1] = c / (k + 1) as f64;
    }
    // odd antiderivative: F(r) - F(-r) = 2 F(r)
    let integral = Poly1::new(anti.iter().map(|c| 2.0 * c).collect());
    let derivative = integral.derivative();
    (integral, derivative)
}

/// Absolute monotonicity of H̄ for a harmonic combination, checked on both the
/// quadrature path and the closed-form polynomial path. The two verdicts must
/// agree; the quadrature report is returned.
pub fn verify_theorem_1_1(
    u: &HarmonicCombo,
    max_order: usize,
    grid: &Grid,
    quad: &QuadratureSpec,
) -> Result<VerificationReport> {
    if u.is_trivial() {
        return Err(Error::InvalidParameter("u must not vanish identically".into()));
    }
    let closed = u.h_bar_closed_form();
    let closed_curve = FnCurve::new((0.0, 1.0), move |r| Ok(closed.eval(r)));
    let f = QFunction::harmonic(u.clone());
    let quad = quad.clone();
    let quad_curve = FnCurve::new((0.0, 1.0), move |r| growth::h_bar(&f, r, &quad));

    let closed_thr = Thresholds::closed_form();
    let quad_thr = Thresholds::quadrature();
    let by_closed = calculus::check_abs_monotonic(&closed_curve, max_order, grid, &closed_thr)?
        .with_claim("thm1.1.closed", Expectation::MustHold);
    let by_quad = calculus::check_abs_monotonic(&quad_curve, max_order, grid, &quad_thr)?
        .with_claim("thm1.1", Expectation::MustHold);
    if by_closed.passed != by_quad.passed {
        return Err(Error::InternalConsistency(format!(
            "closed form says {}, quadrature says {} for {u}",
            by_closed.passed, by_quad.passed
        )));
    }
    Ok(by_quad)
}

/// Parses `1+Re(z)+0.5*Im(z^2)` (m = 2) or `Y(2,0)-0.3*Y(3,-1)` (m = 3).
pub fn parse_combo(m: usize, body: &str) -> Result<HarmonicCombo> {
    let mut terms = Vec::new();
    for (sign, raw) in split_terms(body)? {
        let raw = raw.trim();
        let (coef, basis) = match raw.split_once('*') {
            Some((c, b)) => (parse_number(c)?, parse_basis(m, b.trim())?),
            None => match parse_basis(m, raw) {
                Ok(b) => (1.0, b),
                Err(_) => (parse_number(raw)?, Basis::Re(0)),
            },
        };
        terms.push((basis, sign * coef));
    }
    HarmonicCombo::new(m, terms)
}

fn parse_number(s: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad coefficient `{s}`")))
}

fn parse_basis(m: usize, s: &str) -> Result<Basis> {
    let bad = || Error::Parse(format!("bad basis element `{s}`"));
    if s == "1" {
        return Ok(if m == 2 { Basis::Re(0) } else { Basis::Solid(0, 0) });
    }
    let degree = |inner: &str| -> Result<u32> {
        match inner {
            "z" => Ok(1),
            _ => inner.strip_prefix("z^").and_then(|k| k.parse().ok()).ok_or_else(bad),
        }
    };
    if let Some(inner) = s.strip_prefix("Re(").and_then(|r| r.strip_suffix(')')) {
        return Ok(Basis::Re(degree(inner)?));
    }
    if let Some(inner) = s.strip_prefix("Im(").and_then(|r| r.strip_suffix(')')) {
        return Ok(Basis::Im(degree(inner)?));
    }
    if let Some(inner) = s.strip_prefix("Y(").and_then(|r| r.strip_suffix(')')) {
        let (k, l) = inner.split_once(',').ok_or_else(bad)?;
        let k = k.trim().parse().map_err(|_| bad())?;
        let l = l.trim().parse().map_err(|_| bad())?;
        return Ok(Basis::Solid(k, l));
    }
    Err(bad())
}

/// Splits on top-level `+`/`-`, keeping exponent signs such as `1e-3`.
fn split_terms(body: &str) -> Result<Vec<(f64, String)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut sign = 1.0;
    let mut current = String::new();
    let mut prev: Option<char> = None;
    for ch in body.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        let in_exponent = matches!(prev, Some('e') | Some('E')) && current.chars().rev().nth(1).is_some_and(|c| c.is_ascii_digit() || c == '.');
        if depth == 0 && (ch == '+' || ch == '-') && !in_exponent {
            if !current.trim().is_empty() {
                out.push((sign, std::mem::take(&mut current)));
            } else if ch == '-' && !out.is_empty() {
                return Err(Error::Parse(format!("dangling sign in `{body}`")));
            }
            sign = if ch == '-' { -1.0 } else { 1.0 };
        } else if !ch.is_whitespace() {
            current.push(ch);
        }
        if !ch.is_whitespace() {
            prev = Some(ch);
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced parentheses in `{body}`")));
    }
    if current.trim().is_empty() {
        return Err(Error::Parse(format!("empty term in `{body}`")));
    }
    out.push((sign, current));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_points(m: usize, count: usize) -> Vec<Vec<f64>> {
        // deterministic quasi-random points inside the ball of radius 0.6
        (0..count)
            .map(|i| {
                (0..m)
                    .map(|j| 0.6 * ((0.754877666 * (i + 1) as f64 + 0.569840291 * (j + 1) as f64).fract() - 0.5))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn re_z_evaluates_to_x() {
        let u = parse_combo(2, "Re(z)").unwrap();
        assert_eq!(u.eval(&[0.3, 0.4]), 0.3);
    }

    #[test]
    fn basis_elements_are_harmonic() {
        let mut all = Vec::new();
        for k in 0..=MAX_DEGREE_PLANE {
            all.push(Basis::Re(k));
            if k > 0 {
                all.push(Basis::Im(k));
            }
        }
        for k in 0..=MAX_DEGREE_SOLID {
            for l in -(k as i32)..=(k as i32) {
                all.push(Basis::Solid(k, l));
            }
        }
        for b in all {
            let p = b.polynomial();
            assert!(p.laplacian().max_abs_coefficient() < 1e-12, "{b} is not harmonic");
            let u = HarmonicCombo::new(b.dim(), vec![(b, 1.0)]).unwrap();
            let pts = random_points(b.dim(), 10);
            let scale = p.max_abs_coefficient();
            assert!(stencil_laplacian_residual(&u, &pts, 1e-3) < 1e-5 * scale, "{b}");
        }
    }

    #[test]
    fn closed_form_means() {
        let u = parse_combo(2, "Re(z)").unwrap();
        assert_eq!(u.h_bar_closed_form().coeffs, vec![0.0, 0.0, 0.5]);
        let c = parse_combo(2, "3").unwrap();
        assert_eq!(c.h_bar_closed_form().coeffs, vec![9.0]);
    }

    #[test]
    fn solid_means_match_quadrature() {
        for k in 0..=MAX_DEGREE_SOLID {
            for l in -(k as i32)..=(k as i32) {
                let b = Basis::Solid(k, l);
                let p = b.polynomial();
                let mean = sphere_mean_exact(3, 2 * k, |x| p.eval(x).powi(2));
                let expected = b.sphere_mean_square();
                assert!((mean - expected).abs() < 1e-13 * expected.max(1.0), "{b}: {mean} vs {expected}");
            }
        }
    }

    #[test]
    fn distinct_solid_harmonics_are_orthogonal() {
        let a = Basis::Solid(3, 1).polynomial();
        let b = Basis::Solid(3, -1).polynomial();
        let c = Basis::Solid(1, 1).polynomial();
        let ab = sphere_mean_exact(3, 6, |x| a.eval(x) * b.eval(x));
        let ac = sphere_mean_exact(3, 4, |x| a.eval(x) * c.eval(x));
        assert!(ab.abs() < 1e-14 && ac.abs() < 1e-14);
    }

    #[test]
    fn weighted_d_of_constant_is_ball_volume() {
        let u = parse_combo(2, "1").unwrap();
        let d = weighted_d(&u, &WeightSpec::identity(), 0.4).unwrap();
        assert!((d - PI).abs() < 1e-13);
        let u3 = parse_combo(3, "1").unwrap();
        let d3 = weighted_d(&u3, &WeightSpec::identity(), 0.7).unwrap();
        assert!((d3 - 4.0 * PI / 3.0).abs() < 1e-13);
    }

    #[test]
    fn weighted_d_of_re_z() {
        // ∫_{B_1} (r x_1)^2 dx = r^2 π / 4
        let u = parse_combo(2, "Re(z)").unwrap();
        for r in [0.1, 0.5, 0.9] {
            let d = weighted_d(&u, &WeightSpec::identity(), r).unwrap();
            assert!((d - r * r * PI / 4.0).abs() < 1e-14, "{d}");
        }
    }

    #[test]
    fn weighted_d_rejects_bad_radius() {
        let u = parse_combo(2, "1").unwrap();
        assert!(weighted_d(&u, &WeightSpec::identity(), 1.0).is_err());
    }

    #[test]
    fn decreasing_weight_is_rejected() {
        assert!(WeightSpec::new("neg", |t| -t, |_| -1.0).is_err());
    }

    #[test]
    fn converse_example_derivative() {
        let (integral, derivative) = converse_example();
        assert_eq!(integral.coeffs, vec![0.0, 0.0, 0.0, 0.0, 0.0, 0.4]);
        assert_eq!(derivative.coeffs, vec![0.0, 0.0, 0.0, 0.0, 2.0]);
        assert!(derivative.has_nonnegative_coefficients());
    }

    #[test]
    fn parsing() {
        let u = parse_combo(2, "1+Re(z)+0.5*Im(z^2)").unwrap();
        assert_eq!(u.terms().len(), 3);
        assert_eq!(u.eval(&[0.2, 0.5]), 1.0 + 0.2 + 0.5 * 2.0 * 0.2 * 0.5);
        let v = parse_combo(3, "Y(2,0)-1e-1*Y(3,-1)").unwrap();
        assert_eq!(v.terms()[1], (Basis::Solid(3, -1), -0.1));
        assert!(parse_combo(2, "Re(w)").is_err());
        assert!(parse_combo(2, "Y(2,0)").is_err());
        assert!(parse_combo(3, "Y(5,0)").is_err());
        assert!(parse_combo(2, "Im(z^0)").is_err());
    }
}
