//! Quadrature for the scalar functionals of a map f on B_1:
//! H, H̄, D, I, h_N, a(t), the ball L^2 mass, the boundary integrals entering
//! the energy identities, the integral A(ρ) with its derivatives, and the
//! weighted functional d(r) of the harmonic baseline.
//!
//! Circles are integrated with the periodic trapezoid rule; radial integrals
//! use adaptive Gauss-Legendre panels graded toward singular radii. For
//! branched roots with the branch point inside the disk, area integrals are
//! taken in polar coordinates centred at the branch point, where |f|^2 and
//! |Df|^2 are powers of the distance to it.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::calculus::{self, DiffSpec, ScalarCurve};
use crate::error::{Error, Result};
use crate::harmonic_ref::{self, WeightSpec};
use crate::multipoint::{self, QPoint};
use crate::qfun::{self, arg_0_2pi, QFunction};
use crate::quadrature::{self, RadialRule, Tolerance};

/// Node counts, grading and tolerances for every integral in this module.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    /// Initial node count of the periodic trapezoid (m = 2).
    pub circle_nodes: usize,
    /// Node budget of the periodic trapezoid.
    pub max_circle_nodes: usize,
    /// Initial Gauss-Legendre order in cos θ of the product sphere rule (m = 3).
    pub sphere_order: usize,
    /// Maximal bisection depth of adaptive radial panels.
    pub radial_depth: usize,
    /// Geometric ratio of the radial mesh toward singular radii.
    pub graded_ratio: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            circle_nodes: 64,
            max_circle_nodes: 1 << 20,
            sphere_order: 8,
            radial_depth: 30,
            graded_ratio: 2.0,
            abs_tol: 1e-15,
            rel_tol: 1e-13,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.circle_nodes < 16 || self.circle_nodes % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "circle_nodes = {} must be even and >= 16",
                self.circle_nodes
            )));
        }
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter("tolerances must be positive".into()));
        }
        if !(self.graded_ratio > 1.0) {
            return Err(Error::InvalidParameter("graded_ratio must exceed 1".into()));
        }
        Ok(())
    }

    fn tol(&self) -> Tolerance {
        Tolerance {
            abs: self.abs_tol,
            rel: self.rel_tol,
        }
    }

    fn radial(&self) -> RadialRule {
        RadialRule {
            max_depth: self.radial_depth,
            ratio: self.graded_ratio,
        }
    }

    fn circle<F: FnMut(f64) -> Result<f64>>(&self, f: F) -> Result<quadrature::PeriodicIntegral> {
        quadrature::periodic_trapezoid(f, self.circle_nodes, self.max_circle_nodes, self.tol())
    }
}

/// |∂B_1| in R^m (C_m).
pub fn sphere_constant(m: usize) -> f64 {
    harmonic_ref::sphere_area(m)
}

fn check_radius(f: &QFunction, r: f64) -> Result<()> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain(format!("radius {r} outside (0, 1)")));
    }
    for rc in f.critical_radii() {
        if (r - rc).abs() <= 1e-14 {
            return Err(Error::CriticalRadius { radius: r });
        }
    }
    Ok(())
}

fn on_circle(r: f64, theta: f64) -> [f64; 2] {
    [r * theta.cos(), r * theta.sin()]
}

/// Integral of `density` over ∂B_r, including the surface Jacobian, together
/// with the number of angular nodes used (m = 2) or 0 (m = 3).
fn sphere_integral<F>(f: &QFunction, r: f64, quad: &QuadratureSpec, density: F) -> Result<(f64, usize)>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    match f.domain_dim() {
        2 => {
            let res = quad.circle(|t| density(&on_circle(r, t)))?;
            Ok((r * res.value, res.nodes))
        }
        3 => {
            // densities of the harmonic baseline are infallible polynomials
            let failure = std::cell::OnceCell::new();
            let mean = harmonic_ref::sphere_mean_adaptive(3, quad.sphere_order, quad.tol(), |w| {
                let x = [r * w[0], r * w[1], r * w[2]];
                density(&x).unwrap_or_else(|e| {
                    let _ = failure.set(e);
                    f64::NAN
                })
            });
            if let Some(e) = failure.into_inner() {
                return Err(e);
            }
            Ok((4.0 * PI * r * r * mean?, 0))
        }
        m => Err(Error::InvalidParameter(format!("no sphere rule for m = {m}"))),
    }
}

/// H(r) = ∫_{∂B_r} |f|^2 dσ.
pub fn h_sphere(f: &QFunction, r: f64, quad: &QuadratureSpec) -> Result<f64> {
    h_sphere_with_nodes(f, r, quad).map(|(v, _)| v)
}

pub fn h_sphere_with_nodes(f: &QFunction, r: f64, quad: &QuadratureSpec) -> Result<(f64, usize)> {
    check_radius(f, r)?;
    sphere_integral(f, r, quad, |x| f.abs_sq_at(x))
}

/// H̄(r) = H(r) / (C_m r^(m-1)).
pub fn h_bar(f: &QFunction, r: f64, quad: &QuadratureSpec) -> Result<f64> {
    h_bar_with_nodes(f, r, quad).map(|(v, _)| v)
}

pub fn h_bar_with_nodes(f: &QFunction, r: f64, quad: &QuadratureSpec) -> Result<(f64, usize)> {
    let m = f.domain_dim();
    let (h, nodes) = h_sphere_with_nodes(f, r, quad)?;
    Ok((h / (sphere_constant(m) * r.powi(m as i32 - 1)), nodes))
}

/// Area integral over B_r of a density that, for branched roots, depends
/// only on the distance to the branch point.
fn disk_integral<F>(f: &QFunction, r: f64, quad: &QuadratureSpec, density: F) -> Result<(f64, usize)>
where
    F: Fn(Complex64) -> Result<f64> + Sync,
{
    let q = f.q() as f64;
    let centre = match f {
        QFunction::BranchedRoots { a, b, .. } => -b / a,
        _ => Complex64::new(0.0, 0.0),
    };
    let c = centre.norm();
    if c < r {
        // Polar coordinates around the branch point. With ρ = R(φ) t^(q/2),
        // ρ^(2/q - 1) dρ becomes a constant multiple of dt.
        let p = 0.5 * q;
        let res = quad.circle(|phi| {
            let dir = Complex64::from_polar(1.0, phi);
            let proj = (centre.conj() * dir).re;
            let reach = -proj + (proj * proj - c * c + r * r).sqrt();
            let ray = |t: f64| -> Result<f64> {
                if t <= 0.0 {
                    return Ok(0.0);
                }
                let rho = reach * t.powf(p);
                let jac = reach * p * t.powf(p - 1.0);
                Ok(density(centre + dir * rho)? * rho * jac)
            };
            quadrature::adaptive_gauss(&ray, 0.0, 1.0, &[], quad.tol(), quad.radial())
        })?;
        Ok((res.value, res.nodes))
    } else if c > r {
        let nodes = std::sync::atomic::AtomicUsize::new(0);
        let ring = |s: f64| -> Result<f64> {
            let res = quad.circle(|t| density(Complex64::from_polar(s, t)))?;
            nodes.fetch_max(res.nodes, std::sync::atomic::Ordering::Relaxed);
            Ok(s * res.value)
        };
        // the integrand is analytic on [0, r]; the branch point lies beyond r
        let value = quadrature::adaptive_gauss(&ring, 0.0, r, &[], quad.tol(), quad.radial())?;
        Ok((value, nodes.into_inner()))
    } else {
        Err(Error::CriticalRadius { radius: r })
    }
}

/// D(r) = ∫_{B_r} |Df|^2.
pub fn dirichlet(f: &QFunction, r: f64, quad: &QuadratureSpec) -> Result<f64> {
    dirichlet_with_nodes(f, r, quad).map(|(v, _)| v)
}

pub fn dirichlet_with_nodes(f: &QFunction, r: f64, quad: &QuadratureSpec) -> Result<(f64, usize)> {
    check_radius(f, r)?;
    match f {
        QFunction::BranchedRoots { q, a, b } => {
            disk_integral(f, r, quad, |z| qfun::grad_sq_branched(*q, *a, *b, z))
        }
        QFunction::Homogeneous { alpha, profile } => {
            // |Df|^2 = s^(2α-2) (α^2 |g|^2 + |g'|^2); the radial factor integrates exactly.
            let res = quad.circle(|t| {
                Ok(alpha * alpha * qfun::abs_sq(&profile.eval(t)) + profile.tangential_sq(t))
            })?;
            Ok((r.powf(2.0 * alpha) / (2.0 * alpha) * res.value, res.nodes))
        }
        QFunction::HarmonicRef(u) => {
            let m = u.m();
            let area = sphere_constant(m);
            let shell = |s: f64| -> Result<f64> {
                let mean = harmonic_ref::sphere_mean_adaptive(m, quad.sphere_order.max(16), quad.tol(), |w| {
                    let x: Vec<f64> = w.iter().map(|c| c * s).collect();
                    u.grad_sq(&x)
                })?;
                Ok(area * s.powi(m as i32 - 1) * mean)
            };
            let v = quadrature::adaptive_gauss(&shell, 0.0, r, &[], quad.tol(), quad.radial())?;
            Ok((v, 0))
        }
    }
}

/// ∫_{B_ρ} |f|^2.
pub fn ball_l2(f: &QFunction, rho: f64, quad: &QuadratureSpec) -> Result<f64> {
    check_radius(f, rho)?;
    match f {
        QFunction::BranchedRoots { .. } => disk_integral(f, rho, quad, |z| f.abs_sq_at(&[z.re, z.im])).map(|v| v.0),
        QFunction::Homogeneous { alpha, profile } => {
            let res = quad.circle(|t| Ok(qfun::abs_sq(&profile.eval(t))))?;
            Ok(rho.powf(2.0 * alpha + 2.0) / (2.0 * alpha + 2.0) * res.value)
        }
        QFunction::HarmonicRef(u) => harmonic_ref::ball_l2(u, rho),
    }
}

/// ∫_0^ρ H(s) ds, an independent route to [`ball_l2`] by integrating H radially.
pub fn ball_l2_radial(f: &QFunction, rho: f64, quad: &QuadratureSpec) -> Result<f64> {
    check_radius(f, rho)?;
    let mut breakpoints = vec![0.0];
    breakpoints.extend(f.critical_radii().into_iter().filter(|&c| c < rho));
    quadrature::adaptive_gauss(&|s| h_sphere(f, s, quad), 0.0, rho, &breakpoints, quad.tol(), quad.radial())
}

/// I(r) = r D(r) / H(r); undefined when H(r) does not exceed `abs_tol`.
pub fn frequency(f: &QFunction, r: f64, quad: &QuadratureSpec) -> Result<f64> {
    frequency_with_nodes(f, r, quad).map(|v| v.0)
}

fn frequency_with_nodes(f: &QFunction, r: f64, quad: &QuadratureSpec) -> Result<(f64, usize)> {
    let (h, nodes) = h_sphere_with_nodes(f, r, quad)?;
    if h <= quad.abs_tol {
        return Err(Error::FrequencyUndefined { h });
    }
    Ok((r * dirichlet(f, r, quad)? / h, nodes))
}

/// h̄_N(r) = H̄(r^N).
pub fn h_n(f: &QFunction, n: f64, r: f64, quad: &QuadratureSpec) -> Result<f64> {
    if !(n > 0.0) {
        return Err(Error::InvalidParameter(format!("N = {n} must be positive")));
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain(format!("radius {r} outside (0, 1)")));
    }
    h_bar(f, r.powf(n), quad)
}

/// a(t) = log H̄(e^t) for t < 0.
pub fn log_growth(f: &QFunction, t: f64, quad: &QuadratureSpec) -> Result<f64> {
    if !(t < 0.0) {
        return Err(Error::Domain(format!("t = {t} must be negative")));
    }
    let value = h_bar(f, t.exp(), quad)?;
    if value <= quad.abs_tol {
        return Err(Error::LogDomain { value });
    }
    Ok(value.ln())
}

/// Boundary densities at a point z of ∂B_r (m = 2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryDensities {
    /// |Df|^2.
    pub grad_sq: f64,
    /// Σ |∂_ν f_i|^2.
    pub normal_sq: f64,
    /// Σ |∂_τ f_i|^2.
    pub tangential_sq: f64,
    /// Σ (∂_ν f_i) · f_i.
    pub normal_dot: f64,
}

pub fn boundary_densities(f: &QFunction, x: &[f64]) -> Result<BoundaryDensities> {
    let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
    if r == 0.0 {
        return Err(Error::Singularity { re: 0.0, im: 0.0 });
    }
    match f {
        QFunction::BranchedRoots { q, a, b } => {
            let z = Complex64::new(x[0], x[1]);
            let grad_sq = qfun::grad_sq_branched(*q, *a, *b, z)?;
            let normal_sq = qfun::radial_deriv_sq_branched(*q, *a, *b, z)?;
            Ok(BoundaryDensities {
                grad_sq,
                normal_sq,
                tangential_sq: grad_sq - normal_sq,
                normal_dot: qfun::normal_dot_branched(*q, *a, *b, z)?,
            })
        }
        QFunction::Homogeneous { alpha, profile } => {
            let theta = arg_0_2pi(Complex64::new(x[0], x[1]));
            let g_sq = qfun::abs_sq(&profile.eval(theta));
            let scale = r.powf(2.0 * alpha - 2.0);
            let normal_sq = scale * alpha * alpha * g_sq;
            let tangential_sq = scale * profile.tangential_sq(theta);
            Ok(BoundaryDensities {
                grad_sq: normal_sq + tangential_sq,
                normal_sq,
                tangential_sq,
                normal_dot: alpha * r.powf(2.0 * alpha - 1.0) * g_sq,
            })
        }
        QFunction::HarmonicRef(u) => {
            let grad = u.gradient(x);
            let grad_sq: f64 = grad.iter().map(|g| g * g).sum();
            let d_nu: f64 = grad.iter().zip(x).map(|(g, c)| g * c / r).sum();
            Ok(BoundaryDensities {
                grad_sq,
                normal_sq: d_nu * d_nu,
                tangential_sq: grad_sq - d_nu * d_nu,
                normal_dot: d_nu * u.eval(x),
            })
        }
    }
}

/// Boundary integrals over ∂B_r of the four [`BoundaryDensities`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryIntegrals {
    pub grad_sq: f64,
    pub normal_sq: f64,
    pub tangential_sq: f64,
    pub normal_dot: f64,
}

pub fn boundary_integrals(f: &QFunction, r: f64, quad: &QuadratureSpec) -> Result<BoundaryIntegrals> {
    check_radius(f, r)?;
    let pick = |sel: fn(&BoundaryDensities) -> f64| {
        sphere_integral(f, r, quad, |x| boundary_densities(f, x).map(|d| sel(&d))).map(|v| v.0)
    };
    Ok(BoundaryIntegrals {
        grad_sq: pick(|d| d.grad_sq)?,
        normal_sq: pick(|d| d.normal_sq)?,
        tangential_sq: pick(|d| d.tangential_sq)?,
        normal_dot: pick(|d| d.normal_dot)?,
    })
}

/// Dir(g_r, ∂B_r): energy of the restriction of f to the circle.
pub fn boundary_dirichlet(f: &QFunction, r: f64, quad: &QuadratureSpec) -> Result<f64> {
    check_radius(f, r)?;
    sphere_integral(f, r, quad, |x| boundary_densities(f, x).map(|d| d.tangential_sq)).map(|v| v.0)
}

/// Σ_i |∂_v f_i(x)|^2 by central differences along the unit vector `v`.
///
/// Samples at x ± h v and x ± h v / 2 are aligned with f(x) by optimal
/// matching, so branches are followed across cuts; one Richardson step gives
/// O(h^4) accuracy per branch.
pub fn directional_sq_by_matching(f: &QFunction, x: &[f64], v: &[f64], h: f64) -> Result<f64> {
    let centre = f.eval(x)?;
    let aligned = |t: f64| -> Result<QPoint> {
        let y: Vec<f64> = x.iter().zip(v).map(|(a, b)| a + t * b).collect();
        let other = f.eval(&y)?;
        let (perm, _) = multipoint::optimal_matching(&centre, &other)?;
        Ok(other.permuted(&perm))
    };
    let (p1, m1, p2, m2) = (aligned(h)?, aligned(-h)?, aligned(0.5 * h)?, aligned(-0.5 * h)?);
    let mut total = 0.0;
    for i in 0..centre.q() {
        for c in 0..centre.n() {
            let coarse = (p1.point(i)[c] - m1.point(i)[c]) / (2.0 * h);
            let fine = (p2.point(i)[c] - m2.point(i)[c]) / h;
            total += ((4.0 * fine - coarse) / 3.0).powi(2);
        }
    }
    Ok(total)
}

/// ∫_{∂B_r} Σ|∂_ν f_i|^2 and ∫_{∂B_r} Σ|∂_τ f_i|^2 with both densities taken
/// from [`directional_sq_by_matching`] (m = 2).
pub fn boundary_energies_by_matching(f: &QFunction, r: f64, quad: &QuadratureSpec) -> Result<(f64, f64)> {
    check_radius(f, r)?;
    if f.domain_dim() != 2 {
        return Err(Error::InvalidParameter("matched differences are implemented for m = 2".into()));
    }
    // differences carry ~1e-12 relative noise
    let loose = QuadratureSpec {
        rel_tol: quad.rel_tol.max(1e-10),
        ..quad.clone()
    };
    let h = 1e-3 * r;
    let normal = loose.circle(|t| {
        let (c, s) = (t.cos(), t.sin());
        directional_sq_by_matching(f, &[r * c, r * s], &[c, s], h)
    })?;
    let tangential = loose.circle(|t| {
        let (c, s) = (t.cos(), t.sin());
        directional_sq_by_matching(f, &[r * c, r * s], &[-s, c], h)
    })?;
    Ok((r * normal.value, r * tangential.value))
}

/// H'(r) - (m-1) H(r)/r - 2 D(r) with H' by finite differences of the
/// quadrature H, together with H'(r).
pub fn energy_identity_residual(f: &QFunction, r: f64, quad: &QuadratureSpec) -> Result<(f64, f64)> {
    let curve = FunctionalCurve::new(f, Functional::H, quad);
    let spec = DiffSpec {
        noise: quad.rel_tol,
        ..DiffSpec::default()
    };
    let h_prime = calculus::derivative(&curve, r, 1, &spec)?.value;
    let m = f.domain_dim() as f64;
    let residual = h_prime - (m - 1.0) * h_sphere(f, r, quad)? / r - 2.0 * dirichlet(f, r, quad)?;
    Ok((residual, h_prime))
}

/// A(ρ) = ∫_0^{2π} sqrt(1 + 4ρ^2 - 4ρ cos θ) dθ and its derivatives up to
/// order 3, each by quadrature of its explicit integrand.
pub fn a_integral(rho: f64, order: usize, quad: &QuadratureSpec) -> Result<f64> {
    a_integral_with_nodes(rho, order, quad).map(|v| v.0)
}

pub fn a_integral_with_nodes(rho: f64, order: usize, quad: &QuadratureSpec) -> Result<(f64, usize)> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::Domain(format!("ρ = {rho} outside [0, 1)")));
    }
    if order >= 1 && (rho - 0.5).abs() <= 1e-14 {
        return Err(Error::CriticalRadius { radius: rho });
    }
    let e = |t: f64| 1.0 + 4.0 * rho * rho - 4.0 * rho * t.cos();
    let res = match order {
        0 => quad.circle(|t| Ok(e(t).sqrt()))?,
        1 => quad.circle(|t| Ok((4.0 * rho - 2.0 * t.cos()) / e(t).sqrt()))?,
        2 => quad.circle(|t| Ok(4.0 * t.sin().powi(2) / e(t).powf(1.5)))?,
        3 => quad.circle(|t| Ok(-6.0 * t.sin().powi(2) * e(t).powf(-2.5) * (8.0 * rho - 4.0 * t.cos())))?,
        _ => return Err(Error::InvalidParameter(format!("A has closed integrands up to order 3, not {order}"))),
    };
    Ok((res.value, res.nodes))
}

/// Trapezoid estimate with exactly `nodes` nodes of ∫_0^{2π} |h'(θ)|^2 dθ,
/// h(θ) = sqrt(2r e^{iθ} - 1) with the half-angle root convention.
pub fn boundary_root_energy(r: f64, nodes: usize) -> f64 {
    quadrature::periodic_trapezoid_fixed(
        |t| {
            let e = Complex64::from_polar(1.0, t);
            let h = qfun::q_roots(2, 2.0 * r * e - 1.0)[0];
            let dh = Complex64::new(0.0, r) * e / h;
            dh.norm_sqr()
        },
        nodes,
    )
}

/// The scalar functionals a growth curve can sample.
#[derive(Debug, Clone, PartialEq)]
pub enum Functional {
    H,
    Hbar,
    D,
    I,
    /// h̄_N.
    HN(f64),
    /// a(t) = log H̄(e^t); sampled in t < 0.
    LogGrowth,
    /// A(ρ), independent of the map.
    AIntegral,
    /// d(r) for a named weight φ; harmonic baseline only.
    WeightedD(String),
}

impl Functional {
    /// Open domain of the sampling variable.
    pub fn domain(&self) -> (f64, f64) {
        match self {
            Functional::LogGrowth => (f64::NEG_INFINITY, 0.0),
            Functional::AIntegral => (0.0, 1.0),
            _ => (0.0, 1.0),
        }
    }

    /// Evaluates the functional of `f` at `x` together with the angular node
    /// count used (0 when not applicable).
    pub fn eval(&self, f: &QFunction, x: f64, quad: &QuadratureSpec) -> Result<(f64, usize)> {
        match self {
            Functional::H => h_sphere_with_nodes(f, x, quad),
            Functional::Hbar => h_bar_with_nodes(f, x, quad),
            Functional::D => dirichlet_with_nodes(f, x, quad),
            Functional::I => frequency_with_nodes(f, x, quad),
            Functional::HN(n) => {
                if !(x > 0.0 && x < 1.0) {
                    return Err(Error::Domain(format!("radius {x} outside (0, 1)")));
                }
                h_bar_with_nodes(f, x.powf(*n), quad)
            }
            Functional::LogGrowth => {
                let (v, nodes) = h_bar_with_nodes(f, x.exp(), quad)?;
                if v <= quad.abs_tol {
                    return Err(Error::LogDomain { value: v });
                }
                if !(x < 0.0) {
                    return Err(Error::Domain(format!("t = {x} must be negative")));
                }
                Ok((v.ln(), nodes))
            }
            Functional::AIntegral => a_integral_with_nodes(x, 0, quad),
            Functional::WeightedD(name) => match f {
                QFunction::HarmonicRef(u) => {
                    let w = WeightSpec::by_name(name)?;
                    Ok((harmonic_ref::weighted_d(u, &w, x)?, 0))
                }
                _ => Err(Error::InvalidParameter("d(r) is defined for harmonic references only".into())),
            },
        }
    }

    /// Where the functional's argument meets a critical radius of `f`.
    pub fn critical_points(&self, f: &QFunction) -> Vec<f64> {
        let radii = f.critical_radii();
        match self {
            Functional::HN(n) => radii.iter().map(|r| r.powf(1.0 / n)).collect(),
            Functional::LogGrowth => radii.iter().map(|r| r.ln()).collect(),
            Functional::AIntegral => vec![0.5],
            _ => radii,
        }
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Functional::H => f.write_str("H"),
            Functional::Hbar => f.write_str("Hbar"),
            Functional::D => f.write_str("D"),
            Functional::I => f.write_str("I"),
            Functional::HN(n) => write!(f, "hN:{n}"),
            Functional::LogGrowth => f.write_str("a"),
            Functional::AIntegral => f.write_str("A"),
            Functional::WeightedD(name) => write!(f, "d:{name}"),
        }
    }
}

impl FromStr for Functional {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "H" => Ok(Functional::H),
            "Hbar" => Ok(Functional::Hbar),
            "D" => Ok(Functional::D),
            "I" => Ok(Functional::I),
            "a" => Ok(Functional::LogGrowth),
            "A" => Ok(Functional::AIntegral),
            _ => {
                if let Some(n) = s.strip_prefix("hN:") {
                    let n: f64 = n.parse().map_err(|_| Error::Parse(format!("bad N in `{s}`")))?;
                    if !(n > 0.0) {
                        return Err(Error::InvalidParameter(format!("N = {n} must be positive")));
                    }
                    return Ok(Functional::HN(n));
                }
                if let Some(name) = s.strip_prefix("d:") {
                    WeightSpec::by_name(name)?;
                    return Ok(Functional::WeightedD(name.to_string()));
                }
                Err(Error::Parse(format!("unknown functional `{s}`")))
            }
        }
    }
}

/// A functional of a fixed map viewed as a [`ScalarCurve`] of its argument.
#[derive(Debug, Clone)]
pub struct FunctionalCurve<'a> {
    f: &'a QFunction,
    functional: Functional,
    quad: QuadratureSpec,
    singular: Vec<f64>,
}

impl<'a> FunctionalCurve<'a> {
    pub fn new(f: &'a QFunction, functional: Functional, quad: &QuadratureSpec) -> Self {
        let singular = functional.critical_points(f);
        Self {
            f,
            functional,
            quad: quad.clone(),
            singular,
        }
    }
}

impl ScalarCurve for FunctionalCurve<'_> {
    fn domain(&self) -> (f64, f64) {
        self.functional.domain()
    }

    fn eval(&self, x: f64) -> Result<f64> {
        self.functional.eval(self.f, x, &self.quad).map(|v| v.0)
    }

    fn singular_points(&self) -> &[f64] {
        &self.singular
    }
}

/// Samples of one functional over a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthCurve {
    pub functional: Functional,
    pub function_id: String,
    pub r_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub nodes: Vec<usize>,
    pub quad: QuadratureSpec,
}

/// Evaluates `functional` of `f` at every grid point (in parallel, assembled
/// in grid order).
pub fn compute_curve(
    f: &QFunction,
    functional: &Functional,
    grid: &[f64],
    quad: &QuadratureSpec,
) -> Result<GrowthCurve> {
    quad.validate()?;
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidParameter("grid must be strictly increasing".into()));
    }
    let samples: Vec<(f64, usize)> = grid
        .par_iter()
        .map(|&x| functional.eval(f, x, quad))
        .collect::<Result<_>>()?;
    for (x, (v, _)) in grid.iter().zip(&samples) {
        if !v.is_finite() {
            return Err(Error::NonFinite { at: *x });
        }
    }
    Ok(GrowthCurve {
        functional: functional.clone(),
        function_id: f.id(),
        r_grid: grid.to_vec(),
        values: samples.iter().map(|s| s.0).collect(),
        nodes: samples.iter().map(|s| s.1).collect(),
        quad: quad.clone(),
    })
}

/// Formats a float with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

impl GrowthCurve {
    /// CSV with header `r,value,functional,function_id,nodes`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let io = |e: csv::Error| Error::InvalidParameter(format!("csv output failed: {e}"));
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["r", "value", "functional", "function_id", "nodes"]).map_err(io)?;
        let functional = self.functional.to_string();
        for ((r, v), n) in self.r_grid.iter().zip(&self.values).zip(&self.nodes) {
            w.write_record([fmt17(*r), fmt17(*v), functional.clone(), self.function_id.clone(), n.to_string()])
                .map_err(io)?;
        }
        w.flush().map_err(|e| Error::InvalidParameter(format!("csv output failed: {e}")))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn spec_validation() {
        assert!(quad().validate().is_ok());
        let odd = QuadratureSpec {
            circle_nodes: 17,
            ..quad()
        };
        assert!(odd.validate().is_err());
        let small = QuadratureSpec {
            circle_nodes: 8,
            ..quad()
        };
        assert!(small.validate().is_err());
        let neg = QuadratureSpec {
            rel_tol: 0.0,
            ..quad()
        };
        assert!(neg.validate().is_err());
    }

    #[test]
    fn cube_root_growth_closed_forms() {
        let f = QFunction::cube_root();
        for rho in [0.1, 0.37, 0.8] {
            let h = h_sphere(&f, rho, &quad()).unwrap();
            assert!((h / (6.0 * PI * rho.powf(5.0 / 3.0)) - 1.0).abs() < 1e-12);
            let hb = h_bar(&f, rho, &quad()).unwrap();
            assert!((hb / (3.0 * rho.powf(2.0 / 3.0)) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_map_has_zero_growth() {
        let f = QFunction::harmonic(harmonic_ref::parse_combo(2, "0").unwrap());
        assert_eq!(h_sphere(&f, 0.5, &quad()).unwrap(), 0.0);
        assert!(matches!(frequency(&f, 0.5, &quad()), Err(Error::FrequencyUndefined { .. })));
        assert!(matches!(log_growth(&f, -1.0, &quad()), Err(Error::LogDomain { .. })));
    }

    #[test]
    fn critical_radius_is_refused() {
        let f = QFunction::dellis();
        assert!(matches!(h_sphere(&f, 0.5, &quad()), Err(Error::CriticalRadius { .. })));
        assert!(matches!(dirichlet(&f, 0.5, &quad()), Err(Error::CriticalRadius { .. })));
        assert!(h_sphere(&f, 1.0, &quad()).is_err());
    }

    #[test]
    fn dellis_mean_at_the_kink_limit() {
        // at ρ = 1/2 the integrand is 2|sin(θ/2)|, so H̄(1/2) = 8/π
        let kink = quadrature::adaptive_gauss(
            &|t: f64| Ok((2.0 - 2.0 * t.cos()).sqrt()),
            0.0,
            2.0 * PI,
            &[0.0, 2.0 * PI],
            Tolerance { abs: 1e-15, rel: 1e-14 },
            RadialRule::default(),
        )
        .unwrap();
        assert!((kink / PI - 8.0 / PI).abs() < 1e-13);
        let f = QFunction::dellis();
        for rho in [0.5 - 1e-4, 0.5 + 1e-4] {
            let v = h_bar(&f, rho, &quad()).unwrap();
            assert!((v - 8.0 / PI).abs() < 5e-3, "{v}");
        }
        let far = h_bar(&f, 0.48, &quad()).unwrap();
        assert!((far - a_integral(0.48, 0, &quad()).unwrap() / PI).abs() < 1e-13);
    }

    #[test]
    fn a_integral_at_zero() {
        assert!((a_integral(0.0, 0, &quad()).unwrap() - 2.0 * PI).abs() < 1e-14);
        assert!(a_integral(0.5, 3, &quad()).is_err());
        assert!(a_integral(0.3, 4, &quad()).is_err());
    }

    #[test]
    fn sqrt_map_energy() {
        let f = lookup("roots:2,1,0");
        for r in [0.2, 0.6, 0.9] {
            let d = dirichlet(&f, r, &quad()).unwrap();
            assert!((d - 2.0 * PI * r).abs() < 1e-12 * d, "{d}");
            let i = frequency(&f, r, &quad()).unwrap();
            assert!((i - 0.5).abs() < 1e-12);
        }
    }

    fn lookup(id: &str) -> QFunction {
        qfun::lookup(id).unwrap()
    }

    #[test]
    fn homogeneous_matches_branched_family() {
        let hom = lookup("homog:0.5,roots2");
        let br = lookup("roots:2,1,0");
        for r in [0.3, 0.7] {
            let a = h_sphere(&hom, r, &quad()).unwrap();
            let b = h_sphere(&br, r, &quad()).unwrap();
            assert!((a - b).abs() < 1e-13);
            let da = dirichlet(&hom, r, &quad()).unwrap();
            let db = dirichlet(&br, r, &quad()).unwrap();
            assert!((da - db).abs() < 1e-12, "{da} {db}");
        }
    }

    #[test]
    fn harmonic_growth_matches_closed_form() {
        let u = harmonic_ref::parse_combo(3, "Y(2,1)+0.5*Y(1,0)").unwrap();
        let closed = u.h_bar_closed_form();
        let f = QFunction::harmonic(u);
        for r in [0.2, 0.5, 0.8] {
            let v = h_bar(&f, r, &quad()).unwrap();
            assert!((v - closed.eval(r)).abs() < 1e-13);
        }
    }

    #[test]
    fn ball_routes_agree_for_dellis_inside_the_kink() {
        let f = QFunction::dellis();
        let direct = ball_l2(&f, 0.4, &quad()).unwrap();
        let radial = ball_l2_radial(&f, 0.4, &quad()).unwrap();
        assert!((direct - radial).abs() < 1e-12 * direct);
    }

    #[test]
    fn matched_differences_split_the_energy_evenly() {
        for f in [QFunction::cube_root(), QFunction::dellis()] {
            for r in [0.3, 0.7] {
                let b = boundary_integrals(&f, r, &quad()).unwrap();
                let (normal, tangential) = boundary_energies_by_matching(&f, r, &quad()).unwrap();
                assert!((normal - b.normal_sq).abs() < 1e-9 * b.grad_sq, "{normal} {}", b.normal_sq);
                assert!((tangential - b.tangential_sq).abs() < 1e-9 * b.grad_sq);
            }
        }
    }

    #[test]
    fn energy_identity_for_the_square_root() {
        let f = lookup("roots:2,1,0");
        let (res, h_prime) = energy_identity_residual(&f, 0.6, &quad()).unwrap();
        assert!((h_prime - 8.0 * PI * 0.6).abs() < 1e-9);
        assert!(res.abs() < 1e-9);
    }

    #[test]
    fn functional_names_round_trip() {
        for s in ["H", "Hbar", "D", "I", "hN:1.5", "a", "A", "d:t"] {
            assert_eq!(s.parse::<Functional>().unwrap().to_string(), s);
        }
        assert!("hN:-1".parse::<Functional>().is_err());
        assert!("X".parse::<Functional>().is_err());
    }

    #[test]
    fn csv_layout() {
        let f = QFunction::cube_root();
        let c = compute_curve(&f, &Functional::Hbar, &[0.25, 0.5], &quad()).unwrap();
        let s = c.to_csv_string().unwrap();
        let mut lines = s.lines();
        assert_eq!(lines.next(), Some("r,value,functional,function_id,nodes"));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row[0], "2.5000000000000000e-1");
        assert_eq!(row[2], "Hbar");
        // function ids with commas are quoted
        assert!(s.contains("\"roots:3,1,0\""));
    }

    #[test]
    fn grid_must_increase() {
        let f = QFunction::cube_root();
        assert!(compute_curve(&f, &Functional::H, &[0.5, 0.4], &quad()).is_err());
    }
}
