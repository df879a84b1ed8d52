//! Explicit Q-valued maps on the unit disk: branched roots of w^Q = az + b,
//! α-homogeneous maps with a prescribed circle profile, and single-valued
//! harmonic references.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::harmonic_ref::{self, HarmonicCombo};
use crate::multipoint::{self, QPoint};

/// Argument of `z` normalised to [0, 2π).
pub fn arg_0_2pi(z: Complex64) -> f64 {
    let a = z.im.atan2(z.re);
    if a < 0.0 {
        let shifted = a + 2.0 * PI;
        // atan2 can return -0.0 or values that round up to 2π
        if shifted >= 2.0 * PI {
            0.0
        } else {
            shifted
        }
    } else {
        a
    }
}

/// All q roots of w^q = c. The first is R^(1/q) e^(iω/q) with ω ∈ [0, 2π);
/// the rest follow by multiplication with q-th roots of unity.
pub fn q_roots(q: usize, c: Complex64) -> Vec<Complex64> {
    let modulus = c.norm();
    if modulus == 0.0 {
        return vec![Complex64::new(0.0, 0.0); q];
    }
    let omega = arg_0_2pi(c);
    let radius = modulus.powf(1.0 / q as f64);
    (0..q)
        .map(|k| Complex64::from_polar(radius, (omega + 2.0 * PI * k as f64) / q as f64))
        .collect()
}

fn check_branched(q: usize, a: Complex64) -> Result<()> {
    if q == 0 {
        return Err(Error::InvalidParameter("q must be >= 1".into()));
    }
    if a == Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidParameter("a must be nonzero".into()));
    }
    Ok(())
}

/// Roots of w^q = az + b as complex numbers.
pub fn branched_roots(q: usize, a: Complex64, b: Complex64, z: Complex64) -> Result<Vec<Complex64>> {
    check_branched(q, a)?;
    Ok(q_roots(q, a * z + b))
}

/// The Q-point Σ [[w]] over the roots of w^q = az + b.
pub fn eval_branched_roots(q: usize, a: Complex64, b: Complex64, z: Complex64) -> Result<QPoint> {
    branched_roots(q, a, b, z).map(|w| QPoint::from_complex(&w))
}

/// |f|^2 = Σ |P_i|^2.
pub fn abs_sq(t: &QPoint) -> f64 {
    multipoint::abs_sq(t)
}

fn singular_check(q: usize, a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
    check_branched(q, a)?;
    let c = a * z + b;
    if q >= 2 && c.norm() == 0.0 {
        return Err(Error::Singularity { re: z.re, im: z.im });
    }
    Ok(c)
}

/// Branch derivatives w_i' = a / (q w_i^(q-1)), aligned with [`branched_roots`].
pub fn branch_derivatives(q: usize, a: Complex64, b: Complex64, z: Complex64) -> Result<Vec<Complex64>> {
    let c = singular_check(q, a, b, z)?;
    Ok(q_roots(q, c)
        .into_iter()
        .map(|w| a / (q as f64 * w.powu(q as u32 - 1)))
        .collect())
}

/// Σ |w_i'|^2, computed from the common modulus of the roots.
fn derivative_sq_sum(q: usize, a: Complex64, b: Complex64, z: Complex64) -> Result<f64> {
    let c = singular_check(q, a, b, z)?;
    let qf = q as f64;
    // |w_i|^(2(q-1)) = |az+b|^(2(q-1)/q) for every branch
    let w_pow = c.norm().powf(2.0 * (qf - 1.0) / qf);
    Ok(qf * a.norm_sqr() / (qf * qf * w_pow))
}

/// |Df|^2 = Σ_i 2 |w_i'|^2 (each branch is holomorphic, so its real Jacobian
/// has squared Frobenius norm 2|w'|^2).
pub fn grad_sq_branched(q: usize, a: Complex64, b: Complex64, z: Complex64) -> Result<f64> {
    Ok(2.0 * derivative_sq_sum(q, a, b, z)?)
}

/// Σ |∂_ν w_i|^2 on the circle through z; equal to half of [`grad_sq_branched`].
pub fn radial_deriv_sq_branched(q: usize, a: Complex64, b: Complex64, z: Complex64) -> Result<f64> {
    if z.norm() == 0.0 {
        return Err(Error::Singularity { re: 0.0, im: 0.0 });
    }
    derivative_sq_sum(q, a, b, z)
}

/// Σ (∂_ν f_i) · f_i, the boundary integrand of the energy identity.
pub fn normal_dot_branched(q: usize, a: Complex64, b: Complex64, z: Complex64) -> Result<f64> {
    if z.norm() == 0.0 {
        return Err(Error::Singularity { re: 0.0, im: 0.0 });
    }
    let nu = z / z.norm();
    let roots = q_roots(q, singular_check(q, a, b, z)?);
    let derivs = branch_derivatives(q, a, b, z)?;
    Ok(roots
        .iter()
        .zip(&derivs)
        .map(|(w, dw)| {
            let d_nu = dw * nu;
            w.re * d_nu.re + w.im * d_nu.im
        })
        .sum())
}

/// A Q-valued map on the unit circle, used as the angular profile of a
/// homogeneous map.
pub trait Profile: Send + Sync + fmt::Debug {
    fn name(&self) -> String;
    fn q(&self) -> usize;
    fn n(&self) -> usize;
    /// Value at angle θ ∈ [0, 2π).
    fn eval(&self, theta: f64) -> QPoint;

    /// Σ_i |g_i'(θ)|^2 along continuously tracked branches.
    ///
    /// The default matches the samples at θ ± h to the sample at θ with the
    /// optimal assignment and differences each branch.
    fn tangential_sq(&self, theta: f64) -> f64 {
        let h = 1e-5;
        let centre = self.eval(theta);
        let align = |t: f64| {
            let other = self.eval(t.rem_euclid(2.0 * PI));
            let (perm, _) = multipoint::optimal_matching(&centre, &other).expect("profile shape is fixed");
            other.permuted(&perm)
        };
        let plus = align(theta + h);
        let minus = align(theta - h);
        plus.points()
            .zip(minus.points())
            .map(|(p, m)| p.iter().zip(m).map(|(a, b)| ((a - b) / (2.0 * h)).powi(2)).sum::<f64>())
            .sum()
    }
}

/// θ ↦ Σ [[w]] over the roots of w^k = e^{iθ}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootsProfile {
    pub k: usize,
}

impl Profile for RootsProfile {
    fn name(&self) -> String {
        format!("roots{}", self.k)
    }
    fn q(&self) -> usize {
        self.k
    }
    fn n(&self) -> usize {
        2
    }
    fn eval(&self, theta: f64) -> QPoint {
        QPoint::from_complex(&q_roots(self.k, Complex64::from_polar(1.0, theta)))
    }
    fn tangential_sq(&self, _theta: f64) -> f64 {
        // each branch is e^{i(θ+2πj)/k}, with speed 1/k
        1.0 / self.k as f64
    }
}

/// A constant profile.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstProfile {
    pub value: QPoint,
}

impl Profile for ConstProfile {
    fn name(&self) -> String {
        "const".into()
    }
    fn q(&self) -> usize {
        self.value.q()
    }
    fn n(&self) -> usize {
        self.value.n()
    }
    fn eval(&self, _theta: f64) -> QPoint {
        self.value.clone()
    }
    fn tangential_sq(&self, _theta: f64) -> f64 {
        0.0
    }
}

/// Built-in profiles: `const` ({(1,0)}, Q = 1) and `rootsK` for 1 <= K <= 8.
pub fn profile_by_name(name: &str) -> Result<Arc<dyn Profile>> {
    if name == "const" {
        let value = QPoint::new(vec![vec![1.0, 0.0]])?;
        return Ok(Arc::new(ConstProfile { value }));
    }
    if let Some(k) = name.strip_prefix("roots").and_then(|k| k.parse::<usize>().ok()) {
        if (1..=8).contains(&k) {
            return Ok(Arc::new(RootsProfile { k }));
        }
    }
    Err(Error::UnknownFunction(format!("profile {name}")))
}

/// f(y) = |y|^α g(y/|y|) for y in R^2 \ {0}.
///
/// At y = 0 the map is undefined unless `origin_opt_in` is set, in which case
/// Q[[0]] is returned.
pub fn eval_homogeneous(alpha: f64, profile: &dyn Profile, y: &[f64], origin_opt_in: bool) -> Result<QPoint> {
    if y.len() != 2 {
        return Err(Error::DimensionMismatch(format!("homogeneous maps live on R^2, got R^{}", y.len())));
    }
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter(format!("homogeneity degree {alpha} must be positive")));
    }
    let z = Complex64::new(y[0], y[1]);
    let r = z.norm();
    if r == 0.0 {
        return if origin_opt_in {
            Ok(QPoint::zero(profile.q(), profile.n()))
        } else {
            Err(Error::UndefinedAtOrigin)
        };
    }
    Ok(profile.eval(arg_0_2pi(z)).scaled(r.powf(alpha)))
}

/// Where the defining equation of a map degenerates.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularSet {
    pub branch_points: Vec<Complex64>,
    pub critical_radii: Vec<f64>,
}

/// The kinds of Q-valued maps the laboratory knows how to integrate.
#[derive(Debug, Clone)]
pub enum QFunction {
    BranchedRoots {
        q: usize,
        a: Complex64,
        b: Complex64,
    },
    Homogeneous {
        alpha: f64,
        profile: Arc<dyn Profile>,
    },
    HarmonicRef(Arc<HarmonicCombo>),
}

impl QFunction {
    pub fn branched(q: usize, a: Complex64, b: Complex64) -> Result<Self> {
        check_branched(q, a)?;
        Ok(Self::BranchedRoots { q, a, b })
    }

    pub fn homogeneous(alpha: f64, profile: Arc<dyn Profile>) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::InvalidParameter(format!("homogeneity degree {alpha} must be positive")));
        }
        Ok(Self::Homogeneous { alpha, profile })
    }

    pub fn harmonic(u: HarmonicCombo) -> Self {
        Self::HarmonicRef(Arc::new(u))
    }

    /// Roots of w^3 = z.
    pub fn cube_root() -> Self {
        Self::BranchedRoots {
            q: 3,
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
        }
    }

    /// Roots of w^2 = 2z - 1.
    pub fn dellis() -> Self {
        Self::BranchedRoots {
            q: 2,
            a: Complex64::new(2.0, 0.0),
            b: Complex64::new(-1.0, 0.0),
        }
    }

    pub fn domain_dim(&self) -> usize {
        match self {
            Self::HarmonicRef(u) => u.m(),
            _ => 2,
        }
    }

    pub fn q(&self) -> usize {
        match self {
            Self::BranchedRoots { q, .. } => *q,
            Self::Homogeneous { profile, .. } => profile.q(),
            Self::HarmonicRef(_) => 1,
        }
    }

    pub fn target_dim(&self) -> usize {
        match self {
            Self::BranchedRoots { .. } => 2,
            Self::Homogeneous { profile, .. } => profile.n(),
            Self::HarmonicRef(_) => 1,
        }
    }

    pub fn singular_set(&self) -> SingularSet {
        match self {
            Self::BranchedRoots { q, a, b } if *q >= 2 => {
                let z = -b / a;
                let rho = z.norm();
                SingularSet {
                    branch_points: vec![z],
                    critical_radii: if rho > 0.0 && rho < 1.0 { vec![rho] } else { vec![] },
                }
            }
            Self::Homogeneous { .. } => SingularSet {
                branch_points: vec![Complex64::new(0.0, 0.0)],
                critical_radii: vec![],
            },
            _ => SingularSet {
                branch_points: vec![],
                critical_radii: vec![],
            },
        }
    }

    pub fn critical_radii(&self) -> Vec<f64> {
        self.singular_set().critical_radii
    }

    /// Value at a point of the domain.
    pub fn eval(&self, x: &[f64]) -> Result<QPoint> {
        if x.len() != self.domain_dim() {
            return Err(Error::DimensionMismatch(format!(
                "point in R^{} for a map on R^{}",
                x.len(),
                self.domain_dim()
            )));
        }
        match self {
            Self::BranchedRoots { q, a, b } => eval_branched_roots(*q, *a, *b, Complex64::new(x[0], x[1])),
            Self::Homogeneous { alpha, profile } => eval_homogeneous(*alpha, profile.as_ref(), x, false),
            Self::HarmonicRef(u) => Ok(QPoint::from_scalars(&[u.eval(x)])),
        }
    }

    /// |f|^2 at a point.
    pub fn abs_sq_at(&self, x: &[f64]) -> Result<f64> {
        match self {
            Self::HarmonicRef(u) => Ok(u.eval(x).powi(2)),
            _ => self.eval(x).map(|t| abs_sq(&t)),
        }
    }

    /// |Df|^2 at a point off the singular set.
    pub fn grad_sq_at(&self, x: &[f64]) -> Result<f64> {
        match self {
            Self::BranchedRoots { q, a, b } => grad_sq_branched(*q, *a, *b, Complex64::new(x[0], x[1])),
            Self::Homogeneous { alpha, profile } => {
                let z = Complex64::new(x[0], x[1]);
                let r = z.norm();
                if r == 0.0 {
                    return Err(Error::UndefinedAtOrigin);
                }
                let theta = arg_0_2pi(z);
                let g_sq = abs_sq(&profile.eval(theta));
                Ok(r.powf(2.0 * alpha - 2.0) * (alpha * alpha * g_sq + profile.tangential_sq(theta)))
            }
            Self::HarmonicRef(u) => Ok(u.grad_sq(x)),
        }
    }

    /// Registry name.
    pub fn id(&self) -> String {
        match self {
            Self::BranchedRoots { q, a, b } => format!("roots:{q},{},{}", fmt_complex(*a), fmt_complex(*b)),
            Self::Homogeneous { alpha, profile } => format!("homog:{alpha},{}", profile.name()),
            Self::HarmonicRef(u) => u.to_string(),
        }
    }
}

fn fmt_complex(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.re == 0.0 {
        format!("{}i", c.im)
    } else {
        format!("{}{:+}i", c.re, c.im)
    }
}

/// Parses `re`, `imi`, `re+imi` or `re-imi`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad complex number `{s}`"));
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not the leading sign or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = im.parse().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

/// Resolves a registry name: `roots:q,a,b`, `homog:alpha,<profile>`,
/// `cube-root`, `dellis`, or `harm:m=<2|3>;<terms>`.
pub fn lookup(id: &str) -> Result<QFunction> {
    let id = id.trim();
    match id {
        "cube-root" => return Ok(QFunction::cube_root()),
        "dellis" => return Ok(QFunction::dellis()),
        _ => {}
    }
    let unknown = || Error::UnknownFunction(id.to_string());
    if let Some(args) = id.strip_prefix("roots:") {
        let parts: Vec<&str> = args.split(',').collect();
        if parts.len() != 3 {
            return Err(unknown());
        }
        let q = parts[0].trim().parse::<usize>().map_err(|_| unknown())?;
        let a = parse_complex(parts[1])?;
        let b = parse_complex(parts[2])?;
        return QFunction::branched(q, a, b);
    }
    if let Some(args) = id.strip_prefix("homog:") {
        let (alpha, profile) = args.split_once(',').ok_or_else(unknown)?;
        let alpha = alpha.trim().parse::<f64>().map_err(|_| unknown())?;
        return QFunction::homogeneous(alpha, profile_by_name(profile.trim())?);
    }
    if let Some(args) = id.strip_prefix("harm:") {
        let (dim, body) = args.split_once(';').ok_or_else(unknown)?;
        let m = dim.trim().strip_prefix("m=").and_then(|m| m.parse::<usize>().ok()).ok_or_else(unknown)?;
        return Ok(QFunction::harmonic(harmonic_ref::parse_combo(m, body)?));
    }
    Err(unknown())
}

/// Samples f on the circle of radius r at `nodes` equally spaced angles
/// (plus the closing sample at 2π), reordering each sample to continue the
/// previous one by optimal matching.
pub fn track_circle(f: &QFunction, r: f64, nodes: usize) -> Result<Vec<QPoint>> {
    let mut out: Vec<QPoint> = Vec::with_capacity(nodes + 1);
    for k in 0..=nodes {
        let theta = 2.0 * PI * k as f64 / nodes as f64;
        let x = [r * theta.cos(), r * theta.sin()];
        let sample = f.eval(&x)?;
        let sample = match out.last() {
            Some(prev) => {
                let (perm, _) = multipoint::optimal_matching(prev, &sample)?;
                sample.permuted(&perm)
            }
            None => sample,
        };
        out.push(sample);
    }
    Ok(out)
}

/// Largest metric jump between consecutive tracked samples.
pub fn max_circle_jump(samples: &[QPoint]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for w in samples.windows(2) {
        worst = worst.max(multipoint::metric_g(&w[0], &w[1])?);
    }
    Ok(worst)
}
