//! Unordered Q-tuples of points in R^n and the permutation metric on them.
//!
//! A [`QPoint`] stores its points in some order, but that order carries no
//! meaning: every quantity exposed here is invariant under reordering.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// An element of the space of unordered Q-tuples of points in R^n.
#[derive(Debug, Clone, PartialEq)]
pub struct QPoint {
    q: usize,
    n: usize,
    coords: Vec<f64>,
}

impl QPoint {
    /// Builds a Q-point from `points`; every point must have the same length.
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let q = points.len();
        if q == 0 {
            return Err(Error::InvalidParameter("a Q-point needs Q >= 1".into()));
        }
        let n = points[0].len();
        if n == 0 {
            return Err(Error::InvalidParameter("ambient dimension must be >= 1".into()));
        }
        let mut coords = Vec::with_capacity(q * n);
        for (i, p) in points.iter().enumerate() {
            if p.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "point {i} has dimension {}, expected {n}",
                    p.len()
                )));
            }
            coords.extend_from_slice(p);
        }
        Ok(Self { q, n, coords })
    }

    /// The point Q[[0]].
    pub fn zero(q: usize, n: usize) -> Self {
        assert!(q >= 1 && n >= 1);
        Self {
            q,
            n,
            coords: vec![0.0; q * n],
        }
    }

    /// Identifies C with R^2.
    pub fn from_complex(values: &[Complex64]) -> Self {
        assert!(!values.is_empty());
        let coords = values.iter().flat_map(|w| [w.re, w.im]).collect();
        Self {
            q: values.len(),
            n: 2,
            coords,
        }
    }

    pub fn from_scalars(values: &[f64]) -> Self {
        assert!(!values.is_empty());
        Self {
            q: values.len(),
            n: 1,
            coords: values.to_vec(),
        }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.n..(i + 1) * self.n]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.n)
    }

    /// Points as complex numbers. Only meaningful for n = 2.
    pub fn to_complex(&self) -> Vec<Complex64> {
        assert_eq!(self.n, 2, "complex view requires n = 2");
        self.points().map(|p| Complex64::new(p[0], p[1])).collect()
    }

    /// Returns the same Q-point stored in the order `perm[0], perm[1], ...`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.q);
        let coords = perm.iter().flat_map(|&i| self.point(i).iter().copied()).collect();
        Self {
            q: self.q,
            n: self.n,
            coords,
        }
    }

    /// Multiplies every point by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            q: self.q,
            n: self.n,
            coords: self.coords.iter().map(|c| c * factor).collect(),
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.q != other.q || self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "Q={}, n={} vs Q={}, n={}",
                self.q, self.n, other.q, other.n
            )));
        }
        Ok(())
    }
}

impl fmt::Display for QPoint {
    /// Canonical rendering `Q=k;n=d;[(x,...);(x,...)]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q={};n={};[", self.q, self.n)?;
        for (i, p) in self.points().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            f.write_str("(")?;
            for (j, c) in p.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{c}")?;
            }
            f.write_str(")")?;
        }
        f.write_str("]")
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Squared-distance cost matrix `c[i][j] = |P_i - S_j|^2`, row-major.
pub fn cost_matrix(t1: &QPoint, t2: &QPoint) -> Result<Vec<f64>> {
    t1.check_compatible(t2)?;
    let q = t1.q;
    let mut c = Vec::with_capacity(q * q);
    for i in 0..q {
        for j in 0..q {
            c.push(sq_dist(t1.point(i), t2.point(j)));
        }
    }
    Ok(c)
}

/// Exact minimum-cost perfect matching on a square `dim x dim` cost matrix.
///
/// Shortest augmenting paths with row/column potentials, O(dim^3). Returns
/// `assignment` with row `i` matched to column `assignment[i]`.
pub fn min_cost_assignment(cost: &[f64], dim: usize) -> Vec<usize> {
    assert_eq!(cost.len(), dim * dim);
    if dim == 1 {
        return vec![0];
    }
    // 1-based bookkeeping; index 0 is the virtual root of each search tree.
    let mut u = vec![0.0f64; dim + 1];
    let mut v = vec![0.0f64; dim + 1];
    let mut row_of_col = vec![0usize; dim + 1];
    let mut way = vec![0usize; dim + 1];

    for row in 1..=dim {
        row_of_col[0] = row;
        let mut col0 = 0usize;
        let mut min_slack = vec![f64::INFINITY; dim + 1];
        let mut used = vec![false; dim + 1];
        loop {
            used[col0] = true;
            let i0 = row_of_col[col0];
            let mut delta = f64::INFINITY;
            let mut col1 = 0usize;
            for j in 1..=dim {
                if used[j] {
                    continue;
                }
                let reduced = cost[(i0 - 1) * dim + (j - 1)] - u[i0] - v[j];
                if reduced < min_slack[j] {
                    min_slack[j] = reduced;
                    way[j] = col0;
                }
                if min_slack[j] < delta {
                    delta = min_slack[j];
                    col1 = j;
                }
            }
            for j in 0..=dim {
                if used[j] {
                    u[row_of_col[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            col0 = col1;
            if row_of_col[col0] == 0 {
                break;
            }
        }
        loop {
            let prev = way[col0];
            row_of_col[col0] = row_of_col[prev];
            col0 = prev;
            if col0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![0usize; dim];
    for j in 1..=dim {
        assignment[row_of_col[j] - 1] = j - 1;
    }
    assignment
}

/// Sum of `cost[i][perm[i]]` accumulated in row order.
pub fn assignment_cost(cost: &[f64], dim: usize, perm: &[usize]) -> f64 {
    perm.iter()
        .enumerate()
        .map(|(i, &j)| cost[i * dim + j])
        .fold(0.0, |acc, c| acc + c)
}

/// Optimal matching of the points of `t1` onto those of `t2`, together with
/// the minimal sum of squared distances.
pub fn optimal_matching(t1: &QPoint, t2: &QPoint) -> Result<(Vec<usize>, f64)> {
    let cost = cost_matrix(t1, t2)?;
    let perm = min_cost_assignment(&cost, t1.q);
    let total = assignment_cost(&cost, t1.q, &perm);
    Ok((perm, total))
}

/// The permutation metric: min over matchings of sqrt(sum |P_i - S_sigma(i)|^2).
pub fn metric_g(t1: &QPoint, t2: &QPoint) -> Result<f64> {
    optimal_matching(t1, t2).map(|(_, cost)| cost.sqrt())
}

/// |T| = G(T, Q[[0]]).
pub fn norm(t: &QPoint) -> f64 {
    abs_sq(t).sqrt()
}

/// Sum of squared lengths of the points, i.e. |T|^2.
pub fn abs_sq(t: &QPoint) -> f64 {
    t.points()
        .map(|p| p.iter().map(|x| x * x).sum::<f64>())
        .fold(0.0, |a, b| a + b)
}

/// Center of mass: the arithmetic mean of the Q points.
pub fn center_of_mass(t: &QPoint) -> Vec<f64> {
    let mut sum = vec![0.0; t.n];
    for p in t.points() {
        for (s, c) in sum.iter_mut().zip(p) {
            *s += c;
        }
    }
    sum.iter().map(|s| s / t.q as f64).collect()
}
