#![allow(dead_code)]

use std::f64::consts::PI;

use qgrowth::QPoint;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Minimum over all Q! permutations of the row-ordered sum of squared distances.
pub fn brute_force_cost(a: &QPoint, b: &QPoint) -> f64 {
    let q = a.q();
    let cost = |i: usize, j: usize| -> f64 {
        a.point(i)
            .iter()
            .zip(b.point(j))
            .map(|(x, y)| (x - y) * (x - y))
            .sum()
    };
    let mut perm: Vec<usize> = (0..q).collect();
    let mut best = f64::INFINITY;
    permute(&mut perm, 0, &mut |p| {
        let total = p.iter().enumerate().fold(0.0, |acc, (i, &j)| acc + cost(i, j));
        if total < best {
            best = total;
        }
    });
    best
}

fn permute(p: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, visit);
        p.swap(k, i);
    }
}

pub fn random_qpoint(rng: &mut ChaCha8Rng, q: usize, n: usize) -> QPoint {
    let pts = (0..q)
        .map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    QPoint::new(pts).unwrap()
}

/// Arithmetic-geometric mean.
fn agm(mut a: f64, mut b: f64) -> (f64, Vec<f64>) {
    let mut cs = Vec::new();
    for _ in 0..64 {
        let c = 0.5 * (a - b);
        cs.push(c);
        let (na, nb) = (0.5 * (a + b), (a * b).sqrt());
        a = na;
        b = nb;
        if c.abs() <= 1e-17 * a {
            break;
        }
    }
    (a, cs)
}

/// Complete elliptic integrals K and E in terms of the complementary modulus k'.
pub fn elliptic_ke(k_prime: f64) -> (f64, f64) {
    let (m, cs) = agm(1.0, k_prime);
    let k = PI / (2.0 * m);
    let k_sq = 1.0 - k_prime * k_prime;
    let mut sum = 0.5 * k_sq;
    let mut pow = 1.0;
    for c in cs {
        sum += pow * c * c;
        pow *= 2.0;
    }
    (k, k * (1.0 - sum))
}

/// ∫_0^{2π} |1 - s e^{iθ}| dθ = 4(1+s) E(k), k = 2√s/(1+s).
pub fn circle_abs_mean(s: f64) -> f64 {
    let kp = (1.0 - s).abs() / (1.0 + s);
    4.0 * (1.0 + s) * elliptic_ke(kp).1
}

/// ∫_0^{2π} |1 - s e^{iθ}|^{-1} dθ = 4 K(k)/(1+s).
pub fn circle_inverse_abs_mean(s: f64) -> f64 {
    let kp = (1.0 - s).abs() / (1.0 + s);
    4.0 * elliptic_ke(kp).0 / (1.0 + s)
}

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson<F: Fn(f64) -> f64>(a: f64, b: f64, n: usize, f: F) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
