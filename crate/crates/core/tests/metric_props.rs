mod common;

use std::f64::consts::PI;

use proptest::prelude::*;
use qgrowth::multipoint::{self, metric_g};
use qgrowth::QPoint;

fn qpoint(q: usize, n: usize) -> impl Strategy<Value = QPoint> {
    prop::collection::vec(prop::collection::vec(-10.0f64..10.0, n), q).prop_map(|p| QPoint::new(p).unwrap())
}

fn pair() -> impl Strategy<Value = (QPoint, QPoint)> {
    (1usize..=6, 1usize..=3).prop_flat_map(|(q, n)| (qpoint(q, n), qpoint(q, n)))
}

fn triple() -> impl Strategy<Value = (QPoint, QPoint, QPoint)> {
    (1usize..=5, 1usize..=3).prop_flat_map(|(q, n)| (qpoint(q, n), qpoint(q, n), qpoint(q, n)))
}

proptest! {
    #[test]
    fn matches_exhaustive_search((a, b) in pair()) {
        let (_, cost) = multipoint::optimal_matching(&a, &b).unwrap();
        prop_assert_eq!(cost, common::brute_force_cost(&a, &b));
    }

    #[test]
    fn symmetric_and_nonnegative((a, b) in pair()) {
        let ab = metric_g(&a, &b).unwrap();
        let ba = metric_g(&b, &a).unwrap();
        prop_assert!(ab >= 0.0);
        prop_assert!((ab - ba).abs() <= 1e-12 * ab.max(1.0));
        prop_assert_eq!(metric_g(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn triangle_inequality((a, b, c) in triple()) {
        let ac = metric_g(&a, &c).unwrap();
        let bound = metric_g(&a, &b).unwrap() + metric_g(&b, &c).unwrap();
        prop_assert!(ac <= bound * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn invariant_under_relabelling((a, b) in pair(), seed in any::<u64>()) {
        let q = a.q();
        let mut perm: Vec<usize> = (0..q).collect();
        let mut s = seed;
        for i in (1..q).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let d = metric_g(&a, &b).unwrap();
        let dp = metric_g(&a.permuted(&perm), &b).unwrap();
        prop_assert!((d - dp).abs() <= 1e-12 * d.max(1.0));
    }

    #[test]
    fn scales_linearly((a, b) in pair(), lambda in 0.01f64..100.0) {
        let d = metric_g(&a, &b).unwrap();
        let ds = metric_g(&a.scaled(lambda), &b.scaled(lambda)).unwrap();
        prop_assert!((ds - lambda * d).abs() <= 1e-10 * (lambda * d).max(1.0));
    }

    #[test]
    fn norm_is_distance_to_origin(a in (1usize..=6, 1usize..=3).prop_flat_map(|(q, n)| qpoint(q, n))) {
        let zero = QPoint::zero(a.q(), a.n());
        prop_assert!((multipoint::norm(&a) - metric_g(&a, &zero).unwrap()).abs() <= 1e-12 * multipoint::norm(&a).max(1.0));
    }

    #[test]
    fn single_valued_is_euclidean(x in prop::collection::vec(-5.0f64..5.0, 3), y in prop::collection::vec(-5.0f64..5.0, 3)) {
        let a = QPoint::new(vec![x.clone()]).unwrap();
        let b = QPoint::new(vec![y.clone()]).unwrap();
        let e = x.iter().zip(&y).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt();
        prop_assert_eq!(metric_g(&a, &b).unwrap(), e);
    }
}

#[test]
fn mismatched_shapes_are_rejected() {
    let a = QPoint::zero(2, 2);
    assert!(metric_g(&a, &QPoint::zero(3, 2)).is_err());
    assert!(metric_g(&a, &QPoint::zero(2, 3)).is_err());
}

#[test]
fn elliptic_oracle_limits() {
    let (k, e) = common::elliptic_ke(1.0);
    assert!((k - PI / 2.0).abs() < 1e-15 && (e - PI / 2.0).abs() < 1e-15);
    assert!((common::circle_abs_mean(0.0) - 2.0 * PI).abs() < 1e-14);
    let direct = common::simpson(0.0, 2.0 * PI, 2000, |t| (1.0 + 3.24 - 3.6 * t.cos()).sqrt());
    assert!(common::rel(common::circle_abs_mean(1.8), direct) < 1e-12);
    let direct = common::simpson(0.0, 2.0 * PI, 2000, |t| (1.09 - 0.6 * t.cos()).sqrt());
    assert!(common::rel(common::circle_abs_mean(0.3), direct) < 1e-12);
    let direct = common::simpson(0.0, 2.0 * PI, 2000, |t| 1.0 / (1.09 - 0.6 * t.cos()).sqrt());
    assert!(common::rel(common::circle_inverse_abs_mean(0.3), direct) < 1e-12);
}
