mod common;

use common::gh_by_all_relations;
use gh_steiner::{
    gh_distance, mf, mst, smt_linf, MetricSpace, PointCloud, DEFAULT_BUDGET,
};
use num_rational::Rational64;
use proptest::prelude::*;

/// Distinct integer points in ℓ∞^k; their induced metric is exact in any scalar.
fn integer_points(max_n: usize, max_k: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (2..=max_n, 1..=max_k).prop_flat_map(|(n, k)| {
        prop::collection::vec(prop::collection::vec(-6i64..=6, k), n).prop_filter(
            "points must be distinct",
            |pts| {
                (0..pts.len()).all(|i| (i + 1..pts.len()).all(|j| pts[i] != pts[j]))
            },
        )
    })
}

fn cloud_f64(pts: &[Vec<i64>]) -> PointCloud<f64> {
    let labels = (0..pts.len()).map(|i| format!("t{i}")).collect();
    let coords = pts.iter().map(|p| p.iter().map(|&v| v as f64).collect()).collect();
    PointCloud::new(labels, pts[0].len(), coords).unwrap()
}

fn cloud_exact(pts: &[Vec<i64>]) -> PointCloud<Rational64> {
    let labels = (0..pts.len()).map(|i| format!("t{i}")).collect();
    let coords = pts
        .iter()
        .map(|p| p.iter().map(|&v| Rational64::from_integer(v)).collect())
        .collect();
    PointCloud::new(labels, pts[0].len(), coords).unwrap()
}

fn space_f64(pts: &[Vec<i64>]) -> MetricSpace<f64> {
    cloud_f64(pts).induced_metric().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn induced_metrics_validate(pts in integer_points(6, 4)) {
        let x = space_f64(&pts);
        for i in 0..x.len() {
            prop_assert_eq!(x.dist(i, i), 0.0);
            for j in 0..x.len() {
                prop_assert_eq!(x.dist(i, j), x.dist(j, i));
                for k in 0..x.len() {
                    prop_assert!(x.dist(i, k) <= x.dist(i, j) + x.dist(j, k));
                }
            }
        }
    }

    #[test]
    fn kuratowski_is_an_exact_isometry(pts in integer_points(6, 3)) {
        let x = cloud_exact(&pts).induced_metric().unwrap();
        let image = x.kuratowski();
        let back = image.induced_metric().unwrap();
        prop_assert_eq!(back.matrix(), x.matrix());
    }

    #[test]
    fn nu_scales_linearly(pts in integer_points(5, 3), c in 1i64..5) {
        let x = cloud_exact(&pts).induced_metric().unwrap();
        let c = Rational64::new(c, 3);
        let scaled = x.scaled(c).unwrap().nu().unwrap();
        let base = x.nu().unwrap();
        let expected: Vec<_> = base.vector.iter().map(|&v| v * c).collect();
        prop_assert_eq!(scaled.vector, expected);
        prop_assert_eq!(scaled.pair_order, base.pair_order);
    }

    #[test]
    fn nu_is_sorted_and_halved(pts in integer_points(5, 3)) {
        let x = space_f64(&pts);
        let v = x.nu().unwrap();
        prop_assert!(v.vector.windows(2).all(|w| w[0] <= w[1]));
        for (val, &(i, j)) in v.vector.iter().zip(&v.pair_order) {
            prop_assert_eq!(*val, x.dist(i, j) / 2.0);
        }
    }

    #[test]
    fn mst_and_mf_scale_linearly(pts in integer_points(5, 3), c in 1i64..6) {
        let x = cloud_exact(&pts).induced_metric().unwrap();
        let c = Rational64::from_integer(c);
        let y = x.scaled(c).unwrap();
        prop_assert_eq!(mst(&y).length(), mst(&x).length() * c);
        prop_assert_eq!(mf(&y).unwrap().length, mf(&x).unwrap().length * c);
    }

    #[test]
    fn filling_lies_between_half_and_whole_spanning_tree(pts in integer_points(5, 4)) {
        let x = space_f64(&pts);
        let m = mst(&x).length();
        let f = mf(&x).unwrap().length;
        prop_assert!(m / 2.0 <= f + 1e-9 && f <= m + 1e-9, "mst {} mf {}", m, f);
    }

    #[test]
    fn steiner_length_is_filling_length_exactly(pts in integer_points(4, 3)) {
        let cloud = cloud_exact(&pts);
        let smt = smt_linf(&cloud).unwrap();
        let f = mf(&cloud.induced_metric().unwrap()).unwrap();
        prop_assert_eq!(smt.length, f.length);
        prop_assert!(smt.length <= mst(&cloud.induced_metric().unwrap()).length());
    }

    #[test]
    fn gh_is_symmetric_and_bounded(a in integer_points(3, 2), b in integer_points(3, 2)) {
        let x = space_f64(&a);
        let y = space_f64(&b);
        let xy = gh_distance(&x, &y, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(xy, gh_distance(&y, &x, DEFAULT_BUDGET).unwrap());
        prop_assert_eq!(xy, gh_by_all_relations(&x, &y));
        prop_assert!(xy <= x.diameter().max(y.diameter()) / 2.0);
        prop_assert!(xy >= (x.diameter() - y.diameter()).abs() / 2.0);
        prop_assert_eq!(gh_distance(&x, &x, DEFAULT_BUDGET).unwrap(), 0.0);
    }

    #[test]
    fn gh_triangle_inequality(
        a in integer_points(3, 2),
        b in integer_points(3, 2),
        c in integer_points(3, 2),
    ) {
        let (x, y, z) = (space_f64(&a), space_f64(&b), space_f64(&c));
        let xy = gh_distance(&x, &y, DEFAULT_BUDGET).unwrap();
        let yz = gh_distance(&y, &z, DEFAULT_BUDGET).unwrap();
        let xz = gh_distance(&x, &z, DEFAULT_BUDGET).unwrap();
        prop_assert!(xz <= xy + yz + 1e-9);
    }

    #[test]
    fn gh_scales_linearly(pts in integer_points(3, 2), other in integer_points(3, 2), c in 1i64..5) {
        let x = cloud_exact(&pts).induced_metric().unwrap();
        let y = cloud_exact(&other).induced_metric().unwrap();
        let c = Rational64::from_integer(c);
        let base = gh_distance(&x, &y, DEFAULT_BUDGET).unwrap();
        let scaled = gh_distance(&x.scaled(c).unwrap(), &y.scaled(c).unwrap(), DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(scaled, base * c);
    }
}
