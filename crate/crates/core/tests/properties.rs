mod common;

use common::{angle_between, svd_screw};
use nalgebra::Vector3;
use proptest::prelude::*;
use screwkit::artmodel::aggregate_axis;
use screwkit::datagen::{generate, ObjectSpec};
use screwkit::estimator::estimate_closed_form;
use screwkit::geom3d::{line_distance, LineMotionMatrix, PluckerLine, Pose, Rotation};
use screwkit::screwkin::{apply_screw, screw_from_relative_pose, transform_screw, ScrewDisplacement};
use screwkit::{CategoryThresholds, ModelCategory};

fn vec3(r: f64) -> impl Strategy<Value = Vector3<f64>> {
    [-r..r, -r..r, -r..r].prop_map(|[x, y, z]| Vector3::new(x, y, z))
}

fn direction() -> impl Strategy<Value = Vector3<f64>> {
    vec3(1.0)
        .prop_filter("non-degenerate", |v| v.norm() > 0.1)
        .prop_map(|v| v.normalize())
}

fn line() -> impl Strategy<Value = PluckerLine> {
    (vec3(2.0), direction()).prop_map(|(p, d)| PluckerLine::from_point_direction(&p, &d).unwrap())
}

fn pose() -> impl Strategy<Value = Pose> {
    (direction(), 0.0..std::f64::consts::PI, vec3(2.0))
        .prop_map(|(a, th, t)| Pose::new(Rotation::from_axis_angle(&a, th), t))
}

fn screw() -> impl Strategy<Value = ScrewDisplacement> {
    (line(), 1e-3..std::f64::consts::PI - 1e-3, -1.0..1.0).prop_map(|(axis, theta, d)| ScrewDisplacement {
        axis,
        theta,
        d,
    })
}

fn same_line(a: &PluckerLine, b: &PluckerLine, tol: f64) -> bool {
    angle_between(a.direction(), b.direction()) < tol && line_distance(a, b) < tol
}

proptest! {
    #[test]
    fn line_distance_is_symmetric(a in line(), b in line()) {
        prop_assert!((line_distance(&a, &b) - line_distance(&b, &a)).abs() < 1e-12);
    }

    #[test]
    fn line_distance_is_rigid_invariant(a in line(), b in line(), g in pose()) {
        let m = LineMotionMatrix::from_pose(&g);
        let d0 = line_distance(&a, &b);
        let d1 = line_distance(&m.transform_line(&a), &m.transform_line(&b));
        prop_assert!((d0 - d1).abs() < 1e-9, "{} vs {}", d0, d1);
    }

    #[test]
    fn line_distance_ignores_orientation(a in line(), b in line()) {
        prop_assert!((line_distance(&a, &b) - line_distance(&a.flipped(), &b)).abs() < 1e-12);
    }

    #[test]
    fn motion_matrix_is_a_homomorphism(g in pose(), h in pose()) {
        let lhs = LineMotionMatrix::from_pose(&g.compose(&h));
        let rhs = LineMotionMatrix::from_pose(&g).compose(&LineMotionMatrix::from_pose(&h));
        prop_assert!((lhs.matrix() - rhs.matrix()).amax() < 1e-12);
    }

    #[test]
    fn transform_line_agrees_with_points(l in line(), g in pose(), s in -3.0..3.0f64) {
        let moved = LineMotionMatrix::from_pose(&g).transform_line(&l);
        let p = g.transform_point(&l.point_at(s));
        prop_assert!(moved.distance_to_point(&p) < 1e-12);
        prop_assert!((moved.direction() - g.rotation.rotate(l.direction())).norm() < 1e-12);
    }

    #[test]
    fn screw_roundtrip(s in screw()) {
        let back = screw_from_relative_pose(&apply_screw(&s));
        prop_assert!(same_line(&back.axis, &s.axis, 1e-9));
        prop_assert!((back.theta - s.theta).abs() < 1e-9);
        prop_assert!((back.d - s.d).abs() < 1e-9);
    }

    #[test]
    fn extraction_matches_matrix_route(g in pose()) {
        prop_assume!(g.rotation.angle() > 1e-3 && g.rotation.angle() < std::f64::consts::PI - 1e-3);
        let a = screw_from_relative_pose(&g);
        let b = svd_screw(&g);
        prop_assert!(same_line(&a.axis, &b.axis, 1e-9));
        prop_assert!((a.theta - b.theta).abs() < 1e-9);
        prop_assert!((a.d - b.d).abs() < 1e-9);
    }

    #[test]
    fn configurations_add_along_one_axis(
        axis in line(), t1 in -1.5..1.5f64, t2 in -1.5..1.5f64, d1 in -1.0..1.0f64, d2 in -1.0..1.0f64
    ) {
        let a = apply_screw(&ScrewDisplacement { axis, theta: t1, d: d1 });
        let b = apply_screw(&ScrewDisplacement { axis, theta: t2, d: d2 });
        let sum = apply_screw(&ScrewDisplacement { axis, theta: t1 + t2, d: d1 + d2 });
        prop_assert!(a.compose(&b).distance_to(&sum) < 1e-12);
        prop_assert!(b.compose(&a).distance_to(&sum) < 1e-12);
    }

    #[test]
    fn conjugation_moves_the_axis(s in screw(), g in pose()) {
        let p = apply_screw(&s);
        let conj = g.compose(&p).compose(&g.inverse());
        let direct = screw_from_relative_pose(&conj);
        let moved = transform_screw(&s, &LineMotionMatrix::from_pose(&g));
        prop_assert!(same_line(&direct.axis, &moved.axis, 1e-9));
        prop_assert!((direct.theta - moved.theta).abs() < 1e-9);
        prop_assert!((direct.d - moved.d).abs() < 1e-9);
    }

    #[test]
    fn aggregation_ignores_order(cat in 1usize..4, seed in 0u64..1000, shift in 1usize..10) {
        let t = generate(&ObjectSpec::for_category(ModelCategory::ALL[cat]), seed).unwrap();
        let th = CategoryThresholds::default();
        let a = aggregate_axis(&t.labels, &th).unwrap();
        let mut rotated = t.labels.clone();
        let n = rotated.len();
        rotated.rotate_left(shift % n);
        rotated.reverse();
        let b = aggregate_axis(&rotated, &th).unwrap();
        prop_assert!(same_line(&a.axis, &b.axis, 1e-12));
    }

    #[test]
    fn estimation_is_equivariant(cat in 0usize..4, seed in 0u64..1000, g in pose()) {
        let t = generate(&ObjectSpec::for_category(ModelCategory::ALL[cat]), seed).unwrap();
        let th = CategoryThresholds::default();
        let a = estimate_closed_form(&t.poses, &t.base_pose, &th).unwrap();
        let poses: Vec<Pose> = t.poses.iter().map(|p| g.compose(p)).collect();
        let b = estimate_closed_form(&poses, &g.compose(&t.base_pose), &th).unwrap();
        prop_assert_eq!(a.category, b.category);
        // in the base frame the axis is unchanged; in the world it moves by D(G)
        prop_assert!(same_line(&a.axis, &b.axis, 1e-9));
        let world_a = LineMotionMatrix::from_pose(&t.base_pose).transform_line(&a.axis);
        let world_b = LineMotionMatrix::from_pose(&g.compose(&t.base_pose)).transform_line(&b.axis);
        prop_assert!(same_line(&LineMotionMatrix::from_pose(&g).transform_line(&world_a), &world_b, 1e-9));
        for (x, y) in a.configs.iter().zip(&b.configs) {
            prop_assert!((x.theta - y.theta).abs() < 1e-9 && (x.d - y.d).abs() < 1e-9);
        }
    }
}
