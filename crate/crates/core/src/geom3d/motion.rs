use nalgebra::{Matrix3, Matrix6, Vector3, Vector6};

use super::{skew, PluckerLine, Pose, Rotation};

/// The 6×6 operator `[R 0; [t]×R R]` that carries Plücker coordinates between frames.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineMotionMatrix(Matrix6<f64>);

impl LineMotionMatrix {
    pub fn new(rotation: &Rotation, translation: &Vector3<f64>) -> Self {
        let r = rotation.matrix();
        let mut d = Matrix6::zeros();
        d.fixed_view_mut::<3, 3>(0, 0).copy_from(&r);
        d.fixed_view_mut::<3, 3>(3, 0).copy_from(&(skew(translation) * r));
        d.fixed_view_mut::<3, 3>(3, 3).copy_from(&r);
        LineMotionMatrix(d)
    }

    pub fn from_pose(pose: &Pose) -> Self {
        Self::new(&pose.rotation, &pose.translation)
    }

    pub fn identity() -> Self {
        LineMotionMatrix(Matrix6::identity())
    }

    pub fn matrix(&self) -> &Matrix6<f64> {
        &self.0
    }

    pub fn rotation_block(&self) -> Matrix3<f64> {
        self.0.fixed_view::<3, 3>(0, 0).into_owned()
    }

    /// `self · other`, the motion matrix of `pose(self) ∘ pose(other)`.
    pub fn compose(&self, other: &LineMotionMatrix) -> LineMotionMatrix {
        LineMotionMatrix(self.0 * other.0)
    }

    pub fn transform_line(&self, line: &PluckerLine) -> PluckerLine {
        let x = Vector6::new(
            line.direction().x,
            line.direction().y,
            line.direction().z,
            line.moment().x,
            line.moment().y,
            line.moment().z,
        );
        let y = self.0 * x;
        PluckerLine::new_unchecked(Vector3::new(y[0], y[1], y[2]), Vector3::new(y[3], y[4], y[5]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn identity_pose_gives_identity_matrix() {
        let d = LineMotionMatrix::new(&Rotation::identity(), &Vector3::zeros());
        assert_eq!(*d.matrix(), Matrix6::identity());
    }

    #[test]
    fn translated_z_axis() {
        let d = LineMotionMatrix::new(&Rotation::identity(), &Vector3::new(1.0, 0.0, 0.0));
        let out = d.transform_line(&PluckerLine::canonical());
        assert_eq!(*out.direction(), Vector3::z());
        assert_eq!(*out.moment(), Vector3::new(0.0, -1.0, 0.0));
    }

    #[test]
    fn quarter_turn_maps_x_axis_to_y_axis() {
        let d = LineMotionMatrix::new(&Rotation::from_axis_angle(&Vector3::z(), FRAC_PI_2), &Vector3::zeros());
        let x = PluckerLine::from_point_direction(&Vector3::zeros(), &Vector3::x()).unwrap();
        let out = d.transform_line(&x);
        assert!((out.direction() - Vector3::y()).norm() < 1e-15);
        assert!(out.moment().norm() < 1e-15);
    }

    #[test]
    fn block_structure() {
        let d = LineMotionMatrix::new(
            &Rotation::from_rotation_vector(&Vector3::new(0.2, 0.5, -0.4)),
            &Vector3::new(0.3, -0.1, 2.0),
        );
        let m = d.matrix();
        assert_eq!(m.fixed_view::<3, 3>(0, 3).into_owned(), Matrix3::zeros());
        assert_eq!(m.fixed_view::<3, 3>(0, 0), m.fixed_view::<3, 3>(3, 3));
        let r = d.rotation_block();
        assert!((r * r.transpose() - Matrix3::identity()).norm() < 1e-12);
    }
}
