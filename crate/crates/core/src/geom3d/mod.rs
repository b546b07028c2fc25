//! Rotations, rigid poses, Plücker lines and the 6×6 line motion matrix.
//!
//! Lengths are meters and angles radians throughout; unit conversion only
//! happens in reports.

mod line;
mod motion;
mod pose;
mod rotation;

pub use line::{axis_angle_between, line_distance, PluckerLine, INTERSECT_TOL, PARALLEL_TOL};
pub use motion::LineMotionMatrix;
pub use pose::Pose;
pub use rotation::Rotation;

pub use nalgebra::{Matrix3, Matrix6, Vector3, Vector6};

/// Skew-symmetric cross-product matrix, `skew(t) * v == t × v`.
pub fn skew(t: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -t.z, t.y, t.z, 0.0, -t.x, -t.y, t.x, 0.0)
}
