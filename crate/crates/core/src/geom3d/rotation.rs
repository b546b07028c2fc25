use nalgebra::{Matrix3, Quaternion, Unit, UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};

/// An element of SO(3), stored as a unit quaternion with non-negative scalar part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 4]", try_from = "[f64; 4]")]
pub struct Rotation(UnitQuaternion<f64>);

impl Rotation {
    pub fn identity() -> Self {
        Rotation(UnitQuaternion::identity())
    }

    /// Rotation by `angle` radians about `axis`. A zero axis yields the identity.
    pub fn from_axis_angle(axis: &Vector3<f64>, angle: f64) -> Self {
        match Unit::try_new(*axis, 1e-300) {
            Some(a) => Self::from_unit_quaternion(UnitQuaternion::from_axis_angle(&a, angle)),
            None => Self::identity(),
        }
    }

    /// Exponential map of a rotation vector.
    pub fn from_rotation_vector(v: &Vector3<f64>) -> Self {
        Self::from_unit_quaternion(UnitQuaternion::from_scaled_axis(*v))
    }

    pub fn from_unit_quaternion(q: UnitQuaternion<f64>) -> Self {
        if q.w < 0.0 {
            Rotation(UnitQuaternion::new_unchecked(-q.into_inner()))
        } else {
            Rotation(q)
        }
    }

    /// Builds a rotation from `[w, x, y, z]`, normalizing the input.
    pub fn from_wxyz(q: [f64; 4]) -> Option<Self> {
        let raw = Quaternion::new(q[0], q[1], q[2], q[3]);
        let n = raw.norm();
        if !n.is_finite() || n < 1e-12 {
            return None;
        }
        Some(Self::from_unit_quaternion(UnitQuaternion::new_normalize(raw)))
    }

    /// Nearest rotation to an arbitrary 3×3 matrix.
    pub fn from_matrix(m: &Matrix3<f64>) -> Self {
        let rot = nalgebra::Rotation3::from_matrix_eps(m, 1e-15, 100, nalgebra::Rotation3::identity());
        Self::from_unit_quaternion(UnitQuaternion::from_rotation_matrix(&rot))
    }

    pub fn wxyz(&self) -> [f64; 4] {
        let q = self.0.quaternion();
        [q.w, q.i, q.j, q.k]
    }

    pub fn quaternion(&self) -> &UnitQuaternion<f64> {
        &self.0
    }

    pub fn matrix(&self) -> Matrix3<f64> {
        self.0.to_rotation_matrix().into_inner()
    }

    /// Rotation angle in `[0, π]`, evaluated with `atan2` so it stays accurate near π.
    pub fn angle(&self) -> f64 {
        let q = self.0.quaternion();
        2.0 * q.imag().norm().atan2(q.w)
    }

    /// Unit axis and angle in `[0, π]`; `None` for the identity.
    pub fn axis_angle(&self) -> Option<(Vector3<f64>, f64)> {
        let v = self.0.quaternion().imag();
        let s = v.norm();
        if s == 0.0 {
            return None;
        }
        Some((v / s, self.angle()))
    }

    /// Logarithm map: rotation vector with norm in `[0, π]`.
    pub fn rotation_vector(&self) -> Vector3<f64> {
        self.axis_angle().map(|(a, t)| a * t).unwrap_or_else(Vector3::zeros)
    }

    /// Signed rotation angle about `axis` (swing-twist decomposition), in `(-π, π]`.
    pub fn twist_angle(&self, axis: &Vector3<f64>) -> f64 {
        let q = self.0.quaternion();
        let along = q.imag().dot(axis);
        let mut a = 2.0 * along.atan2(q.w);
        if a > std::f64::consts::PI {
            a -= 2.0 * std::f64::consts::PI;
        }
        a
    }

    pub fn rotate(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.0 * v
    }

    pub fn compose(&self, other: &Rotation) -> Rotation {
        Self::from_unit_quaternion(self.0 * other.0)
    }

    pub fn inverse(&self) -> Rotation {
        Self::from_unit_quaternion(self.0.inverse())
    }
}

impl Default for Rotation {
    fn default() -> Self {
        Self::identity()
    }
}

impl From<Rotation> for [f64; 4] {
    fn from(r: Rotation) -> Self {
        r.wxyz()
    }
}

impl TryFrom<[f64; 4]> for Rotation {
    type Error = String;

    fn try_from(q: [f64; 4]) -> Result<Self, Self::Error> {
        let n = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]).sqrt();
        if !n.is_finite() || (n - 1.0).abs() > 1e-6 {
            return Err(format!("quaternion {q:?} is not unit length"));
        }
        if (n - 1.0).abs() <= 4.0 * f64::EPSILON {
            // already unit: keep the stored bits so files round-trip exactly
            let raw = Quaternion::new(q[0], q[1], q[2], q[3]);
            return Ok(Self::from_unit_quaternion(UnitQuaternion::new_unchecked(raw)));
        }
        Rotation::from_wxyz(q).ok_or_else(|| format!("degenerate quaternion {q:?}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn canonical_scalar_part_is_non_negative() {
        let r = Rotation::from_wxyz([-0.5, 0.5, 0.5, 0.5]).unwrap();
        assert!(r.wxyz()[0] >= 0.0);
        let r = Rotation::from_axis_angle(&Vector3::z(), 1.5 * PI);
        assert!(r.wxyz()[0] >= 0.0);
        assert!((r.angle() - 0.5 * PI).abs() < 1e-12);
    }

    #[test]
    fn matrix_is_orthonormal() {
        let r = Rotation::from_rotation_vector(&Vector3::new(0.3, -1.2, 0.7));
        let m = r.matrix();
        assert!((m * m.transpose() - Matrix3::identity()).norm() < 1e-12);
        assert!((m.determinant() - 1.0).abs() < 1e-12);
        let back = Rotation::from_matrix(&m);
        assert!((back.matrix() - m).norm() < 1e-12);
    }

    #[test]
    fn angle_near_pi_is_accurate() {
        let a = PI - 1e-7;
        let r = Rotation::from_axis_angle(&Vector3::new(1.0, 2.0, -0.5), a);
        assert!((r.angle() - a).abs() < 1e-12);
    }

    #[test]
    fn twist_about_axis() {
        let r = Rotation::from_axis_angle(&Vector3::z(), FRAC_PI_2);
        assert!((r.twist_angle(&Vector3::z()) - FRAC_PI_2).abs() < 1e-12);
        assert!((r.twist_angle(&-Vector3::z()) + FRAC_PI_2).abs() < 1e-12);
        assert!(r.twist_angle(&Vector3::x()).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_unit_quaternion_on_deserialize() {
        assert!(Rotation::try_from([2.0, 0.0, 0.0, 0.0]).is_err());
        assert!(Rotation::try_from([1.0, 0.0, 0.0, 0.0]).is_ok());
    }
}
