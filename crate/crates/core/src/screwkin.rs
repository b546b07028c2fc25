//! Chasles decomposition of rigid displacements into screw displacements.
//!
//! A screw `(l̂, m, θ, d)` and its negation `(−l̂, −m, −θ, −d)` describe the
//! same motion. The canonical form keeps `θ ∈ [0, π]` and, for pure
//! translations, `d ≥ 0`.

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::geom3d::{LineMotionMatrix, PluckerLine, Pose, Rotation};

/// Rotation angle below which a displacement is treated as a pure translation.
pub const EPS_THETA: f64 = 1e-8;
/// Translation norm below which a non-rotating displacement is the identity.
pub const EPS_TRANSLATION: f64 = 1e-12;

/// Rotation `theta` about and translation `d` along a screw axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScrewDisplacement {
    pub axis: PluckerLine,
    pub theta: f64,
    pub d: f64,
}

/// One configuration `(θ, d)` along a shared screw axis.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Configuration {
    pub theta: f64,
    pub d: f64,
}

impl Configuration {
    pub fn new(theta: f64, d: f64) -> Self {
        Configuration { theta, d }
    }
}

impl From<[f64; 2]> for Configuration {
    fn from(a: [f64; 2]) -> Self {
        Configuration::new(a[0], a[1])
    }
}

impl From<Configuration> for [f64; 2] {
    fn from(c: Configuration) -> Self {
        [c.theta, c.d]
    }
}

/// Ratio between translation and rotation of a screw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Pitch {
    Finite(f64),
    /// Pure translation.
    Infinite,
    /// No motion at all.
    ZeroMotion,
}

impl ScrewDisplacement {
    /// Builds a screw and brings it to canonical sign form.
    pub fn new(axis: PluckerLine, theta: f64, d: f64) -> Self {
        ScrewDisplacement { axis, theta, d }.canonical()
    }

    pub fn identity() -> Self {
        ScrewDisplacement {
            axis: PluckerLine::canonical(),
            theta: 0.0,
            d: 0.0,
        }
    }

    pub fn configuration(&self) -> Configuration {
        Configuration::new(self.theta, self.d)
    }

    /// Folds `θ` into `[0, π]` (flipping the axis when needed) and makes `d ≥ 0`
    /// for pure translations.
    pub fn canonical(self) -> Self {
        let mut theta = self.theta % TAU;
        if theta > PI {
            theta -= TAU;
        } else if theta <= -PI {
            theta += TAU;
        }
        let mut s = ScrewDisplacement { theta, ..self };
        if s.theta < 0.0 || (s.theta == 0.0 && s.d < 0.0) {
            s = ScrewDisplacement {
                axis: s.axis.flipped(),
                theta: -s.theta,
                d: -s.d,
            };
        }
        s
    }

    pub fn is_motionless(&self, eps_theta: f64, eps_d: f64) -> bool {
        self.theta.abs() <= eps_theta && self.d.abs() <= eps_d
    }
}

/// Screw displacement reproducing `pose`.
pub fn screw_from_relative_pose(pose: &Pose) -> ScrewDisplacement {
    screw_from_relative_pose_with(pose, EPS_THETA)
}

/// As [`screw_from_relative_pose`], but rotations below `eps_theta` are dropped
/// and the displacement is read as a pure translation. Useful for noisy poses
/// where a tiny spurious rotation would otherwise produce an arbitrary axis.
pub fn screw_from_relative_pose_with(pose: &Pose, eps_theta: f64) -> ScrewDisplacement {
    let t = pose.translation;
    let q = pose.rotation.quaternion().quaternion();
    let half_sin = q.imag().norm();
    let theta = 2.0 * half_sin.atan2(q.w);

    if theta < eps_theta.max(EPS_THETA) || half_sin == 0.0 {
        let n = t.norm();
        if n < EPS_TRANSLATION {
            return ScrewDisplacement::identity();
        }
        return ScrewDisplacement {
            axis: PluckerLine::new_unchecked(t / n, Vector3::zeros()),
            theta: 0.0,
            d: n,
        };
    }

    let l = q.imag() / half_sin;
    let d = l.dot(&t);
    let t_perp = t - l * d;
    // (I − R) restricted to the plane ⟂ l̂ has inverse ½(I + cot(θ/2) [l̂]×).
    let cot_half = q.w / half_sin;
    let p0 = 0.5 * (t_perp + cot_half * l.cross(&t_perp));
    ScrewDisplacement {
        axis: PluckerLine::new_unchecked(l, p0.cross(&l)),
        theta,
        d,
    }
}

/// Rigid displacement of rotating `θ` about the axis and translating `d` along it.
pub fn apply_screw(s: &ScrewDisplacement) -> Pose {
    let l = s.axis.direction();
    let rotation = Rotation::from_axis_angle(l, s.theta);
    let p0 = s.axis.closest_point_to_origin();
    let r = rotation.matrix();
    let translation = l * s.d + (Matrix3::identity() - r) * p0;
    Pose::new(rotation, translation)
}

pub fn pitch(s: &ScrewDisplacement) -> Pitch {
    if s.theta.abs() > EPS_THETA {
        Pitch::Finite(s.d / s.theta)
    } else if s.d.abs() > EPS_TRANSLATION {
        Pitch::Infinite
    } else {
        Pitch::ZeroMotion
    }
}

/// Re-expresses a screw in another frame. `(θ, d)` are carried over untouched.
pub fn transform_screw(s: &ScrewDisplacement, motion: &LineMotionMatrix) -> ScrewDisplacement {
    ScrewDisplacement {
        axis: motion.transform_line(&s.axis),
        theta: s.theta,
        d: s.d,
    }
}
