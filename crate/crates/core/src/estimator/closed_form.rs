//! Classical estimation of an articulation model from a pose sequence.
//!
//! Screws between the first and every later pose of the moving part are
//! extracted in the first-pose frame, carried into the base-object frame, fused
//! into one axis, and configurations are re-projected onto that axis.
//!
//! With noisy poses the per-step `(θ, d)` carry noise comparable to or larger
//! than the default decision thresholds, so the decision tree runs on
//! noise-aware evidence: motion amplitudes are compared against
//! `max(ε, k·σ̂)`, where `σ̂` is read from the motion components that a 1-DoF
//! model cannot explain (rotation off the fitted axis, translation across it).
//! Rotating joints are split into revolute and helical by a t-test on the
//! fitted pitch. Without noise `σ̂ = 0` and the tree reduces to the plain
//! threshold rule of [`crate::artmodel::classify`].

use nalgebra::{Matrix3, SymmetricEigen, Vector3};

use crate::artmodel::{aggregate_axis_masked, ArticulationModel, CategoryThresholds, ModelCategory};
use crate::error::{Error, Result};
use crate::geom3d::{LineMotionMatrix, PluckerLine, Pose};
use crate::screwkin::{
    screw_from_relative_pose, screw_from_relative_pose_with, transform_screw, Configuration, ScrewDisplacement,
};

/// Amplitude must exceed this many noise standard deviations to count as motion.
pub const AMPLITUDE_SIGMAS: f64 = 12.0;
/// t-statistic a fitted pitch needs before a rotating joint is called helical.
pub const PITCH_T_STAT: f64 = 3.0;

/// The statistics the noise-aware decision tree acts on.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MotionEvidence {
    /// Largest rotation along the principal rotation direction, rad.
    pub rot_amplitude: f64,
    /// Per-axis rotation noise estimate, rad.
    pub rot_noise: f64,
    pub rot_threshold: f64,
    /// Largest translation along the fitted axis, m.
    pub trans_amplitude: f64,
    /// Per-axis translation noise estimate, m.
    pub trans_noise: f64,
    pub trans_threshold: f64,
    /// Fitted `d = a + hθ` slope, m/rad (rotating joints only).
    pub pitch: f64,
    pub pitch_t: f64,
}

#[derive(Debug, Clone)]
pub struct ClosedFormEstimate {
    pub model: ArticulationModel,
    /// Per-step screws in the base frame, sign-aligned with the model axis.
    pub step_screws: Vec<ScrewDisplacement>,
    /// Which steps determined the axis.
    pub axis_active: Vec<bool>,
    /// False when per-step axes spread beyond the single-model tolerance.
    pub axis_consistent: bool,
    pub evidence: MotionEvidence,
}

/// Principal direction of a point cloud through the origin, projections on
/// it, and the per-axis RMS of the perpendicular residuals.
fn principal_line(points: &[Vector3<f64>]) -> (Vector3<f64>, Vec<f64>, f64) {
    let mut scatter = Matrix3::zeros();
    for p in points {
        scatter += p * p.transpose();
    }
    let eig = SymmetricEigen::new(scatter);
    let mut e: Vector3<f64> = eig.eigenvectors.column(eig.eigenvalues.imax()).into_owned();
    if points.iter().map(|p| p.dot(&e)).sum::<f64>() < 0.0 {
        e = -e;
    }
    let along: Vec<f64> = points.iter().map(|p| p.dot(&e)).collect();
    let perp: f64 = points
        .iter()
        .zip(&along)
        .map(|(p, a)| (p - e * *a).norm_squared())
        .sum();
    (e, along, (perp / (2.0 * points.len() as f64)).sqrt())
}

/// Slope, its t-statistic and the through-origin slope of `y ~ a + b x`.
fn slope_test(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let sxx0: f64 = x.iter().map(|v| v * v).sum();
    let origin = if sxx0 > 0.0 {
        x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>() / sxx0
    } else {
        0.0
    };
    if x.len() < 3 {
        return (origin, f64::INFINITY, origin);
    }
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx <= 0.0 {
        return (origin, 0.0, origin);
    }
    let b = x.iter().zip(y).map(|(a, c)| (a - mx) * (c - my)).sum::<f64>() / sxx;
    let a = my - b * mx;
    let rss: f64 = x.iter().zip(y).map(|(u, v)| (v - a - b * u).powi(2)).sum();
    let se = (rss / (n - 2.0) / sxx).sqrt();
    let t = if se > 0.0 {
        b.abs() / se
    } else if b != 0.0 {
        f64::INFINITY
    } else {
        0.0
    };
    (b, t, origin)
}

/// Estimates the model, returning only the model.
pub fn estimate_closed_form(poses: &[Pose], base: &Pose, th: &CategoryThresholds) -> Result<ArticulationModel> {
    estimate_closed_form_detailed(poses, base, th).map(|e| e.model)
}

pub fn estimate_closed_form_detailed(
    poses: &[Pose],
    base: &Pose,
    th: &CategoryThresholds,
) -> Result<ClosedFormEstimate> {
    if poses.len() < 2 {
        return Err(Error::invalid(format!("need at least 2 poses, got {}", poses.len())));
    }
    th.validate()?;
    let base_inv = base.inverse();
    let local: Vec<Pose> = poses.iter().map(|p| base_inv.compose(p)).collect();
    let first_inv = local[0].inverse();
    let to_base = LineMotionMatrix::from_pose(&local[0]);
    let relative: Vec<Pose> = poses[1..].iter().map(|p| poses[0].between(p)).collect();
    // same motions, expressed in the base frame
    let motions: Vec<Pose> = local[1..].iter().map(|x| x.compose(&first_inv)).collect();
    let steps = motions.len();

    let omegas: Vec<Vector3<f64>> = motions.iter().map(|m| m.rotation.rotation_vector()).collect();
    let (_, rot_along, rot_noise) = principal_line(&omegas);
    let rot_amplitude = rot_along.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let rot_threshold = th.eps_theta.max(AMPLITUDE_SIGMAS * rot_noise);
    let rotational = rot_amplitude > rot_threshold;

    let raw: Vec<ScrewDisplacement> = relative
        .iter()
        .map(|rel| {
            let s = if rotational {
                screw_from_relative_pose(rel)
            } else {
                screw_from_relative_pose_with(rel, f64::INFINITY)
            };
            transform_screw(&s, &to_base)
        })
        .collect();
    let active: Vec<bool> = raw
        .iter()
        .map(|s| {
            if rotational {
                s.theta > rot_threshold
            } else {
                s.d > th.eps_d
            }
        })
        .collect();
    let agg = aggregate_axis_masked(&raw, &active)?;
    let any_active = agg.contributing > 0;
    let axis = if any_active {
        agg.axis
    } else {
        to_base.transform_line(&PluckerLine::canonical())
    };
    let step_screws: Vec<ScrewDisplacement> = raw
        .iter()
        .map(|s| {
            if s.axis.direction().dot(axis.direction()) < 0.0 {
                ScrewDisplacement {
                    axis: s.axis.flipped(),
                    theta: -s.theta,
                    d: -s.d,
                }
            } else {
                *s
            }
        })
        .collect();

    let l = *axis.direction();
    let p0 = axis.closest_point_to_origin();
    let mut thetas = Vec::with_capacity(steps);
    let mut ds = Vec::with_capacity(steps);
    let mut perp = 0.0;
    if rotational {
        for m in &motions {
            let theta = m.rotation.twist_angle(&l);
            let d = l.dot(&m.translation);
            let predicted = l * d + (Matrix3::identity() - m.rotation.matrix()) * p0;
            let r = m.translation - predicted;
            perp += (r - l * l.dot(&r)).norm_squared();
            thetas.push(theta);
            ds.push(d);
        }
    } else {
        // Without rotation the part-frame translations are free of the lever
        // arm that orientation noise adds to base-frame motions.
        let l_part = local[0].rotation.inverse().rotate(&l);
        for rel in &relative {
            let d = l_part.dot(&rel.translation);
            perp += (rel.translation - l_part * d).norm_squared();
            thetas.push(0.0);
            ds.push(d);
        }
    }
    let trans_noise = (perp / (2.0 * steps as f64)).sqrt();
    let trans_amplitude = ds.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let trans_threshold = th.eps_d.max(AMPLITUDE_SIGMAS * trans_noise);
    let theta_max = thetas.iter().fold(0.0_f64, |a, v| a.max(v.abs()));

    // Per-step screws carry their own axis direction, so an error in the
    // pooled axis does not leak into d as a fake, θ-proportional pitch.
    let (pitch, pitch_t, pitch0) = if rotational {
        let st: Vec<f64> = step_screws.iter().map(|s| s.theta).collect();
        let sd: Vec<f64> = step_screws.iter().map(|s| s.d).collect();
        slope_test(&st, &sd)
    } else {
        (0.0, 0.0, 0.0)
    };
    let category = if rotational {
        if pitch.abs() * theta_max > th.eps_d && pitch_t > PITCH_T_STAT {
            ModelCategory::Helical
        } else {
            ModelCategory::Revolute
        }
    } else if trans_amplitude > trans_threshold {
        ModelCategory::Prismatic
    } else {
        ModelCategory::Rigid
    };

    let configs: Vec<Configuration> = thetas
        .iter()
        .zip(&ds)
        .map(|(&t, &d)| match category {
            ModelCategory::Rigid => Configuration::default(),
            ModelCategory::Revolute => Configuration::new(t, 0.0),
            ModelCategory::Prismatic => Configuration::new(0.0, d),
            ModelCategory::Helical => Configuration::new(t, pitch0 * t),
        })
        .collect();
    // a rigid sequence carries no axis information; per-step axes are noise
    let (axis, active, axis_consistent) = if category == ModelCategory::Rigid {
        (
            to_base.transform_line(&PluckerLine::canonical()),
            vec![false; steps],
            true,
        )
    } else {
        (axis, active, !any_active || agg.is_consistent(th))
    };

    Ok(ClosedFormEstimate {
        model: ArticulationModel::new(category, axis, configs),
        step_screws,
        axis_active: active,
        axis_consistent,
        evidence: MotionEvidence {
            rot_amplitude,
            rot_noise,
            rot_threshold,
            trans_amplitude,
            trans_noise,
            trans_threshold,
            pitch,
            pitch_t,
        },
    })
}
