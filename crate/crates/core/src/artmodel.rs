//! Articulation models over a shared screw axis and the category decision tree.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom3d::{axis_angle_between, line_distance, PluckerLine};
use crate::screwkin::{Configuration, ScrewDisplacement};

/// Length scale converting translations into rotation-equivalent motion weights.
pub const WEIGHT_LENGTH_SCALE: f64 = 0.1;
/// Maximum orientation spread, in degrees, of per-step axes of one model.
pub const MAX_AXIS_SPREAD_DEG: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelCategory {
    Rigid,
    Revolute,
    Prismatic,
    Helical,
}

impl ModelCategory {
    pub const ALL: [ModelCategory; 4] = [
        ModelCategory::Rigid,
        ModelCategory::Revolute,
        ModelCategory::Prismatic,
        ModelCategory::Helical,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ModelCategory::Rigid => "rigid",
            ModelCategory::Revolute => "revolute",
            ModelCategory::Prismatic => "prismatic",
            ModelCategory::Helical => "helical",
        }
    }

    pub fn rotates(&self) -> bool {
        matches!(self, ModelCategory::Revolute | ModelCategory::Helical)
    }

    pub fn translates(&self) -> bool {
        matches!(self, ModelCategory::Prismatic | ModelCategory::Helical)
    }
}

impl fmt::Display for ModelCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelCategory {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rigid" => Ok(ModelCategory::Rigid),
            "revolute" => Ok(ModelCategory::Revolute),
            "prismatic" => Ok(ModelCategory::Prismatic),
            "helical" => Ok(ModelCategory::Helical),
            other => Err(Error::invalid(format!("unknown category '{other}'"))),
        }
    }
}

/// Motion thresholds of the decision tree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CategoryThresholds {
    /// rad
    pub eps_theta: f64,
    /// m
    pub eps_d: f64,
    /// Relative tolerance on `|d − hθ|` for a common pitch `h`.
    pub helical_pitch_tol: f64,
}

impl Default for CategoryThresholds {
    fn default() -> Self {
        CategoryThresholds {
            eps_theta: 0.01,
            eps_d: 1e-3,
            helical_pitch_tol: 0.05,
        }
    }
}

impl CategoryThresholds {
    pub fn validate(&self) -> Result<()> {
        let ok = [self.eps_theta, self.eps_d, self.helical_pitch_tol]
            .iter()
            .all(|v| v.is_finite() && *v > 0.0);
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(format!("thresholds must be positive: {self:?}")))
        }
    }
}

/// A 1-DoF articulation: category, shared screw axis and per-step configurations.
#[derive(Debug, Clone, PartialEq)]
pub struct ArticulationModel {
    pub category: ModelCategory,
    pub axis: PluckerLine,
    pub configs: Vec<Configuration>,
}

impl ArticulationModel {
    pub fn new(category: ModelCategory, axis: PluckerLine, configs: Vec<Configuration>) -> Self {
        ArticulationModel {
            category,
            axis,
            configs,
        }
    }

    /// Screw displacement of step `i`.
    pub fn screw(&self, i: usize) -> ScrewDisplacement {
        let c = self.configs[i];
        ScrewDisplacement {
            axis: self.axis,
            theta: c.theta,
            d: c.d,
        }
    }

    /// Least-squares pitch `h` minimizing `Σ (d_i − h θ_i)²`; `None` without rotation.
    pub fn fitted_pitch(&self) -> Option<f64> {
        fitted_pitch(&self.configs)
    }

    /// Whether the configurations agree with the category under `th`.
    pub fn is_consistent(&self, th: &CategoryThresholds) -> bool {
        if self.configs.is_empty() || self.axis.constraint_violation() > 1e-9 {
            return false;
        }
        let (max_t, max_d) = max_motion(&self.configs);
        let rot = max_t > th.eps_theta;
        let tr = max_d > th.eps_d;
        match self.category {
            ModelCategory::Rigid => !rot && !tr,
            ModelCategory::Revolute => rot && !tr,
            ModelCategory::Prismatic => !rot && tr,
            ModelCategory::Helical => {
                let Some(h) = self.fitted_pitch() else {
                    return false;
                };
                rot && tr
                    && self
                        .configs
                        .iter()
                        .all(|c| (c.d - h * c.theta).abs() <= th.helical_pitch_tol * max_d + th.eps_d)
            }
        }
    }
}

pub(crate) fn fitted_pitch(configs: &[Configuration]) -> Option<f64> {
    let tt: f64 = configs.iter().map(|c| c.theta * c.theta).sum();
    if tt <= 0.0 {
        return None;
    }
    Some(configs.iter().map(|c| c.theta * c.d).sum::<f64>() / tt)
}

fn max_motion(configs: &[Configuration]) -> (f64, f64) {
    configs
        .iter()
        .fold((0.0_f64, 0.0_f64), |(t, d), c| (t.max(c.theta.abs()), d.max(c.d.abs())))
}

/// Decision tree over configuration magnitudes.
pub fn classify_configs(configs: &[Configuration], th: &CategoryThresholds) -> Result<ModelCategory> {
    if configs.is_empty() {
        return Err(Error::invalid("cannot classify an empty sequence"));
    }
    let (max_t, max_d) = max_motion(configs);
    Ok(match (max_t > th.eps_theta, max_d > th.eps_d) {
        (false, false) => ModelCategory::Rigid,
        (true, false) => ModelCategory::Revolute,
        (false, true) => ModelCategory::Prismatic,
        (true, true) => ModelCategory::Helical,
    })
}

/// Deduces the model category of a screw sequence.
pub fn classify(screws: &[ScrewDisplacement], th: &CategoryThresholds) -> Result<ModelCategory> {
    let configs: Vec<Configuration> = screws.iter().map(|s| s.configuration()).collect();
    classify_configs(&configs, th)
}

/// Result of fusing per-step screw axes into one axis.
#[derive(Debug, Clone)]
pub struct AxisAggregate {
    pub axis: PluckerLine,
    /// +1 or −1 per input screw: sign that aligns it with `axis`.
    pub signs: Vec<f64>,
    /// Largest orientation deviation of a contributing axis, degrees.
    pub max_angle_deg: f64,
    /// Largest line distance of a contributing axis, meters.
    pub max_distance: f64,
    /// Number of steps that contributed.
    pub contributing: usize,
}

impl AxisAggregate {
    pub fn is_consistent(&self, th: &CategoryThresholds) -> bool {
        self.max_angle_deg < MAX_AXIS_SPREAD_DEG && self.max_distance < th.eps_d
    }
}

fn motion_weight(s: &ScrewDisplacement) -> f64 {
    s.theta.abs() + s.d.abs() / WEIGHT_LENGTH_SCALE
}

/// Motion-weighted, sign-aligned mean of the non-degenerate axes.
///
/// Motionless steps are ignored; a fully motionless sequence keeps the axis of
/// its first screw (the canonical axis in the frame the screws live in).
pub fn aggregate_axis(screws: &[ScrewDisplacement], th: &CategoryThresholds) -> Result<AxisAggregate> {
    let mask: Vec<bool> = screws
        .iter()
        .map(|s| !s.is_motionless(th.eps_theta, th.eps_d))
        .collect();
    aggregate_axis_masked(screws, &mask)
}

/// As [`aggregate_axis`] with an explicit choice of contributing steps.
pub fn aggregate_axis_masked(screws: &[ScrewDisplacement], active: &[bool]) -> Result<AxisAggregate> {
    if screws.is_empty() {
        return Err(Error::invalid("cannot aggregate an empty sequence"));
    }
    if active.len() != screws.len() {
        return Err(Error::LengthMismatch {
            expected: screws.len(),
            actual: active.len(),
        });
    }
    let active: Vec<(usize, f64)> = screws
        .iter()
        .enumerate()
        .filter(|(i, _)| active[*i])
        .map(|(i, s)| (i, motion_weight(s)))
        .collect();

    if active.iter().all(|&(_, w)| w <= 0.0) {
        return Ok(AxisAggregate {
            axis: screws[0].axis,
            signs: vec![1.0; screws.len()],
            max_angle_deg: 0.0,
            max_distance: 0.0,
            contributing: 0,
        });
    }

    // Principal direction of the weighted scatter is independent of input order
    // and of each axis' sign.
    let mut scatter = Matrix3::zeros();
    for &(i, w) in &active {
        let l = screws[i].axis.direction();
        scatter += w * l * l.transpose();
    }
    let eig = SymmetricEigen::new(scatter);
    let k = eig.eigenvalues.imax();
    let reference: Vector3<f64> = eig.eigenvectors.column(k).into_owned();

    let sign_of = |l: &Vector3<f64>| if l.dot(&reference) < 0.0 { -1.0 } else { 1.0 };
    let mut dir = Vector3::zeros();
    let mut moment = Vector3::zeros();
    let mut total = 0.0;
    for &(i, w) in &active {
        let s = sign_of(screws[i].axis.direction());
        dir += w * s * screws[i].axis.direction();
        moment += w * s * screws[i].axis.moment();
        total += w;
    }
    dir /= total;
    moment /= total;
    // Keep the orientation carried by the (weighted) majority of raw axes.
    let raw: f64 = active
        .iter()
        .map(|&(i, w)| w * screws[i].axis.direction().dot(&dir))
        .sum();
    if raw < 0.0 {
        dir = -dir;
        moment = -moment;
    }
    let axis = PluckerLine::projected(dir, moment)?;

    let signs: Vec<f64> = screws
        .iter()
        .map(|s| {
            if s.axis.direction().dot(axis.direction()) < 0.0 {
                -1.0
            } else {
                1.0
            }
        })
        .collect();
    let mut max_angle = 0.0_f64;
    let mut max_dist = 0.0_f64;
    for &(i, _) in &active {
        let l = screws[i].axis.direction() * signs[i];
        max_angle = max_angle.max(axis_angle_between(&l, axis.direction()).to_degrees());
        max_dist = max_dist.max(line_distance(&screws[i].axis, &axis));
    }
    Ok(AxisAggregate {
        axis,
        signs,
        max_angle_deg: max_angle,
        max_distance: max_dist,
        contributing: active.len(),
    })
}

/// Fuses a screw sequence into one model. Errors if the axes disagree.
pub fn model_from_screws(screws: &[ScrewDisplacement], th: &CategoryThresholds) -> Result<ArticulationModel> {
    let agg = aggregate_axis(screws, th)?;
    if !agg.is_consistent(th) {
        return Err(Error::ModelViolation(format!(
            "per-step axes disagree: spread {:.3} deg, {:.3e} m",
            agg.max_angle_deg, agg.max_distance
        )));
    }
    model_with_axis(screws, &agg, th)
}

pub(crate) fn model_with_axis(
    screws: &[ScrewDisplacement],
    agg: &AxisAggregate,
    th: &CategoryThresholds,
) -> Result<ArticulationModel> {
    let configs: Vec<Configuration> = screws
        .iter()
        .zip(&agg.signs)
        .map(|(s, &sg)| Configuration::new(sg * s.theta, sg * s.d))
        .collect();
    let category = classify_configs(&configs, th)?;
    Ok(ArticulationModel::new(category, agg.axis, configs))
}
