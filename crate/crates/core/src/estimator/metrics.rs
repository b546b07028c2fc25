//! Error metrics between predicted and ground-truth models, in reporting units.

use serde::{Deserialize, Serialize};

use crate::artmodel::{ArticulationModel, ModelCategory};
use crate::error::{Error, Result};
use crate::geom3d::{axis_angle_between, line_distance};

/// How anti-parallel axes are scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrientationMode {
    /// `[0°, 180°]`
    #[default]
    Raw,
    /// `[0°, 90°]`: a flipped axis counts as correct.
    Folded,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ConfigError {
    pub theta_deg: f64,
    pub d_cm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub axis_orientation_error: f64,
    pub axis_orientation_error_folded: f64,
    /// Line distance between the axes, cm. For prismatic joints this depends on
    /// which parallel representative each side carries.
    pub axis_position_error: f64,
    pub config_errors: Vec<ConfigError>,
    pub category_match: bool,
}

impl ErrorReport {
    pub fn orientation(&self, mode: OrientationMode) -> f64 {
        match mode {
            OrientationMode::Raw => self.axis_orientation_error,
            OrientationMode::Folded => self.axis_orientation_error_folded,
        }
    }

    /// Mean configuration error in the unit used for `category`.
    pub fn mean_config_error(&self, category: ModelCategory) -> f64 {
        if self.config_errors.is_empty() {
            return 0.0;
        }
        let unit = ConfigUnit::for_category(category);
        let sum: f64 = self
            .config_errors
            .iter()
            .map(|e| match unit {
                ConfigUnit::Cm => e.d_cm,
                ConfigUnit::Deg => e.theta_deg,
            })
            .sum();
        sum / self.config_errors.len() as f64
    }
}

/// Configuration errors are reported in cm for prismatic joints, degrees otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConfigUnit {
    Deg,
    Cm,
}

impl ConfigUnit {
    pub fn for_category(c: ModelCategory) -> Self {
        if c == ModelCategory::Prismatic {
            ConfigUnit::Cm
        } else {
            ConfigUnit::Deg
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ConfigUnit::Deg => "deg",
            ConfigUnit::Cm => "cm",
        }
    }
}

pub fn evaluate(pred: &ArticulationModel, gt: &ArticulationModel) -> Result<ErrorReport> {
    if pred.configs.len() != gt.configs.len() {
        return Err(Error::LengthMismatch {
            expected: gt.configs.len(),
            actual: pred.configs.len(),
        });
    }
    let raw = axis_angle_between(pred.axis.direction(), gt.axis.direction()).to_degrees();
    let config_errors = pred
        .configs
        .iter()
        .zip(&gt.configs)
        .map(|(p, g)| ConfigError {
            theta_deg: (p.theta - g.theta).abs().to_degrees(),
            d_cm: (p.d - g.d).abs() * 100.0,
        })
        .collect();
    Ok(ErrorReport {
        axis_orientation_error: raw,
        axis_orientation_error_folded: raw.min(180.0 - raw),
        axis_position_error: line_distance(&pred.axis, &gt.axis) * 100.0,
        config_errors,
        category_match: pred.category == gt.category,
    })
}
