//! Closed-form estimation optionally followed by refinement, with the losses
//! of both stages against the same per-step pseudo-targets.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::closed_form::estimate_closed_form_detailed;
use super::loss::{loss_params, LossTargets, LossWeights, ScrewParams};
use super::refine::{refine_against, RefineOptions};
use crate::artmodel::{ArticulationModel, CategoryThresholds};
use crate::error::{Error, Result};
use crate::geom3d::Pose;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Method {
    #[default]
    #[serde(rename = "closed-form")]
    ClosedForm,
    #[serde(rename = "refine")]
    Refine,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed-form",
            Method::Refine => "refine",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed-form" | "closed_form" => Ok(Method::ClosedForm),
            "refine" | "refined" => Ok(Method::Refine),
            _ => Err(Error::invalid(format!(
                "unknown method '{s}' (expected closed-form or refine)"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Estimate {
    pub model: ArticulationModel,
    pub method: Method,
    /// False when the per-step axes disagree beyond the thresholds.
    pub axis_consistent: bool,
    pub loss_closed_form: f64,
    pub loss_refined: Option<f64>,
}

pub fn estimate(
    poses: &[Pose],
    base: &Pose,
    method: Method,
    th: &CategoryThresholds,
    w: &LossWeights,
) -> Result<Estimate> {
    let cf = estimate_closed_form_detailed(poses, base, th)?;
    let targets = LossTargets::from_screws(cf.step_screws.clone(), &cf.axis_active);
    match method {
        Method::ClosedForm => {
            let l = loss_params(&ScrewParams::from_model(&cf.model), &targets, w)?;
            Ok(Estimate {
                model: cf.model,
                method,
                axis_consistent: cf.axis_consistent,
                loss_closed_form: l.total,
                loss_refined: None,
            })
        }
        Method::Refine => {
            let opts = RefineOptions {
                thresholds: *th,
                ..Default::default()
            };
            let r = refine_against(&cf.model, &targets, w, &opts)?;
            Ok(Estimate {
                model: r.model,
                method,
                axis_consistent: cf.axis_consistent,
                loss_closed_form: r.initial.total,
                loss_refined: Some(r.refined.total),
            })
        }
    }
}
