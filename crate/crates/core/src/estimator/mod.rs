//! Recovering articulation models from pose sequences and scoring them.

mod closed_form;
mod loss;
mod metrics;
mod pipeline;
mod refine;

pub use closed_form::{
    estimate_closed_form, estimate_closed_form_detailed, ClosedFormEstimate, MotionEvidence, AMPLITUDE_SIGMAS,
    PITCH_T_STAT,
};
pub use loss::{
    constraint_gradient, gradient_of_loss, loss, loss_params, LossBreakdown, LossTargets, LossWeights, ScrewParams,
};
pub use metrics::{evaluate, ConfigError, ConfigUnit, ErrorReport, OrientationMode};
pub use pipeline::{estimate, Estimate, Method};
pub use refine::{refine, refine_against, refine_detailed, RefineOptions, RefineReport};
