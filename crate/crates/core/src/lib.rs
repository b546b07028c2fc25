//! Screw-theory toolkit for 1-DoF articulation models.
//!
//! The relative motion between two rigid parts is represented as a sequence of
//! screw displacements about one shared axis. Rigid, revolute, prismatic and
//! helical joints then differ only in which configuration channels move:
//!
//! | category  | θ      | d      |
//! |-----------|--------|--------|
//! | rigid     | 0      | 0      |
//! | revolute  | ≠ 0    | 0      |
//! | prismatic | 0      | ≠ 0    |
//! | helical   | ≠ 0    | ≠ 0    |
//!
//! Modules, bottom-up:
//!
//! - [`geom3d`]: rotations, poses, Plücker lines, line distance, line motion matrix
//! - [`screwkin`]: screw extraction from relative poses and back
//! - [`artmodel`]: articulation models and the category decision tree
//! - [`datagen`]: seeded synthetic trajectories with screw labels and noise
//! - [`estimator`]: closed-form estimation, loss, refinement and error metrics
//! - [`io`] and [`cli`]: on-disk formats and the command-line front end

pub mod artmodel;
pub mod cli;
pub mod datagen;
pub mod error;
pub mod estimator;
pub mod geom3d;
pub mod io;
pub mod screwkin;

pub use artmodel::{classify, model_from_screws, ArticulationModel, CategoryThresholds, ModelCategory};
pub use error::{Error, Result};
pub use geom3d::{line_distance, LineMotionMatrix, PluckerLine, Pose, Rotation};
pub use screwkin::{apply_screw, screw_from_relative_pose, Configuration, ScrewDisplacement};
