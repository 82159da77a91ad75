//! Numerical foundations shared by the solvers and online learners.
//!
//! Points are plain `Vec<f64>` / `&[f64]`; the helpers in [`linalg`] cover the
//! handful of dense operations the algorithms need. Feasible sets live in
//! [`domain`], Bregman geometry in [`mirror`], and the prox step used by every
//! mirror-prox learner in [`prox`].

pub mod clip;
pub mod domain;
pub mod error;
pub mod linalg;
pub mod mirror;
pub mod oracle;
pub mod prox;
pub mod rng;
pub mod schedule;
pub mod trace;

pub use clip::clip_component;
pub use domain::Domain;
pub use error::{Error, Result};
pub use mirror::{bregman, MirrorMap};
pub use oracle::{Objective, Oracle, StochasticObjective};
pub use prox::{prox_mahalanobis_ball, prox_step};
pub use rng::SeededRng;
pub use schedule::StepSchedule;
pub use trace::{Trace, TraceRecord};

/// Dense iterate / decision variable.
pub type Point = Vec<f64>;
