//! Solvers over [`smoothconvex_core::Oracle`] access. Every solver returns a
//! [`Trace`](smoothconvex_core::Trace) whose call counters equal the oracle
//! budget it actually spent.

pub mod baseline;
pub mod clipped;
pub mod config;
pub mod emgd;
pub mod mixed;
pub mod one_projection;
mod record;
pub mod variance;

pub use baseline::{agd, cgd, gd, mirror_descent, sgd, MdParams};
pub use clipped::{clip_level, clipped_sgd, next_radius, ClippedParams};
pub use config::{Budget, SolverConfig};
pub use emgd::{emgd, mixed_gradient, EmgdParams};
pub use mixed::{mixed_grad, MixedParams};
pub use one_projection::{sgd_pd, sgd_st, smoothing_weight, PdParams, StParams};
pub use variance::{gradient_variance_probe, VarianceProbe};
