//! Concrete objectives for the solvers.

pub mod constants;
pub mod dataset;
pub mod finite_sum;
pub mod hinge;
pub mod onedim;
pub mod quadratic;

pub use constants::{estimate_constants, Constants};
pub use dataset::{load_libsvm, parse_libsvm, LabeledDataset, ParseError, SparseRow};
pub use finite_sum::{least_squares_problem, logistic_problem, FiniteSumProblem, Loss};
pub use hinge::{psi_transform, smoothed_hinge_grad, smoothed_hinge_second, smoothed_hinge_value};
pub use onedim::{onedim_target_risk_problem, OneDimTargetRisk};
pub use quadratic::NoisyQuadratic;
