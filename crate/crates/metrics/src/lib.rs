//! Performance measures over learner outputs and optimizer traces.

pub mod comparator;
pub mod optimum;
pub mod rates;
pub mod regret;

pub use comparator::{best_fixed_point, Comparator, GRID_BUDGET, GRID_FINE, GRID_RESOLUTION};
pub use optimum::{reference_optimum, ReferenceOptimum, CERTIFICATE_TOL, REFERENCE_STEPS};
pub use rates::{empirical_variance, loglog_slope, suboptimality};
pub use regret::{mistakes, regret, violation, RegretTrace};
