//! Loss sequences for online experiments and their variation measures.

pub mod generators;
pub mod sequence;
pub mod variation;

pub use generators::{classification_stream, drifting_quadratics, ftrl_adversary, switching_linear, FtrlCase, DRIFT_RADIUS};
pub use sequence::LossSequence;
pub use variation::{egv_inf, extended_egv, gradual_variation, measure_egv, measure_total_variation, Probe};
