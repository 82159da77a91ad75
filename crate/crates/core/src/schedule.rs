use crate::error::{Error, Result};

/// Step-size rule `η_t`, `t ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSchedule {
    Constant(f64),
    /// `c/√t`
    InverseSqrt(f64),
    /// `c/t`
    InverseT(f64),
}

impl StepSchedule {
    pub fn validate(&self) -> Result<()> {
        let c = match self {
            StepSchedule::Constant(c) | StepSchedule::InverseSqrt(c) | StepSchedule::InverseT(c) => *c,
        };
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::Config(format!("step schedule constant must be positive, got {c}")));
        }
        Ok(())
    }

    pub fn eta(&self, t: usize) -> f64 {
        let t = t.max(1) as f64;
        match self {
            StepSchedule::Constant(c) => *c,
            StepSchedule::InverseSqrt(c) => c / t.sqrt(),
            StepSchedule::InverseT(c) => c / t,
        }
    }
}
