use smoothconvex_core::{Error, Result, StepSchedule};

/// Oracle budget: `t` stochastic calls and `full_calls` full-gradient calls.
///
/// Single-loop solvers spend it exactly. Epoch solvers follow their own
/// schedule and treat `t` as a cap, shrinking the epoch length when the
/// prescribed schedule does not fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Budget {
    pub t: usize,
    pub full_calls: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub seed: u64,
    pub budget: Budget,
    pub schedule: StepSchedule,
    /// Starting point; the projection of the origin when `None`.
    pub start: Option<Vec<f64>>,
    /// Record the objective every this many iterations (0: final record only).
    pub record_every: usize,
    /// Store an iterate snapshot every this many iterations (0: never).
    pub snapshot_every: usize,
    /// Known optimal value, used to fill in suboptimality.
    pub f_star: Option<f64>,
    /// Record gradient-variance probes at epoch boundaries.
    pub probe_variance: bool,
}

impl SolverConfig {
    pub fn new(seed: u64, t: usize, schedule: StepSchedule) -> Self {
        SolverConfig {
            seed,
            budget: Budget { t, full_calls: 0 },
            schedule,
            start: None,
            record_every: 0,
            snapshot_every: 0,
            f_star: None,
            probe_variance: false,
        }
    }

    /// Configuration for a full-gradient method running `iterations` steps.
    pub fn deterministic(iterations: usize, schedule: StepSchedule) -> Self {
        let mut c = Self::new(0, 0, schedule);
        c.budget.full_calls = iterations;
        c
    }

    pub fn with_start(mut self, w: Vec<f64>) -> Self {
        self.start = Some(w);
        self
    }

    pub fn with_f_star(mut self, f: f64) -> Self {
        self.f_star = Some(f);
        self
    }

    pub fn recording(mut self, every: usize) -> Self {
        self.record_every = every;
        self
    }

    pub fn snapshots(mut self, every: usize) -> Self {
        self.snapshot_every = every;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.schedule.validate()?;
        if let Some(w) = &self.start {
            if !smoothconvex_core::linalg::is_finite(w) {
                return Err(Error::Config("start point is not finite".into()));
            }
        }
        Ok(())
    }
}

pub(crate) fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be positive and finite, got {v}")))
    }
}

pub(crate) fn in_unit_interval(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must lie in (0, 1), got {v}")))
    }
}
