use smoothconvex_core::domain::project_ball;
use smoothconvex_core::linalg::{axpy, step};
use smoothconvex_core::{Error, Result, SeededRng};

use crate::learner::Learner;
use crate::loss::{Constraint, RoundLoss};

/// Random feasible points used to estimate `D` and `F`.
pub const CONSTANT_SAMPLES: usize = 1000;

/// `[λ + η(g − ηδλ)]₊`, ascent on `λg − (ηδ/2)λ²`.
pub fn dual_update(lambda: f64, eta: f64, delta: f64, g: f64) -> f64 {
    (lambda + eta * (g - eta * delta * lambda)).max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Mode {
    /// One multiplier per constraint.
    PerConstraint,
    /// One multiplier on `max_i gᵢ + γ`.
    Tightened { gamma: f64 },
}

/// Online gradient descent on the regularized Lagrangian
/// `f_t(x) + Σ λᵢgᵢ(x) − (ηδ/2)‖λ‖²`. The primal iterate is projected onto
/// the ball `‖x‖ ≤ R` only; constraints hold in the long run.
#[derive(Debug, Clone)]
pub struct SoftOgd {
    constraints: Vec<Constraint>,
    mode: Mode,
    radius: f64,
    eta: f64,
    delta: f64,
    x: Vec<f64>,
    lambda: Vec<f64>,
    violation: Vec<f64>,
}

impl SoftOgd {
    pub fn new(constraints: Vec<Constraint>, d: usize, radius: f64, eta: f64, delta: f64) -> Result<Self> {
        Self::build(constraints, d, radius, eta, delta, Mode::PerConstraint)
    }

    /// Single multiplier on the tightened constraint `max_i gᵢ(x) + γ ≤ 0`.
    pub fn no_violation(constraints: Vec<Constraint>, d: usize, radius: f64, eta: f64, delta: f64, gamma: f64) -> Result<Self> {
        if !(gamma >= 0.0) {
            return Err(Error::Config(format!("gamma must be non-negative, got {gamma}")));
        }
        Self::build(constraints, d, radius, eta, delta, Mode::Tightened { gamma })
    }

    fn build(constraints: Vec<Constraint>, d: usize, radius: f64, eta: f64, delta: f64, mode: Mode) -> Result<Self> {
        if !(radius > 0.0 && eta > 0.0 && delta > 0.0) {
            return Err(Error::Config(format!("R, eta and delta must be positive, got {radius}, {eta}, {delta}")));
        }
        let m = constraints.len();
        let k = match mode {
            Mode::PerConstraint => m,
            Mode::Tightened { .. } => m.min(1),
        };
        Ok(SoftOgd { constraints, mode, radius, eta, delta, x: vec![0.0; d], lambda: vec![0.0; k], violation: vec![0.0; m] })
    }

    pub fn multipliers(&self) -> &[f64] {
        &self.lambda
    }

    /// `Σ_t gᵢ(x_t)` per constraint over the rounds observed so far.
    pub fn violation(&self) -> &[f64] {
        &self.violation
    }
}

impl Learner for SoftOgd {
    fn predict(&mut self) -> Vec<f64> {
        self.x.clone()
    }

    fn observe(&mut self, loss: &RoundLoss) -> Result<()> {
        let mut grad = loss.gradient(&self.x);
        let g: Vec<f64> = self.constraints.iter().map(|c| c.g(&self.x)).collect();
        for (v, gi) in self.violation.iter_mut().zip(&g) {
            *v += gi;
        }
        match self.mode {
            Mode::PerConstraint => {
                for ((c, gi), lam) in self.constraints.iter().zip(&g).zip(self.lambda.iter_mut()) {
                    axpy(*lam, &c.grad(&self.x), &mut grad);
                    *lam = dual_update(*lam, self.eta, self.delta, *gi);
                }
            }
            Mode::Tightened { gamma } => {
                if let Some((i, gmax)) = g.iter().cloned().enumerate().fold(None, |best: Option<(usize, f64)>, (i, v)| {
                    match best {
                        Some((_, b)) if b >= v => best,
                        _ => Some((i, v)),
                    }
                }) {
                    axpy(self.lambda[0], &self.constraints[i].grad(&self.x), &mut grad);
                    self.lambda[0] = dual_update(self.lambda[0], self.eta, self.delta, gmax + gamma);
                }
            }
        }
        self.x = project_ball(&step(&self.x, self.eta, &grad), &vec![0.0; self.x.len()], self.radius);
        Ok(())
    }

    fn search_point(&self) -> Vec<f64> {
        self.x.clone()
    }
}

/// OGD on the penalized loss `f_t(x) + δ Σ [gᵢ(x)]₊` over `‖x‖ ≤ R`.
#[derive(Debug, Clone)]
pub struct PenaltyOgd {
    constraints: Vec<Constraint>,
    radius: f64,
    eta: f64,
    delta: f64,
    x: Vec<f64>,
    violation: Vec<f64>,
    positive_violation: Vec<f64>,
}

impl PenaltyOgd {
    pub fn new(constraints: Vec<Constraint>, start: &[f64], radius: f64, eta: f64, delta: f64) -> Result<Self> {
        if !(radius > 0.0 && eta > 0.0 && delta > 0.0) {
            return Err(Error::Config(format!("R, eta and delta must be positive, got {radius}, {eta}, {delta}")));
        }
        let m = constraints.len();
        let x = project_ball(start, &vec![0.0; start.len()], radius);
        Ok(PenaltyOgd { constraints, radius, eta, delta, x, violation: vec![0.0; m], positive_violation: vec![0.0; m] })
    }

    /// `Σ_t gᵢ(x_t)`
    pub fn violation(&self) -> &[f64] {
        &self.violation
    }

    /// `Σ_t [gᵢ(x_t)]₊`
    pub fn positive_violation(&self) -> &[f64] {
        &self.positive_violation
    }
}

impl Learner for PenaltyOgd {
    fn predict(&mut self) -> Vec<f64> {
        self.x.clone()
    }

    fn observe(&mut self, loss: &RoundLoss) -> Result<()> {
        let mut grad = loss.gradient(&self.x);
        for (i, c) in self.constraints.iter().enumerate() {
            let gi = c.g(&self.x);
            self.violation[i] += gi;
            self.positive_violation[i] += gi.max(0.0);
            if gi > 0.0 {
                axpy(self.delta, &c.grad(&self.x), &mut grad);
            }
        }
        self.x = project_ball(&step(&self.x, self.eta, &grad), &vec![0.0; self.x.len()], self.radius);
        Ok(())
    }

    fn search_point(&self) -> Vec<f64> {
        self.x.clone()
    }
}

/// Finite-horizon parameters for [`SoftOgd::new`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SoftTuning {
    pub a: f64,
    pub eta: f64,
    pub delta: f64,
    pub regret_bound: f64,
    pub violation_bound: f64,
    /// `2√2 η (m + 1) ≤ 1`
    pub horizon_ok: bool,
    /// `δ ≥ (m + 1)G² + 2mδ²η²`
    pub delta_ok: bool,
}

impl SoftTuning {
    /// `r` is the radius of the primal ball, `g` bounds all gradients,
    /// `d_bound` bounds `|gᵢ|` and `f_range` the spread of each loss.
    pub fn theorem(r: f64, g: f64, d_bound: f64, f_range: f64, m: usize, horizon: usize) -> Self {
        let mf = m as f64;
        let t = horizon as f64;
        let a = r * ((mf + 1.0) * g * g + 2.0 * mf * d_bound * d_bound).sqrt();
        let eta = r * r / (a * t.sqrt());
        let delta = 2.0 * (mf + 1.0) * g * g;
        let violation_bound = (2.0 * (f_range * t + a * t.sqrt()) * t.sqrt() * (delta * r * r / a + mf * a / (r * r))).sqrt();
        SoftTuning {
            a,
            eta,
            delta,
            regret_bound: a * t.sqrt(),
            violation_bound,
            horizon_ok: 2.0 * 2f64.sqrt() * eta * (mf + 1.0) <= 1.0,
            delta_ok: delta >= (mf + 1.0) * g * g + 2.0 * mf * delta * delta * eta * eta,
        }
    }
}

/// Finite-horizon parameters for [`SoftOgd::no_violation`].
///
/// `a = R√(2G² + 3(D² + b²))` and `b = 2√(F(δR²/a + a/R²))` depend on each
/// other; they are solved by fixed-point iteration from `b = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoViolationTuning {
    pub a: f64,
    pub b: f64,
    pub gamma: f64,
    pub eta: f64,
    pub delta: f64,
    pub iterations: usize,
    horizon: usize,
    g: f64,
}

impl NoViolationTuning {
    pub const MAX_ITERATIONS: usize = 10_000;

    pub fn theorem(r: f64, g: f64, d_bound: f64, f_range: f64, horizon: usize) -> Result<Self> {
        if !(r > 0.0 && g > 0.0 && d_bound >= 0.0 && f_range >= 0.0) || horizon == 0 {
            return Err(Error::Config("need R, G > 0, D, F >= 0 and T >= 1".into()));
        }
        let delta = 4.0 * g * g;
        let a_of = |b: f64| r * (2.0 * g * g + 3.0 * (d_bound * d_bound + b * b)).sqrt();
        let b_of = |a: f64| 2.0 * (f_range * (delta * r * r / a + a / (r * r))).sqrt();
        let mut b = 0.0;
        for k in 1..=Self::MAX_ITERATIONS {
            let next = b_of(a_of(b));
            if (next - b).abs() <= 1e-13 * next.max(1.0) {
                let a = a_of(next);
                let t = horizon as f64;
                return Ok(NoViolationTuning {
                    a,
                    b: next,
                    gamma: next * t.powf(-0.25),
                    eta: r * r / (a * t.sqrt()),
                    delta,
                    iterations: k,
                    horizon,
                    g,
                });
            }
            b = next;
        }
        Err(Error::Numeric(format!("no-violation constants did not settle in {} iterations", Self::MAX_ITERATIONS)))
    }

    /// `a√T + (bG/σ) T^{3/4}`, where `σ` lower-bounds `‖∇g‖` on the
    /// tightened boundary.
    pub fn regret_bound(&self, sigma: f64) -> f64 {
        let t = self.horizon as f64;
        self.a * t.sqrt() + self.b * self.g / sigma * t.powf(0.75)
    }
}

/// `(D, F)` from [`CONSTANT_SAMPLES`] uniform points of the ball `‖x‖ ≤ radius`:
/// `D = max |gᵢ(x)|` and `F = max_t (max f_t − min f_t)` over the samples.
pub fn estimate_soft_constants(
    constraints: &[Constraint],
    losses: &[RoundLoss],
    d: usize,
    radius: f64,
    rng: &mut SeededRng,
) -> (f64, f64) {
    let points: Vec<Vec<f64>> = (0..CONSTANT_SAMPLES).map(|_| rng.in_ball(d, radius)).collect();
    let d_bound = points
        .iter()
        .flat_map(|x| constraints.iter().map(move |c| c.g(x).abs()))
        .fold(0.0, f64::max);
    let f_range = losses
        .iter()
        .map(|f| {
            let (lo, hi) = points
                .iter()
                .map(|x| f.value(x))
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
            hi - lo
        })
        .fold(0.0, f64::max);
    (d_bound, f_range)
}
