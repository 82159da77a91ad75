use smoothconvex_core::domain::project_ball;
use smoothconvex_core::linalg::step;
use smoothconvex_core::{Domain, Error, Result};

use crate::learner::Learner;
use crate::loss::RoundLoss;

/// One-sided finite-difference gradient estimate,
/// `g = (1/δ) Σᵢ (f(x + δeᵢ) − f(x)) eᵢ`, using `d + 1` evaluations.
pub fn gradient_estimate(mut f: impl FnMut(&[f64]) -> f64, x: &[f64], delta: f64) -> Vec<f64> {
    let f0 = f(x);
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            probe[i] = x[i] + delta;
            let v = (f(&probe) - f0) / delta;
            probe[i] = x[i];
            v
        })
        .collect()
}

/// Mirror prox with bandit feedback on a centred ball of radius `r`.
///
/// Decisions live in the shrunk ball of radius `(1 − δ/r) r = r − δ`, so
/// every query `x + δeᵢ` stays in the ball.
#[derive(Debug, Clone)]
pub struct BanditOmp {
    inner_radius: f64,
    delta: f64,
    ratio: f64,
    z: Vec<f64>,
    x: Vec<f64>,
    g_prev: Vec<f64>,
    queries: u64,
    query_points_feasible: bool,
    outer_radius: f64,
}

/// Parameters chosen from the horizon and problem constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BanditTuning {
    pub delta: f64,
    pub eta: f64,
    pub regret_bound: f64,
}

impl BanditTuning {
    /// `g_bound` is the Lipschitz constant `G`, `l` the smoothness and
    /// `egv_c` the value-based gradual variation.
    pub fn theorem(d: usize, r: f64, l: f64, g_bound: f64, egv_c: f64, horizon: usize) -> Self {
        let df = d as f64;
        let t = horizon as f64;
        let m = (2f64.sqrt() * g_bound).max(egv_c.sqrt());
        let delta = (4.0 * df * m / ((df.sqrt() * l + g_bound * (1.0 + 1.0 / r)) * t)).sqrt();
        let cap = if egv_c > 0.0 { std::f64::consts::FRAC_1_SQRT_2.min(g_bound / egv_c.sqrt()) } else { std::f64::consts::FRAC_1_SQRT_2 };
        let eta = delta / (4.0 * df) * cap;
        let regret_bound = 4.0 * (m * df * (df * l + g_bound / r) * t).sqrt();
        BanditTuning { delta, eta, regret_bound }
    }
}

impl BanditOmp {
    pub fn new(domain: &Domain, d: usize, delta: f64, eta: f64, g_bound: f64) -> Result<Self> {
        let r = match domain {
            Domain::Ball { r } => *r,
            other => return Err(Error::Unsupported(format!("bandit learner needs a ball, got {}", other.kind_name()))),
        };
        if !(delta > 0.0) || delta >= r {
            return Err(Error::Config(format!("need 0 < delta < r, got delta = {delta}, r = {r}")));
        }
        if !(eta > 0.0) || !(g_bound > 0.0) {
            return Err(Error::Config(format!("eta and G must be positive, got {eta}, {g_bound}")));
        }
        Ok(BanditOmp {
            inner_radius: r - delta,
            outer_radius: r,
            delta,
            ratio: eta / g_bound,
            z: vec![0.0; d],
            x: vec![0.0; d],
            g_prev: vec![0.0; d],
            queries: 0,
            query_points_feasible: true,
        })
    }

    /// Value-oracle calls so far.
    pub fn queries(&self) -> u64 {
        self.queries
    }

    /// Whether every query point so far was inside the original ball.
    pub fn query_points_feasible(&self) -> bool {
        self.query_points_feasible
    }

    fn project(&self, y: &[f64]) -> Vec<f64> {
        project_ball(y, &vec![0.0; y.len()], self.inner_radius)
    }
}

impl Learner for BanditOmp {
    fn predict(&mut self) -> Vec<f64> {
        self.x = self.project(&step(&self.z, self.ratio, &self.g_prev));
        self.x.clone()
    }

    fn observe(&mut self, loss: &RoundLoss) -> Result<()> {
        let r2 = self.outer_radius * self.outer_radius;
        let mut feasible = true;
        let mut calls = 0u64;
        let g = gradient_estimate(
            |p| {
                calls += 1;
                feasible &= p.iter().map(|v| v * v).sum::<f64>() <= r2 * (1.0 + 1e-12);
                loss.value(p)
            },
            &self.x,
            self.delta,
        );
        self.queries += calls;
        self.query_points_feasible &= feasible;
        self.z = self.project(&step(&self.z, self.ratio, &g));
        self.g_prev = g;
        Ok(())
    }

    fn search_point(&self) -> Vec<f64> {
        self.z.clone()
    }
}
