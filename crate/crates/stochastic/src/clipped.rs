//! Stage-wise SGD with clipped gradients and a target-risk-driven domain.

use smoothconvex_core::domain::{dykstra, project_ball};
use smoothconvex_core::linalg::{step, Averager};
use smoothconvex_core::{clip_component, Domain, Error, Oracle, Result, SeededRng, StochasticObjective, Trace};

use crate::config::{in_unit_interval, positive, SolverConfig};
use crate::record::Recorder;

const DYKSTRA_ROUNDS: usize = 100;
const DYKSTRA_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClippedParams {
    /// Smoothness of the per-example loss.
    pub beta: f64,
    pub epsilon: f64,
    pub tau: f64,
    pub xi: f64,
    /// Target expected risk `ℓ_φ`.
    pub target_risk: f64,
    pub stage_len: usize,
    pub stages: usize,
    pub eta: f64,
}

impl ClippedParams {
    /// Prescribed `ξ = 4β/(ατ)`, stage length and `η = 1/(2ξβ√T₁)` for
    /// strong convexity `alpha`, dimension `d`, domain radius `radius`,
    /// prior risk `ℓ_φ` and failure probability `delta`.
    #[allow(clippy::too_many_arguments)]
    pub fn theorem(
        alpha: f64,
        beta: f64,
        d: usize,
        radius: f64,
        target_risk: f64,
        epsilon: f64,
        tau: f64,
        stages: usize,
        delta: f64,
    ) -> Result<Self> {
        positive("alpha", alpha)?;
        positive("beta", beta)?;
        positive("target risk", target_risk)?;
        in_unit_interval("epsilon", epsilon)?;
        in_unit_interval("tau", tau)?;
        in_unit_interval("delta", delta)?;
        let xi = 4.0 * beta / (alpha * tau);
        let s = Self::peeling_levels(xi, beta, radius, target_risk);
        let df = d as f64;
        let log_term = ((stages as f64 * s as f64).max(1.0) / delta).ln();
        let first = (xi.powi(3) * beta * df + 2.0 * xi * beta * df.sqrt()) / (epsilon * alpha) * log_term;
        let second = 16.0 * xi * xi * beta * beta / (alpha * alpha * epsilon * epsilon);
        let stage_len = (4.0 * first.max(second)).ceil() as usize;
        let eta = 1.0 / (2.0 * xi * beta * (stage_len as f64).sqrt());
        Ok(ClippedParams { beta, epsilon, tau, xi, target_risk, stage_len, stages, eta })
    }

    /// `s = ⌈log₂(ξβR²/ℓ_φ)⌉`.
    pub fn peeling_levels(xi: f64, beta: f64, radius: f64, target_risk: f64) -> usize {
        (xi * beta * radius * radius / target_risk).log2().ceil().max(1.0) as usize
    }

    /// Fixed point of the radius recursion, `√(τℓ_φ/(1 − ε))`.
    pub fn radius_fixed_point(&self) -> f64 {
        (self.tau * self.target_risk / (1.0 - self.epsilon)).sqrt()
    }

    fn validate(&self) -> Result<()> {
        if !(self.target_risk > 0.0) {
            return Err(Error::Config(format!("target risk must be positive, got {}", self.target_risk)));
        }
        positive("beta", self.beta)?;
        positive("eta", self.eta)?;
        in_unit_interval("epsilon", self.epsilon)?;
        in_unit_interval("tau", self.tau)?;
        if !(self.xi >= 1.0) {
            return Err(Error::Config(format!("xi must be at least 1, got {}", self.xi)));
        }
        if self.stage_len == 0 || self.stages == 0 {
            return Err(Error::Config("stage length and stage count must be positive".into()));
        }
        Ok(())
    }
}

/// `Δ_{k+1} = √(εΔ_k² + τℓ_φ)`.
pub fn next_radius(epsilon: f64, tau: f64, target_risk: f64, delta: f64) -> f64 {
    (epsilon * delta * delta + tau * target_risk).sqrt()
}

/// `γ_k = 2ξβΔ_k`.
pub fn clip_level(xi: f64, beta: f64, delta: f64) -> f64 {
    2.0 * xi * beta * delta
}

/// Runs `stages` stages of `stage_len` clipped SGD steps each, projecting
/// onto `W ∩ {‖w − ŵ_k‖ ≤ Δ_k}` by Dykstra's method. The budget's `t` caps
/// the total sample count; a prescribed schedule that does not fit is
/// shortened per stage and noted in the trace.
pub fn clipped_sgd(obj: &dyn StochasticObjective, domain: &Domain, params: &ClippedParams, cfg: &SolverConfig) -> Result<Trace> {
    params.validate()?;
    let radius = domain.radius();
    if !radius.is_finite() {
        return Err(Error::Unsupported("clipped SGD needs a bounded domain".into()));
    }
    let mut p = *params;
    let mut notes = Vec::new();
    if cfg.budget.t > 0 && p.stage_len * p.stages > cfg.budget.t {
        let scaled = (cfg.budget.t / p.stages).max(1);
        notes.push(format!("stage length {} exceeds budget; scaled to {scaled}", p.stage_len));
        p.stage_len = scaled;
    }
    let oracle = Oracle::new(obj);
    let mut rng = SeededRng::new(cfg.seed);
    let mut rec = Recorder::new(obj, domain, cfg);
    let d = obj.dim();
    let mut center = domain.project(&vec![0.0; d])?;
    let mut delta = radius;
    let fixed = p.radius_fixed_point();
    let mut projections = 0u64;
    for k in 1..=p.stages {
        let gamma = clip_level(p.xi, p.beta, delta);
        let mut w = center.clone();
        let mut avg = Averager::new(d);
        for _ in 0..p.stage_len {
            avg.push(&w);
            let g = clip_component(gamma, &oracle.stochastic_gradient(&w, &mut rng))?;
            let c = center.clone();
            w = dykstra(
                &step(&w, p.eta, &g),
                |y| domain.project(y).expect("dimension checked"),
                |y| project_ball(y, &c, delta),
                DYKSTRA_ROUNDS,
                DYKSTRA_TOL,
            );
            projections += 1;
        }
        let next = next_radius(p.epsilon, p.tau, p.target_risk, delta);
        let before = delta - fixed;
        let after = next - fixed;
        if before * after < 0.0 || after.abs() > before.abs() * (1.0 + 1e-12) + 1e-15 {
            return Err(Error::Numeric(format!("radius update moved away from its fixed point: {delta} -> {next}")));
        }
        delta = next;
        center = avg.mean();
        let mut r = rec.full(k as u64, &center, &center, (0, oracle.calls_stochastic()));
        r.iterate = None;
        rec.push(r);
    }
    for n in notes {
        rec.trace.note(n);
    }
    Ok(rec.finish(p.stages as u64, center, (0, oracle.calls_stochastic()), projections))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_recursion() {
        assert!((next_radius(0.5, 0.1, 0.01, 1.0) - 0.501f64.sqrt()).abs() < 1e-15);
        assert!((next_radius(0.5, 0.1, 0.01, 1.0) - 0.70781).abs() < 1e-5);
    }

    #[test]
    fn clip_level_formula() {
        assert_eq!(clip_level(2.0, 1.0, 0.5), 2.0);
    }

    #[test]
    fn rejects_non_positive_target() {
        let p = ClippedParams { beta: 1.0, epsilon: 0.5, tau: 0.5, xi: 2.0, target_risk: 0.0, stage_len: 1, stages: 1, eta: 0.1 };
        assert!(matches!(p.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn prescribed_constants() {
        let p = ClippedParams::theorem(2.0, 2.0, 1, 1.0, 0.01, 0.5, 0.5, 4, 0.1).unwrap();
        assert_eq!(p.xi, 8.0);
        // s = ⌈log₂(8·2/0.01)⌉ = ⌈10.64⌉
        assert_eq!(ClippedParams::peeling_levels(8.0, 2.0, 1.0, 0.01), 11);
        assert!((p.eta - 1.0 / (32.0 * (p.stage_len as f64).sqrt())).abs() < 1e-15);
    }
}
