//! Epoch mixed gradient descent for smooth, strongly convex objectives.

use smoothconvex_core::domain::{dykstra, project_ball, project_two_balls};
use smoothconvex_core::linalg::{axpy, sub};
use smoothconvex_core::oracle::Component;
use smoothconvex_core::{Domain, Error, Oracle, Result, SeededRng, StochasticObjective, Trace};

use crate::config::{positive, SolverConfig};
use crate::record::Recorder;
use crate::variance::gradient_variance_probe;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmgdParams {
    /// Component smoothness `L`.
    pub l: f64,
    /// Strong convexity of `F`.
    pub lambda: f64,
    pub delta1: f64,
    /// Inner iterations per epoch.
    pub t: usize,
    pub epochs: usize,
    /// Step size; `1/(L√T)` when `None`.
    pub eta: Option<f64>,
}

impl EmgdParams {
    /// `T = ⌈1152 (L/λ)² ln(1/δ)⌉`.
    pub fn theorem_epoch_len(l: f64, lambda: f64, delta: f64) -> usize {
        (1152.0 * (l / lambda).powi(2) * (1.0 / delta).ln()).ceil() as usize
    }

    pub fn theorem(l: f64, lambda: f64, delta1: f64, epochs: usize, delta: f64) -> Self {
        EmgdParams { l, lambda, delta1, t: Self::theorem_epoch_len(l, lambda, delta), epochs, eta: None }
    }

    /// Domain radius in epoch `k` (1-based), `Δ¹/√2^{k−1}`.
    pub fn radius(&self, k: usize) -> f64 {
        self.delta1 / 2f64.sqrt().powi(k as i32 - 1)
    }

    pub fn step_size(&self) -> f64 {
        self.eta.unwrap_or_else(|| 1.0 / (self.l * (self.t as f64).sqrt()))
    }

    fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0) {
            return Err(Error::Config("EMGD needs strong convexity lambda > 0; use MixedGrad otherwise".into()));
        }
        positive("L", self.l)?;
        positive("delta1", self.delta1)?;
        if let Some(e) = self.eta {
            positive("eta", e)?;
        }
        if self.t == 0 || self.epochs == 0 {
            return Err(Error::Config("epoch length and count must be positive".into()));
        }
        Ok(())
    }
}

/// `∇F(w̄) + ∇f_c(w) − ∇f_c(w̄)` given `full = ∇F(w̄)`.
pub fn mixed_gradient(oracle: &Oracle, full: &[f64], c: Component, w: &[f64], center: &[f64]) -> Vec<f64> {
    let mut g = sub(&oracle.component_gradient(c, w), &oracle.component_gradient(c, center));
    axpy(1.0, full, &mut g);
    g
}

fn project_local(domain: &Domain, x: &[f64], center: &[f64], delta: f64) -> Vec<f64> {
    match domain {
        Domain::Unconstrained => project_ball(x, center, delta),
        Domain::Ball { r } => project_two_balls(x, *r, center, delta),
        _ => dykstra(x, |y| domain.project(y).expect("dimension checked"), |y| project_ball(y, center, delta), 100, 1e-10),
    }
}

/// `m` epochs of `T` mixed-gradient steps over `W ∩ {‖w − w̄^k‖ ≤ Δ^k}`; each
/// epoch returns the average of its `T + 1` iterates and divides `Δ` by √2.
///
/// The budget's `t` caps `mT`. A longer prescription is cut to `⌊t/m⌋` per
/// epoch with a trace note; an automatic `η` then uses the shortened `T`.
pub fn emgd(obj: &dyn StochasticObjective, domain: &Domain, params: &EmgdParams, cfg: &SolverConfig) -> Result<Trace> {
    params.validate()?;
    let mut p = *params;
    let mut notes = Vec::new();
    if cfg.budget.t > 0 && p.t * p.epochs > cfg.budget.t {
        let scaled = (cfg.budget.t / p.epochs).max(1);
        notes.push(format!("epoch length {} exceeds budget; scaled to {scaled}", p.t));
        p.t = scaled;
    }
    let eta = p.step_size();
    let oracle = Oracle::new(obj);
    let mut rng = SeededRng::new(cfg.seed);
    let mut probe_rng = SeededRng::new(cfg.seed).fork(1);
    let mut rec = Recorder::new(obj, domain, cfg);
    let d = obj.dim();
    let mut bar = domain.project(&vec![0.0; d])?;
    let mut projections = 0u64;
    for k in 1..=p.epochs {
        let delta = p.radius(k);
        let full = oracle.full_gradient(&bar);
        let mut w = bar.clone();
        let mut sum = w.clone();
        for _ in 0..p.t {
            let c = oracle.sample(&mut rng);
            let g = mixed_gradient(&oracle, &full, c, &w, &bar);
            let next: Vec<f64> = w.iter().zip(&g).map(|(a, b)| a - eta * b).collect();
            w = project_local(domain, &next, &bar, delta);
            projections += 1;
            axpy(1.0, &w, &mut sum);
        }
        let new_bar: Vec<f64> = sum.iter().map(|v| v / (p.t as f64 + 1.0)).collect();
        let mut r = rec.full(k as u64, &new_bar, &new_bar, (oracle.calls_full(), oracle.calls_stochastic()));
        r.iterate = None;
        if cfg.probe_variance {
            let v = gradient_variance_probe(obj, &new_bar, &bar, 1000, &mut probe_rng);
            r.variance_sgd = Some(v.sgd_var);
            r.variance_mixed = Some(v.mixed_var);
        }
        rec.push(r);
        bar = new_bar;
    }
    for n in notes {
        rec.trace.note(n);
    }
    let calls = (oracle.calls_full(), oracle.calls_stochastic());
    Ok(rec.finish(p.epochs as u64, bar, calls, projections))
}

#[cfg(test)]
mod tests {
    use super::*;
    use smoothconvex_core::{Objective, StepSchedule};

    struct Pair;

    impl Objective for Pair {
        fn dim(&self) -> usize {
            2
        }
        fn value(&self, w: &[f64]) -> f64 {
            0.25 * ((w[0] - 1.0).powi(2) + 3.0 * w[1] * w[1]) + 0.25 * (w[0] * w[0] + (w[1] + 1.0).powi(2))
        }
        fn gradient(&self, w: &[f64]) -> Vec<f64> {
            let a = self.component_gradient(0, w);
            let b = self.component_gradient(1, w);
            vec![0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
        }
    }

    impl StochasticObjective for Pair {
        fn n_components(&self) -> Option<usize> {
            Some(2)
        }
        fn sample_component(&self, rng: &mut SeededRng) -> usize {
            rng.index(2)
        }
        fn component_value(&self, i: usize, w: &[f64]) -> f64 {
            if i == 0 {
                0.5 * ((w[0] - 1.0).powi(2) + 3.0 * w[1] * w[1])
            } else {
                0.5 * (w[0] * w[0] + (w[1] + 1.0).powi(2))
            }
        }
        fn component_gradient(&self, i: usize, w: &[f64]) -> Vec<f64> {
            if i == 0 {
                vec![w[0] - 1.0, 3.0 * w[1]]
            } else {
                vec![w[0], w[1] + 1.0]
            }
        }
    }

    #[test]
    fn mixed_gradient_at_center_is_full() {
        let oracle = Oracle::new(&Pair);
        let center = [0.3, -0.7];
        let full = oracle.full_gradient(&center);
        for c in [Component(0), Component(1)] {
            assert_eq!(mixed_gradient(&oracle, &full, c, &center, &center), full);
        }
    }

    #[test]
    fn radius_halves_in_square_every_epoch() {
        let p = EmgdParams { l: 3.0, lambda: 1.0, delta1: 1.0, t: 10, epochs: 6, eta: None };
        assert!((p.radius(7) - 0.125).abs() < 1e-15);
    }

    #[test]
    fn zero_lambda_rejected() {
        let p = EmgdParams { l: 3.0, lambda: 0.0, delta1: 1.0, t: 10, epochs: 6, eta: None };
        let cfg = SolverConfig::new(0, 0, StepSchedule::Constant(1.0));
        assert!(matches!(emgd(&Pair, &Domain::Unconstrained, &p, &cfg), Err(Error::Config(_))));
    }

    #[test]
    fn accounting_and_convergence() {
        let p = EmgdParams { l: 3.0, lambda: 1.0, delta1: 2.0, t: 200, epochs: 8, eta: None };
        let cfg = SolverConfig::new(5, 0, StepSchedule::Constant(1.0));
        let tr = emgd(&Pair, &Domain::Unconstrained, &p, &cfg).unwrap();
        assert_eq!(tr.calls_full, 8);
        assert_eq!(tr.calls_stochastic, 1600);
        // Minimizer of the average: w₀ = 1/2, w₁ = −1/4.
        assert!((tr.final_point[0] - 0.5).abs() < 1e-3 && (tr.final_point[1] + 0.25).abs() < 1e-3);
    }
}
