//! Epoch method mixing one full gradient per epoch with cheap stochastic
//! corrections, for smooth objectives without strong convexity.

use smoothconvex_core::domain::{project_ball, project_two_balls};
use smoothconvex_core::linalg::{add, axpy, sub};
use smoothconvex_core::{Domain, Error, Oracle, Result, SeededRng, StochasticObjective, Trace};

use crate::config::{positive, SolverConfig};
use crate::record::Recorder;
use crate::variance::gradient_variance_probe;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedParams {
    /// Shrink factor `γ > 1`.
    pub gamma: f64,
    pub lambda1: f64,
    pub delta1: f64,
    pub t1: usize,
    pub epochs: usize,
    pub eta1: f64,
}

impl MixedParams {
    /// `γ = 2`, `λ₁ = 16β`, `T₁ = ⌈300 ln(m/δ)⌉`, `η₁ = 1/(2β√(3T₁))`, `Δ₁ = R`.
    pub fn theorem(beta: f64, radius: f64, epochs: usize, delta: f64) -> Self {
        let t1 = (300.0 * (epochs as f64 / delta).ln()).ceil().max(1.0) as usize;
        MixedParams {
            gamma: 2.0,
            lambda1: 16.0 * beta,
            delta1: radius,
            t1,
            epochs,
            eta1: 1.0 / (2.0 * beta * (3.0 * t1 as f64).sqrt()),
        }
    }

    /// `T_k = T₁γ^{2(k−1)}`, rounded.
    pub fn epoch_len(&self, k: usize) -> usize {
        (self.t1 as f64 * self.gamma.powi(2 * (k as i32 - 1))).round() as usize
    }

    pub fn total_stochastic(&self) -> usize {
        (1..=self.epochs).map(|k| self.epoch_len(k)).sum()
    }

    fn validate(&self) -> Result<()> {
        if !(self.gamma > 1.0) || !self.gamma.is_finite() {
            return Err(Error::Config(format!("shrink factor must exceed 1, got {}", self.gamma)));
        }
        positive("lambda1", self.lambda1)?;
        positive("delta1", self.delta1)?;
        positive("eta1", self.eta1)?;
        if self.t1 == 0 || self.epochs == 0 {
            return Err(Error::Config("T1 and epoch count must be positive".into()));
        }
        Ok(())
    }
}

/// Runs `m` epochs from `w̄_1 = 0`. Epoch `k` takes `T_k` projected steps on
/// `w ↦ F(w̄_k + w) + (λ_k/2)‖w̄_k + w‖²` over `{w : w̄_k + w ∈ W, ‖w‖ ≤ Δ_k}`
/// using `g_k + ∇f_i(w + w̄_k) − ∇f_i(w̄_k)`, then moves `w̄_k` by the average
/// of its `T_k + 1` inner iterates.
///
/// `W` must be a centred ball or unconstrained. The budget's `t` caps the
/// total stochastic calls; `T₁` shrinks (with a trace note) if it must.
pub fn mixed_grad(obj: &dyn StochasticObjective, domain: &Domain, params: &MixedParams, cfg: &SolverConfig) -> Result<Trace> {
    params.validate()?;
    let outer = match domain {
        Domain::Ball { r } => Some(*r),
        Domain::Unconstrained => None,
        other => return Err(Error::Unsupported(format!("MixedGrad needs a ball domain, got {}", other.kind_name()))),
    };
    let mut p = *params;
    let mut notes = Vec::new();
    if cfg.budget.t > 0 && p.total_stochastic() > cfg.budget.t {
        let unit = p.total_stochastic() as f64 / p.t1 as f64;
        let scaled = ((cfg.budget.t as f64 / unit).floor() as usize).max(1);
        notes.push(format!("T1 = {} exceeds budget; scaled to {scaled}", p.t1));
        p.t1 = scaled;
    }
    let oracle = Oracle::new(obj);
    let mut rng = SeededRng::new(cfg.seed);
    let mut probe_rng = SeededRng::new(cfg.seed).fork(1);
    let mut rec = Recorder::new(obj, domain, cfg);
    let d = obj.dim();
    let zero = vec![0.0; d];
    let mut bar = vec![0.0; d];
    let (mut delta, mut lambda, mut eta) = (p.delta1, p.lambda1, p.eta1);
    let mut projections = 0u64;
    for k in 1..=p.epochs {
        let tk = p.epoch_len(k);
        let mut gk = oracle.full_gradient(&bar);
        axpy(lambda, &bar, &mut gk);
        let shifted: Vec<f64> = bar.iter().map(|v| -v).collect();
        let project = |x: &[f64]| match outer {
            Some(r) => project_two_balls(x, delta, &shifted, r),
            None => project_ball(x, &zero, delta),
        };
        let mut w = vec![0.0; d];
        let mut sum = w.clone();
        for _ in 0..tk {
            let c = oracle.sample(&mut rng);
            let at = add(&w, &bar);
            let mut g = sub(&oracle.component_gradient(c, &at), &oracle.component_gradient(c, &bar));
            axpy(1.0, &gk, &mut g);
            axpy(lambda, &w, &mut g);
            let next: Vec<f64> = w.iter().zip(&g).map(|(a, b)| a - eta * b).collect();
            w = project(&next);
            projections += 1;
            axpy(1.0, &w, &mut sum);
        }
        let tilde: Vec<f64> = sum.iter().map(|v| v / (tk as f64 + 1.0)).collect();
        let new_bar = add(&bar, &tilde);
        let mut r = rec.full(k as u64, &new_bar, &new_bar, (oracle.calls_full(), oracle.calls_stochastic()));
        r.iterate = None;
        if cfg.probe_variance {
            let v = gradient_variance_probe(obj, &new_bar, &bar, 1000, &mut probe_rng);
            r.variance_sgd = Some(v.sgd_var);
            r.variance_mixed = Some(v.mixed_var);
        }
        rec.push(r);
        bar = new_bar;
        delta /= p.gamma;
        lambda /= p.gamma;
        eta /= p.gamma;
    }
    for n in notes {
        rec.trace.note(n);
    }
    let calls = (oracle.calls_full(), oracle.calls_stochastic());
    Ok(rec.finish(p.epochs as u64, bar, calls, projections))
}
