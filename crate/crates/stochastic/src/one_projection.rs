//! SGD variants that touch the target domain once, at the end. Iterates
//! stay in the unit ball `B ⊇ K` via renormalization and feel the
//! constraint `g` only through its gradient.

use smoothconvex_core::linalg::{axpy, norm, Averager};
use smoothconvex_core::{Domain, Error, Oracle, Result, SeededRng, StochasticObjective, Trace};

use crate::config::{positive, SolverConfig};
use crate::record::Recorder;

/// `x / max(‖x‖, 1)`
fn renormalize(mut x: Vec<f64>) -> Vec<f64> {
    let n = norm(&x);
    if n > 1.0 {
        x.iter_mut().for_each(|v| *v /= n);
    }
    x
}

fn check_domain(domain: &Domain, d: usize) -> Result<()> {
    let rho = domain.rho();
    if !(rho > 0.0) {
        return Err(Error::Config(format!("constraint gradient bound rho must be positive, got {rho}")));
    }
    if domain.radius() > 1.0 + 1e-12 {
        return Err(Error::Config(format!("domain {} is not inside the unit ball", domain.kind_name())));
    }
    domain.project(&vec![0.0; d]).map(|_| ())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdParams {
    /// Dual regularization `γ`.
    pub gamma: f64,
}

impl PdParams {
    /// `γ = G₂²/√((G₁² + C₂² + (1 + ln(2/δ))σ²)T)` and the constant step
    /// `η = γ/(2G₂²)`.
    pub fn theorem(g1: f64, g2: f64, c2: f64, sigma: f64, horizon: usize, delta: f64) -> (Self, f64) {
        let denom = ((g1 * g1 + c2 * c2 + (1.0 + (2.0 / delta).ln()) * sigma * sigma) * horizon as f64).sqrt();
        let gamma = g2 * g2 / denom;
        (PdParams { gamma }, gamma / (2.0 * g2 * g2))
    }
}

/// Primal-dual SGD on `f(x) + λg(x) − (γ/2)λ²` from `x₁ = 0`, `λ₁ = 0`:
///
/// ```text
/// x_{t+1} = renorm(x_t − η_t(ĝ_t + λ_t ∇g(x_t)))
/// λ_{t+1} = [(1 − γη_t)λ_t + η_t g(x_t)]₊
/// ```
///
/// Returns `Π_K` of the iterate average; that is the only projection.
pub fn sgd_pd(obj: &dyn StochasticObjective, domain: &Domain, params: &PdParams, cfg: &SolverConfig) -> Result<Trace> {
    cfg.validate()?;
    positive("gamma", params.gamma)?;
    let d = obj.dim();
    check_domain(domain, d)?;
    let oracle = Oracle::new(obj);
    let mut rng = SeededRng::new(cfg.seed);
    let mut rec = Recorder::new(obj, domain, cfg);
    let mut x = vec![0.0; d];
    let mut lambda = 0.0;
    let mut avg = Averager::new(d);
    for t in 1..=cfg.budget.t {
        avg.push(&x);
        let eta = cfg.schedule.eta(t);
        let mut g = oracle.stochastic_gradient(&x, &mut rng);
        axpy(lambda, &domain.grad_g(&x), &mut g);
        let gx = domain.g(&x);
        let next: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a - eta * b).collect();
        lambda = ((1.0 - params.gamma * eta) * lambda + eta * gx).max(0.0);
        x = renormalize(next);
        if cfg.record_every > 0 && t % cfg.record_every == 0 {
            let mut r = rec.full(t as u64, &avg.mean(), &x, (0, oracle.calls_stochastic()));
            r.dual = Some(lambda);
            rec.push(r);
        }
    }
    if cfg.budget.t == 0 {
        avg.push(&x);
    }
    let out = domain.project(&avg.mean())?;
    let n = cfg.budget.t as u64;
    let mut tr = rec.finish(n, out, (0, oracle.calls_stochastic()), 1);
    if let Some(r) = tr.records.last_mut() {
        r.dual = Some(lambda);
    }
    Ok(tr)
}

/// `σ(z) = e^z/(1 + e^z)` without overflow.
pub fn smoothing_weight(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StParams {
    pub lambda0: f64,
    /// Smoothing parameter `γ`.
    pub gamma: f64,
    /// Bound on stochastic gradient norms, used only to check `λ₀ > G₁/ρ`.
    pub g1: Option<f64>,
}

impl StParams {
    /// `γ = ln T / T`.
    pub fn theorem(lambda0: f64, horizon: usize, g1: Option<f64>) -> Self {
        let t = horizon.max(2) as f64;
        StParams { lambda0, gamma: t.ln() / t, g1 }
    }
}

/// SGD on the smoothed objective `f(x) + γ ln(1 + exp(λ₀g(x)/γ))` from
/// `x₁ = 0`, with renormalization into the unit ball and a single final
/// projection of the average. For the strongly convex rate use
/// `StepSchedule::InverseT(1/(2β))`.
pub fn sgd_st(obj: &dyn StochasticObjective, domain: &Domain, params: &StParams, cfg: &SolverConfig) -> Result<Trace> {
    cfg.validate()?;
    positive("gamma", params.gamma)?;
    positive("lambda0", params.lambda0)?;
    let d = obj.dim();
    check_domain(domain, d)?;
    let oracle = Oracle::new(obj);
    let mut rng = SeededRng::new(cfg.seed);
    let mut rec = Recorder::new(obj, domain, cfg);
    if let Some(g1) = params.g1 {
        if params.lambda0 <= g1 / domain.rho() {
            let msg = format!("lambda0 = {} <= G1/rho = {}; the rate guarantee does not apply", params.lambda0, g1 / domain.rho());
            log::warn!("{msg}");
            rec.trace.note(msg);
        }
    }
    let mut x = vec![0.0; d];
    let mut avg = Averager::new(d);
    for t in 1..=cfg.budget.t {
        avg.push(&x);
        let eta = cfg.schedule.eta(t);
        let mut g = oracle.stochastic_gradient(&x, &mut rng);
        let weight = smoothing_weight(params.lambda0 * domain.g(&x) / params.gamma);
        if weight > 0.0 {
            axpy(weight * params.lambda0, &domain.grad_g(&x), &mut g);
        }
        x = renormalize(x.iter().zip(&g).map(|(a, b)| a - eta * b).collect());
        rec.step(t as u64, || avg.mean(), &x, (0, oracle.calls_stochastic()));
    }
    if cfg.budget.t == 0 {
        avg.push(&x);
    }
    let out = domain.project(&avg.mean())?;
    let n = cfg.budget.t as u64;
    Ok(rec.finish(n, out, (0, oracle.calls_stochastic()), 1))
}
