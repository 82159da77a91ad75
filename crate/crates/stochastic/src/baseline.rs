//! SGD and the full-gradient baselines.

use smoothconvex_core::linalg::{axpy, step, Averager};
use smoothconvex_core::{prox_step, Domain, Error, MirrorMap, Objective, Oracle, Result, SeededRng, StochasticObjective, Trace};

use crate::config::SolverConfig;
use crate::record::{start_point, Recorder};

/// Projected SGD returning the uniform average `(1/T) Σ_{t=1}^T w_t`.
pub fn sgd(obj: &dyn StochasticObjective, domain: &Domain, cfg: &SolverConfig) -> Result<Trace> {
    cfg.validate()?;
    let oracle = Oracle::new(obj);
    let mut rng = SeededRng::new(cfg.seed);
    let mut rec = Recorder::new(obj, domain, cfg);
    let mut w = start_point(domain, cfg, obj.dim())?;
    let mut avg = Averager::new(w.len());
    rec.step(0, || w.clone(), &w, (0, 0));
    for t in 1..=cfg.budget.t {
        avg.push(&w);
        let g = oracle.stochastic_gradient(&w, &mut rng);
        w = domain.project(&step(&w, cfg.schedule.eta(t), &g))?;
        rec.step(t as u64, || avg.mean(), &w, (0, oracle.calls_stochastic()));
    }
    if cfg.budget.t == 0 {
        avg.push(&w);
    }
    let n = cfg.budget.t as u64;
    Ok(rec.finish(n, avg.mean(), (0, oracle.calls_stochastic()), n))
}

/// Projected gradient descent; returns the last iterate.
pub fn gd(obj: &dyn Objective, domain: &Domain, cfg: &SolverConfig) -> Result<Trace> {
    cfg.validate()?;
    let mut rec = Recorder::new(obj, domain, cfg);
    let mut w = start_point(domain, cfg, obj.dim())?;
    rec.step(0, || w.clone(), &w, (0, 0));
    for t in 1..=cfg.budget.full_calls {
        w = domain.project(&step(&w, cfg.schedule.eta(t), &obj.gradient(&w)))?;
        rec.step(t as u64, || w.clone(), &w, (t as u64, 0));
    }
    let n = cfg.budget.full_calls as u64;
    Ok(rec.finish(n, w, (n, 0), n))
}

/// Accelerated projected gradient with `θ_0 = 1`, `θ_s = 2/(s + 2)`:
///
/// ```text
/// y_s     = (1 − θ_s) h_s + θ_s f_s
/// f_{s+1} = Π(f_s − (η/θ_s) ∇F(y_s))
/// h_{s+1} = (1 − θ_s) h_s + θ_s f_{s+1}
/// ```
///
/// `η = schedule.eta(1)` should be `1/β`.
pub fn agd(obj: &dyn Objective, domain: &Domain, cfg: &SolverConfig) -> Result<Trace> {
    cfg.validate()?;
    let eta = cfg.schedule.eta(1);
    let mut rec = Recorder::new(obj, domain, cfg);
    let mut h = start_point(domain, cfg, obj.dim())?;
    let mut f = h.clone();
    rec.step(0, || h.clone(), &h, (0, 0));
    for s in 0..cfg.budget.full_calls {
        let theta = if s == 0 { 1.0 } else { 2.0 / (s as f64 + 2.0) };
        let y: Vec<f64> = h.iter().zip(&f).map(|(a, b)| (1.0 - theta) * a + theta * b).collect();
        f = domain.project(&step(&f, eta / theta, &obj.gradient(&y)))?;
        h = h.iter().zip(&f).map(|(a, b)| (1.0 - theta) * a + theta * b).collect();
        let t = s as u64 + 1;
        rec.step(t, || h.clone(), &h, (t, 0));
    }
    let n = cfg.budget.full_calls as u64;
    Ok(rec.finish(n, h, (n, 0), n))
}

/// Conditional gradient (Frank-Wolfe) with `η_t = 2/(t + 1)`. Needs the
/// domain's linear minimizer; no projections after the start point.
pub fn cgd(obj: &dyn Objective, domain: &Domain, cfg: &SolverConfig) -> Result<Trace> {
    cfg.validate()?;
    if matches!(domain, Domain::HalfspaceCut { .. } | Domain::Unconstrained) {
        return Err(Error::Unsupported(format!("conditional gradient has no linear minimizer for {}", domain.kind_name())));
    }
    let mut rec = Recorder::new(obj, domain, cfg);
    let mut w = start_point(domain, cfg, obj.dim())?;
    rec.step(0, || w.clone(), &w, (0, 0));
    for t in 1..=cfg.budget.full_calls {
        let s = domain.linear_minimizer(&obj.gradient(&w))?;
        let eta = 2.0 / (t as f64 + 1.0);
        w = w.iter().zip(&s).map(|(a, b)| (1.0 - eta) * a + eta * b).collect();
        rec.step(t as u64, || w.clone(), &w, (t as u64, 0));
    }
    let n = cfg.budget.full_calls as u64;
    Ok(rec.finish(n, w, (n, 0), 0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MdParams {
    pub map: MirrorMap,
}

impl MdParams {
    /// `η = (ρ/R)√(2α/T)` for a `ρ`-Lipschitz objective, potential range `R`
    /// and `α`-strongly convex mirror map.
    pub fn theorem_eta(lipschitz: f64, range: f64, alpha: f64, horizon: usize) -> f64 {
        lipschitz / range * (2.0 * alpha / horizon as f64).sqrt()
    }
}

fn mirror_start(map: MirrorMap, domain: &Domain, d: usize) -> Result<Vec<f64>> {
    match (map, domain) {
        (MirrorMap::Euclidean, _) => domain.project(&vec![0.0; d]),
        (MirrorMap::Entropy, Domain::Simplex { d }) => Ok(vec![1.0 / *d as f64; *d]),
        _ => Err(Error::Unsupported(format!("no mirror-map minimizer for entropy on {}", domain.kind_name()))),
    }
}

/// Mirror descent with full gradients from `argmin_W Φ`; returns the average
/// of `w_1..w_T`.
pub fn mirror_descent(obj: &dyn Objective, domain: &Domain, params: MdParams, cfg: &SolverConfig) -> Result<Trace> {
    cfg.validate()?;
    let mut rec = Recorder::new(obj, domain, cfg);
    let mut w = match &cfg.start {
        Some(s) => domain.project(s)?,
        None => mirror_start(params.map, domain, obj.dim())?,
    };
    let mut sum = vec![0.0; w.len()];
    let mut count = 0.0;
    rec.step(0, || w.clone(), &w, (0, 0));
    for t in 1..=cfg.budget.full_calls {
        axpy(1.0, &w, &mut sum);
        count += 1.0;
        let g = obj.gradient(&w);
        w = prox_step(params.map, domain, &w, &g, cfg.schedule.eta(t))?;
        rec.step(t as u64, || sum.iter().map(|v| v / count).collect(), &w, (t as u64, 0));
    }
    let out = if count > 0.0 { sum.iter().map(|v| v / count).collect() } else { w };
    let n = cfg.budget.full_calls as u64;
    Ok(rec.finish(n, out, (n, 0), n))
}
