//! Gradual and total variation of loss sequences.
//!
//! The sup form `Σ_{t<T} sup_x ‖∇f_{t+1}(x) − ∇f_t(x)‖²` is exact only for
//! families where the gradient difference does not depend on `x`: linear
//! losses, quadratics with a common curvature, and hinge losses (measured on
//! the `y x` vectors of their max structure). Everything else goes through
//! the extended form at visited points.

use smoothconvex_core::linalg::{dist_sq, norm_sq, sub};
use smoothconvex_core::{Error, Result};
use smoothconvex_online::RoundLoss;

use crate::sequence::LossSequence;

/// Where the `t = 0` term (and, for the extended form, every term) is taken.
#[derive(Debug, Clone, PartialEq)]
pub enum Probe {
    /// Sup form plus `‖∇f₁(x₀)‖²` at the starting point.
    Start(Vec<f64>),
    /// Extended form at the learner's points `y₀, …, y_{T−1}`.
    Visited(Vec<Vec<f64>>),
}

fn pair_sup(a: &RoundLoss, b: &RoundLoss) -> Result<f64> {
    use RoundLoss::*;
    match (a, b) {
        (Quadratic { center: c1, curvature: k1 }, Quadratic { center: c2, curvature: k2 }) => {
            if k1 != k2 {
                return Err(Error::Unsupported("quadratics with different curvature have unbounded variation".into()));
            }
            Ok(k1 * k1 * dist_sq(c1, c2))
        }
        (Hinge { yx: u }, Hinge { yx: v }) => Ok(dist_sq(u, v)),
        _ => match (a.linear_form(), b.linear_form()) {
            (Some(f), Some(g)) => Ok(dist_sq(&f, &g)),
            _ => Err(Error::Unsupported(format!("no closed-form sup variation between {a:?} and {b:?}"))),
        },
    }
}

/// `Σ_{t=1}^{T−1} sup_x ‖∇f_{t+1}(x) − ∇f_t(x)‖²`.
pub fn gradual_variation(seq: &LossSequence) -> Result<f64> {
    let mut total = 0.0;
    let mut prev = seq.loss(1);
    for t in 2..=seq.len() {
        let next = seq.loss(t);
        total += pair_sup(&prev, &next)?;
        prev = next;
    }
    Ok(total)
}

/// `Σ_{t=0}^{T−1} ‖∇f_{t+1}(y_t) − ∇f_t(y_t)‖²` with `f₀ ≡ 0`.
pub fn extended_egv(seq: &LossSequence, points: &[Vec<f64>]) -> Result<f64> {
    if points.len() != seq.len() {
        return Err(Error::Input(format!("{} points for {} rounds", points.len(), seq.len())));
    }
    let mut total = 0.0;
    let mut prev: Option<RoundLoss> = None;
    for (t, y) in (1..=seq.len()).zip(points) {
        let next = seq.loss(t);
        let g_next = next.gradient(y);
        total += match &prev {
            Some(p) => dist_sq(&g_next, &p.gradient(y)),
            None => norm_sq(&g_next),
        };
        prev = Some(next);
    }
    Ok(total)
}

/// EGV with the `f₀ ≡ 0` term included.
pub fn measure_egv(seq: &LossSequence, probe: &Probe) -> Result<f64> {
    match probe {
        Probe::Visited(points) => extended_egv(seq, points),
        Probe::Start(x0) => {
            let first = match seq.loss(1) {
                RoundLoss::Hinge { yx } => norm_sq(&yx),
                f => norm_sq(&f.gradient(x0)),
            };
            Ok(first + gradual_variation(seq)?)
        }
    }
}

fn linear_vectors(seq: &LossSequence) -> Result<Vec<Vec<f64>>> {
    seq.iter()
        .map(|l| match l {
            RoundLoss::Hinge { yx } => Ok(yx),
            other => other
                .linear_form()
                .ok_or_else(|| Error::Unsupported(format!("variation needs linear losses, got {other:?}"))),
        })
        .collect()
}

/// `Σ_{t=0}^{T−1} ‖f_{t+1} − f_t‖²_∞` with `f₀ = 0`, for linear losses.
pub fn egv_inf(seq: &LossSequence) -> Result<f64> {
    let fs = linear_vectors(seq)?;
    let mut prev = vec![0.0; fs[0].len()];
    let mut total = 0.0;
    for f in fs {
        total += sub(&f, &prev).iter().fold(0.0f64, |m, v| m.max(v.abs())).powi(2);
        prev = f;
    }
    Ok(total)
}

/// `Σ_t ‖f_t − μ‖²` with `μ` the mean cost vector, for linear losses.
pub fn measure_total_variation(seq: &LossSequence) -> Result<f64> {
    let fs = linear_vectors(seq)?;
    let d = fs[0].len();
    let mut mu = vec![0.0; d];
    for f in &fs {
        for (m, v) in mu.iter_mut().zip(f) {
            *m += v;
        }
    }
    mu.iter_mut().for_each(|m| *m /= fs.len() as f64);
    Ok(fs.iter().map(|f| dist_sq(f, &mu)).sum())
}
