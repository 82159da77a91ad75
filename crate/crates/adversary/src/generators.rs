use std::sync::Arc;

use smoothconvex_core::linalg::{dist_sq, norm_sq, sub};
use smoothconvex_core::{Error, Result, SeededRng};
use smoothconvex_online::RoundLoss;

use crate::sequence::LossSequence;

/// Radius of the circle traced by the drifting quadratic centres.
pub const DRIFT_RADIUS: f64 = 0.5;

/// `⟨f, ·⟩` for rounds `1..=⌊T/2⌋`, `⟨g, ·⟩` after; for odd `T` the second
/// half has the extra round.
pub fn switching_linear(f: &[f64], g: &[f64], rounds: usize) -> Result<LossSequence> {
    if f.len() != g.len() {
        return Err(Error::Input(format!("f has dimension {}, g {}", f.len(), g.len())));
    }
    if norm_sq(f) > 1.0 + 1e-12 || norm_sq(g) > 1.0 + 1e-12 {
        return Err(Error::Input("switching vectors must have norm at most 1".into()));
    }
    if rounds == 0 {
        return Err(Error::Config("need at least one round".into()));
    }
    let half = rounds / 2;
    let egv = if half == 0 { norm_sq(g) } else { norm_sq(f) + dist_sq(g, f) };
    let (f, g) = (f.to_vec(), g.to_vec());
    Ok(LossSequence::new(rounds, "switching_linear", Some(egv), move |t| RoundLoss::Linear {
        f: if t <= half { f.clone() } else { g.clone() },
    }))
}

/// Which branch of the lower-bound construction applies for `s = ⌊1/η⌋`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FtrlCase {
    /// `s ≥ √T`: `f` for `⌊s/2⌋` rounds, then zeros.
    SlowSteps,
    /// `0 < s < √T`: periods of `s` rounds of `f` and `s` of `−f`.
    Flipping,
    /// `s = 0`: `−f` first, then alternate.
    Alternating,
}

impl FtrlCase {
    pub fn for_step(eta: f64, rounds: usize) -> (FtrlCase, usize) {
        let s = (1.0 / eta).floor() as usize;
        let case = if s == 0 {
            FtrlCase::Alternating
        } else if (s as f64) >= (rounds as f64).sqrt() {
            FtrlCase::SlowSteps
        } else {
            FtrlCase::Flipping
        };
        (case, s)
    }
}

/// Linear losses along `f = e₁ ∈ R^d` that defeat gradient descent with
/// step `η`. `gv_budget` caps the number of flipping periods at
/// `⌊GV/4⌋` (every flip costs `‖2f‖² = 4`); `None` uses all rounds.
pub fn ftrl_adversary(eta: f64, rounds: usize, d: usize, gv_budget: Option<f64>) -> Result<LossSequence> {
    if !(eta > 0.0) {
        return Err(Error::Config(format!("eta must be positive, got {eta}")));
    }
    if rounds == 0 || d == 0 {
        return Err(Error::Config("need at least one round and one dimension".into()));
    }
    let (case, s) = FtrlCase::for_step(eta, rounds);
    let flips = gv_budget.map(|gv| (gv / 4.0).floor().max(0.0) as usize);
    let unit = move |sign: f64| {
        let mut v = vec![0.0; d];
        v[0] = sign;
        v
    };
    let sign_at: Arc<dyn Fn(usize) -> f64 + Send + Sync> = match case {
        FtrlCase::SlowSteps => {
            let active = s / 2;
            Arc::new(move |t| if t <= active { 1.0 } else { 0.0 })
        }
        FtrlCase::Flipping => {
            let periods = flips.map_or(rounds / (2 * s), |k| k.min(rounds / (2 * s)));
            let active = periods * 2 * s;
            Arc::new(move |t| {
                if t > active {
                    0.0
                } else if (t - 1) % (2 * s) < s {
                    1.0
                } else {
                    -1.0
                }
            })
        }
        FtrlCase::Alternating => {
            let active = flips.map_or(rounds, |k| k + 1);
            Arc::new(move |t| {
                if t > active {
                    0.0
                } else if t % 2 == 1 {
                    -1.0
                } else {
                    1.0
                }
            })
        }
    };
    Ok(LossSequence::new(rounds, "ftrl_adversary", gv_budget, move |t| RoundLoss::Linear { f: unit(sign_at(t)) }))
}

fn drift_center(speed: f64, d: usize, t: usize) -> Vec<f64> {
    let th = speed * t as f64;
    let mut c = vec![0.0; d];
    c[0] = DRIFT_RADIUS * th.cos();
    if d > 1 {
        c[1] = DRIFT_RADIUS * th.sin();
    }
    c
}

/// `f_t(x) = ½‖x − c_t‖²` with `c_t` turning by `speed` radians per round on
/// a circle of radius [`DRIFT_RADIUS`] in the first two coordinates (a
/// cosine oscillation when `d = 1`).
pub fn drifting_quadratics(speed: f64, rounds: usize, d: usize) -> Result<LossSequence> {
    if !(speed >= 0.0) || !speed.is_finite() {
        return Err(Error::Config(format!("speed must be finite and non-negative, got {speed}")));
    }
    if rounds == 0 || d == 0 {
        return Err(Error::Config("need at least one round and one dimension".into()));
    }
    // Σ_{t<T} ‖c_{t+1} − c_t‖², excluding the start-dependent first term.
    let drift: f64 = (1..rounds).map(|t| dist_sq(&drift_center(speed, d, t + 1), &drift_center(speed, d, t))).sum();
    Ok(LossSequence::new(rounds, "drifting_quadratics", Some(drift), move |t| RoundLoss::Quadratic {
        center: drift_center(speed, d, t),
        curvature: 1.0,
    }))
}

/// Hinge losses on unit vectors `u_t = y_t x_t` that take a random walk on
/// the sphere with chord length exactly `drift` per round.
pub fn classification_stream(drift: f64, rounds: usize, d: usize, rng: &mut SeededRng) -> Result<LossSequence> {
    if !(0.0..=2.0).contains(&drift) {
        return Err(Error::Config(format!("drift must lie in [0, 2], got {drift}")));
    }
    if rounds == 0 || d < 2 {
        return Err(Error::Config("need at least one round and d >= 2".into()));
    }
    let angle = 2.0 * (drift / 2.0).asin();
    let mut u = rng.unit_vector(d);
    let mut stream = Vec::with_capacity(rounds);
    for _ in 0..rounds {
        stream.push(u.clone());
        // Random unit tangent at u.
        let v = loop {
            let w = rng.normal_vec(d);
            let p: f64 = w.iter().zip(&u).map(|(a, b)| a * b).sum();
            let t: Vec<f64> = sub(&w, &u.iter().map(|b| p * b).collect::<Vec<_>>());
            let n = norm_sq(&t).sqrt();
            if n > 1e-8 {
                break t.into_iter().map(|x| x / n).collect::<Vec<_>>();
            }
        };
        let next: Vec<f64> = u.iter().zip(&v).map(|(a, b)| angle.cos() * a + angle.sin() * b).collect();
        let n = norm_sq(&next).sqrt();
        u = next.into_iter().map(|x| x / n).collect();
    }
    let stream = Arc::new(stream);
    Ok(LossSequence::new(rounds, "classification_stream", None, move |t| RoundLoss::Hinge { yx: stream[t - 1].clone() }))
}
