//! Smoothed hinge loss `φ(z; γ) = (1/γ) ln(1 + exp(γ(1 − z)))` and its ψ-transform.

use smoothconvex_core::{Error, Result};

/// `ln(1 + eᵗ)` without overflow.
fn softplus(t: f64) -> f64 {
    if t > 0.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

pub fn smoothed_hinge_value(z: f64, gamma: f64) -> f64 {
    softplus(gamma * (1.0 - z)) / gamma
}

/// `φ′(z) = −σ(γ(1 − z))`, always in `[−1, 0]`.
pub fn smoothed_hinge_grad(z: f64, gamma: f64) -> f64 {
    -sigmoid(gamma * (1.0 - z))
}

/// `φ″(z) = γ σ (1 − σ) ≤ γ/4`.
pub fn smoothed_hinge_second(z: f64, gamma: f64) -> f64 {
    let s = sigmoid(gamma * (1.0 - z));
    gamma * s * (1.0 - s)
}

/// `ψ(η; γ) = φ(0) − min_α [p φ(α) + (1 − p) φ(−α)]` with `p = (1 + η)/2`,
/// evaluated in closed form.
///
/// The minimizer satisfies `e^{γα*} = C₂/(1 − |η|)` with
/// `C₂ = |η|e^γ + √(η²e^{2γ} + 1 − η²)`. Both terms are rescaled by `e^{−γ}`
/// so no exponential of `γ` is ever formed.
pub fn psi_transform(eta: f64, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::Config(format!("gamma must be positive, got {gamma}")));
    }
    if !(eta.abs() < 1.0) {
        return Err(Error::Domain(format!("eta must lie in (-1, 1), got {eta}")));
    }
    if eta == 0.0 {
        return Ok(0.0);
    }
    let a = eta.abs();
    let t = (-gamma).exp();
    // r = e^{−γ} √(η² e^{2γ} + 1 − η²)
    let r = (a * a + (1.0 - a * a) * t * t).sqrt();
    let sp = gamma + t.ln_1p();
    // p φ(α*) with e^{γα*} = C₂/(1 − a):  ln(1 + e^{γ(1−α*)}) = ln1p((1 − a)/(a + r)).
    let first = (1.0 + a) / (2.0 * gamma) * ((1.0 - a) / (a + r)).ln_1p();
    // (1 − p) φ(−α*):  ln(1 + e^{γ(1+α*)}) = 2γ + ln(e^{−2γ} + (a + r)/(1 − a)).
    let second = (1.0 - a) / (2.0 * gamma) * (2.0 * gamma + (t * t + (a + r) / (1.0 - a)).ln());
    let psi = sp / gamma - first - second;
    Ok(psi.max(0.0))
}
