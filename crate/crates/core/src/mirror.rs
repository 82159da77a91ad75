//! Mirror maps and their Bregman divergences.

use crate::error::{check_dims, Error, Result};
use crate::linalg::dist_sq;

/// Smallest value allowed inside a logarithm of the entropy map.
pub const ENTROPY_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MirrorMap {
    /// `Φ(x) = ½‖x‖²`, 1-strongly convex in ℓ2.
    Euclidean,
    /// `Φ(x) = Σ xᵢ ln xᵢ`, 1-strongly convex in ℓ1 on the simplex.
    Entropy,
}

impl MirrorMap {
    pub fn alpha(&self) -> f64 {
        1.0
    }

    pub fn potential(&self, x: &[f64]) -> f64 {
        match self {
            MirrorMap::Euclidean => 0.5 * crate::linalg::norm_sq(x),
            MirrorMap::Entropy => x
                .iter()
                .map(|&v| {
                    let v = v.max(ENTROPY_FLOOR);
                    v * v.ln()
                })
                .sum(),
        }
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        match self {
            MirrorMap::Euclidean => x.to_vec(),
            MirrorMap::Entropy => x.iter().map(|&v| v.max(ENTROPY_FLOOR).ln() + 1.0).collect(),
        }
    }

    /// Inverse of [`MirrorMap::gradient`] (gradient of the conjugate).
    pub fn inverse_gradient(&self, theta: &[f64]) -> Vec<f64> {
        match self {
            MirrorMap::Euclidean => theta.to_vec(),
            MirrorMap::Entropy => theta.iter().map(|t| (t - 1.0).exp()).collect(),
        }
    }

    /// Norm in which the map is `alpha`-strongly convex.
    pub fn norm(&self, x: &[f64]) -> f64 {
        match self {
            MirrorMap::Euclidean => crate::linalg::norm(x),
            MirrorMap::Entropy => crate::linalg::norm1(x),
        }
    }

    /// Dual norm of [`MirrorMap::norm`].
    pub fn dual_norm(&self, x: &[f64]) -> f64 {
        match self {
            MirrorMap::Euclidean => crate::linalg::norm(x),
            MirrorMap::Entropy => crate::linalg::norm_inf(x),
        }
    }
}

/// `B_Φ(x, y) = Φ(x) − Φ(y) − ⟨∇Φ(y), x − y⟩`.
///
/// For the entropy map this is the generalised KL divergence
/// `Σ xᵢ ln(xᵢ/yᵢ) − xᵢ + yᵢ`; coordinates must be strictly positive.
pub fn bregman(map: MirrorMap, x: &[f64], y: &[f64]) -> Result<f64> {
    check_dims(x.len(), y.len())?;
    match map {
        MirrorMap::Euclidean => Ok(0.5 * dist_sq(x, y)),
        MirrorMap::Entropy => {
            if let Some(v) = x.iter().chain(y).find(|v| !(**v > 0.0)) {
                return Err(Error::Domain(format!("entropy map needs positive coordinates, got {v}")));
            }
            let b: f64 = x
                .iter()
                .zip(y)
                .map(|(&a, &b)| {
                    let a = a.max(ENTROPY_FLOOR);
                    let b = b.max(ENTROPY_FLOOR);
                    a * (a / b).ln() - a + b
                })
                .sum();
            Ok(b.max(0.0))
        }
    }
}
