//! The prox step `argmin_{u ∈ D} η⟨u, g⟩ + B_Φ(u, z)`.

use crate::domain::{project_ball, Domain};
use crate::error::{check_dims, Error, Result};
use crate::linalg::{norm, step, SymMat};
use crate::mirror::{MirrorMap, ENTROPY_FLOOR};

pub const MAX_BISECTION_STEPS: usize = 200;
pub const BISECTION_TOL: f64 = 1e-10;

pub fn prox_step(map: MirrorMap, domain: &Domain, z: &[f64], g: &[f64], eta: f64) -> Result<Vec<f64>> {
    check_dims(z.len(), g.len())?;
    if !(eta > 0.0) {
        return Err(Error::Config(format!("step size must be positive, got {eta}")));
    }
    match map {
        MirrorMap::Euclidean => domain.project(&step(z, eta, g)),
        MirrorMap::Entropy => match domain {
            Domain::Simplex { .. } => {
                let logs: Vec<f64> = z
                    .iter()
                    .zip(g)
                    .map(|(zi, gi)| zi.max(ENTROPY_FLOOR).ln() - eta * gi)
                    .collect();
                Ok(softmax(&logs))
            }
            Domain::Box { lo, hi } if lo.iter().all(|l| *l > 0.0) => Ok(z
                .iter()
                .zip(g)
                .zip(lo.iter().zip(hi))
                .map(|((zi, gi), (l, h))| (zi.max(ENTROPY_FLOOR) * (-eta * gi).exp()).clamp(*l, *h))
                .collect()),
            other => Err(Error::Unsupported(format!(
                "entropy prox over {} domain",
                other.kind_name()
            ))),
        },
    }
}

/// Normalised `exp(logs)`, shifted by the maximum for stability.
pub fn softmax(logs: &[f64]) -> Vec<f64> {
    let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = logs.iter().map(|l| (l - m).exp()).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|v| v / s).collect()
}

/// `argmin_{‖u‖ ≤ r} η⟨u, g⟩ + ½(u − z)ᵀH(u − z)` for symmetric positive
/// definite `H`.
///
/// The stationarity condition gives `u(ν) = (H + νI)⁻¹(Hz − ηg)`; `ν` is
/// found by bisection on `‖u(ν)‖ = r`. `r = ∞` gives the unconstrained
/// solution.
pub fn prox_mahalanobis_ball(h: &SymMat, r: f64, z: &[f64], g: &[f64], eta: f64) -> Result<Vec<f64>> {
    let d = h.dim();
    check_dims(d, z.len())?;
    check_dims(d, g.len())?;
    let eig = h.to_nalgebra().symmetric_eigen();
    let lmin = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(lmin > 0.0) {
        return Err(Error::Numeric(format!("metric is not positive definite (λ_min = {lmin})")));
    }
    let hz = h.matvec(z);
    let b: Vec<f64> = hz.iter().zip(g).map(|(a, gi)| a - eta * gi).collect();
    let q = &eig.eigenvectors;
    // Coordinates of b in the eigenbasis.
    let bt: Vec<f64> = (0..d).map(|j| (0..d).map(|i| q[(i, j)] * b[i]).sum()).collect();
    let solve = |nu: f64| -> Vec<f64> {
        let c: Vec<f64> = (0..d).map(|j| bt[j] / (eig.eigenvalues[j] + nu)).collect();
        (0..d).map(|i| (0..d).map(|j| q[(i, j)] * c[j]).sum()).collect()
    };
    let u0 = solve(0.0);
    if !r.is_finite() || norm(&u0) <= r {
        return Ok(u0);
    }
    let mut lo = 0.0;
    let mut hi = norm(&b) / r;
    for _ in 0..MAX_BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        let u = solve(mid);
        let nu = norm(&u);
        if (nu - r).abs() <= BISECTION_TOL {
            return Ok(project_ball(&u, &vec![0.0; d], r));
        }
        if nu > r {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // The bracket has collapsed to floating-point width; `hi` is feasible.
    Ok(project_ball(&solve(hi), &vec![0.0; d], r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euclidean_unconstrained_box_is_plain_step() {
        let d = Domain::boxed(vec![-10.0; 2], vec![10.0; 2]).unwrap();
        let u = prox_step(MirrorMap::Euclidean, &d, &[1.0, 1.0], &[1.0, 0.0], 0.5).unwrap();
        assert_eq!(u, vec![0.5, 1.0]);
    }

    #[test]
    fn entropy_zero_gradient_is_fixed() {
        let d = Domain::simplex(2).unwrap();
        for eta in [0.1, 1.0, 10.0] {
            let u = prox_step(MirrorMap::Entropy, &d, &[0.5, 0.5], &[0.0, 0.0], eta).unwrap();
            assert_eq!(u, vec![0.5, 0.5]);
        }
    }

    #[test]
    fn euclidean_ball_hits_boundary() {
        let d = Domain::ball(1.0).unwrap();
        let u = prox_step(MirrorMap::Euclidean, &d, &[0.9, 0.0], &[-1.0, 0.0], 0.5).unwrap();
        assert!((u[0] - 1.0).abs() < 1e-15 && u[1] == 0.0, "{u:?}");
    }

    #[test]
    fn entropy_multiplicative_update() {
        let d = Domain::simplex(3).unwrap();
        let z = [1.0 / 3.0; 3];
        let u = prox_step(MirrorMap::Entropy, &d, &z, &[1.0, 0.0, 0.0], 1.0).unwrap();
        let e = (-1.0f64).exp();
        let s = e + 2.0;
        let want = [e / s, 1.0 / s, 1.0 / s];
        for (a, b) in u.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn entropy_on_ball_is_unsupported() {
        let d = Domain::ball(1.0).unwrap();
        assert!(matches!(
            prox_step(MirrorMap::Entropy, &d, &[0.5, 0.5], &[0.0, 0.0], 1.0),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn mahalanobis_identity_reduces_to_projection() {
        let h = SymMat::scaled_identity(2, 1.0);
        let u = prox_mahalanobis_ball(&h, 1.0, &[0.5, 0.5], &[-2.0, 0.0], 1.0).unwrap();
        let want = project_ball(&[2.5, 0.5], &[0.0, 0.0], 1.0);
        assert!((u[0] - want[0]).abs() < 1e-9 && (u[1] - want[1]).abs() < 1e-9, "{u:?} {want:?}");
    }

    #[test]
    fn scaled_identity_metric_scales_step() {
        let h = SymMat::scaled_identity(2, 4.0);
        let u = prox_mahalanobis_ball(&h, f64::INFINITY, &[0.0, 0.0], &[1.0, -2.0], 1.0).unwrap();
        assert!((u[0] + 0.25).abs() < 1e-15 && (u[1] - 0.5).abs() < 1e-15);
    }
}
