use smoothconvex_core::linalg::SymMat;
use smoothconvex_core::{prox_mahalanobis_ball, Domain, Error, Result};

use crate::learner::Learner;
use crate::loss::RoundLoss;

pub const MAX_DIM: usize = 50;

/// Mirror prox in the metric `H_t = (1 + βG²)I + β Σ_{τ<t} ∇f_τ(x_τ)∇f_τ(x_τ)ᵀ`
/// for strictly convex losses.
#[derive(Debug, Clone)]
pub struct StrictlyConvexOmp {
    radius: f64,
    beta: f64,
    h: SymMat,
    z: Vec<f64>,
    x: Vec<f64>,
    g_prev: Vec<f64>,
}

impl StrictlyConvexOmp {
    /// `domain` must be a ball centred at the origin or unconstrained.
    pub fn new(domain: &Domain, d: usize, beta: f64, g_bound: f64) -> Result<Self> {
        if d > MAX_DIM {
            return Err(Error::Config(format!("dense metric limited to d <= {MAX_DIM}, got {d}")));
        }
        if !(beta > 0.0) || !(g_bound >= 0.0) {
            return Err(Error::Config(format!("need beta > 0 and G >= 0, got {beta}, {g_bound}")));
        }
        let radius = match domain {
            Domain::Ball { r } => *r,
            Domain::Unconstrained => f64::INFINITY,
            other => return Err(Error::Unsupported(format!("metric prox over {} domain", other.kind_name()))),
        };
        Ok(StrictlyConvexOmp {
            radius,
            beta,
            h: SymMat::scaled_identity(d, 1.0 + beta * g_bound * g_bound),
            z: vec![0.0; d],
            x: vec![0.0; d],
            g_prev: vec![0.0; d],
        })
    }

    pub fn metric(&self) -> &SymMat {
        &self.h
    }
}

impl Learner for StrictlyConvexOmp {
    fn predict(&mut self) -> Vec<f64> {
        self.x = prox_mahalanobis_ball(&self.h, self.radius, &self.z, &self.g_prev, 1.0)
            .expect("metric stays positive definite");
        self.x.clone()
    }

    fn observe(&mut self, loss: &RoundLoss) -> Result<()> {
        let g = loss.gradient(&self.x);
        self.z = prox_mahalanobis_ball(&self.h, self.radius, &self.z, &g, 1.0)?;
        self.h.rank1_update(self.beta, &g);
        self.g_prev = g;
        Ok(())
    }

    fn search_point(&self) -> Vec<f64> {
        self.z.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_round_is_scaled_euclidean() {
        let mut l = StrictlyConvexOmp::new(&Domain::Unconstrained, 2, 0.5, 2.0).unwrap();
        assert_eq!(l.metric().get(0, 0), 3.0);
        assert_eq!(l.metric().get(0, 1), 0.0);
        assert_eq!(l.predict(), vec![0.0, 0.0]);
        l.observe(&RoundLoss::Linear { f: vec![1.5, -3.0] }).unwrap();
        let z = l.search_point();
        assert!((z[0] + 0.5).abs() < 1e-12 && (z[1] - 1.0).abs() < 1e-12);
        // H₂ = H₁ + β g gᵀ
        assert!((l.metric().get(0, 0) - (3.0 + 0.5 * 2.25)).abs() < 1e-15);
        assert!((l.metric().get(0, 1) - 0.5 * 1.5 * -3.0).abs() < 1e-15);
        assert!((l.metric().get(1, 1) - (3.0 + 0.5 * 9.0)).abs() < 1e-15);
    }

    #[test]
    fn stays_in_ball() {
        let mut l = StrictlyConvexOmp::new(&Domain::ball(0.5).unwrap(), 2, 1.0, 1.0).unwrap();
        for t in 0..30 {
            let x = l.predict();
            assert!(x.iter().map(|v| v * v).sum::<f64>() <= 0.25 + 1e-12);
            l.observe(&RoundLoss::Quadratic { center: vec![2.0, (t as f64).cos()], curvature: 1.0 }).unwrap();
        }
    }
}
