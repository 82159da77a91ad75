use smoothconvex_core::linalg::{axpy, step};
use smoothconvex_core::{Domain, Error, Result};

use crate::learner::Learner;
use crate::loss::RoundLoss;

/// Improved follow-the-regularized-leader.
///
/// The decision is a prox step from the searching point `z_{t−1}` with the
/// stale gradient `∇f_{t−1}(z_{t−1})`; the searching point solves
/// `argmin_W ⟨x, Σ_τ ∇f_τ(z_{τ−1})⟩ + (L/2η)‖x‖² = Π_W(−(η/L) Σ)`.
#[derive(Debug, Clone)]
pub struct Iftrl {
    domain: Domain,
    ratio: f64,
    z: Vec<f64>,
    sum: Vec<f64>,
    stale: Vec<f64>,
    x: Vec<f64>,
}

impl Iftrl {
    pub fn new(domain: Domain, d: usize, l: f64, eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(Error::Config(format!("eta must lie in (0, 1], got {eta}")));
        }
        if !(l > 0.0) {
            return Err(Error::Config(format!("smoothness must be positive, got {l}")));
        }
        if matches!(domain, Domain::Unconstrained) {
            return Err(Error::Unsupported("IFTRL needs a bounded domain".into()));
        }
        let z = domain.project(&vec![0.0; d])?;
        Ok(Iftrl { domain, ratio: eta / l, x: z.clone(), z, sum: vec![0.0; d], stale: vec![0.0; d] })
    }

    /// `min(1, L/√EGV)`
    pub fn theorem_eta(l: f64, egv: f64) -> f64 {
        if egv > 0.0 {
            (l / egv.sqrt()).min(1.0)
        } else {
            1.0
        }
    }

    /// Regret guaranteed with [`Iftrl::theorem_eta`]: `max(L, √EGV)`.
    pub fn regret_bound(l: f64, egv: f64) -> f64 {
        l.max(egv.sqrt())
    }
}

impl Learner for Iftrl {
    fn predict(&mut self) -> Vec<f64> {
        // Domains are checked in `new`, so projection cannot fail here.
        self.x = self.domain.project(&step(&self.z, self.ratio, &self.stale)).expect("projection");
        self.x.clone()
    }

    fn observe(&mut self, loss: &RoundLoss) -> Result<()> {
        axpy(1.0, &loss.gradient(&self.z), &mut self.sum);
        let target: Vec<f64> = self.sum.iter().map(|s| -self.ratio * s).collect();
        self.z = self.domain.project(&target)?;
        self.stale = loss.gradient(&self.z);
        Ok(())
    }

    fn search_point(&self) -> Vec<f64> {
        self.z.clone()
    }
}
