use smoothconvex_core::linalg::{add, dot, step};
use smoothconvex_core::{Domain, Error, Result};

use crate::learner::Learner;
use crate::loss::{DualDomain, MaxStructure, RoundLoss};

/// Primal-dual mirror prox for losses with an explicit max structure
/// `f_t(x) = f̂_t(x) + max_{u ∈ Q} ⟨A_t x, u⟩ − φ̂_t(u)`, Euclidean on both sides.
///
/// Each round makes four prox steps: the played pair `(x_t, u_t)` from the
/// searching pair `(z_{t−1}, v_{t−1})` with round `t − 1`'s partial
/// gradients, then the searching pair with round `t`'s.
#[derive(Debug, Clone)]
pub struct ExplicitMaxPd {
    domain: Domain,
    dual: DualDomain,
    primal_ratio: f64,
    dual_ratio: f64,
    x: Vec<f64>,
    z: Vec<f64>,
    u: Vec<f64>,
    v: Vec<f64>,
    prev: MaxStructure,
}

impl ExplicitMaxPd {
    /// `l1` and `l2` scale the primal and dual steps (`η/L₁`, `η/L₂`).
    pub fn new(domain: Domain, dual: DualDomain, d: usize, k: usize, l1: f64, l2: f64, eta: f64) -> Result<Self> {
        if !(l1 > 0.0 && l2 > 0.0 && eta > 0.0) {
            return Err(Error::Config(format!("L1, L2 and eta must be positive, got {l1}, {l2}, {eta}")));
        }
        if k == 0 {
            return Err(Error::Config("dual dimension must be positive".into()));
        }
        let z = domain.project(&vec![0.0; d])?;
        let v = dual.center(k);
        let prev = MaxStructure { smooth: vec![0.0; d], a: vec![vec![0.0; d]; k], b: vec![0.0; k], dual };
        Ok(ExplicitMaxPd {
            domain,
            dual,
            primal_ratio: eta / l1,
            dual_ratio: eta / l2,
            x: z.clone(),
            z,
            u: v.clone(),
            v,
            prev,
        })
    }

    /// `min(√(M₁+M₂)/(2√EGV), √α/(4√(σ² + L²)))`
    pub fn theorem_eta(m1: f64, m2: f64, egv: f64, sigma: f64, l: f64, alpha: f64) -> f64 {
        let cap = alpha.sqrt() / (4.0 * (sigma * sigma + l * l).sqrt());
        if egv > 0.0 {
            ((m1 + m2).sqrt() / (2.0 * egv.sqrt())).min(cap)
        } else {
            cap
        }
    }

    pub fn dual_point(&self) -> &[f64] {
        &self.u
    }

    fn dual_step(&self, from: &[f64], m: &MaxStructure, x: &[f64]) -> Vec<f64> {
        // ∇_u of ⟨A x, u⟩ − φ̂(u) is A x + b.
        let g: Vec<f64> = m.apply(x).iter().zip(&m.b).map(|(ax, b)| -(ax + b)).collect();
        self.dual.project(&step(from, self.dual_ratio, &g))
    }

    fn primal_step(&self, from: &[f64], m: &MaxStructure, u: &[f64]) -> Result<Vec<f64>> {
        let g = add(&m.smooth, &m.apply_t(u));
        self.domain.project(&step(from, self.primal_ratio, &g))
    }
}

impl Learner for ExplicitMaxPd {
    fn predict(&mut self) -> Vec<f64> {
        let u = self.dual_step(&self.v, &self.prev, &self.x);
        self.x = self.primal_step(&self.z, &self.prev, &self.u).expect("domain projection");
        self.u = u;
        self.x.clone()
    }

    fn observe(&mut self, loss: &RoundLoss) -> Result<()> {
        let m = loss
            .max_structure()
            .ok_or_else(|| Error::Input("loss has no max structure".into()))?;
        m.validate()?;
        if m.smooth.len() != self.z.len() || m.a.len() != self.v.len() || m.dual != self.dual {
            return Err(Error::Input(format!(
                "max structure is {}x{} over {:?}, learner expects {}x{} over {:?}",
                m.a.len(),
                m.smooth.len(),
                m.dual,
                self.v.len(),
                self.z.len(),
                self.dual
            )));
        }
        self.v = self.dual_step(&self.v, &m, &self.x);
        self.z = self.primal_step(&self.z, &m, &self.u)?;
        self.prev = m;
        Ok(())
    }

    fn search_point(&self) -> Vec<f64> {
        self.z.clone()
    }
}

/// Mistake-driven primal-dual prox for online classification with the hinge
/// loss `max_{α ∈ [0,1]} α(1 − y⟨w, x⟩)` over `‖w‖ ≤ R`.
///
/// Only rounds with `y⟨w_t, x_t⟩ ≤ 0` update the state.
#[derive(Debug, Clone)]
pub struct HingePd {
    radius: f64,
    eta: f64,
    w: Vec<f64>,
    w_aux: Vec<f64>,
    alpha: f64,
    beta: f64,
    mistakes: usize,
}

impl HingePd {
    pub fn new(d: usize, radius: f64, eta: f64) -> Result<Self> {
        if !(radius > 0.0 && eta > 0.0) {
            return Err(Error::Config(format!("R and eta must be positive, got {radius}, {eta}")));
        }
        Ok(HingePd { radius, eta, w: vec![0.0; d], w_aux: vec![0.0; d], alpha: 0.0, beta: 0.0, mistakes: 0 })
    }

    /// Step size covered by the mistake bound, `1/(2√2)`.
    pub fn max_eta() -> f64 {
        1.0 / (2.0 * 2f64.sqrt())
    }

    /// `√2 (R² + 1) max(2, √EGV)`, the mistake budget beyond the hinge loss
    /// of the comparator.
    pub fn mistake_slack(radius: f64, egv: f64) -> f64 {
        2f64.sqrt() * (radius * radius + 1.0) * egv.sqrt().max(2.0)
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn mistakes(&self) -> usize {
        self.mistakes
    }

    /// Predict on `x`, reveal `y ∈ {−1, +1}` and update on a mistake.
    /// Returns whether the prediction was a mistake.
    pub fn round(&mut self, x: &[f64], y: f64) -> Result<bool> {
        if y != 1.0 && y != -1.0 {
            return Err(Error::Input(format!("label must be +1 or -1, got {y}")));
        }
        let yx: Vec<f64> = x.iter().map(|v| y * v).collect();
        self.update(&yx)
    }

    fn update(&mut self, yx: &[f64]) -> Result<bool> {
        if yx.len() != self.w.len() {
            return Err(Error::Input(format!("example has dimension {}, model {}", yx.len(), self.w.len())));
        }
        let margin = dot(&self.w, yx);
        if margin > 0.0 {
            return Ok(false);
        }
        self.mistakes += 1;
        let slack = self.eta * (1.0 - margin);
        let centre = vec![0.0; yx.len()];
        self.beta = (self.beta + slack).clamp(0.0, 1.0);
        let mut w_aux = self.w_aux.clone();
        smoothconvex_core::linalg::axpy(self.eta * self.alpha, yx, &mut w_aux);
        self.w_aux = smoothconvex_core::domain::project_ball(&w_aux, &centre, self.radius);
        let alpha_next = (self.beta + slack).clamp(0.0, 1.0);
        let mut w_next = self.w_aux.clone();
        smoothconvex_core::linalg::axpy(self.eta * self.alpha, yx, &mut w_next);
        self.w = smoothconvex_core::domain::project_ball(&w_next, &centre, self.radius);
        self.alpha = alpha_next;
        Ok(true)
    }
}

impl Learner for HingePd {
    fn predict(&mut self) -> Vec<f64> {
        self.w.clone()
    }

    /// Expects [`RoundLoss::Hinge`] carrying `y x`.
    fn observe(&mut self, loss: &RoundLoss) -> Result<()> {
        match loss {
            RoundLoss::Hinge { yx } => self.update(yx).map(|_| ()),
            other => Err(Error::Input(format!("hinge learner got {other:?}"))),
        }
    }

    fn search_point(&self) -> Vec<f64> {
        self.w_aux.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn confident_correct_prediction_is_ignored() {
        let mut h = HingePd::new(2, 1.0, 0.1).unwrap();
        h.w = vec![0.8, 0.0];
        assert!(!h.round(&[1.0, 0.0], 1.0).unwrap());
        assert_eq!(h.weights(), &[0.8, 0.0]);
        assert_eq!((h.alpha(), h.beta(), h.mistakes()), (0.0, 0.0, 0));
    }

    #[test]
    fn first_mistake_hand_recursion() {
        let mut h = HingePd::new(2, 1.0, 0.1).unwrap();
        assert!(h.round(&[1.0, 0.0], 1.0).unwrap());
        assert!((h.beta() - 0.1).abs() < 1e-15);
        assert!((h.alpha() - 0.2).abs() < 1e-15);
        // α₁ = 0, so neither primal point moves.
        assert_eq!(h.weights(), &[0.0, 0.0]);
        assert!(h.round(&[1.0, 0.0], 1.0).unwrap());
        assert!((h.weights()[0] - 0.04).abs() < 1e-15);
    }

    #[test]
    fn zero_structure_leaves_state() {
        let mut p = ExplicitMaxPd::new(Domain::ball(1.0).unwrap(), DualDomain::UnitBox, 2, 1, 1.0, 1.0, 0.5).unwrap();
        for _ in 0..5 {
            assert_eq!(p.predict(), vec![0.0, 0.0]);
            p.observe(&RoundLoss::Zero { d: 2 }).unwrap();
        }
        assert_eq!(p.dual_point(), &[0.0]);
    }

    #[test]
    fn hinge_through_general_form() {
        let mut p = ExplicitMaxPd::new(Domain::ball(1.0).unwrap(), DualDomain::UnitBox, 2, 1, 1.0, 1.0, 0.1).unwrap();
        p.predict();
        p.observe(&RoundLoss::Hinge { yx: vec![1.0, 0.0] }).unwrap();
        // v₁ = Π(0 + 0.1(−⟨yx, 0⟩ + 1)) = 0.1 and z₁ = 0 since u₁ = 0;
        // then u₂ = Π(v₁ + 0.1) = 0.2.
        p.predict();
        assert!((p.dual_point()[0] - 0.2).abs() < 1e-15);
        assert_eq!(p.search_point(), vec![0.0, 0.0]);
    }

    #[test]
    fn rejects_shape_mismatch() {
        let mut p = ExplicitMaxPd::new(Domain::ball(1.0).unwrap(), DualDomain::UnitBox, 2, 2, 1.0, 1.0, 0.1).unwrap();
        p.predict();
        assert!(matches!(p.observe(&RoundLoss::Hinge { yx: vec![1.0, 0.0] }), Err(Error::Input(_))));
    }
}
