//! One-dimensional regression where rare large targets make the risk hard to
//! certify: `ℓ(w) = (w − b)²` with `b = 1` w.p. `δ²` and `b = δ` otherwise.

use smoothconvex_core::{Error, Objective, Result, SeededRng, StochasticObjective};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneDimTargetRisk {
    pub delta: f64,
}

impl OneDimTargetRisk {
    /// Probability of the rare target `b = 1`.
    pub fn p_rare(&self) -> f64 {
        self.delta * self.delta
    }

    /// Target of component `i` (0 is the common target `δ`, 1 the rare `1`).
    pub fn target(&self, i: usize) -> f64 {
        if i == 1 {
            1.0
        } else {
            self.delta
        }
    }

    pub fn expected_loss(&self, w: f64) -> f64 {
        let p = self.p_rare();
        p * (w - 1.0).powi(2) + (1.0 - p) * (w - self.delta).powi(2)
    }

    pub fn minimizer(&self) -> f64 {
        let p = self.p_rare();
        p + (1.0 - p) * self.delta
    }

    /// Optimal risk, the variance of `b`.
    pub fn eps_opt(&self) -> f64 {
        let p = self.p_rare();
        p * (1.0 - p) * (1.0 - self.delta).powi(2)
    }
}

pub fn onedim_target_risk_problem(delta: f64) -> Result<OneDimTargetRisk> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Config(format!("delta must lie in (0, 1), got {delta}")));
    }
    Ok(OneDimTargetRisk { delta })
}

impl Objective for OneDimTargetRisk {
    fn dim(&self) -> usize {
        1
    }

    fn value(&self, w: &[f64]) -> f64 {
        self.expected_loss(w[0])
    }

    fn gradient(&self, w: &[f64]) -> Vec<f64> {
        vec![2.0 * (w[0] - self.minimizer())]
    }
}

impl StochasticObjective for OneDimTargetRisk {
    fn n_components(&self) -> Option<usize> {
        None
    }

    fn sample_component(&self, rng: &mut SeededRng) -> usize {
        rng.bernoulli(self.p_rare()) as usize
    }

    fn component_value(&self, i: usize, w: &[f64]) -> f64 {
        (w[0] - self.target(i)).powi(2)
    }

    fn component_gradient(&self, i: usize, w: &[f64]) -> Vec<f64> {
        vec![2.0 * (w[0] - self.target(i))]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn risk_at_zero() {
        let p = onedim_target_risk_problem(0.05).unwrap();
        let d2 = 0.0025;
        assert!((p.expected_loss(0.0) - (d2 + (1.0 - d2) * d2)).abs() < 1e-16);
        assert!(p.expected_loss(0.0) <= 2.0 * d2);
    }

    #[test]
    fn minimizer_and_optimum() {
        let p = onedim_target_risk_problem(0.05).unwrap();
        assert!((p.minimizer() - 0.052375).abs() < 1e-15);
        assert!((p.expected_loss(p.minimizer()) - p.eps_opt()).abs() < 1e-15);
        assert!(p.gradient(&[p.minimizer()])[0].abs() < 1e-15);
        for w in [0.0, 0.05, 0.06, 1.0] {
            assert!(p.expected_loss(w) >= p.eps_opt());
        }
    }

    #[test]
    fn rejects_bad_delta() {
        for d in [0.0, 1.0, -0.1, f64::NAN] {
            assert!(matches!(onedim_target_risk_problem(d), Err(Error::Config(_))));
        }
    }
}
