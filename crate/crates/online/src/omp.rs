use smoothconvex_core::linalg::step;
use smoothconvex_core::{prox_step, Domain, Error, MirrorMap, Result};

use crate::learner::Learner;
use crate::loss::RoundLoss;

/// Minimizer of the mirror potential over the domain.
fn potential_center(map: MirrorMap, domain: &Domain, d: usize) -> Result<Vec<f64>> {
    match (map, domain) {
        (MirrorMap::Euclidean, _) => domain.project(&vec![0.0; d]),
        (MirrorMap::Entropy, Domain::Simplex { .. }) => Ok(vec![1.0 / d as f64; d]),
        (MirrorMap::Entropy, Domain::Box { lo, hi }) if lo.iter().all(|l| *l > 0.0) => {
            Ok(lo.iter().zip(hi).map(|(l, h)| (-1.0f64).exp().clamp(*l, *h)).collect())
        }
        (MirrorMap::Entropy, other) => Err(Error::Unsupported(format!("entropy map over {} domain", other.kind_name()))),
    }
}

/// Bregman projection `argmin_{x ∈ W} B(x, z)`.
fn bregman_project(map: MirrorMap, domain: &Domain, z: &[f64]) -> Result<Vec<f64>> {
    match (map, domain) {
        (MirrorMap::Euclidean, _) => domain.project(z),
        (MirrorMap::Entropy, Domain::Simplex { .. }) => {
            let s: f64 = z.iter().sum();
            Ok(z.iter().map(|v| v / s).collect())
        }
        (MirrorMap::Entropy, Domain::Box { lo, hi }) => {
            Ok(z.iter().zip(lo.iter().zip(hi)).map(|(v, (l, h))| v.clamp(*l, *h)).collect())
        }
        (MirrorMap::Entropy, other) => Err(Error::Unsupported(format!("entropy map over {} domain", other.kind_name()))),
    }
}

fn check_rate(l: f64, eta: f64) -> Result<()> {
    if !(l > 0.0) || !(eta > 0.0) {
        return Err(Error::Config(format!("L and eta must be positive, got {l}, {eta}")));
    }
    Ok(())
}

/// Online mirror prox: two prox steps per round from the same searching
/// point, one with the previous round's gradient and one with the new one.
#[derive(Debug, Clone)]
pub struct Omp {
    domain: Domain,
    map: MirrorMap,
    ratio: f64,
    z: Vec<f64>,
    x: Vec<f64>,
    g_prev: Vec<f64>,
    gradient_evals: u64,
}

impl Omp {
    pub fn new(domain: Domain, map: MirrorMap, d: usize, l: f64, eta: f64) -> Result<Self> {
        check_rate(l, eta)?;
        let z = potential_center(map, &domain, d)?;
        Ok(Omp { domain, map, ratio: eta / l, x: z.clone(), z, g_prev: vec![0.0; d], gradient_evals: 0 })
    }

    /// Euclidean map.
    pub fn euclidean(domain: Domain, d: usize, l: f64, eta: f64) -> Result<Self> {
        Self::new(domain, MirrorMap::Euclidean, d, l, eta)
    }

    /// `½ min(1/√2, L/√EGV)`
    pub fn theorem_eta(l: f64, egv: f64) -> f64 {
        let cap = std::f64::consts::FRAC_1_SQRT_2;
        if egv > 0.0 {
            0.5 * cap.min(l / egv.sqrt())
        } else {
            0.5 * cap
        }
    }

    /// `2 max(√2 L, √EGV)`
    pub fn regret_bound(l: f64, egv: f64) -> f64 {
        2.0 * (2f64.sqrt() * l).max(egv.sqrt())
    }

    /// Step for a map that is `alpha`-strongly convex with `R = √(2(maxΦ − minΦ))`:
    /// `½ min(√α/√2, L R/√EGV)`.
    pub fn theorem_eta_general(alpha: f64, l: f64, r: f64, egv: f64) -> f64 {
        let cap = (alpha / 2.0).sqrt();
        if egv > 0.0 {
            0.5 * cap.min(l * r / egv.sqrt())
        } else {
            0.5 * cap
        }
    }

    /// `2R max(√2 L R/√α, √EGV)`
    pub fn regret_bound_general(alpha: f64, l: f64, r: f64, egv: f64) -> f64 {
        2.0 * r * (2f64.sqrt() * l * r / alpha.sqrt()).max(egv.sqrt())
    }

    /// `R` for the Euclidean map on a centred ball of radius `radius`, where
    /// `maxΦ − minΦ = radius²/2`.
    pub fn euclidean_ball_r(radius: f64) -> f64 {
        radius
    }

    pub fn gradient_evals(&self) -> u64 {
        self.gradient_evals
    }
}

impl Learner for Omp {
    fn predict(&mut self) -> Vec<f64> {
        self.x = prox_step(self.map, &self.domain, &self.z, &self.g_prev, self.ratio).expect("domain checked in new");
        self.x.clone()
    }

    fn observe(&mut self, loss: &RoundLoss) -> Result<()> {
        let g = loss.gradient(&self.x);
        self.gradient_evals += 1;
        self.z = prox_step(self.map, &self.domain, &self.z, &g, self.ratio)?;
        self.g_prev = g;
        Ok(())
    }

    fn search_point(&self) -> Vec<f64> {
        self.z.clone()
    }
}

/// Prediction with expert advice: entropic OMP on the simplex with
/// multiplicative updates `w ∝ z exp(−(η/L) f)`.
#[derive(Debug, Clone)]
pub struct ExpertOmp {
    inner: Omp,
}

impl ExpertOmp {
    pub fn new(m: usize, eta_over_l: f64) -> Result<Self> {
        Ok(ExpertOmp { inner: Omp::new(Domain::simplex(m)?, MirrorMap::Entropy, m, 1.0, eta_over_l)? })
    }

    /// `√(ln m / EGV_∞)` with `L = 1`.
    pub fn theorem_eta(m: usize, egv_inf: f64) -> f64 {
        ((m as f64).ln() / egv_inf).sqrt()
    }

    /// `√(2 EGV_∞ ln m)`
    pub fn regret_bound(m: usize, egv_inf: f64) -> f64 {
        (2.0 * egv_inf * (m as f64).ln()).sqrt()
    }
}

impl Learner for ExpertOmp {
    fn predict(&mut self) -> Vec<f64> {
        self.inner.predict()
    }

    fn observe(&mut self, loss: &RoundLoss) -> Result<()> {
        let f = loss.linear_form().ok_or_else(|| Error::Input("expert losses must be linear".into()))?;
        if let Some(v) = f.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return Err(Error::Input(format!("expert losses must be non-negative, got {v}")));
        }
        self.inner.observe(loss)
    }

    fn search_point(&self) -> Vec<f64> {
        self.inner.search_point()
    }
}

/// `sign(zᵢ) max(|zᵢ| − τ, 0)`
pub fn soft_threshold(z: &[f64], tau: f64) -> Vec<f64> {
    z.iter().map(|v| v.signum() * (v.abs() - tau).max(0.0)).collect()
}

/// Mirror prox with a single prox step per round: the searching point is
/// recovered in closed form, `∇Φ(z_t) = ∇Φ(x_t) + (η/L)(∇f_{t−1}(x_{t−1}) − ∇f_t(x_t))`.
#[derive(Debug, Clone)]
pub struct SimplifiedOmp {
    domain: Domain,
    map: MirrorMap,
    ratio: f64,
    /// Weight of a fixed `λ‖x‖₁` term in the decision step (Euclidean only).
    l1: f64,
    project_search: bool,
    z: Vec<f64>,
    x: Vec<f64>,
    g_prev: Vec<f64>,
}

impl SimplifiedOmp {
    pub fn new(domain: Domain, map: MirrorMap, d: usize, l: f64, eta: f64, project_search: bool) -> Result<Self> {
        check_rate(l, eta)?;
        let z = potential_center(map, &domain, d)?;
        Ok(SimplifiedOmp { domain, map, ratio: eta / l, l1: 0.0, project_search, x: z.clone(), z, g_prev: vec![0.0; d] })
    }
}

impl Learner for SimplifiedOmp {
    fn predict(&mut self) -> Vec<f64> {
        self.x = if self.l1 > 0.0 {
            let shrunk = soft_threshold(&step(&self.z, self.ratio, &self.g_prev), self.ratio * self.l1);
            self.domain.project(&shrunk)
        } else {
            prox_step(self.map, &self.domain, &self.z, &self.g_prev, self.ratio)
        }
        .expect("domain checked in new");
        self.x.clone()
    }

    fn observe(&mut self, loss: &RoundLoss) -> Result<()> {
        let g = loss.gradient(&self.x);
        let mut theta = self.map.gradient(&self.x);
        for ((t, gp), gn) in theta.iter_mut().zip(&self.g_prev).zip(&g) {
            *t += self.ratio * (gp - gn);
        }
        let z = self.map.inverse_gradient(&theta);
        self.z = if self.project_search { bregman_project(self.map, &self.domain, &z)? } else { z };
        self.g_prev = g;
        Ok(())
    }

    fn search_point(&self) -> Vec<f64> {
        self.z.clone()
    }
}

/// Simplified mirror prox for `f_t + λ‖x‖₁`: the decision step soft-thresholds
/// the Euclidean prox point and then projects onto the domain.
#[derive(Debug, Clone)]
pub struct CompositeOmp {
    inner: SimplifiedOmp,
}

impl CompositeOmp {
    pub fn new(domain: Domain, map: MirrorMap, d: usize, l: f64, eta: f64, lambda: f64) -> Result<Self> {
        if map != MirrorMap::Euclidean && lambda > 0.0 {
            return Err(Error::Unsupported("composite l1 step needs the Euclidean map".into()));
        }
        if !(lambda >= 0.0) {
            return Err(Error::Config(format!("l1 weight must be non-negative, got {lambda}")));
        }
        let mut inner = SimplifiedOmp::new(domain, map, d, l, eta, true)?;
        inner.l1 = lambda;
        Ok(CompositeOmp { inner })
    }
}

impl Learner for CompositeOmp {
    fn predict(&mut self) -> Vec<f64> {
        self.inner.predict()
    }

    fn observe(&mut self, loss: &RoundLoss) -> Result<()> {
        self.inner.observe(loss)
    }

    fn search_point(&self) -> Vec<f64> {
        self.inner.search_point()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learner::play;

    #[test]
    fn zero_losses_keep_both_points_at_start() {
        let mut l = Omp::euclidean(Domain::ball(1.0).unwrap(), 3, 1.0, 0.3).unwrap();
        let run = play(&mut l, 10, |_, _| RoundLoss::Zero { d: 3 }).unwrap();
        assert!(run.decisions.iter().all(|x| x == &vec![0.0; 3]));
        assert_eq!(l.search_point(), vec![0.0; 3]);
        assert_eq!(l.gradient_evals(), 10);
    }

    #[test]
    fn entropic_single_round() {
        let mut l = Omp::new(Domain::simplex(3).unwrap(), MirrorMap::Entropy, 3, 1.0, 1.0).unwrap();
        l.predict();
        l.observe(&RoundLoss::Linear { f: vec![1.0, 0.0, 0.0] }).unwrap();
        let z = l.search_point();
        let e = (-1.0f64).exp();
        let want = [e / (e + 2.0), 1.0 / (e + 2.0), 1.0 / (e + 2.0)];
        for (a, b) in z.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn expert_closed_form() {
        let mut l = ExpertOmp::new(2, 2f64.ln()).unwrap();
        assert_eq!(l.predict(), vec![0.5, 0.5]);
        l.observe(&RoundLoss::Linear { f: vec![1.0, 0.0] }).unwrap();
        let z = l.search_point();
        assert!((z[0] - 1.0 / 3.0).abs() < 1e-15 && (z[1] - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn expert_uniform_loss_changes_nothing() {
        let mut l = ExpertOmp::new(4, 0.7).unwrap();
        let run = play(&mut l, 5, |_, _| RoundLoss::Linear { f: vec![0.4; 4] }).unwrap();
        for x in &run.decisions {
            for v in x {
                assert!((v - 0.25).abs() < 1e-15);
            }
            assert!((x.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn expert_rejects_negative_loss() {
        let mut l = ExpertOmp::new(2, 0.5).unwrap();
        l.predict();
        assert!(matches!(l.observe(&RoundLoss::Linear { f: vec![-0.1, 0.0] }), Err(Error::Input(_))));
    }

    #[test]
    fn soft_threshold_example() {
        assert_eq!(soft_threshold(&[0.3, -2.0], 0.5), vec![0.0, -1.5]);
    }

    #[test]
    fn composite_without_l1_is_simplified() {
        let dom = Domain::ball(2.0).unwrap();
        let mut a = CompositeOmp::new(dom.clone(), MirrorMap::Euclidean, 2, 1.0, 0.4, 0.0).unwrap();
        let mut b = SimplifiedOmp::new(dom, MirrorMap::Euclidean, 2, 1.0, 0.4, true).unwrap();
        let loss = |t: usize, _: &[f64]| RoundLoss::Quadratic { center: vec![(t as f64).sin(), 1.5], curvature: 1.0 };
        assert_eq!(play(&mut a, 40, loss).unwrap(), play(&mut b, 40, loss).unwrap());
    }

    #[test]
    fn composite_rejects_entropy() {
        let r = CompositeOmp::new(Domain::simplex(2).unwrap(), MirrorMap::Entropy, 2, 1.0, 0.4, 0.1);
        assert!(matches!(r, Err(Error::Unsupported(_))));
    }
}
