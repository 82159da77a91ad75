//! Smoothness, strong convexity, gradient bound and noise level.

use smoothconvex_core::linalg::{norm, norm_sq, Averager};
use smoothconvex_core::{SeededRng, StochasticObjective};

use crate::finite_sum::{kappa, FiniteSumProblem};

pub const MAX_POWER_STEPS: usize = 10_000;
pub const POWER_TOL: f64 = 1e-12;
pub const NOISE_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Constants {
    /// Smoothness of the averaged objective `F`.
    pub l: f64,
    /// Largest smoothness of a single component `fᵢ`.
    pub l_max: f64,
    /// Strong convexity modulus.
    pub lambda: f64,
    /// Sampled bound on `‖∇fᵢ(0)‖`.
    pub g: Option<f64>,
    /// Sampled standard deviation of `∇fᵢ(0)`.
    pub sigma: Option<f64>,
    pub kappa: f64,
}

/// Refine `L` with a converged power iteration and sample `G` and `σ` at the origin.
pub fn estimate_constants(problem: &FiniteSumProblem, rng: &mut SeededRng) -> Constants {
    let (top, converged) = problem.gram_top_eigenvalue(MAX_POWER_STEPS, POWER_TOL);
    if !converged {
        log::warn!("power iteration did not converge in {MAX_POWER_STEPS} steps; using best estimate {top}");
    }
    let l = problem.loss.curvature() * top + problem.lambda;
    let (g, var) = gradient_spread(problem, &vec![0.0; problem.data.d], NOISE_SAMPLES, rng);
    Constants { l, g: Some(g), sigma: Some(var.sqrt()), kappa: kappa(l, problem.lambda), ..problem.constants }
}

/// Largest sampled component gradient norm and empirical variance
/// `mean ‖∇fᵢ(w) − mean∇f‖²` over `samples` draws.
pub fn gradient_spread(obj: &dyn StochasticObjective, w: &[f64], samples: usize, rng: &mut SeededRng) -> (f64, f64) {
    let mut avg = Averager::new(w.len());
    let mut grads = Vec::with_capacity(samples);
    let mut g_max = 0.0f64;
    for _ in 0..samples {
        let i = obj.sample_component(rng);
        let g = obj.component_gradient(i, w);
        g_max = g_max.max(norm(&g));
        avg.push(&g);
        grads.push(g);
    }
    let mean = avg.mean();
    let var = grads
        .iter()
        .map(|g| norm_sq(&smoothconvex_core::linalg::sub(g, &mean)))
        .sum::<f64>()
        / samples.max(1) as f64;
    (g_max, var)
}
