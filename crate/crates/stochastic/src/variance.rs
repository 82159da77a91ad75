//! Variance of plain and mixed stochastic gradients.

use smoothconvex_core::linalg::{axpy, dist_sq, sub};
use smoothconvex_core::{SeededRng, StochasticObjective};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceProbe {
    /// `E‖∇f_i(w) − ∇F(w)‖²`
    pub sgd_var: f64,
    /// `E‖(∇f_i(w) − ∇f_i(c)) − (∇F(w) − ∇F(c))‖²`
    pub mixed_var: f64,
}

fn centered_second_moment(vs: &[Vec<f64>], unbiased: bool) -> f64 {
    let n = vs.len();
    let mut mean = vec![0.0; vs[0].len()];
    for v in vs {
        axpy(1.0 / n as f64, v, &mut mean);
    }
    let s: f64 = vs.iter().map(|v| dist_sq(v, &mean)).sum();
    if unbiased && n > 1 {
        s / (n - 1) as f64
    } else {
        s / n as f64
    }
}

/// Exact over all components for finite sums; otherwise a `samples`-draw
/// Monte-Carlo estimate.
pub fn gradient_variance_probe(
    obj: &dyn StochasticObjective,
    point: &[f64],
    center: &[f64],
    samples: usize,
    rng: &mut SeededRng,
) -> VarianceProbe {
    let (ids, exact): (Vec<usize>, bool) = match obj.n_components() {
        Some(n) => ((0..n).collect(), true),
        None => ((0..samples.max(2)).map(|_| obj.sample_component(rng)).collect(), false),
    };
    let plain: Vec<Vec<f64>> = ids.iter().map(|&i| obj.component_gradient(i, point)).collect();
    let mixed: Vec<Vec<f64>> = ids.iter().zip(&plain).map(|(&i, g)| sub(g, &obj.component_gradient(i, center))).collect();
    VarianceProbe { sgd_var: centered_second_moment(&plain, !exact), mixed_var: centered_second_moment(&mixed, !exact) }
}
