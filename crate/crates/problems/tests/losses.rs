use nalgebra::DMatrix;
use proptest::prelude::*;
use smoothconvex_core::linalg::norm;
use smoothconvex_core::{Objective, SeededRng, StochasticObjective};
use smoothconvex_problems::{
    estimate_constants, least_squares_problem, logistic_problem, onedim_target_risk_problem, FiniteSumProblem,
    LabeledDataset, NoisyQuadratic,
};

fn gaussian_design(n: usize, d: usize, rng: &mut SeededRng) -> Vec<Vec<f64>> {
    (0..n).map(|_| rng.normal_vec(d)).collect()
}

fn problems(rng: &mut SeededRng) -> Vec<FiniteSumProblem> {
    let x = gaussian_design(30, 6, rng);
    let y_cls: Vec<f64> = (0..30).map(|_| if rng.bernoulli(0.5) { 1.0 } else { -1.0 }).collect();
    let y_reg: Vec<f64> = (0..30).map(|_| rng.normal()).collect();
    vec![
        logistic_problem(LabeledDataset::from_dense(&x, &y_cls), 0.1).unwrap(),
        least_squares_problem(LabeledDataset::from_dense(&x, &y_reg), 0.1).unwrap(),
    ]
}

/// Central differences with step `h = 1e-5 (1 + ‖w‖)`.
fn fd_gradient(f: impl Fn(&[f64]) -> f64, w: &[f64]) -> Vec<f64> {
    let h = 1e-5 * (1.0 + norm(w));
    (0..w.len())
        .map(|j| {
            let mut a = w.to_vec();
            let mut b = w.to_vec();
            a[j] += h;
            b[j] -= h;
            (f(&a) - f(&b)) / (2.0 * h)
        })
        .collect()
}

fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    norm(&diff) / norm(b).max(1.0)
}

#[test]
fn gradients_match_finite_differences() {
    let mut rng = SeededRng::new(11);
    let quad = NoisyQuadratic::random(6, 5, 0.3, 3.0, 1.0, &mut rng).unwrap();
    for p in problems(&mut rng) {
        for _ in 0..50 {
            let w: Vec<f64> = rng.normal_vec(6).into_iter().map(|v| 2.0 * v).collect();
            let e = rel_err(&p.gradient(&w), &fd_gradient(|v| p.value(v), &w));
            assert!(e <= 1e-6, "{:?} full: {e}", p.loss);
            let i = p.sample_component(&mut rng);
            let e = rel_err(&p.component_gradient(i, &w), &fd_gradient(|v| p.component_value(i, v), &w));
            assert!(e <= 1e-6, "{:?} component: {e}", p.loss);
        }
    }
    for _ in 0..50 {
        let w = rng.normal_vec(6);
        let i = quad.sample_component(&mut rng);
        assert!(rel_err(&quad.gradient(&w), &fd_gradient(|v| quad.value(v), &w)) <= 1e-6);
        assert!(rel_err(&quad.component_gradient(i, &w), &fd_gradient(|v| quad.component_value(i, v), &w)) <= 1e-6);
    }
    let one = onedim_target_risk_problem(0.05).unwrap();
    for k in 0..50 {
        let w = [-1.0 + 0.05 * k as f64];
        assert!(rel_err(&one.gradient(&w), &fd_gradient(|v| one.value(v), &w)) <= 1e-6);
    }
}

#[test]
fn stochastic_gradients_are_unbiased() {
    let mut rng = SeededRng::new(12);
    for p in problems(&mut rng) {
        let w = rng.normal_vec(6);
        let full = p.gradient(&w);
        let samples = 100_000;
        let mut sum = vec![0.0; 6];
        let mut sum_sq = vec![0.0; 6];
        for _ in 0..samples {
            let g = p.component_gradient(p.sample_component(&mut rng), &w);
            for j in 0..6 {
                sum[j] += g[j];
                sum_sq[j] += g[j] * g[j];
            }
        }
        for j in 0..6 {
            let mean = sum[j] / samples as f64;
            let var = sum_sq[j] / samples as f64 - mean * mean;
            let se = (var / samples as f64).sqrt();
            assert!((mean - full[j]).abs() <= 5.0 * se + 1e-12, "{:?} coord {j}", p.loss);
        }
    }
}

#[test]
fn smoothness_matches_dense_eigensolve() {
    let mut rng = SeededRng::new(13);
    let x = gaussian_design(20, 5, &mut rng);
    let y: Vec<f64> = (0..20).map(|_| rng.normal()).collect();
    let m = DMatrix::from_fn(20, 5, |i, j| x[i][j]);
    let gram = m.transpose() * &m / 20.0;
    let top = gram.symmetric_eigen().eigenvalues.max();

    let ls = least_squares_problem(LabeledDataset::from_dense(&x, &y), 0.0).unwrap();
    let c = estimate_constants(&ls, &mut rng);
    assert!((c.l - 2.0 * top).abs() <= 1e-2 * 2.0 * top);
    assert!((ls.constants.l - 2.0 * top).abs() <= 1e-2 * 2.0 * top);

    let labels: Vec<f64> = y.iter().map(|v| v.signum()).collect();
    let lg = logistic_problem(LabeledDataset::from_dense(&x, &labels), 0.5).unwrap();
    let c = estimate_constants(&lg, &mut rng);
    assert!((c.l - (top / 4.0 + 0.5)).abs() <= 1e-2 * (top / 4.0 + 0.5));
    assert_eq!(c.lambda, 0.5);
    assert!((c.kappa - c.l / 0.5).abs() < 1e-12);
}

#[test]
fn identity_and_single_example_smoothness() {
    // Every component (y − ⟨w, eᵢ⟩)² is 2-smooth.
    let eye: Vec<Vec<f64>> = (0..5).map(|i| (0..5).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let p = least_squares_problem(LabeledDataset::from_dense(&eye, &[0.0; 5]), 0.0).unwrap();
    assert_eq!(p.constants.l_max, 2.0);
    let single = least_squares_problem(LabeledDataset::from_dense(&[vec![1.0]], &[0.0]), 0.0).unwrap();
    assert!((estimate_constants(&single, &mut SeededRng::new(0)).l - 2.0).abs() < 1e-12);
    let lg = logistic_problem(LabeledDataset::from_dense(&[vec![0.6, 0.0, 0.8]], &[-1.0]), 0.0).unwrap();
    assert!((estimate_constants(&lg, &mut SeededRng::new(0)).l - 0.25).abs() < 1e-12);
}

#[test]
fn onedim_monte_carlo_risk_at_zero() {
    let p = onedim_target_risk_problem(0.05).unwrap();
    let mut rng = SeededRng::new(14);
    let n = 1_000_000;
    let (mut s, mut s2) = (0.0, 0.0);
    for _ in 0..n {
        let l = p.component_value(p.sample_component(&mut rng), &[0.0]);
        s += l;
        s2 += l * l;
    }
    let mean = s / n as f64;
    let se = ((s2 / n as f64 - mean * mean) / n as f64).sqrt();
    assert!((mean - p.expected_loss(0.0)).abs() <= 5.0 * se);
}

#[test]
fn seeded_generators_are_deterministic() {
    let a = LabeledDataset::synthetic_classification(50, 4, 0.1, &mut SeededRng::new(3));
    let b = LabeledDataset::synthetic_classification(50, 4, 0.1, &mut SeededRng::new(3));
    assert_eq!(a, b);
    assert!(a.is_classification());
    let r = LabeledDataset::synthetic_regression(40, 6, 2, 0.0, &mut SeededRng::new(4));
    assert_eq!(r, LabeledDataset::synthetic_regression(40, 6, 2, 0.0, &mut SeededRng::new(4)));
    let m = DMatrix::from_fn(40, 6, |i, j| r.rows[i].to_dense(6)[j]);
    let sv = m.singular_values();
    assert_eq!(sv.iter().filter(|s| **s > 1e-9).count(), 2);
}

proptest! {
    #[test]
    fn objectives_are_convex_on_segments(seed in 0u64..10_000, t in 0.0f64..1.0) {
        let mut rng = SeededRng::new(seed);
        for p in problems(&mut rng) {
            let a: Vec<f64> = rng.normal_vec(6).into_iter().map(|v| 3.0 * v).collect();
            let b: Vec<f64> = rng.normal_vec(6).into_iter().map(|v| 3.0 * v).collect();
            let mid: Vec<f64> = a.iter().zip(&b).map(|(x, y)| 0.5 * (x + y)).collect();
            prop_assert!(p.value(&mid) <= 0.5 * (p.value(&a) + p.value(&b)) + 1e-12);
            let m: Vec<f64> = a.iter().zip(&b).map(|(x, y)| t * x + (1.0 - t) * y).collect();
            prop_assert!(p.value(&m) <= t * p.value(&a) + (1.0 - t) * p.value(&b) + 1e-12);
        }
    }
}
