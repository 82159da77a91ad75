//! Regularized empirical risk over a labelled dataset.

use smoothconvex_core::linalg::{norm_sq, power_iteration};
use smoothconvex_core::{Error, Objective, Result, SeededRng, StochasticObjective};

use crate::constants::Constants;
use crate::dataset::LabeledDataset;

const CONSTRUCTION_POWER_STEPS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Loss {
    /// `ln(1 + exp(−y⟨w,x⟩))`
    Logistic,
    /// `(y − ⟨w,x⟩)²`
    LeastSquares,
}

impl Loss {
    /// Bound on the second derivative of the scalar loss in the margin.
    pub fn curvature(&self) -> f64 {
        match self {
            Loss::Logistic => 0.25,
            Loss::LeastSquares => 2.0,
        }
    }

    pub fn value(&self, z: f64, y: f64) -> f64 {
        match self {
            Loss::Logistic => softplus(-y * z),
            Loss::LeastSquares => (y - z).powi(2),
        }
    }

    /// Derivative with respect to the prediction `z = ⟨w,x⟩`.
    pub fn derivative(&self, z: f64, y: f64) -> f64 {
        match self {
            Loss::Logistic => -y * sigmoid(-y * z),
            Loss::LeastSquares => 2.0 * (z - y),
        }
    }
}

fn softplus(t: f64) -> f64 {
    if t > 0.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// `F(w) = (1/n) Σ ℓ(⟨w,xᵢ⟩, yᵢ) + (λ/2)‖w‖²`.
///
/// Stochastic components carry the regularizer, so `fᵢ(w) = ℓᵢ(w) + (λ/2)‖w‖²`
/// and `F` is their uniform average.
#[derive(Debug, Clone)]
pub struct FiniteSumProblem {
    pub data: LabeledDataset,
    pub loss: Loss,
    pub lambda: f64,
    pub constants: Constants,
}

impl FiniteSumProblem {
    pub fn new(data: LabeledDataset, loss: Loss, lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::Config(format!("regularizer must be finite and non-negative, got {lambda}")));
        }
        if data.n() == 0 {
            return Err(Error::Input("dataset has no examples".into()));
        }
        if data.labels.len() != data.n() {
            return Err(Error::Input("label count differs from row count".into()));
        }
        if loss == Loss::Logistic && !data.is_classification() {
            return Err(Error::Input("logistic loss needs labels in {-1, +1}".into()));
        }
        let mut p = FiniteSumProblem { data, loss, lambda, constants: Constants::default() };
        let (top, _) = p.gram_top_eigenvalue(CONSTRUCTION_POWER_STEPS, 0.0);
        let l = loss.curvature() * top + lambda;
        let row_max = p.data.rows.iter().map(|r| r.norm().powi(2)).fold(0.0, f64::max);
        let l_max = loss.curvature() * row_max + lambda;
        p.constants = Constants { l, l_max, lambda, g: None, sigma: None, kappa: kappa(l, lambda) };
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.data.n()
    }

    /// Largest eigenvalue of `(1/n) XᵀX`, with a convergence flag.
    pub fn gram_top_eigenvalue(&self, max_steps: usize, tol: f64) -> (f64, bool) {
        power_iteration(self.data.d, max_steps, tol, |v| self.data.gram_apply(v))
    }

    /// Unregularized loss of example `i`.
    pub fn loss_value(&self, i: usize, w: &[f64]) -> f64 {
        let r = &self.data.rows[i];
        self.loss.value(r.dot(w), self.data.labels[i])
    }

    pub fn loss_gradient(&self, i: usize, w: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.data.d];
        self.add_loss_gradient(i, w, 1.0, &mut g);
        g
    }

    fn add_loss_gradient(&self, i: usize, w: &[f64], scale: f64, out: &mut [f64]) {
        let r = &self.data.rows[i];
        let c = self.loss.derivative(r.dot(w), self.data.labels[i]);
        r.axpy_into(scale * c, out);
    }

    fn regularizer(&self, w: &[f64]) -> f64 {
        0.5 * self.lambda * norm_sq(w)
    }
}

pub(crate) fn kappa(l: f64, lambda: f64) -> f64 {
    if lambda > 0.0 {
        l / lambda
    } else {
        f64::INFINITY
    }
}

impl Objective for FiniteSumProblem {
    fn dim(&self) -> usize {
        self.data.d
    }

    fn value(&self, w: &[f64]) -> f64 {
        let s: f64 = (0..self.n()).map(|i| self.loss_value(i, w)).sum();
        s / self.n() as f64 + self.regularizer(w)
    }

    fn gradient(&self, w: &[f64]) -> Vec<f64> {
        let mut g: Vec<f64> = w.iter().map(|v| self.lambda * v).collect();
        let inv = 1.0 / self.n() as f64;
        for i in 0..self.n() {
            self.add_loss_gradient(i, w, inv, &mut g);
        }
        g
    }
}

impl StochasticObjective for FiniteSumProblem {
    fn n_components(&self) -> Option<usize> {
        Some(self.n())
    }

    fn sample_component(&self, rng: &mut SeededRng) -> usize {
        rng.index(self.n())
    }

    fn component_value(&self, i: usize, w: &[f64]) -> f64 {
        self.loss_value(i, w) + self.regularizer(w)
    }

    fn component_gradient(&self, i: usize, w: &[f64]) -> Vec<f64> {
        let mut g: Vec<f64> = w.iter().map(|v| self.lambda * v).collect();
        self.add_loss_gradient(i, w, 1.0, &mut g);
        g
    }
}

pub fn logistic_problem(data: LabeledDataset, lambda: f64) -> Result<FiniteSumProblem> {
    FiniteSumProblem::new(data, Loss::Logistic, lambda)
}

pub fn least_squares_problem(data: LabeledDataset, lambda: f64) -> Result<FiniteSumProblem> {
    FiniteSumProblem::new(data, Loss::LeastSquares, lambda)
}
