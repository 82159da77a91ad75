//! Strongly convex quadratic with zero-mean linear noise in its components.

use smoothconvex_core::linalg::{dot, norm_sq, sub, SymMat};
use smoothconvex_core::{Error, Objective, Result, SeededRng, StochasticObjective};

use crate::constants::Constants;
use crate::finite_sum::kappa;

/// `F(w) = ½(w − c)ᵀA(w − c)` as the average of
/// `fᵢ(w) = ½(w − c)ᵀA(w − c) + ⟨ξᵢ, w⟩` with `Σ ξᵢ = 0`.
#[derive(Debug, Clone)]
pub struct NoisyQuadratic {
    pub a: SymMat,
    pub center: Vec<f64>,
    pub noise: Vec<Vec<f64>>,
    pub constants: Constants,
}

impl NoisyQuadratic {
    /// Builds the problem from eigen-pairs of `A`; `noise` is re-centred
    /// so the components average exactly to `F`.
    pub fn new(eigenvalues: &[f64], basis: &[Vec<f64>], center: Vec<f64>, mut noise: Vec<Vec<f64>>) -> Result<Self> {
        let d = center.len();
        if eigenvalues.len() != d || basis.len() != d || basis.iter().any(|q| q.len() != d) {
            return Err(Error::Input("eigen-pairs do not match the dimension".into()));
        }
        if eigenvalues.iter().any(|l| !(*l > 0.0)) {
            return Err(Error::Config("eigenvalues must be positive".into()));
        }
        if noise.is_empty() || noise.iter().any(|x| x.len() != d) {
            return Err(Error::Input("need at least one noise vector of matching dimension".into()));
        }
        let mut a = SymMat::scaled_identity(d, 0.0);
        for (l, q) in eigenvalues.iter().zip(basis) {
            a.rank1_update(*l / norm_sq(q), q);
        }
        let n = noise.len() as f64;
        let mean: Vec<f64> = (0..d).map(|j| noise.iter().map(|x| x[j]).sum::<f64>() / n).collect();
        for x in &mut noise {
            for (v, m) in x.iter_mut().zip(&mean) {
                *v -= m;
            }
        }
        let l = eigenvalues.iter().cloned().fold(0.0, f64::max);
        let lambda = eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        let constants = Constants { l, l_max: l, lambda, g: None, sigma: None, kappa: kappa(l, lambda) };
        Ok(NoisyQuadratic { a, center, noise, constants })
    }

    /// Eigenvalues spread log-uniformly over `[lambda, l]` in a random
    /// orthonormal basis, with `n` Gaussian noise vectors of scale `sigma`.
    pub fn random(d: usize, n: usize, lambda: f64, l: f64, sigma: f64, rng: &mut SeededRng) -> Result<Self> {
        if !(lambda > 0.0 && l >= lambda) {
            return Err(Error::Config(format!("need 0 < lambda <= L, got {lambda}, {l}")));
        }
        let eig: Vec<f64> = (0..d)
            .map(|k| if d == 1 { l } else { lambda * (l / lambda).powf(k as f64 / (d - 1) as f64) })
            .collect();
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d);
        while basis.len() < d {
            let mut v = rng.normal_vec(d);
            for q in &basis {
                let c = dot(&v, q);
                smoothconvex_core::linalg::axpy(-c, q, &mut v);
            }
            let nv = norm_sq(&v).sqrt();
            if nv > 1e-8 {
                basis.push(v.iter().map(|x| x / nv).collect());
            }
        }
        let center = rng.normal_vec(d);
        let noise = (0..n).map(|_| rng.normal_vec(d).into_iter().map(|v| sigma * v).collect()).collect();
        Self::new(&eig, &basis, center, noise)
    }

    pub fn minimizer(&self) -> &[f64] {
        &self.center
    }
}

impl Objective for NoisyQuadratic {
    fn dim(&self) -> usize {
        self.center.len()
    }

    fn value(&self, w: &[f64]) -> f64 {
        0.5 * self.a.quad(&sub(w, &self.center))
    }

    fn gradient(&self, w: &[f64]) -> Vec<f64> {
        self.a.matvec(&sub(w, &self.center))
    }
}

impl StochasticObjective for NoisyQuadratic {
    fn n_components(&self) -> Option<usize> {
        Some(self.noise.len())
    }

    fn sample_component(&self, rng: &mut SeededRng) -> usize {
        rng.index(self.noise.len())
    }

    fn component_value(&self, i: usize, w: &[f64]) -> f64 {
        self.value(w) + dot(&self.noise[i], w)
    }

    fn component_gradient(&self, i: usize, w: &[f64]) -> Vec<f64> {
        let mut g = self.gradient(w);
        smoothconvex_core::linalg::axpy(1.0, &self.noise[i], &mut g);
        g
    }
}
