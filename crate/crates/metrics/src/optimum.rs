//! High-accuracy minimizers used as `F*` when reporting suboptimality.

use smoothconvex_core::linalg::{dist, norm, step};
use smoothconvex_core::{Domain, Error, Objective, Result};

pub const REFERENCE_STEPS: usize = 100_000;
/// A certificate at or below this is reported as certified.
pub const CERTIFICATE_TOL: f64 = 1e-9;
/// Iteration stops early once the certificate is this small.
const EARLY_STOP: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceOptimum {
    pub w: Vec<f64>,
    pub value: f64,
    /// `‖∇F(w)‖` when unconstrained, else the gradient-mapping norm `L‖w − Π(w − ∇F(w)/L)‖`.
    pub certificate: f64,
    pub certified: bool,
    pub steps: usize,
}

fn certificate(obj: &dyn Objective, domain: &Domain, l: f64, w: &[f64]) -> Result<f64> {
    let g = obj.gradient(w);
    Ok(match domain {
        Domain::Unconstrained => norm(&g),
        _ => l * dist(w, &domain.project(&step(w, 1.0 / l, &g))?),
    })
}

/// Minimize an `l`-smooth convex objective over `domain`.
///
/// Unconstrained problems run Nesterov's method with gradient-based
/// restarts; constrained ones run projected gradient descent with step
/// `1/l`. Both stop after [`REFERENCE_STEPS`] or once the certificate drops
/// below 1e-13.
pub fn reference_optimum(obj: &dyn Objective, domain: &Domain, l: f64) -> Result<ReferenceOptimum> {
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::Config(format!("smoothness must be positive, got {l}")));
    }
    let d = obj.dim();
    let mut w = domain.project(&vec![0.0; d])?;
    let mut steps = 0;
    let mut cert = certificate(obj, domain, l, &w)?;
    if matches!(domain, Domain::Unconstrained) {
        let mut y = w.clone();
        let mut k = 0.0f64;
        while steps < REFERENCE_STEPS && cert > EARLY_STOP {
            let g = obj.gradient(&y);
            let next = step(&y, 1.0 / l, &g);
            let moved: f64 = g.iter().zip(next.iter().zip(&w)).map(|(gi, (a, b))| gi * (a - b)).sum();
            if moved > 0.0 {
                // The momentum points uphill: restart from the current iterate.
                k = 0.0;
                y = w.clone();
                continue;
            }
            k += 1.0;
            let beta = (k - 1.0) / (k + 2.0);
            y = next.iter().zip(&w).map(|(a, b)| a + beta * (a - b)).collect();
            w = next;
            steps += 1;
            if steps % 10 == 0 || steps == REFERENCE_STEPS {
                cert = certificate(obj, domain, l, &w)?;
            }
        }
    } else {
        while steps < REFERENCE_STEPS && cert > EARLY_STOP {
            w = domain.project(&step(&w, 1.0 / l, &obj.gradient(&w)))?;
            steps += 1;
            cert = certificate(obj, domain, l, &w)?;
        }
    }
    cert = certificate(obj, domain, l, &w)?;
    if !cert.is_finite() {
        return Err(Error::Numeric("reference optimum diverged".into()));
    }
    Ok(ReferenceOptimum { value: obj.value(&w), certified: cert <= CERTIFICATE_TOL, certificate: cert, w, steps })
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Shifted(Vec<f64>);

    impl Objective for Shifted {
        fn dim(&self) -> usize {
            self.0.len()
        }
        fn value(&self, w: &[f64]) -> f64 {
            0.5 * smoothconvex_core::linalg::dist_sq(w, &self.0)
        }
        fn gradient(&self, w: &[f64]) -> Vec<f64> {
            smoothconvex_core::linalg::sub(w, &self.0)
        }
    }

    #[test]
    fn identity_quadratic() {
        let r = reference_optimum(&Shifted(vec![0.0; 3]), &Domain::Unconstrained, 1.0).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.certified);
    }

    #[test]
    fn constrained_projects_the_center() {
        let r = reference_optimum(&Shifted(vec![3.0, 4.0]), &Domain::ball(1.0).unwrap(), 1.0).unwrap();
        assert!(dist(&r.w, &[0.6, 0.8]) < 1e-12);
        assert!(r.certified);
    }
}
