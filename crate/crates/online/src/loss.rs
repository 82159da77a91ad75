use std::fmt;
use std::sync::Arc;

use smoothconvex_core::linalg::{dot, norm_sq, sub};
use smoothconvex_core::{Error, Result};

type ValueFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type GradFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// Dual domain `Q` of a max structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DualDomain {
    /// `[0, 1]^k`
    UnitBox,
    /// Probability simplex in `R^k`.
    Simplex,
}

impl DualDomain {
    pub fn project(&self, u: &[f64]) -> Vec<f64> {
        match self {
            DualDomain::UnitBox => u.iter().map(|v| v.clamp(0.0, 1.0)).collect(),
            DualDomain::Simplex => smoothconvex_core::domain::project_simplex(u, 1.0),
        }
    }

    /// Minimizer of `½‖u‖²` over `Q`.
    pub fn center(&self, k: usize) -> Vec<f64> {
        match self {
            DualDomain::UnitBox => vec![0.0; k],
            DualDomain::Simplex => vec![1.0 / k as f64; k],
        }
    }

    /// `max_{u ∈ Q} ⟨s, u⟩`
    fn support(&self, s: &[f64]) -> f64 {
        match self {
            DualDomain::UnitBox => s.iter().map(|v| v.max(0.0)).sum(),
            DualDomain::Simplex => s.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

/// `f(x) = ⟨c, x⟩ + max_{u ∈ Q} ⟨A x, u⟩ − φ̂(u)` with linear `φ̂(u) = −⟨b, u⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxStructure {
    /// Gradient of the (linear) smooth part `f̂`.
    pub smooth: Vec<f64>,
    /// Rows of `A` (`k × d`).
    pub a: Vec<Vec<f64>>,
    /// `−∇φ̂`
    pub b: Vec<f64>,
    pub dual: DualDomain,
}

impl MaxStructure {
    pub fn validate(&self) -> Result<()> {
        let d = self.smooth.len();
        if self.a.is_empty() || self.a.len() != self.b.len() || self.a.iter().any(|r| r.len() != d) {
            return Err(Error::Input(format!(
                "max structure dimensions disagree: A is {}x?, b has {}, d = {d}",
                self.a.len(),
                self.b.len()
            )));
        }
        Ok(())
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.a.iter().map(|r| dot(r, x)).collect()
    }

    pub fn apply_t(&self, u: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.smooth.len()];
        for (r, ui) in self.a.iter().zip(u) {
            smoothconvex_core::linalg::axpy(*ui, r, &mut out);
        }
        out
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let s: Vec<f64> = self.apply(x).iter().zip(&self.b).map(|(ax, b)| ax + b).collect();
        dot(&self.smooth, x) + self.dual.support(&s)
    }
}

/// The loss revealed in one round.
#[derive(Clone)]
pub enum RoundLoss {
    Zero { d: usize },
    /// `⟨f, x⟩`
    Linear { f: Vec<f64> },
    /// `(curvature/2)‖x − center‖²`
    Quadratic { center: Vec<f64>, curvature: f64 },
    /// `[1 − ⟨yx, w⟩]₊`
    Hinge { yx: Vec<f64> },
    Max(MaxStructure),
    Custom { d: usize, value: ValueFn, gradient: GradFn },
}

impl fmt::Debug for RoundLoss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RoundLoss::Zero { d } => write!(f, "Zero({d})"),
            RoundLoss::Linear { f: v } => write!(f, "Linear({v:?})"),
            RoundLoss::Quadratic { center, curvature } => write!(f, "Quadratic({center:?}, {curvature})"),
            RoundLoss::Hinge { yx } => write!(f, "Hinge({yx:?})"),
            RoundLoss::Max(m) => write!(f, "Max({m:?})"),
            RoundLoss::Custom { d, .. } => write!(f, "Custom({d})"),
        }
    }
}

impl RoundLoss {
    pub fn custom(
        d: usize,
        value: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        gradient: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        RoundLoss::Custom { d, value: Arc::new(value), gradient: Arc::new(gradient) }
    }

    pub fn dim(&self) -> usize {
        match self {
            RoundLoss::Zero { d } | RoundLoss::Custom { d, .. } => *d,
            RoundLoss::Linear { f } => f.len(),
            RoundLoss::Quadratic { center, .. } => center.len(),
            RoundLoss::Hinge { yx } => yx.len(),
            RoundLoss::Max(m) => m.smooth.len(),
        }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        match self {
            RoundLoss::Zero { .. } => 0.0,
            RoundLoss::Linear { f } => dot(f, x),
            RoundLoss::Quadratic { center, curvature } => 0.5 * curvature * norm_sq(&sub(x, center)),
            RoundLoss::Hinge { yx } => (1.0 - dot(yx, x)).max(0.0),
            RoundLoss::Max(m) => m.value(x),
            RoundLoss::Custom { value, .. } => value(x),
        }
    }

    /// Gradient, or a subgradient for the non-smooth variants.
    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        match self {
            RoundLoss::Zero { d } => vec![0.0; *d],
            RoundLoss::Linear { f } => f.clone(),
            RoundLoss::Quadratic { center, curvature } => sub(x, center).iter().map(|v| curvature * v).collect(),
            RoundLoss::Hinge { yx } => {
                if dot(yx, x) < 1.0 {
                    yx.iter().map(|v| -v).collect()
                } else {
                    vec![0.0; yx.len()]
                }
            }
            RoundLoss::Max(m) => {
                let s: Vec<f64> = m.apply(x).iter().zip(&m.b).map(|(ax, b)| ax + b).collect();
                let u = match m.dual {
                    DualDomain::UnitBox => s.iter().map(|v| if *v > 0.0 { 1.0 } else { 0.0 }).collect(),
                    DualDomain::Simplex => {
                        let k = s.iter().enumerate().fold(0, |b, (i, v)| if *v > s[b] { i } else { b });
                        let mut e = vec![0.0; s.len()];
                        e[k] = 1.0;
                        e
                    }
                };
                smoothconvex_core::linalg::add(&m.smooth, &m.apply_t(&u))
            }
            RoundLoss::Custom { gradient, .. } => gradient(x),
        }
    }

    /// Cost vector of a linear loss.
    pub fn linear_form(&self) -> Option<Vec<f64>> {
        match self {
            RoundLoss::Zero { d } => Some(vec![0.0; *d]),
            RoundLoss::Linear { f } => Some(f.clone()),
            _ => None,
        }
    }

    /// The max structure of a non-smooth loss; hinge is
    /// `max_{α ∈ [0,1]} α(1 − ⟨yx, w⟩)`.
    pub fn max_structure(&self) -> Option<MaxStructure> {
        match self {
            RoundLoss::Hinge { yx } => Some(MaxStructure {
                smooth: vec![0.0; yx.len()],
                a: vec![yx.iter().map(|v| -v).collect()],
                b: vec![1.0],
                dual: DualDomain::UnitBox,
            }),
            RoundLoss::Max(m) => Some(m.clone()),
            RoundLoss::Zero { d } => Some(MaxStructure {
                smooth: vec![0.0; *d],
                a: vec![vec![0.0; *d]],
                b: vec![0.0],
                dual: DualDomain::UnitBox,
            }),
            RoundLoss::Linear { f } => Some(MaxStructure {
                smooth: f.clone(),
                a: vec![vec![0.0; f.len()]],
                b: vec![0.0],
                dual: DualDomain::UnitBox,
            }),
            _ => None,
        }
    }
}

/// A fixed long-term constraint `g(x) ≤ 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum Constraint {
    /// `‖x − center‖² − r²`
    Ball { center: Vec<f64>, r: f64 },
    /// `⟨a, x⟩ − b`
    Halfspace { a: Vec<f64>, b: f64 },
}

impl Constraint {
    pub fn g(&self, x: &[f64]) -> f64 {
        match self {
            Constraint::Ball { center, r } => norm_sq(&sub(x, center)) - r * r,
            Constraint::Halfspace { a, b } => dot(a, x) - b,
        }
    }

    pub fn grad(&self, x: &[f64]) -> Vec<f64> {
        match self {
            Constraint::Ball { center, .. } => sub(x, center).iter().map(|v| 2.0 * v).collect(),
            Constraint::Halfspace { a, .. } => a.clone(),
        }
    }

    /// Upper bound on `‖∇g‖` over the ball of radius `radius`.
    pub fn grad_bound(&self, radius: f64) -> f64 {
        match self {
            Constraint::Ball { center, .. } => 2.0 * (radius + norm_sq(center).sqrt()),
            Constraint::Halfspace { a, .. } => norm_sq(a).sqrt(),
        }
    }

    /// Upper bound on `|g|` over the ball of radius `radius`.
    pub fn value_bound(&self, radius: f64) -> f64 {
        match self {
            Constraint::Ball { center, r } => (radius + norm_sq(center).sqrt()).powi(2).max(r * r),
            Constraint::Halfspace { a, b } => norm_sq(a).sqrt() * radius + b.abs(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hinge_max_structure_agrees() {
        let l = RoundLoss::Hinge { yx: vec![0.6, -0.8] };
        let m = l.max_structure().unwrap();
        for x in [[0.0, 0.0], [1.0, 1.0], [3.0, -2.0], [-1.0, 0.5]] {
            assert!((l.value(&x) - m.value(&x)).abs() < 1e-15);
            assert_eq!(l.gradient(&x), RoundLoss::Max(m.clone()).gradient(&x));
        }
    }

    #[test]
    fn max_structure_rejects_bad_shapes() {
        let m = MaxStructure { smooth: vec![0.0; 2], a: vec![vec![1.0]], b: vec![0.0], dual: DualDomain::UnitBox };
        assert!(matches!(m.validate(), Err(Error::Input(_))));
    }

    #[test]
    fn constraint_gradients() {
        let c = Constraint::Ball { center: vec![0.5, 0.0], r: 0.3 };
        let x = [0.1, 0.2];
        let h = 1e-6;
        for j in 0..2 {
            let mut a = x;
            let mut b = x;
            a[j] += h;
            b[j] -= h;
            assert!(((c.g(&a) - c.g(&b)) / (2.0 * h) - c.grad(&x)[j]).abs() < 1e-8);
        }
    }
}
