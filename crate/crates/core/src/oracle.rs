//! Full-gradient and stochastic oracles with call accounting.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::rng::SeededRng;

/// A smooth objective with deterministic value and gradient.
pub trait Objective: Send + Sync {
    fn dim(&self) -> usize;
    fn value(&self, w: &[f64]) -> f64;
    fn gradient(&self, w: &[f64]) -> Vec<f64>;
}

/// An objective `F(w) = E_i[f_i(w)]` whose random components can be drawn.
///
/// A component is identified by an index so the same random function can
/// be differentiated at several points, as the mixed-gradient methods need.
pub trait StochasticObjective: Objective {
    /// `Some(n)` for a uniform finite sum over `n` components.
    fn n_components(&self) -> Option<usize>;
    fn sample_component(&self, rng: &mut SeededRng) -> usize;
    fn component_value(&self, i: usize, w: &[f64]) -> f64;
    fn component_gradient(&self, i: usize, w: &[f64]) -> Vec<f64>;
}

/// A drawn component handle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Component(pub usize);

/// Oracle access to a stochastic objective.
///
/// Counts one full call per [`Oracle::full_gradient`] and one stochastic
/// call per [`Oracle::sample`]; evaluating a drawn component at extra points
/// is free, matching the accounting of the mixed-gradient methods.
pub struct Oracle<'a> {
    obj: &'a dyn StochasticObjective,
    full: AtomicU64,
    stochastic: AtomicU64,
}

impl<'a> Oracle<'a> {
    pub fn new(obj: &'a dyn StochasticObjective) -> Self {
        Oracle { obj, full: AtomicU64::new(0), stochastic: AtomicU64::new(0) }
    }

    pub fn objective(&self) -> &'a dyn StochasticObjective {
        self.obj
    }

    pub fn dim(&self) -> usize {
        self.obj.dim()
    }

    pub fn full_gradient(&self, w: &[f64]) -> Vec<f64> {
        self.full.fetch_add(1, Ordering::Relaxed);
        self.obj.gradient(w)
    }

    pub fn sample(&self, rng: &mut SeededRng) -> Component {
        self.stochastic.fetch_add(1, Ordering::Relaxed);
        Component(self.obj.sample_component(rng))
    }

    pub fn component_gradient(&self, c: Component, w: &[f64]) -> Vec<f64> {
        self.obj.component_gradient(c.0, w)
    }

    pub fn component_value(&self, c: Component, w: &[f64]) -> f64 {
        self.obj.component_value(c.0, w)
    }

    /// Draw a component and return its gradient at `w`.
    pub fn stochastic_gradient(&self, w: &[f64], rng: &mut SeededRng) -> Vec<f64> {
        let c = self.sample(rng);
        self.component_gradient(c, w)
    }

    pub fn calls_full(&self) -> u64 {
        self.full.load(Ordering::Relaxed)
    }

    pub fn calls_stochastic(&self) -> u64 {
        self.stochastic.load(Ordering::Relaxed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `f_i(w) = ½(w − aᵢ)²` in one dimension.
    struct Toy(Vec<f64>);

    impl Objective for Toy {
        fn dim(&self) -> usize {
            1
        }
        fn value(&self, w: &[f64]) -> f64 {
            self.0.iter().map(|a| 0.5 * (w[0] - a).powi(2)).sum::<f64>() / self.0.len() as f64
        }
        fn gradient(&self, w: &[f64]) -> Vec<f64> {
            vec![self.0.iter().map(|a| w[0] - a).sum::<f64>() / self.0.len() as f64]
        }
    }

    impl StochasticObjective for Toy {
        fn n_components(&self) -> Option<usize> {
            Some(self.0.len())
        }
        fn sample_component(&self, rng: &mut SeededRng) -> usize {
            rng.index(self.0.len())
        }
        fn component_value(&self, i: usize, w: &[f64]) -> f64 {
            0.5 * (w[0] - self.0[i]).powi(2)
        }
        fn component_gradient(&self, i: usize, w: &[f64]) -> Vec<f64> {
            vec![w[0] - self.0[i]]
        }
    }

    #[test]
    fn counters_track_calls() {
        let toy = Toy(vec![1.0, 2.0, 3.0]);
        let o = Oracle::new(&toy);
        let mut rng = SeededRng::new(0);
        o.full_gradient(&[0.0]);
        let c = o.sample(&mut rng);
        o.component_gradient(c, &[0.0]);
        o.component_gradient(c, &[1.0]);
        o.stochastic_gradient(&[0.0], &mut rng);
        assert_eq!(o.calls_full(), 1);
        assert_eq!(o.calls_stochastic(), 2);
    }
}
