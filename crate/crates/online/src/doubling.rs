use smoothconvex_core::linalg::dist_sq;
use smoothconvex_core::{Error, Result};

use crate::learner::Learner;
use crate::loss::RoundLoss;

pub type LearnerFactory = Box<dyn Fn(f64) -> Result<Box<dyn Learner>>>;

/// Runs a fixed-step learner in epochs with `η_k = η₀/2^k`.
///
/// Within epoch `k` the wrapper accumulates `Σ ‖∇f_{s+1}(z_s) − ∇f_s(z_s)‖²`
/// at the inner learner's searching points, taking `f ≡ 0` before the first
/// loss of the epoch. The round on which the sum first exceeds `L²/η_k²`
/// opens a new epoch; that round's loss is not passed to the fresh learner.
pub struct DoublingWrap {
    factory: LearnerFactory,
    l: f64,
    eta0: f64,
    epoch: u32,
    inner: Box<dyn Learner>,
    deviation: f64,
    prev: Option<RoundLoss>,
    t: usize,
    boundaries: Vec<usize>,
    burned: Vec<usize>,
}

impl DoublingWrap {
    pub fn new(factory: LearnerFactory, l: f64, eta0: f64) -> Result<Self> {
        if !(l > 0.0) || !(eta0 > 0.0) {
            return Err(Error::Config(format!("L and eta0 must be positive, got {l}, {eta0}")));
        }
        let inner = factory(eta0)?;
        Ok(DoublingWrap {
            factory,
            l,
            eta0,
            epoch: 0,
            inner,
            deviation: 0.0,
            prev: None,
            t: 0,
            boundaries: vec![1],
            burned: Vec::new(),
        })
    }

    pub fn eta(&self) -> f64 {
        self.eta0 / 2f64.powi(self.epoch as i32)
    }

    /// First round of every epoch, starting with 1.
    pub fn boundaries(&self) -> &[usize] {
        &self.boundaries
    }

    /// Rounds whose loss was dropped when an epoch started.
    pub fn burned(&self) -> &[usize] {
        &self.burned
    }

    pub fn epochs(&self) -> usize {
        self.boundaries.len()
    }
}

impl Learner for DoublingWrap {
    fn predict(&mut self) -> Vec<f64> {
        self.t += 1;
        self.inner.predict()
    }

    fn observe(&mut self, loss: &RoundLoss) -> Result<()> {
        let z = self.inner.search_point();
        let g_now = loss.gradient(&z);
        let g_before = match &self.prev {
            Some(f) => f.gradient(&z),
            None => vec![0.0; z.len()],
        };
        self.deviation += dist_sq(&g_now, &g_before);
        let eta = self.eta();
        if self.deviation > self.l * self.l / (eta * eta) {
            self.epoch += 1;
            self.inner = (self.factory)(self.eta())?;
            self.deviation = 0.0;
            self.prev = None;
            self.boundaries.push(self.t);
            self.burned.push(self.t);
            log::debug!("epoch {} starts at round {} with eta {}", self.epoch, self.t, self.eta());
            return Ok(());
        }
        self.inner.observe(loss)?;
        self.prev = Some(loss.clone());
        Ok(())
    }

    fn search_point(&self) -> Vec<f64> {
        self.inner.search_point()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learner::play;
    use crate::omp::Omp;
    use smoothconvex_core::Domain;

    fn omp_factory(d: usize) -> LearnerFactory {
        Box::new(move |eta| Ok(Box::new(Omp::euclidean(Domain::ball(1.0)?, d, 1.0, eta)?) as Box<dyn Learner>))
    }

    #[test]
    fn zero_variation_is_one_epoch() {
        let mut w = DoublingWrap::new(omp_factory(2), 1.0, 0.5).unwrap();
        play(&mut w, 200, |_, _| RoundLoss::Zero { d: 2 }).unwrap();
        assert_eq!(w.boundaries(), &[1]);
        assert!(w.burned().is_empty());
    }

    #[test]
    fn engineered_break_at_round_ten() {
        // Threshold L²/η₀² = 1. Round 1 contributes 0.09, rounds 2..9 nothing,
        // round 10 contributes 1.
        let mut w = DoublingWrap::new(omp_factory(1), 1.0, 1.0).unwrap();
        play(&mut w, 15, |t, _| RoundLoss::Linear { f: vec![if t == 10 { 1.3 } else { 0.3 }] }).unwrap();
        assert_eq!(w.boundaries(), &[1, 10]);
        assert_eq!(w.burned(), &[10]);
        assert_eq!(w.eta(), 0.5);
    }
}
