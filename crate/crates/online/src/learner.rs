use smoothconvex_core::{Error, Result};

use crate::loss::RoundLoss;

pub trait Learner {
    /// Decision for the current round.
    fn predict(&mut self) -> Vec<f64>;

    /// Reveal the current round's loss and advance to the next round.
    fn observe(&mut self, loss: &RoundLoss) -> Result<()>;

    /// Point at which a wrapper measures gradual variation. Two-sequence
    /// learners return their searching point.
    fn search_point(&self) -> Vec<f64>;
}

impl<L: Learner + ?Sized> Learner for Box<L> {
    fn predict(&mut self) -> Vec<f64> {
        (**self).predict()
    }
    fn observe(&mut self, loss: &RoundLoss) -> Result<()> {
        (**self).observe(loss)
    }
    fn search_point(&self) -> Vec<f64> {
        (**self).search_point()
    }
}

/// Decisions and incurred losses of one online run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OnlineRun {
    pub decisions: Vec<Vec<f64>>,
    pub losses: Vec<f64>,
}

impl OnlineRun {
    pub fn total_loss(&self) -> f64 {
        self.losses.iter().sum()
    }
}

/// Play `rounds` rounds; `loss_at(t, x_t)` supplies the loss of round `t ≥ 1`
/// after seeing the decision.
pub fn play<L, F>(learner: &mut L, rounds: usize, mut loss_at: F) -> Result<OnlineRun>
where
    L: Learner + ?Sized,
    F: FnMut(usize, &[f64]) -> RoundLoss,
{
    let mut run = OnlineRun { decisions: Vec::with_capacity(rounds), losses: Vec::with_capacity(rounds) };
    for t in 1..=rounds {
        let x = learner.predict();
        let loss = loss_at(t, &x);
        if loss.dim() != x.len() {
            return Err(Error::Input(format!("round {t}: loss has dimension {}, decision {}", loss.dim(), x.len())));
        }
        run.losses.push(loss.value(&x));
        learner.observe(&loss)?;
        run.decisions.push(x);
    }
    Ok(run)
}
