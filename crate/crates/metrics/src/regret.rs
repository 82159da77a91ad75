use smoothconvex_adversary::LossSequence;
use smoothconvex_core::{Domain, Error, Result};
use smoothconvex_online::{Constraint, RoundLoss};

use crate::comparator::{best_fixed_point, Comparator};

#[derive(Debug, Clone)]
pub struct RegretTrace {
    /// `Σ_{s≤t} f_s(x_s) − Σ_{s≤t} f_s(x*)` with `x*` the full-horizon comparator.
    pub cumulative: Vec<f64>,
    pub learner_loss: f64,
    pub comparator: Comparator,
}

impl RegretTrace {
    pub fn final_regret(&self) -> f64 {
        *self.cumulative.last().expect("non-empty trace")
    }
}

fn check_lengths(decisions: &[Vec<f64>], rounds: usize) -> Result<()> {
    if decisions.len() != rounds {
        return Err(Error::Input(format!("{} decisions for {rounds} rounds", decisions.len())));
    }
    if rounds == 0 {
        return Err(Error::Input("empty horizon".into()));
    }
    Ok(())
}

pub fn regret(decisions: &[Vec<f64>], seq: &LossSequence, domain: &Domain) -> Result<RegretTrace> {
    check_lengths(decisions, seq.len())?;
    let losses: Vec<RoundLoss> = seq.iter().collect();
    let d = decisions[0].len();
    let comparator = best_fixed_point(&losses, domain, d)?;
    let mut cumulative = Vec::with_capacity(losses.len());
    let (mut ours, mut theirs) = (0.0, 0.0);
    for (loss, x) in losses.iter().zip(decisions) {
        if x.len() != d {
            return Err(Error::Input("decision dimensions differ".into()));
        }
        ours += loss.value(x);
        theirs += loss.value(&comparator.point);
        cumulative.push(ours - theirs);
    }
    Ok(RegretTrace { cumulative, learner_loss: ours, comparator })
}

/// Cumulative `Σ_{s≤t} g_i(x_s)` for each constraint `i`; row `t` holds round `t + 1`.
pub fn violation(decisions: &[Vec<f64>], constraints: &[Constraint]) -> Vec<Vec<f64>> {
    let mut acc = vec![0.0; constraints.len()];
    decisions
        .iter()
        .map(|x| {
            for (a, c) in acc.iter_mut().zip(constraints) {
                *a += c.g(x);
            }
            acc.clone()
        })
        .collect()
}

/// Cumulative count of rounds with `⟨yx, w⟩ ≤ 0` on a hinge sequence.
pub fn mistakes(decisions: &[Vec<f64>], seq: &LossSequence) -> Result<Vec<u64>> {
    check_lengths(decisions, seq.len())?;
    let mut count = 0;
    seq.iter()
        .zip(decisions)
        .map(|(loss, w)| match loss {
            RoundLoss::Hinge { yx } => {
                if smoothconvex_core::linalg::dot(&yx, w) <= 0.0 {
                    count += 1;
                }
                Ok(count)
            }
            _ => Err(Error::Unsupported("mistakes need hinge losses".into())),
        })
        .collect()
}
