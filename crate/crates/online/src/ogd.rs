use smoothconvex_core::linalg::step;
use smoothconvex_core::{Domain, Result, StepSchedule};

use crate::learner::Learner;
use crate::loss::RoundLoss;

/// Projected online gradient descent, `w_{t+1} = Π_W(w_t − η_t ∇f_t(w_t))`.
#[derive(Debug, Clone)]
pub struct Ogd {
    domain: Domain,
    schedule: StepSchedule,
    x: Vec<f64>,
    t: usize,
}

impl Ogd {
    pub fn new(domain: Domain, schedule: StepSchedule, start: &[f64]) -> Result<Self> {
        schedule.validate()?;
        let x = domain.project(start)?;
        Ok(Ogd { domain, schedule, x, t: 1 })
    }
}

impl Learner for Ogd {
    fn predict(&mut self) -> Vec<f64> {
        self.x.clone()
    }

    fn observe(&mut self, loss: &RoundLoss) -> Result<()> {
        let g = loss.gradient(&self.x);
        self.x = self.domain.project(&step(&self.x, self.schedule.eta(self.t), &g))?;
        self.t += 1;
        Ok(())
    }

    fn search_point(&self) -> Vec<f64> {
        self.x.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learner::play;

    #[test]
    fn hand_recursion_on_interval() {
        let dom = Domain::boxed(vec![-1.0], vec![1.0]).unwrap();
        let mut l = Ogd::new(dom, StepSchedule::Constant(0.5), &[0.0]).unwrap();
        let run = play(&mut l, 4, |_, _| RoundLoss::Linear { f: vec![1.0] }).unwrap();
        let xs: Vec<f64> = run.decisions.iter().map(|x| x[0]).collect();
        assert_eq!(xs, vec![0.0, -0.5, -1.0, -1.0]);
    }

    #[test]
    fn zero_losses_do_not_move() {
        let mut l = Ogd::new(Domain::ball(1.0).unwrap(), StepSchedule::InverseSqrt(1.0), &[0.3, -0.2]).unwrap();
        let run = play(&mut l, 20, |_, _| RoundLoss::Zero { d: 2 }).unwrap();
        assert!(run.decisions.iter().all(|x| x == &vec![0.3, -0.2]));
    }

    #[test]
    fn alternating_losses_move_by_eta_until_clipped() {
        // ±f pattern starting with −f; hand simulation on [−1, 1] with η = 0.3.
        let dom = Domain::boxed(vec![-1.0], vec![1.0]).unwrap();
        let mut l = Ogd::new(dom, StepSchedule::Constant(0.3), &[0.9]).unwrap();
        let signs = [-1.0, 1.0, -1.0, 1.0, -1.0, 1.0];
        let run = play(&mut l, 6, |t, _| RoundLoss::Linear { f: vec![signs[t - 1] * 2.0] }).unwrap();
        let xs: Vec<f64> = run.decisions.iter().map(|x| x[0]).collect();
        let want = [0.9, 1.0, 0.4, 1.0, 0.4, 1.0];
        for (a, b) in xs.iter().zip(want) {
            assert!((a - b).abs() < 1e-12, "{xs:?}");
        }
    }
}
