use std::fmt;
use std::sync::Arc;

use smoothconvex_online::RoundLoss;

type Generator = Arc<dyn Fn(usize) -> RoundLoss + Send + Sync>;

/// A finite sequence `f₁, …, f_T` given by a pure function of the round.
#[derive(Clone)]
pub struct LossSequence {
    rounds: usize,
    kind: &'static str,
    declared_egv: Option<f64>,
    generator: Generator,
}

impl fmt::Debug for LossSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LossSequence")
            .field("rounds", &self.rounds)
            .field("kind", &self.kind)
            .field("declared_egv", &self.declared_egv)
            .finish()
    }
}

impl LossSequence {
    /// `rounds` must be at least 1.
    pub fn new(
        rounds: usize,
        kind: &'static str,
        declared_egv: Option<f64>,
        generator: impl Fn(usize) -> RoundLoss + Send + Sync + 'static,
    ) -> Self {
        assert!(rounds >= 1, "a loss sequence needs at least one round");
        LossSequence { rounds, kind, declared_egv, generator: Arc::new(generator) }
    }

    /// Sequence that replays a stored list.
    pub fn from_losses(kind: &'static str, losses: Vec<RoundLoss>) -> Self {
        let losses = Arc::new(losses);
        let n = losses.len();
        LossSequence::new(n, kind, None, move |t| losses[t - 1].clone())
    }

    pub fn len(&self) -> usize {
        self.rounds
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn kind(&self) -> &'static str {
        self.kind
    }

    /// Gradual variation the generator was built for, when it has one.
    pub fn declared_egv(&self) -> Option<f64> {
        self.declared_egv
    }

    /// Loss of round `t ∈ 1..=T`.
    pub fn loss(&self, t: usize) -> RoundLoss {
        assert!((1..=self.rounds).contains(&t), "round {t} outside 1..={}", self.rounds);
        (self.generator)(t)
    }

    pub fn iter(&self) -> impl Iterator<Item = RoundLoss> + '_ {
        (1..=self.rounds).map(|t| self.loss(t))
    }
}
