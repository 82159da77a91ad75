//! Online learners behind a predict/observe round protocol.
//!
//! Every learner plays a decision with [`Learner::predict`] and is then
//! shown the round's loss with [`Learner::observe`]. Full-information
//! learners may differentiate the loss anywhere; the bandit learner only
//! evaluates it at `d + 1` query points.

pub mod bandit;
pub mod doubling;
pub mod iftrl;
pub mod learner;
pub mod loss;
pub mod maxpd;
pub mod ogd;
pub mod omp;
pub mod soft;
pub mod strict;

pub use bandit::{gradient_estimate, BanditOmp};
pub use doubling::DoublingWrap;
pub use iftrl::Iftrl;
pub use learner::{play, Learner, OnlineRun};
pub use loss::{Constraint, DualDomain, MaxStructure, RoundLoss};
pub use maxpd::{ExplicitMaxPd, HingePd};
pub use ogd::Ogd;
pub use omp::{soft_threshold, CompositeOmp, ExpertOmp, Omp, SimplifiedOmp};
pub use soft::{NoViolationTuning, PenaltyOgd, SoftOgd, SoftTuning};
pub use strict::StrictlyConvexOmp;
