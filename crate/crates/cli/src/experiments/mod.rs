//! Registry of named experiments. Each declares its parameters with defaults
//! and returns a [`Table`] for one seed.

mod online;
mod stochastic;

use crate::config::Params;
use crate::output::Table;
use crate::CliError;

pub type RunFn = fn(&Params, u64) -> Result<Table, CliError>;

pub struct Experiment {
    pub name: &'static str,
    pub about: &'static str,
    pub params: &'static [(&'static str, &'static str)],
    pub run: RunFn,
}

pub const REGISTRY: &[Experiment] = &[
    Experiment {
        name: "emgd_variance",
        about: "EMGD on regularized logistic regression; gradient variances at each epoch center",
        params: stochastic::EMGD_VARIANCE,
        run: stochastic::emgd_variance,
    },
    Experiment {
        name: "mixedgrad_rate",
        about: "MixedGrad on rank-deficient least squares; suboptimality against stochastic calls",
        params: stochastic::MIXEDGRAD_RATE,
        run: stochastic::mixedgrad_rate,
    },
    Experiment {
        name: "clippedsgd_target",
        about: "Clipped stage-wise SGD on the one-dimensional target-risk problem",
        params: stochastic::CLIPPEDSGD_TARGET,
        run: stochastic::clippedsgd_target,
    },
    Experiment {
        name: "oneproj_general",
        about: "SGD with one projection (primal-dual) on a ball-constrained quadratic",
        params: stochastic::ONEPROJ,
        run: stochastic::oneproj_general,
    },
    Experiment {
        name: "oneproj_strong",
        about: "SGD with one projection (strongly convex) on a ball-constrained quadratic",
        params: stochastic::ONEPROJ,
        run: stochastic::oneproj_strong,
    },
    Experiment {
        name: "gv_regret_sweep",
        about: "Optimistic mirror prox regret across gradual-variation budgets",
        params: online::GV_REGRET_SWEEP,
        run: online::gv_regret_sweep,
    },
    Experiment {
        name: "ogd_vs_omp_adversary",
        about: "OGD and optimistic mirror prox on the FTRL adversary",
        params: online::OGD_VS_OMP,
        run: online::ogd_vs_omp_adversary,
    },
    Experiment {
        name: "expert_switch",
        about: "Optimistic expert weights on a one-switch adversary",
        params: online::EXPERT_SWITCH,
        run: online::expert_switch,
    },
    Experiment {
        name: "bandit_estimate",
        about: "Two-point gradient estimator error against its smoothness bound",
        params: online::BANDIT_ESTIMATE,
        run: online::bandit_estimate,
    },
    Experiment {
        name: "soft_constraints",
        about: "Soft-constraint OGD on drifting quadratics with a ball constraint",
        params: online::SOFT_CONSTRAINTS,
        run: online::soft_constraints,
    },
    Experiment {
        name: "penalty_impossibility",
        about: "Penalty OGD violation when the constraint excludes the primal ball",
        params: online::PENALTY,
        run: online::penalty_impossibility,
    },
    Experiment {
        name: "psi_transform_table",
        about: "Smoothed-hinge psi-transform on a grid of eta and gamma",
        params: online::PSI_TABLE,
        run: online::psi_transform_table,
    },
    Experiment {
        name: "hinge_mistakes",
        about: "Primal-dual hinge learner mistakes on a drifting classification stream",
        params: online::HINGE_MISTAKES,
        run: online::hinge_mistakes,
    },
];

pub fn find(name: &str) -> Option<&'static Experiment> {
    REGISTRY.iter().find(|e| e.name == name)
}

/// Index of the record to keep when thinning to every `every`-th round.
fn keep(t: usize, every: usize, last: usize) -> bool {
    t == last || (every > 0 && t % every == 0)
}

fn positive(p: &Params, key: &str) -> Result<usize, CliError> {
    let v = p.usize(key)?;
    if v == 0 {
        return Err(CliError::Config(format!("`{key}` must be positive")));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn registry_names_are_unique() {
        let mut names: Vec<_> = REGISTRY.iter().map(|e| e.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), 13);
    }

    #[test]
    fn defaults_parse_for_every_experiment() {
        for e in REGISTRY {
            Params::resolve(e.name, e.params, &BTreeMap::new()).unwrap();
            let mut keys: Vec<_> = e.params.iter().map(|(k, _)| *k).collect();
            keys.sort();
            keys.dedup();
            assert_eq!(keys.len(), e.params.len(), "{}", e.name);
        }
    }

    #[test]
    fn keep_thins_and_keeps_last() {
        let kept: Vec<usize> = (1..=25).filter(|&t| keep(t, 10, 25)).collect();
        assert_eq!(kept, [10, 20, 25]);
    }
}
