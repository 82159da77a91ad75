use smoothconvex_core::linalg::norm;
use smoothconvex_core::{Domain, Objective, SeededRng, StepSchedule};
use smoothconvex_metrics::{loglog_slope, reference_optimum};
use smoothconvex_problems::{
    least_squares_problem, logistic_problem, onedim_target_risk_problem, LabeledDataset, NoisyQuadratic,
};
use smoothconvex_stochastic::{
    clipped_sgd, emgd, mixed_grad, sgd_pd, sgd_st, ClippedParams, EmgdParams, MixedParams, PdParams, SolverConfig,
    StParams,
};

use super::positive;
use crate::config::Params;
use crate::output::{Cell, Table};
use crate::CliError;

pub const EMGD_VARIANCE: &[(&str, &str)] = &[
    ("n", "500"),
    ("d", "20"),
    ("lambda", "0.01"),
    ("flip", "0.1"),
    ("epochs", "10"),
    ("epoch_len_cap", "10000"),
    ("fail_prob", "0.1"),
];

pub fn emgd_variance(p: &Params, seed: u64) -> Result<Table, CliError> {
    let (n, d, lambda) = (positive(p, "n")?, positive(p, "d")?, p.f64("lambda")?);
    let mut data = LabeledDataset::synthetic_classification(n, d, p.f64("flip")?, &mut SeededRng::new(seed));
    data.normalize_rows();
    let prob = logistic_problem(data, lambda)?;
    let opt = reference_optimum(&prob, &Domain::Unconstrained, prob.constants.l)?;
    let delta1 = (2.0 / lambda * (prob.value(&vec![0.0; d]) - opt.value)).sqrt().max(norm(&opt.w));
    let mut params = EmgdParams::theorem(prob.constants.l_max, lambda, delta1, positive(p, "epochs")?, p.f64("fail_prob")?);
    params.t = params.t.min(positive(p, "epoch_len_cap")?);
    let mut cfg = SolverConfig::new(seed, 0, StepSchedule::Constant(1.0)).with_f_star(opt.value);
    cfg.probe_variance = true;
    let tr = emgd(&prob, &Domain::Unconstrained, &params, &cfg)?;

    let mut t = Table::new(&[
        "iter",
        "objective",
        "suboptimality",
        "calls_full",
        "calls_stochastic",
        "variance_sgd",
        "variance_mixed",
    ]);
    for r in tr.records.iter().filter(|r| r.variance_mixed.is_some()) {
        t.push(vec![
            r.iter.into(),
            Cell::opt(r.objective),
            Cell::opt(r.suboptimality),
            r.calls_full.into(),
            r.calls_stochastic.into(),
            Cell::opt(r.variance_sgd),
            Cell::opt(r.variance_mixed),
        ]);
    }
    t.final_metric = prob.value(&tr.final_point) - opt.value;
    Ok(t)
}

pub const MIXEDGRAD_RATE: &[(&str, &str)] = &[
    ("n", "200"),
    ("d", "10"),
    ("rank", "2"),
    ("noise", "0.1"),
    ("data_seed", "11"),
    ("epochs_min", "4"),
    ("epochs_max", "8"),
    ("t1", "50"),
    ("gamma", "2"),
    ("lambda1_over_beta", "0.5"),
];

pub fn mixedgrad_rate(p: &Params, seed: u64) -> Result<Table, CliError> {
    let mut data = LabeledDataset::synthetic_regression(
        positive(p, "n")?,
        positive(p, "d")?,
        positive(p, "rank")?,
        p.f64("noise")?,
        &mut SeededRng::new(p.u64("data_seed")?),
    );
    data.normalize_rows();
    let prob = least_squares_problem(data, 0.0)?;
    let free = reference_optimum(&prob, &Domain::Unconstrained, prob.constants.l)?;
    let radius = 2.0 * norm(&free.w).max(0.5);
    let dom = Domain::ball(radius)?;
    let fstar = reference_optimum(&prob, &dom, prob.constants.l)?.value;
    let beta = prob.constants.l_max;
    let (lo, hi) = (positive(p, "epochs_min")?, positive(p, "epochs_max")?);
    if lo > hi {
        return Err(CliError::Config("epochs_min exceeds epochs_max".into()));
    }
    let t1 = positive(p, "t1")?;

    let mut t = Table::new(&["iter", "objective", "suboptimality", "calls_full", "calls_stochastic"]);
    let (mut calls, mut gaps) = (Vec::new(), Vec::new());
    for m in lo..=hi {
        let params = MixedParams {
            gamma: p.f64("gamma")?,
            lambda1: p.f64("lambda1_over_beta")? * beta,
            delta1: radius,
            t1,
            epochs: m,
            eta1: 1.0 / (2.0 * beta * (3.0 * t1 as f64).sqrt()),
        };
        let tr = mixed_grad(&prob, &dom, &params, &SolverConfig::new(seed, 0, StepSchedule::Constant(1.0)))?;
        let value = prob.value(&tr.final_point);
        t.push(vec![m.into(), value.into(), (value - fstar).into(), tr.calls_full.into(), tr.calls_stochastic.into()]);
        calls.push(tr.calls_stochastic as f64);
        gaps.push(value - fstar);
    }
    t.final_metric = *gaps.last().expect("at least one epoch count");
    if gaps.len() >= 2 && gaps.iter().all(|g| *g > 0.0) {
        t.slope = Some(loglog_slope(&calls, &gaps)?);
    }
    Ok(t)
}

pub const CLIPPEDSGD_TARGET: &[(&str, &str)] = &[
    ("delta", "0.05"),
    ("target_over_opt", "2"),
    ("epsilon", "0.5"),
    ("tau", "0.5"),
    ("stages", "8"),
    ("fail_prob", "0.1"),
    ("record_every", "5000"),
];

pub fn clippedsgd_target(p: &Params, seed: u64) -> Result<Table, CliError> {
    let prob = onedim_target_risk_problem(p.f64("delta")?)?;
    let target = p.f64("target_over_opt")? * prob.eps_opt();
    let dom = Domain::ball(1.0)?;
    let prm = ClippedParams::theorem(
        2.0,
        2.0,
        1,
        1.0,
        target,
        p.f64("epsilon")?,
        p.f64("tau")?,
        positive(p, "stages")?,
        p.f64("fail_prob")?,
    )?;
    let cfg = SolverConfig::new(seed, 0, StepSchedule::Constant(prm.eta)).recording(p.usize("record_every")?);
    let tr = clipped_sgd(&prob, &dom, &prm, &cfg)?;
    let mut t = Table::new(&["iter", "objective", "suboptimality", "calls_stochastic"]);
    for r in tr.records.iter().filter(|r| r.objective.is_some()) {
        let v = r.objective.expect("filtered");
        t.push(vec![r.iter.into(), v.into(), (v - prob.eps_opt()).into(), r.calls_stochastic.into()]);
    }
    t.final_metric = prob.expected_loss(tr.final_point[0]) / target;
    Ok(t)
}

pub const ONEPROJ: &[(&str, &str)] = &[
    ("d", "5"),
    ("n", "100"),
    ("lambda_min", "0.5"),
    ("lambda_max", "1"),
    ("sigma", "0.3"),
    ("radius", "0.8"),
    ("problem_seed", "5"),
    ("horizons", "1000,10000,100000"),
    ("fail_prob", "0.1"),
];

struct OneProjSetup {
    prob: NoisyQuadratic,
    dom: Domain,
    fstar: f64,
    g1: f64,
    sigma: f64,
    horizons: Vec<usize>,
}

fn oneproj_setup(p: &Params) -> Result<OneProjSetup, CliError> {
    let d = positive(p, "d")?;
    let prob = NoisyQuadratic::random(
        d,
        positive(p, "n")?,
        p.f64("lambda_min")?,
        p.f64("lambda_max")?,
        p.f64("sigma")?,
        &mut SeededRng::new(p.u64("problem_seed")?),
    )?;
    let dom = Domain::ball(p.f64("radius")?)?;
    let fstar = reference_optimum(&prob, &dom, prob.constants.l)?.value;
    let g1 = prob.constants.l * (1.0 + norm(prob.minimizer()));
    let sigma = prob.noise.iter().map(|x| norm(x)).fold(0.0, f64::max);
    let horizons = p
        .f64_list("horizons")?
        .into_iter()
        .map(|h| if h >= 1.0 && h.fract() == 0.0 { Ok(h as usize) } else { Err(CliError::Config(format!("horizon {h}"))) })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(OneProjSetup { prob, dom, fstar, g1, sigma, horizons })
}

fn oneproj_table(s: &OneProjSetup, runs: Vec<(usize, smoothconvex_core::Trace)>) -> Result<Table, CliError> {
    let mut t = Table::new(&["iter", "objective", "suboptimality", "violation", "calls_stochastic"]);
    let (mut xs, mut gaps) = (Vec::new(), Vec::new());
    for (horizon, tr) in runs {
        if tr.projections != 1 {
            return Err(CliError::Numeric(format!("{} projections at T = {horizon}", tr.projections)));
        }
        let v = s.prob.value(&tr.final_point);
        t.push(vec![
            horizon.into(),
            v.into(),
            (v - s.fstar).into(),
            s.dom.g(&tr.final_point).into(),
            tr.calls_stochastic.into(),
        ]);
        xs.push(horizon as f64);
        gaps.push(v - s.fstar);
    }
    if gaps.len() >= 2 && gaps.iter().all(|g| *g > 0.0) {
        t.slope = Some(loglog_slope(&xs, &gaps)?);
    }
    Ok(t)
}

pub fn oneproj_general(p: &Params, seed: u64) -> Result<Table, CliError> {
    let s = oneproj_setup(p)?;
    let d = s.prob.dim();
    let mut runs = Vec::new();
    for &h in &s.horizons {
        let (pp, eta) = PdParams::theorem(s.g1, s.dom.g2(d), s.dom.c2(), s.sigma, h, p.f64("fail_prob")?);
        runs.push((h, sgd_pd(&s.prob, &s.dom, &pp, &SolverConfig::new(seed, h, StepSchedule::Constant(eta)))?));
    }
    let mut t = oneproj_table(&s, runs)?;
    t.final_metric = match t.column("suboptimality").and_then(|c| c.last().copied()) {
        Some(Cell::Num(v)) => v,
        _ => f64::NAN,
    };
    Ok(t)
}

pub fn oneproj_strong(p: &Params, seed: u64) -> Result<Table, CliError> {
    let s = oneproj_setup(p)?;
    let gs = s.g1 + s.sigma;
    let mut runs = Vec::new();
    for &h in &s.horizons {
        let sp = StParams::theorem(2.0 * gs / s.dom.rho(), h, Some(gs));
        let cfg = SolverConfig::new(seed, h, StepSchedule::InverseT(1.0 / (2.0 * s.prob.constants.lambda)));
        runs.push((h, sgd_st(&s.prob, &s.dom, &sp, &cfg)?));
    }
    let mut t = oneproj_table(&s, runs)?;
    // Suboptimality scaled by T / ln T at the longest horizon.
    let last = s.horizons.last().copied().unwrap_or(1) as f64;
    t.final_metric = match t.column("suboptimality").and_then(|c| c.last().copied()) {
        Some(Cell::Num(v)) if last > 1.0 => v * last / last.ln(),
        _ => f64::NAN,
    };
    Ok(t)
}
