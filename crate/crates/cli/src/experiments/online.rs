use smoothconvex_adversary::{
    classification_stream, drifting_quadratics, egv_inf, ftrl_adversary, gradual_variation, measure_egv, LossSequence,
    Probe,
};
use smoothconvex_core::linalg::{dist, dot};
use smoothconvex_core::{Domain, SeededRng, StepSchedule};
use smoothconvex_metrics::{loglog_slope, regret, violation};
use smoothconvex_online::soft::estimate_soft_constants;
use smoothconvex_online::{
    gradient_estimate, play, Constraint, ExpertOmp, HingePd, Ogd, Omp, PenaltyOgd, RoundLoss, SoftOgd, SoftTuning,
};
use smoothconvex_problems::psi_transform;

use super::{keep, positive};
use crate::config::Params;
use crate::output::Table;
use crate::CliError;

pub const GV_REGRET_SWEEP: &[(&str, &str)] = &[("horizon", "10000"), ("egv", "1,4,16,64"), ("repeats", "20")];

/// OMP on ±1 linear losses along `e₁`, rescaled so that the measured gradual
/// variation equals each target.
pub fn gv_regret_sweep(p: &Params, seed: u64) -> Result<Table, CliError> {
    let horizon = positive(p, "horizon")?;
    let targets = p.f64_list("egv")?;
    if targets.iter().any(|v| *v <= 0.0) {
        return Err(CliError::Config("egv targets must be positive".into()));
    }
    let repeats = positive(p, "repeats")?;
    let dom = Domain::ball(1.0)?;
    let mut rng = SeededRng::new(seed);
    let mut t = Table::new(&["iter", "egv", "regret"]);
    let mut means = Vec::new();
    for (i, &target) in targets.iter().enumerate() {
        let mut total = 0.0;
        for _ in 0..repeats {
            let signs: Vec<f64> = (0..horizon).map(|_| if rng.bernoulli(0.5) { 1.0 } else { -1.0 }).collect();
            let build =
                |a: f64| LossSequence::from_losses("signs", signs.iter().map(|s| RoundLoss::Linear { f: vec![a * s, 0.0] }).collect());
            let raw = gradual_variation(&build(1.0))?;
            let seq = build((target / raw).sqrt());
            let egv = gradual_variation(&seq)?;
            let mut omp = Omp::euclidean(dom.clone(), 2, 1.0, Omp::theorem_eta(1.0, egv))?;
            let run = play(&mut omp, horizon, |k, _| seq.loss(k))?;
            total += regret(&run.decisions, &seq, &dom)?.final_regret();
        }
        let mean = total / repeats as f64;
        t.push(vec![(i + 1).into(), target.into(), mean.into()]);
        means.push(mean);
    }
    t.final_metric = *means.last().expect("non-empty target list");
    if means.len() >= 2 && means.iter().all(|m| *m > 0.0) {
        t.slope = Some(loglog_slope(&targets, &means)?);
    }
    Ok(t)
}

pub const OGD_VS_OMP: &[(&str, &str)] = &[("horizon", "10000"), ("eta", "0.02"), ("gv_budget", "40"), ("every", "100")];

pub fn ogd_vs_omp_adversary(p: &Params, _seed: u64) -> Result<Table, CliError> {
    let (horizon, eta, every) = (positive(p, "horizon")?, p.f64("eta")?, p.usize("every")?);
    let seq = ftrl_adversary(eta, horizon, 1, Some(p.f64("gv_budget")?))?;
    let gv = gradual_variation(&seq)?;
    let dom = Domain::ball(1.0)?;
    let mut ogd = Ogd::new(dom.clone(), StepSchedule::Constant(eta), &[0.0])?;
    let ogd_run = play(&mut ogd, horizon, |k, _| seq.loss(k))?;
    let mut omp = Omp::euclidean(dom.clone(), 1, 1.0, Omp::theorem_eta(1.0, gv))?;
    let omp_run = play(&mut omp, horizon, |k, _| seq.loss(k))?;
    let a = regret(&ogd_run.decisions, &seq, &dom)?;
    let b = regret(&omp_run.decisions, &seq, &dom)?;
    let mut t = Table::new(&["iter", "egv", "regret_ogd", "regret_omp"]);
    for k in (1..=horizon).filter(|&k| keep(k, every, horizon)) {
        t.push(vec![k.into(), gv.into(), a.cumulative[k - 1].into(), b.cumulative[k - 1].into()]);
    }
    t.final_metric = a.final_regret() - b.final_regret();
    Ok(t)
}

pub const EXPERT_SWITCH: &[(&str, &str)] = &[("experts", "4"), ("horizon", "10000"), ("every", "100")];

/// The best expert changes once, at the midpoint.
pub fn expert_switch(p: &Params, _seed: u64) -> Result<Table, CliError> {
    let (m, horizon, every) = (positive(p, "experts")?, positive(p, "horizon")?, p.usize("every")?);
    if m < 2 {
        return Err(CliError::Config("experts must be at least 2".into()));
    }
    let losses: Vec<RoundLoss> = (0..horizon)
        .map(|k| {
            let good = usize::from(k >= horizon / 2);
            RoundLoss::Linear { f: (0..m).map(|i| if i == good { 0.0 } else { 1.0 }).collect() }
        })
        .collect();
    let seq = LossSequence::from_losses("one_switch", losses);
    let egv = egv_inf(&seq)?;
    let mut learner = ExpertOmp::new(m, ExpertOmp::theorem_eta(m, egv))?;
    let run = play(&mut learner, horizon, |k, _| seq.loss(k))?;

    let mut t = Table::new(&["iter", "egv", "regret"]);
    let (mut ours, mut experts) = (0.0, vec![0.0; m]);
    let mut prefix_egv = 0.0;
    let mut prev = vec![0.0; m];
    for (k, (loss, x)) in seq.iter().zip(&run.decisions).enumerate() {
        let RoundLoss::Linear { f } = loss else { unreachable!("linear sequence") };
        ours += dot(&f, x);
        for (e, v) in experts.iter_mut().zip(&f) {
            *e += v;
        }
        prefix_egv += f.iter().zip(&prev).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max).powi(2);
        prev = f;
        if keep(k + 1, every, horizon) {
            let best = experts.iter().cloned().fold(f64::INFINITY, f64::min);
            t.push(vec![(k + 1).into(), prefix_egv.into(), (ours - best).into()]);
        }
    }
    let best = experts.iter().cloned().fold(f64::INFINITY, f64::min);
    t.final_metric = (ours - best) / ExpertOmp::regret_bound(m, egv);
    Ok(t)
}

pub const BANDIT_ESTIMATE: &[(&str, &str)] = &[("d", "5"), ("points", "100"), ("delta_max", "0.2"), ("curvature", "1.5")];

/// Estimator error on a quadratic, normalized by `√d·Lδ/2`.
pub fn bandit_estimate(p: &Params, seed: u64) -> Result<Table, CliError> {
    let (d, points, delta_max, curv) = (positive(p, "d")?, positive(p, "points")?, p.f64("delta_max")?, p.f64("curvature")?);
    if delta_max <= 0.0 || curv <= 0.0 {
        return Err(CliError::Config("delta_max and curvature must be positive".into()));
    }
    let mut rng = SeededRng::new(seed);
    let centre = rng.in_ball(d, 0.5);
    let f = |x: &[f64]| 0.5 * curv * x.iter().zip(&centre).map(|(a, c)| (a - c) * (a - c)).sum::<f64>();
    let mut t = Table::new(&["iter", "delta", "error", "bound"]);
    let mut worst: f64 = 0.0;
    for k in 1..=points {
        let x = rng.in_ball(d, 1.0);
        let delta = rng.uniform_in(1e-3 * delta_max, delta_max);
        let exact: Vec<f64> = x.iter().zip(&centre).map(|(a, c)| curv * (a - c)).collect();
        let err = dist(&gradient_estimate(f, &x, delta), &exact);
        let bound = (d as f64).sqrt() * curv * delta / 2.0;
        worst = worst.max(err / bound);
        t.push(vec![k.into(), delta.into(), err.into(), bound.into()]);
    }
    t.final_metric = worst;
    Ok(t)
}

pub const SOFT_CONSTRAINTS: &[(&str, &str)] =
    &[("horizon", "10000"), ("speed", "0.1"), ("radius", "0.3"), ("every", "100"), ("zero_violation", "0")];

pub fn soft_constraints(p: &Params, seed: u64) -> Result<Table, CliError> {
    let (horizon, every, radius) = (positive(p, "horizon")?, p.usize("every")?, p.f64("radius")?);
    let d = 2;
    let seq = drifting_quadratics(p.f64("speed")?, horizon, d)?;
    let losses: Vec<RoundLoss> = seq.iter().collect();
    let cons = vec![Constraint::Ball { center: vec![0.0; d], r: radius }];
    let (d_bound, f_range) = estimate_soft_constants(&cons, &losses, d, 1.0, &mut SeededRng::new(seed));
    let g = cons[0].grad_bound(1.0).max(1.5);
    let mut learner = match p.usize("zero_violation")? {
        0 => {
            let tune = SoftTuning::theorem(1.0, g, d_bound, f_range, 1, horizon);
            SoftOgd::new(cons.clone(), d, 1.0, tune.eta, tune.delta)?
        }
        1 => {
            let nv = smoothconvex_online::NoViolationTuning::theorem(1.0, g, d_bound, f_range, horizon)?;
            SoftOgd::no_violation(cons.clone(), d, 1.0, nv.eta, nv.delta, nv.gamma)?
        }
        _ => return Err(CliError::Config("zero_violation must be 0 or 1".into())),
    };
    let run = play(&mut learner, horizon, |k, _| seq.loss(k))?;
    let reg = regret(&run.decisions, &seq, &Domain::ball(radius)?)?;
    let viol = violation(&run.decisions, &cons);
    let mut t = Table::new(&["iter", "objective", "regret", "violation"]);
    let mut cum = 0.0;
    for (k, l) in run.losses.iter().enumerate() {
        cum += l;
        if keep(k + 1, every, horizon) {
            t.push(vec![(k + 1).into(), cum.into(), reg.cumulative[k].into(), viol[k][0].into()]);
        }
    }
    t.final_metric = viol[horizon - 1][0];
    Ok(t)
}

pub const PENALTY: &[(&str, &str)] = &[("horizon", "1000"), ("eta", "0.01"), ("delta", "0.5"), ("every", "10")];

/// The constraint `⟨x̄, x⟩ ≥ 1` with `‖x̄‖ = 1` touches the primal ball only at `x̄`.
pub fn penalty_impossibility(p: &Params, _seed: u64) -> Result<Table, CliError> {
    let (horizon, every) = (positive(p, "horizon")?, p.usize("every")?);
    let xbar = vec![0.6, 0.8];
    let cons = vec![Constraint::Halfspace { a: xbar.iter().map(|v| -v).collect(), b: -1.0 }];
    let mut learner = PenaltyOgd::new(cons.clone(), &[0.0, 0.0], 1.0, p.f64("eta")?, p.f64("delta")?)?;
    let run = play(&mut learner, horizon, |_, _| RoundLoss::Linear { f: xbar.clone() })?;
    let mut t = Table::new(&["iter", "objective", "violation"]);
    let (mut cum, mut pos) = (0.0, 0.0);
    for (k, (l, x)) in run.losses.iter().zip(&run.decisions).enumerate() {
        cum += l;
        pos += cons[0].g(x).max(0.0);
        if keep(k + 1, every, horizon) {
            t.push(vec![(k + 1).into(), cum.into(), pos.into()]);
        }
    }
    t.final_metric = pos / horizon as f64;
    Ok(t)
}

pub const PSI_TABLE: &[(&str, &str)] = &[("eta", "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9"), ("gamma", "1,10,100")];

pub fn psi_transform_table(p: &Params, _seed: u64) -> Result<Table, CliError> {
    let mut t = Table::new(&["eta", "gamma", "psi", "lower_bound"]);
    let mut worst = f64::INFINITY;
    for gamma in p.f64_list("gamma")? {
        for eta in p.f64_list("eta")? {
            let psi = psi_transform(eta, gamma)?;
            let lower = eta.abs() - (1.0 / eta.abs()).ln() / gamma;
            worst = worst.min(psi - lower);
            t.push(vec![eta.into(), gamma.into(), psi.into(), lower.into()]);
        }
    }
    t.final_metric = worst;
    Ok(t)
}

pub const HINGE_MISTAKES: &[(&str, &str)] = &[("horizon", "10000"), ("d", "2"), ("drift", "0.01"), ("radius", "1"), ("every", "100")];

pub fn hinge_mistakes(p: &Params, seed: u64) -> Result<Table, CliError> {
    let (horizon, d, every, radius) = (positive(p, "horizon")?, positive(p, "d")?, p.usize("every")?, p.f64("radius")?);
    let seq = classification_stream(p.f64("drift")?, horizon, d, &mut SeededRng::new(seed))?;
    let egv = measure_egv(&seq, &Probe::Start(vec![0.0; d]))?;
    let mut learner = HingePd::new(d, radius, HingePd::max_eta())?;
    let mut t = Table::new(&["iter", "egv", "mistakes", "hinge_loss"]);
    let mut hinge = 0.0;
    for (k, loss) in seq.iter().enumerate() {
        let RoundLoss::Hinge { yx } = &loss else { unreachable!("hinge stream") };
        hinge += loss.value(learner.weights());
        learner.round(yx, 1.0)?;
        if keep(k + 1, every, horizon) {
            t.push(vec![(k + 1).into(), egv.into(), learner.mistakes().into(), hinge.into()]);
        }
    }
    t.final_metric = learner.mistakes() as f64;
    Ok(t)
}
