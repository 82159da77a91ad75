use smoothconvex_core::linalg::{dist_sq, norm};
use smoothconvex_core::{Domain, Objective, SeededRng, StepSchedule, StochasticObjective};
use smoothconvex_metrics::{loglog_slope, reference_optimum};
use smoothconvex_problems::{
    least_squares_problem, logistic_problem, onedim_target_risk_problem, LabeledDataset, NoisyQuadratic,
};
use smoothconvex_stochastic::*;

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn quadratic(d: usize, lambda: f64, l: f64, sigma: f64, seed: u64) -> NoisyQuadratic {
    NoisyQuadratic::random(d, 50, lambda, l, sigma, &mut SeededRng::new(seed)).unwrap()
}

#[test]
fn sgd_inverse_t_on_strongly_convex_logistic_improves_with_horizon() {
    let lambda = 0.1;
    let mut data = LabeledDataset::synthetic_classification(200, 5, 0.1, &mut SeededRng::new(3));
    data.normalize_rows();
    let prob = logistic_problem(data, lambda).unwrap();
    let opt = reference_optimum(&prob, &Domain::Unconstrained, prob.constants.l).unwrap();
    assert!(opt.certified);
    let dom = Domain::ball(2.0 * norm(&opt.w).max(1.0)).unwrap();
    let gap = |t: usize| {
        let runs: Vec<f64> = (0..5)
            .map(|seed| {
                let cfg = SolverConfig::new(seed, t, StepSchedule::InverseT(1.0 / lambda));
                prob.value(&sgd(&prob, &dom, &cfg).unwrap().final_point) - opt.value
            })
            .collect();
        mean(&runs)
    };
    let (short, long) = (gap(100), gap(10_000));
    assert!(long < short, "T=1e2 gap {short}, T=1e4 gap {long}");
}

#[test]
fn sgd_slope_on_noisy_flat_quadratic() {
    let prob = quadratic(20, 1e-7, 1.0, 0.1, 7);
    let fstar = prob.value(prob.minimizer());
    let dom = Domain::ball(3.0 * norm(prob.minimizer()).max(1.0)).unwrap();
    let ts = [100usize, 1_000, 10_000, 100_000];
    let gaps: Vec<f64> = ts
        .iter()
        .map(|&t| {
            let runs: Vec<f64> = (0..10)
                .map(|seed| {
                    let cfg = SolverConfig::new(seed, t, StepSchedule::InverseSqrt(1.0));
                    prob.value(&sgd(&prob, &dom, &cfg).unwrap().final_point) - fstar
                })
                .collect();
            mean(&runs)
        })
        .collect();
    let xs: Vec<f64> = ts.iter().map(|&t| t as f64).collect();
    let slope = loglog_slope(&xs, &gaps).unwrap();
    assert!((slope + 0.5).abs() <= 0.15, "slope {slope}, gaps {gaps:?}");
}

#[test]
fn gd_and_agd_meet_their_bounds() {
    let prob = quadratic(10, 1e-3, 1.0, 0.0, 21);
    let beta = prob.constants.l;
    let fstar = prob.value(prob.minimizer());
    let r2 = dist_sq(&vec![0.0; 10], prob.minimizer());
    for t in [10usize, 100, 1_000] {
        let cfg = SolverConfig::deterministic(t, StepSchedule::Constant(1.0 / beta)).with_start(vec![0.0; 10]);
        let g = prob.value(&gd(&prob, &Domain::Unconstrained, &cfg).unwrap().final_point) - fstar;
        let a = prob.value(&agd(&prob, &Domain::Unconstrained, &cfg).unwrap().final_point) - fstar;
        let tf = t as f64;
        assert!(g <= 2.0 * beta * r2 / tf, "GD T={t}: {g}");
        assert!(a <= 2.0 * beta * r2 / (tf * tf), "AGD T={t}: {a}");
    }
}

#[test]
fn agd_beats_gd_tenfold_on_ill_conditioned_quadratic() {
    let prob = quadratic(10, 1e-3, 1.0, 0.0, 22);
    assert!((prob.constants.kappa - 1e3).abs() < 1e-6);
    let fstar = prob.value(prob.minimizer());
    let cfg = SolverConfig::deterministic(300, StepSchedule::Constant(1.0)).with_start(vec![0.0; 10]);
    let g = prob.value(&gd(&prob, &Domain::Unconstrained, &cfg).unwrap().final_point) - fstar;
    let a = prob.value(&agd(&prob, &Domain::Unconstrained, &cfg).unwrap().final_point) - fstar;
    assert!(10.0 * a <= g, "GD {g}, AGD {a}");
}

#[test]
fn cgd_meets_its_bound_on_ball() {
    let prob = quadratic(5, 0.5, 2.0, 0.0, 23);
    let r = 0.5;
    let dom = Domain::ball(r).unwrap();
    let opt = reference_optimum(&prob, &dom, prob.constants.l).unwrap();
    for t in [10usize, 100, 1_000] {
        let cfg = SolverConfig::deterministic(t, StepSchedule::Constant(1.0));
        let tr = cgd(&prob, &dom, &cfg).unwrap();
        let gap = prob.value(&tr.final_point) - opt.value;
        assert!(gap <= 2.0 * prob.constants.l * r * r / (t as f64 + 1.0), "T={t}: {gap}");
        assert_eq!(tr.projections, 0);
    }
}

#[test]
fn clipped_sgd_reaches_target_risk() {
    let p = onedim_target_risk_problem(0.05).unwrap();
    let target = 2.0 * p.eps_opt();
    let dom = Domain::ball(1.0).unwrap();
    let prm = ClippedParams::theorem(2.0, 2.0, 1, 1.0, target, 0.5, 0.5, 8, 0.1).unwrap();
    let bound = (1.0 + prm.tau / (1.0 - prm.epsilon)) * target * 1.1;
    let hits = (0..10)
        .filter(|&seed| {
            let cfg = SolverConfig::new(seed, 0, StepSchedule::Constant(prm.eta));
            let tr = clipped_sgd(&p, &dom, &prm, &cfg).unwrap();
            assert_eq!(tr.calls_stochastic as usize, prm.stage_len * prm.stages);
            p.expected_loss(tr.final_point[0]) <= bound
        })
        .count();
    assert!(hits >= 9, "{hits}/10 runs within {bound}");
}

fn rank_deficient_least_squares() -> (smoothconvex_problems::FiniteSumProblem, f64) {
    let mut data = LabeledDataset::synthetic_regression(200, 10, 2, 0.1, &mut SeededRng::new(11));
    data.normalize_rows();
    let prob = least_squares_problem(data, 0.0).unwrap();
    let opt = reference_optimum(&prob, &Domain::Unconstrained, prob.constants.l).unwrap();
    assert!(opt.certified);
    let radius = 2.0 * norm(&opt.w).max(0.5);
    (prob, radius)
}

#[test]
fn mixed_grad_rate_and_accounting() {
    let (prob, radius) = rank_deficient_least_squares();
    let dom = Domain::ball(radius).unwrap();
    let fstar = reference_optimum(&prob, &dom, prob.constants.l).unwrap().value;
    let beta = prob.constants.l_max;
    let mut calls = Vec::new();
    let mut gaps = Vec::new();
    for m in 4..=8 {
        let prm = MixedParams {
            gamma: 2.0,
            lambda1: 0.5 * beta,
            delta1: radius,
            t1: 50,
            epochs: m,
            eta1: 1.0 / (2.0 * beta * 150f64.sqrt()),
        };
        let mut runs = Vec::new();
        for seed in 0..3 {
            let tr = mixed_grad(&prob, &dom, &prm, &SolverConfig::new(seed, 0, StepSchedule::Constant(1.0))).unwrap();
            assert_eq!(tr.calls_full, m as u64);
            assert_eq!(tr.calls_stochastic as usize, 50 * (4usize.pow(m as u32) - 1) / 3);
            runs.push(prob.value(&tr.final_point) - fstar);
        }
        calls.push(prm.total_stochastic() as f64);
        gaps.push(mean(&runs));
    }
    let slope = loglog_slope(&calls, &gaps).unwrap();
    assert!((slope + 1.0).abs() <= 0.2, "slope {slope}, gaps {gaps:?}");
}

#[test]
fn emgd_halves_gap_each_epoch_on_logistic() {
    let lambda = 1e-2;
    let hits = (0..10u64)
        .filter(|&seed| {
            let mut data = LabeledDataset::synthetic_classification(500, 20, 0.1, &mut SeededRng::new(100 + seed));
            data.normalize_rows();
            let prob = logistic_problem(data, lambda).unwrap();
            let opt = reference_optimum(&prob, &Domain::Unconstrained, prob.constants.l).unwrap();
            // strong convexity puts w* within this radius of the origin
            let delta1 = (2.0 * (prob.value(&[0.0; 20]) - opt.value) / lambda).sqrt();
            let mut prm = EmgdParams::theorem(prob.constants.l_max, lambda, delta1, 6, 0.1);
            prm.t = prm.t.min(10_000);
            let tr = emgd(&prob, &Domain::Unconstrained, &prm, &SolverConfig::new(seed, 0, StepSchedule::Constant(1.0)))
                .unwrap();
            assert_eq!(tr.calls_full, 6);
            assert_eq!(tr.calls_stochastic, 60_000);
            tr.records.iter().filter(|r| r.iter >= 1).all(|r| {
                r.objective.unwrap() - opt.value <= lambda * delta1 * delta1 / 2f64.powi(r.iter as i32 + 1)
            })
        })
        .count();
    assert!(hits >= 8, "{hits}/10 seeds met every epoch bound");
}

struct BallProblem {
    prob: NoisyQuadratic,
    dom: Domain,
    fstar: f64,
    g1: f64,
    sigma: f64,
}

fn ball_problem() -> BallProblem {
    let prob = NoisyQuadratic::random(5, 100, 0.5, 1.0, 0.3, &mut SeededRng::new(5)).unwrap();
    let dom = Domain::ball(0.8).unwrap();
    let opt = reference_optimum(&prob, &dom, prob.constants.l).unwrap();
    assert!(opt.certified);
    let g1 = prob.constants.l * (1.0 + norm(prob.minimizer()));
    let sigma = prob.noise.iter().map(|x| norm(x)).fold(0.0, f64::max);
    BallProblem { fstar: opt.value, prob, dom, g1, sigma }
}

#[test]
fn sgd_pd_slope_with_one_projection() {
    let b = ball_problem();
    let ts = [1_000usize, 10_000, 100_000];
    let gaps: Vec<f64> = ts
        .iter()
        .map(|&t| {
            let runs: Vec<f64> = (0..10)
                .map(|seed| {
                    let (prm, eta) = PdParams::theorem(b.g1, b.dom.g2(5), b.dom.c2(), b.sigma, t, 0.1);
                    let tr = sgd_pd(&b.prob, &b.dom, &prm, &SolverConfig::new(seed, t, StepSchedule::Constant(eta))).unwrap();
                    assert_eq!(tr.projections, 1);
                    assert!(b.dom.g(&tr.final_point) <= 1e-10);
                    b.prob.value(&tr.final_point) - b.fstar
                })
                .collect();
            mean(&runs)
        })
        .collect();
    let xs: Vec<f64> = ts.iter().map(|&t| t as f64).collect();
    let slope = loglog_slope(&xs, &gaps).unwrap();
    assert!((slope + 0.5).abs() <= 0.15, "slope {slope}, gaps {gaps:?}");
}

#[test]
fn sgd_st_gap_tracks_log_t_over_t() {
    let b = ball_problem();
    let strong = b.prob.constants.lambda;
    let g1 = b.g1 + b.sigma;
    let ratios: Vec<f64> = [1_000usize, 10_000, 100_000]
        .iter()
        .map(|&t| {
            let tf = t as f64;
            let runs: Vec<f64> = (0..10)
                .map(|seed| {
                    let prm = StParams::theorem(2.0 * g1 / b.dom.rho(), t, Some(g1));
                    let cfg = SolverConfig::new(seed, t, StepSchedule::InverseT(1.0 / (2.0 * strong)));
                    let tr = sgd_st(&b.prob, &b.dom, &prm, &cfg).unwrap();
                    assert_eq!(tr.projections, 1);
                    assert!(b.dom.g(&tr.final_point) <= 1e-10);
                    b.prob.value(&tr.final_point) - b.fstar
                })
                .collect();
            mean(&runs) * tf / tf.ln()
        })
        .collect();
    let hi = ratios.iter().cloned().fold(f64::MIN, f64::max);
    let lo = ratios.iter().cloned().fold(f64::MAX, f64::min);
    assert!(lo > 0.0 && hi <= 3.0 * lo, "ratios {ratios:?}");
}

#[test]
fn variance_probe_matches_monte_carlo() {
    let mut rng = SeededRng::new(40);
    let data = LabeledDataset::synthetic_classification(60, 4, 0.2, &mut rng);
    let prob = logistic_problem(data, 0.05).unwrap();
    let point = rng.normal_vec(4);
    let center = rng.normal_vec(4);
    let exact = gradient_variance_probe(&prob, &point, &center, 0, &mut rng);

    let full_w = prob.gradient(&point);
    let full_c = prob.gradient(&center);
    let draws = 1_000_000;
    let (mut s1, mut q1, mut s2, mut q2) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..draws {
        let i = prob.sample_component(&mut rng);
        let gw = prob.component_gradient(i, &point);
        let gc = prob.component_gradient(i, &center);
        let a: f64 = gw.iter().zip(&full_w).map(|(x, y)| (x - y).powi(2)).sum();
        let b: f64 = (0..4).map(|j| (gw[j] - gc[j] - full_w[j] + full_c[j]).powi(2)).sum();
        s1 += a;
        q1 += a * a;
        s2 += b;
        q2 += b * b;
    }
    let n = draws as f64;
    for (name, got, s, q) in [("sgd", exact.sgd_var, s1, q1), ("mixed", exact.mixed_var, s2, q2)] {
        let m = s / n;
        let se = ((q / n - m * m) / n).sqrt();
        assert!((got - m).abs() <= 3.0 * se, "{name}: exact {got}, mc {m} ± {se}");
    }
}

#[test]
fn variance_probe_degenerate_cases() {
    let mut rng = SeededRng::new(41);
    let data = LabeledDataset::synthetic_classification(30, 3, 0.1, &mut rng);
    let prob = logistic_problem(data, 0.0).unwrap();
    let w = rng.normal_vec(3);
    assert_eq!(gradient_variance_probe(&prob, &w, &w, 0, &mut rng).mixed_var, 0.0);

    let single = LabeledDataset::synthetic_classification(1, 3, 0.0, &mut rng);
    let one = logistic_problem(single, 0.1).unwrap();
    let c = rng.normal_vec(3);
    let v = gradient_variance_probe(&one, &w, &c, 0, &mut rng);
    assert_eq!(v.sgd_var, 0.0);
    assert_eq!(v.mixed_var, 0.0);
}
