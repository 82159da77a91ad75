use proptest::prelude::*;
use smoothconvex_core::domain::{project_ball, project_simplex};
use smoothconvex_core::linalg::{dist, norm};
use smoothconvex_core::{bregman, prox_step, Domain, MirrorMap, SeededRng};

const D: usize = 4;

fn domains() -> Vec<Domain> {
    vec![
        Domain::ball(1.3).unwrap(),
        Domain::boxed(vec![-1.0, -0.5, 0.0, -2.0], vec![1.0, 0.5, 3.0, -1.0]).unwrap(),
        Domain::simplex(D).unwrap(),
        Domain::l1_ball(1.5).unwrap(),
        Domain::halfspace_cut(vec![1.0, -2.0, 0.5, 1.0], 0.3, 1.2).unwrap(),
    ]
}

fn random_point(rng: &mut SeededRng, scale: f64) -> Vec<f64> {
    (0..D).map(|_| rng.uniform_in(-scale, scale)).collect()
}

fn is_closed_form(d: &Domain) -> bool {
    !matches!(d, Domain::HalfspaceCut { .. })
}

#[test]
fn projection_is_idempotent() {
    let mut rng = SeededRng::new(1);
    for dom in domains() {
        for _ in 0..1000 {
            let x = random_point(&mut rng, 5.0);
            let p = dom.project(&x).unwrap();
            let pp = dom.project(&p).unwrap();
            if is_closed_form(&dom) {
                let bits: Vec<u64> = p.iter().map(|v| v.to_bits()).collect();
                let bits2: Vec<u64> = pp.iter().map(|v| v.to_bits()).collect();
                assert_eq!(bits, bits2, "{} at {x:?}", dom.kind_name());
            } else {
                assert!(dist(&p, &pp) <= 1e-12, "{} at {x:?}", dom.kind_name());
            }
        }
    }
}

#[test]
fn projection_is_feasible() {
    let mut rng = SeededRng::new(2);
    for dom in domains() {
        for _ in 0..1000 {
            let x = random_point(&mut rng, 5.0);
            let p = dom.project(&x).unwrap();
            assert!(dom.g(&p) <= 1e-12, "{} g = {}", dom.kind_name(), dom.g(&p));
        }
    }
}

#[test]
fn projection_is_nearest_feasible_point() {
    let mut rng = SeededRng::new(3);
    for dom in domains() {
        for _ in 0..50 {
            let x = random_point(&mut rng, 5.0);
            let p = dom.project(&x).unwrap();
            let dp = dist(&x, &p);
            let mut checked = 0;
            while checked < 100 {
                // Random feasible points from projections of other random points.
                let y = dom.project(&random_point(&mut rng, 3.0)).unwrap();
                assert!(dp <= dist(&x, &y) + 1e-12, "{}", dom.kind_name());
                checked += 1;
            }
        }
    }
}

proptest! {
    #[test]
    fn projection_is_non_expansive(
        x in prop::collection::vec(-6.0f64..6.0, D),
        y in prop::collection::vec(-6.0f64..6.0, D),
    ) {
        for dom in domains() {
            let px = dom.project(&x).unwrap();
            let py = dom.project(&y).unwrap();
            prop_assert!(dist(&px, &py) <= dist(&x, &y) + 1e-12, "{}", dom.kind_name());
        }
    }

    #[test]
    fn bregman_is_strongly_convex(
        a in prop::collection::vec(0.01f64..1.0, D),
        b in prop::collection::vec(0.01f64..1.0, D),
    ) {
        let sa: f64 = a.iter().sum();
        let sb: f64 = b.iter().sum();
        let p: Vec<f64> = a.iter().map(|v| v / sa).collect();
        let q: Vec<f64> = b.iter().map(|v| v / sb).collect();
        let e = bregman(MirrorMap::Entropy, &p, &q).unwrap();
        let l1: f64 = p.iter().zip(&q).map(|(x, y)| (x - y).abs()).sum();
        prop_assert!(e >= 0.5 * l1 * l1 - 1e-15);
        let eu = bregman(MirrorMap::Euclidean, &a, &b).unwrap();
        prop_assert!(eu >= 0.5 * dist(&a, &b).powi(2) - 1e-15);
    }

    #[test]
    fn inverse_gradient_round_trips(x in prop::collection::vec(1e-6f64..10.0, D)) {
        for m in [MirrorMap::Euclidean, MirrorMap::Entropy] {
            let back = m.inverse_gradient(&m.gradient(&x));
            for (a, b) in back.iter().zip(&x) {
                prop_assert!((a - b).abs() <= 1e-10 * b.max(1.0));
            }
        }
    }
}

#[test]
fn euclidean_prox_equals_projected_step() {
    let mut rng = SeededRng::new(4);
    let doms = domains();
    for k in 0..500 {
        let dom = &doms[k % doms.len()];
        let z = dom.project(&random_point(&mut rng, 2.0)).unwrap();
        let g = random_point(&mut rng, 3.0);
        let eta = rng.uniform_in(0.01, 2.0);
        let u = prox_step(MirrorMap::Euclidean, dom, &z, &g, eta).unwrap();
        let step: Vec<f64> = z.iter().zip(&g).map(|(a, b)| a - eta * b).collect();
        let p = dom.project(&step).unwrap();
        assert!(dist(&u, &p) <= 1e-10);
    }
}

/// Exhaustive active-set oracle for simplex projection in small dimension:
/// for every support set S the equality-constrained least squares solution
/// is `y_S = x_S − (Σx_S − 1)/|S|`; keep the best non-negative one.
fn simplex_oracle(x: &[f64]) -> Vec<f64> {
    let d = x.len();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 1u32..(1 << d) {
        let support: Vec<usize> = (0..d).filter(|i| mask & (1 << i) != 0).collect();
        let s: f64 = support.iter().map(|&i| x[i]).sum();
        let shift = (s - 1.0) / support.len() as f64;
        let mut y = vec![0.0; d];
        for &i in &support {
            y[i] = x[i] - shift;
        }
        if y.iter().any(|v| *v < -1e-15) {
            continue;
        }
        let dd = dist(x, &y);
        if best.as_ref().map_or(true, |(b, _)| dd < *b) {
            best = Some((dd, y));
        }
    }
    best.unwrap().1
}

#[test]
fn simplex_projection_matches_active_set_oracle() {
    let want = simplex_oracle(&[1.2, -0.2, 0.0]);
    let got = Domain::simplex(3).unwrap().project(&[1.2, -0.2, 0.0]).unwrap();
    assert!(dist(&want, &got) < 1e-12);
    assert!(dist(&got, &[1.0, 0.0, 0.0]) < 1e-15);

    let mut rng = SeededRng::new(5);
    for d in 1..=4 {
        for _ in 0..300 {
            let x: Vec<f64> = (0..d).map(|_| rng.uniform_in(-2.0, 2.0)).collect();
            let got = project_simplex(&x, 1.0);
            let want = simplex_oracle(&x);
            assert!(dist(&got, &want) < 1e-12, "{x:?}: {got:?} vs {want:?}");
        }
    }
}

#[test]
fn ball_prox_matches_grid_search() {
    // argmin over the unit disc of η⟨u, g⟩ + ½‖u − z‖², by brute force.
    let z = [0.9, 0.0];
    let g = [-1.0, 0.0];
    let eta = 0.5;
    let obj = |u: [f64; 2]| eta * (u[0] * g[0] + u[1] * g[1]) + 0.5 * ((u[0] - z[0]).powi(2) + (u[1] - z[1]).powi(2));
    let mut best = (f64::INFINITY, [0.0, 0.0]);
    let n = 2000;
    for i in 0..=n {
        for j in 0..=n {
            let u = [-1.0 + 2.0 * i as f64 / n as f64, -1.0 + 2.0 * j as f64 / n as f64];
            if norm(&u) <= 1.0 {
                let v = obj(u);
                if v < best.0 {
                    best = (v, u);
                }
            }
        }
    }
    let dom = Domain::ball(1.0).unwrap();
    let u = prox_step(MirrorMap::Euclidean, &dom, &z, &g, eta).unwrap();
    assert!(dist(&u, &best.1) <= 2e-3, "{u:?} vs {:?}", best.1);
    assert!(dist(&u, &[1.0, 0.0]) < 1e-15);
    assert!(dist(&project_ball(&[1.4, 0.0], &[0.0, 0.0], 1.0), &u) < 1e-15);
}
