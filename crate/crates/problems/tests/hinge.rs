use proptest::prelude::*;
use smoothconvex_problems::{psi_transform, smoothed_hinge_grad, smoothed_hinge_second, smoothed_hinge_value};

/// Minimum over α of `p φ(α) + (1 − p) φ(−α)` by scanning a grid on
/// `[−20, 20]`, first with step `coarse`, then at step `fine` around the best
/// coarse point.
fn grid_min(eta: f64, gamma: f64, coarse: f64, fine: f64) -> f64 {
    let p = 0.5 * (1.0 + eta);
    let h = |a: f64| p * smoothed_hinge_value(a, gamma) + (1.0 - p) * smoothed_hinge_value(-a, gamma);
    let scan = |lo: f64, hi: f64, step: f64| {
        let n = ((hi - lo) / step).round() as i64;
        (0..=n).map(|k| lo + k as f64 * step).map(|a| (h(a), a)).fold((f64::INFINITY, 0.0), |b, v| if v.0 < b.0 { v } else { b })
    };
    let (_, a0) = scan(-20.0, 20.0, coarse);
    scan((a0 - coarse).max(-20.0), (a0 + coarse).min(20.0), fine).0
}

fn brute_psi(eta: f64, gamma: f64, coarse: f64) -> f64 {
    smoothed_hinge_value(0.0, gamma) - grid_min(eta, gamma, coarse, 1e-6)
}

#[test]
fn psi_matches_fine_grid_oracle() {
    // One full pass at step 1e-6 over [−20, 20].
    let want = brute_psi(0.5, 10.0, 1e-6);
    let got = psi_transform(0.5, 10.0).unwrap();
    assert!((got - want).abs() <= 1e-5, "{got} vs {want}");
}

#[test]
fn psi_matches_refined_grid_oracle() {
    for gamma in [1.0, 10.0, 100.0] {
        for eta in [-0.9, -0.5, -0.1, 0.1, 0.5, 0.9] {
            let got = psi_transform(eta, gamma).unwrap();
            let want = brute_psi(eta, gamma, 1e-3);
            assert!((got - want).abs() <= 1e-5, "eta={eta} gamma={gamma}: {got} vs {want}");
        }
    }
}

#[test]
fn psi_tends_to_abs_eta() {
    for eta in [-0.95, -0.6, -0.2, 0.05, 0.4, 0.8] {
        let p = psi_transform(eta, 1e4).unwrap();
        assert!((p - f64::abs(eta)).abs() <= 1e-3, "eta={eta}: {p}");
    }
}

#[test]
fn derivative_matches_finite_differences() {
    for gamma in [0.5, 4.0, 60.0] {
        for k in 0..50 {
            let z = -3.0 + 0.12 * k as f64;
            let h = 1e-5 * (1.0 + f64::abs(z));
            let fd = (smoothed_hinge_value(z + h, gamma) - smoothed_hinge_value(z - h, gamma)) / (2.0 * h);
            let g = smoothed_hinge_grad(z, gamma);
            assert!((fd - g).abs() <= 1e-6 * g.abs().max(1.0), "z={z} gamma={gamma}");
            let fd2 = (smoothed_hinge_grad(z + h, gamma) - smoothed_hinge_grad(z - h, gamma)) / (2.0 * h);
            let s = smoothed_hinge_second(z, gamma);
            assert!((fd2 - s).abs() <= 1e-6 * s.abs().max(1.0), "z={z} gamma={gamma}");
        }
    }
}

proptest! {
    #[test]
    fn hinge_bounds(z in -50.0f64..50.0, gamma in 0.01f64..1e3) {
        let v = smoothed_hinge_value(z, gamma);
        let hinge = (1.0 - z).max(0.0);
        prop_assert!(v >= hinge - 1e-12);
        prop_assert!(v <= hinge + 2f64.ln() / gamma + 1e-12);
        let g = smoothed_hinge_grad(z, gamma);
        prop_assert!((-1.0..=0.0).contains(&g));
        prop_assert!(smoothed_hinge_second(z, gamma) <= gamma / 4.0 + 1e-12);
    }

    #[test]
    fn hinge_is_convex_and_decreasing(a in -20.0f64..20.0, b in -20.0f64..20.0, gamma in 0.1f64..100.0) {
        let mid = smoothed_hinge_value(0.5 * (a + b), gamma);
        prop_assert!(mid <= 0.5 * (smoothed_hinge_value(a, gamma) + smoothed_hinge_value(b, gamma)) + 1e-12);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(smoothed_hinge_value(hi, gamma) <= smoothed_hinge_value(lo, gamma));
    }

    #[test]
    fn psi_monotone_in_abs_eta(e1 in 0.0f64..0.999, e2 in 0.0f64..0.999, gamma in 0.1f64..1e3, s in any::<bool>()) {
        let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
        let sign = if s { 1.0 } else { -1.0 };
        let a = psi_transform(sign * lo, gamma).unwrap();
        let b = psi_transform(hi, gamma).unwrap();
        prop_assert!(a >= 0.0);
        prop_assert!(a <= b + 1e-12, "{a} > {b}");
    }
}
