//! Best fixed decision in hindsight, `argmin_{x ∈ W} Σ_t f_t(x)`.

use smoothconvex_core::linalg::{axpy, norm_sq};
use smoothconvex_core::{Domain, Error, Result};
use smoothconvex_online::RoundLoss;

/// Spacing of the first grid pass.
pub const GRID_RESOLUTION: f64 = 1e-3;
/// Spacing reached by the refinement passes.
pub const GRID_FINE: f64 = 1e-5;
/// Largest number of loss evaluations spent on one grid pass.
pub const GRID_BUDGET: f64 = 4e8;

#[derive(Debug, Clone, PartialEq)]
pub struct Comparator {
    pub point: Vec<f64>,
    pub total_loss: f64,
    /// Whether the minimizer came from a closed form rather than a grid.
    pub exact: bool,
}

/// `Σ f_t = (q/2)‖x‖² + ⟨b, x⟩ + c` when every loss is zero, linear or
/// quadratic.
fn aggregate(losses: &[RoundLoss], d: usize) -> Option<(f64, Vec<f64>, f64)> {
    let mut q = 0.0;
    let mut b = vec![0.0; d];
    let mut c = 0.0;
    for l in losses {
        match l {
            RoundLoss::Zero { .. } => {}
            RoundLoss::Linear { f } => axpy(1.0, f, &mut b),
            RoundLoss::Quadratic { center, curvature } => {
                q += curvature;
                axpy(-curvature, center, &mut b);
                c += 0.5 * curvature * norm_sq(center);
            }
            _ => return None,
        }
    }
    Some((q, b, c))
}

fn total(losses: &[RoundLoss], x: &[f64]) -> f64 {
    losses.iter().map(|l| l.value(x)).sum()
}

fn bounding_box(domain: &Domain, d: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    Ok(match domain {
        Domain::Ball { r } | Domain::L1Ball { r } | Domain::HalfspaceCut { r, .. } => (vec![-r; d], vec![*r; d]),
        Domain::Box { lo, hi } => (lo.clone(), hi.clone()),
        Domain::Simplex { .. } => (vec![0.0; d], vec![1.0; d]),
        Domain::Unconstrained => return Err(Error::Unsupported("grid comparator needs a bounded domain".into())),
    })
}

/// Grid search restricted to feasible points, returning the best point.
fn grid_pass(
    losses: &[RoundLoss],
    domain: &Domain,
    lo: &[f64],
    hi: &[f64],
    h: f64,
) -> Option<(Vec<f64>, f64)> {
    let d = lo.len();
    let counts: Vec<usize> = lo.iter().zip(hi).map(|(a, b)| ((b - a) / h).round().max(0.0) as usize + 1).collect();
    let mut idx = vec![0usize; d];
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut x = vec![0.0; d];
    loop {
        for i in 0..d {
            x[i] = (lo[i] + idx[i] as f64 * h).min(hi[i]);
        }
        if domain.contains(&x) {
            let v = total(losses, &x);
            if best.as_ref().map_or(true, |(_, b)| v < *b) {
                best = Some((x.clone(), v));
            }
        }
        let mut k = 0;
        loop {
            if k == d {
                return best;
            }
            idx[k] += 1;
            if idx[k] < counts[k] {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Minimizer of the cumulative loss over `domain`.
///
/// Zero, linear and quadratic losses have a closed form (the aggregate is a
/// scaled identity quadratic, so projecting its unconstrained minimizer is
/// exact). Other losses use a grid for `d ≤ 3`: spacing [`GRID_RESOLUTION`]
/// (coarsened when the pass would exceed [`GRID_BUDGET`] evaluations), then
/// passes shrinking by 10× around the best cell down to [`GRID_FINE`].
pub fn best_fixed_point(losses: &[RoundLoss], domain: &Domain, d: usize) -> Result<Comparator> {
    if losses.is_empty() {
        return Err(Error::Input("no losses".into()));
    }
    if let Some((q, b, _)) = aggregate(losses, d) {
        let point = if q > 0.0 {
            domain.project(&b.iter().map(|v| -v / q).collect::<Vec<_>>())?
        } else if matches!(domain, Domain::Unconstrained) && b.iter().any(|v| *v != 0.0) {
            return Err(Error::Domain("linear losses are unbounded below on an unconstrained domain".into()));
        } else {
            domain.linear_minimizer(&b)?
        };
        return Ok(Comparator { total_loss: total(losses, &point), point, exact: true });
    }
    if d > 3 {
        return Err(Error::Unsupported(format!("no closed-form comparator and d = {d} > 3")));
    }
    let (lo, hi) = bounding_box(domain, d)?;
    let volume: f64 = lo.iter().zip(&hi).map(|(a, b)| (b - a).max(0.0)).product();
    let per_point = losses.len() as f64;
    let mut h = GRID_RESOLUTION;
    while volume / h.powi(d as i32) * per_point > GRID_BUDGET {
        h *= 2.0;
    }
    let (mut point, mut value) = grid_pass(losses, domain, &lo, &hi, h)
        .ok_or_else(|| Error::Numeric("grid missed the feasible set".into()))?;
    while h > GRID_FINE * (1.0 + 1e-9) {
        let radius = 2.0 * h;
        h = (h / 10.0).max(GRID_FINE);
        let wlo: Vec<f64> = point.iter().zip(&lo).map(|(p, l)| (p - radius).max(*l)).collect();
        let whi: Vec<f64> = point.iter().zip(&hi).map(|(p, u)| (p + radius).min(*u)).collect();
        if let Some((p, v)) = grid_pass(losses, domain, &wlo, &whi, h) {
            if v < value {
                point = p;
                value = v;
            }
        }
    }
    Ok(Comparator { point, total_loss: value, exact: false })
}
