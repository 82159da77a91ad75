//! Feasible sets `K = {x : g(x) ≤ 0}` with exact Euclidean projections.

use crate::error::{check_dims, Error, Result};
use crate::linalg::{dot, norm, norm1, norm_sq};

/// A closed convex feasible set.
///
/// Every kind carries a scalar constraint `g` with a subgradient and the
/// boundary constants used by the one-projection solvers:
/// `rho ≤ ‖∇g(x)‖ ≤ g2` on the boundary and `|g| ≤ c2` on the set.
#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    /// Euclidean ball `‖x‖ ≤ r` centred at the origin, `g(x) = ‖x‖² − r²`.
    Ball { r: f64 },
    /// Axis-aligned box `lo ≤ x ≤ hi`, `g(x) = max_i max(lo_i − x_i, x_i − hi_i)`.
    Box { lo: Vec<f64>, hi: Vec<f64> },
    /// Probability simplex of dimension `d`.
    Simplex { d: usize },
    /// ℓ1 ball `‖x‖₁ ≤ r`, `g(x) = ‖x‖₁ − r`.
    L1Ball { r: f64 },
    /// Ball `‖x‖ ≤ r` cut by the halfspace `⟨a, x⟩ ≤ b`.
    HalfspaceCut { a: Vec<f64>, b: f64, r: f64 },
    /// All of `R^d`; used for unconstrained runs.
    Unconstrained,
}

// Slack on `|Σx − 1|` for simplex membership: sums produced by the projection
// are exact only up to rounding.
fn simplex_slack(d: usize) -> f64 {
    4.0 * f64::EPSILON * d.max(1) as f64
}

impl Domain {
    pub fn ball(r: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::Config(format!("ball radius must be positive, got {r}")));
        }
        Ok(Domain::Ball { r })
    }

    pub fn boxed(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        check_dims(lo.len(), hi.len())?;
        if let Some(i) = (0..lo.len()).find(|&i| lo[i] > hi[i]) {
            return Err(Error::Config(format!("empty box: lo[{i}] = {} > hi[{i}] = {}", lo[i], hi[i])));
        }
        Ok(Domain::Box { lo, hi })
    }

    pub fn simplex(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Config("simplex dimension must be at least 1".into()));
        }
        Ok(Domain::Simplex { d })
    }

    pub fn l1_ball(r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::Config(format!("l1 radius must be positive, got {r}")));
        }
        Ok(Domain::L1Ball { r })
    }

    pub fn halfspace_cut(a: Vec<f64>, b: f64, r: f64) -> Result<Self> {
        let na = norm(&a);
        if !(na > 0.0) || !(r > 0.0) {
            return Err(Error::Config("halfspace normal and radius must be non-zero".into()));
        }
        if b / na <= -r {
            return Err(Error::Config("halfspace does not meet the ball".into()));
        }
        Ok(Domain::HalfspaceCut { a, b, r })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Domain::Ball { .. } => "ball",
            Domain::Box { .. } => "box",
            Domain::Simplex { .. } => "simplex",
            Domain::L1Ball { .. } => "l1_ball",
            Domain::HalfspaceCut { .. } => "halfspace_cut",
            Domain::Unconstrained => "unconstrained",
        }
    }

    fn fixed_dim(&self) -> Option<usize> {
        match self {
            Domain::Box { lo, .. } => Some(lo.len()),
            Domain::Simplex { d } => Some(*d),
            Domain::HalfspaceCut { a, .. } => Some(a.len()),
            _ => None,
        }
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        match self.fixed_dim() {
            Some(d) => check_dims(d, x.len()),
            None => Ok(()),
        }
    }

    /// Constraint function value.
    pub fn g(&self, x: &[f64]) -> f64 {
        match self {
            Domain::Ball { r } => norm_sq(x) - r * r,
            Domain::Box { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi))
                .map(|(xi, (l, h))| (l - xi).max(xi - h))
                .fold(f64::NEG_INFINITY, f64::max),
            Domain::Simplex { d } => {
                let neg = x.iter().map(|v| -v).fold(f64::NEG_INFINITY, f64::max);
                let s: f64 = x.iter().sum();
                neg.max((s - 1.0).abs() - simplex_slack(*d))
            }
            Domain::L1Ball { r } => norm1(x) - r,
            Domain::HalfspaceCut { a, b, r } => (norm_sq(x) - r * r).max(dot(a, x) - b),
            Domain::Unconstrained => f64::NEG_INFINITY,
        }
    }

    /// A subgradient of `g` at `x` (the gradient of the active piece).
    pub fn grad_g(&self, x: &[f64]) -> Vec<f64> {
        let d = x.len();
        match self {
            Domain::Ball { .. } => x.iter().map(|v| 2.0 * v).collect(),
            Domain::Box { lo, hi } => {
                let mut best = (f64::NEG_INFINITY, 0usize, 1.0);
                for i in 0..d {
                    let lower = lo[i] - x[i];
                    let upper = x[i] - hi[i];
                    if lower > best.0 {
                        best = (lower, i, -1.0);
                    }
                    if upper > best.0 {
                        best = (upper, i, 1.0);
                    }
                }
                let mut g = vec![0.0; d];
                if d > 0 {
                    g[best.1] = best.2;
                }
                g
            }
            Domain::Simplex { d: dd } => {
                let (imin, vmin) = x
                    .iter()
                    .enumerate()
                    .fold((0, f64::INFINITY), |(bi, bv), (i, &v)| if v < bv { (i, v) } else { (bi, bv) });
                let s: f64 = x.iter().sum();
                let mut g = vec![0.0; d];
                if (s - 1.0).abs() - simplex_slack(*dd) > -vmin {
                    let sign = if s >= 1.0 { 1.0 } else { -1.0 };
                    g.iter_mut().for_each(|v| *v = sign);
                } else {
                    g[imin] = -1.0;
                }
                g
            }
            Domain::L1Ball { .. } => x
                .iter()
                .map(|v| if *v > 0.0 { 1.0 } else if *v < 0.0 { -1.0 } else { 0.0 })
                .collect(),
            Domain::HalfspaceCut { a, b, r } => {
                if norm_sq(x) - r * r >= dot(a, x) - b {
                    x.iter().map(|v| 2.0 * v).collect()
                } else {
                    a.clone()
                }
            }
            Domain::Unconstrained => vec![0.0; d],
        }
    }

    /// Membership test, `g(x) ≤ 0`.
    pub fn contains(&self, x: &[f64]) -> bool {
        self.g(x) <= 0.0
    }

    /// Outer radius `R` with `K ⊆ R·B`.
    pub fn radius(&self) -> f64 {
        match self {
            Domain::Ball { r } | Domain::L1Ball { r } | Domain::HalfspaceCut { r, .. } => *r,
            Domain::Box { lo, hi } => lo
                .iter()
                .zip(hi)
                .map(|(l, h)| l.abs().max(h.abs()).powi(2))
                .sum::<f64>()
                .sqrt(),
            Domain::Simplex { .. } => 1.0,
            Domain::Unconstrained => f64::INFINITY,
        }
    }

    /// Lower bound on `‖∇g‖` over the boundary.
    pub fn rho(&self) -> f64 {
        match self {
            Domain::Ball { r } => 2.0 * r,
            Domain::Box { .. } | Domain::Simplex { .. } | Domain::L1Ball { .. } => 1.0,
            Domain::HalfspaceCut { a, r, .. } => (2.0 * r).min(norm(a)),
            Domain::Unconstrained => 0.0,
        }
    }

    /// Upper bound on `‖∇g‖` over the boundary.
    pub fn g2(&self, d: usize) -> f64 {
        match self {
            Domain::Ball { r } => 2.0 * r,
            Domain::Box { .. } => 1.0,
            Domain::Simplex { .. } | Domain::L1Ball { .. } => (d as f64).sqrt(),
            Domain::HalfspaceCut { a, r, .. } => (2.0 * r).max(norm(a)),
            Domain::Unconstrained => 0.0,
        }
    }

    /// Upper bound on `|g|` over the set.
    pub fn c2(&self) -> f64 {
        match self {
            Domain::Ball { r } => r * r,
            Domain::Box { lo, hi } => lo.iter().zip(hi).map(|(l, h)| (h - l) / 2.0).fold(0.0, f64::max),
            Domain::Simplex { .. } => 1.0,
            Domain::L1Ball { r } => *r,
            Domain::HalfspaceCut { a, b, r } => (r * r).min(norm(a) * r + b),
            Domain::Unconstrained => 0.0,
        }
    }

    /// Euclidean projection onto the set.
    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check(x)?;
        Ok(match self {
            Domain::Ball { r } => project_ball(x, &vec![0.0; x.len()], *r),
            Domain::Box { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi))
                .map(|(v, (l, h))| v.clamp(*l, *h))
                .collect(),
            Domain::Simplex { d } => {
                let s: f64 = x.iter().sum();
                if x.iter().all(|v| *v >= 0.0) && (s - 1.0).abs() <= simplex_slack(*d) {
                    x.to_vec()
                } else {
                    project_simplex(x, 1.0)
                }
            }
            Domain::L1Ball { r } => project_l1_ball(x, *r),
            Domain::HalfspaceCut { a, b, r } => project_halfspace_cut(x, a, *b, *r),
            Domain::Unconstrained => x.to_vec(),
        })
    }

    /// Vertex minimising `⟨g, v⟩` over the set, for conditional gradient.
    pub fn linear_minimizer(&self, g: &[f64]) -> Result<Vec<f64>> {
        let d = g.len();
        self.check(g)?;
        match self {
            Domain::Ball { r } => {
                let n = norm(g);
                if n == 0.0 {
                    return Ok(vec![0.0; d]);
                }
                Ok(g.iter().map(|v| -r * v / n).collect())
            }
            Domain::Box { lo, hi } => Ok((0..d).map(|i| if g[i] > 0.0 { lo[i] } else { hi[i] }).collect()),
            Domain::Simplex { .. } => {
                let i = argmin(g);
                let mut v = vec![0.0; d];
                v[i] = 1.0;
                Ok(v)
            }
            Domain::L1Ball { r } => {
                let i = (0..d).fold(0, |b, i| if g[i].abs() > g[b].abs() { i } else { b });
                let mut v = vec![0.0; d];
                if g[i] != 0.0 {
                    v[i] = -r * g[i].signum();
                }
                Ok(v)
            }
            other => Err(Error::Unsupported(format!(
                "linear minimisation over {} domain",
                other.kind_name()
            ))),
        }
    }
}

fn argmin(v: &[f64]) -> usize {
    (0..v.len()).fold(0, |b, i| if v[i] < v[b] { i } else { b })
}

/// Projection onto the ball `‖x − c‖ ≤ r`.
///
/// The radial scaling is followed by a shrink loop so the result satisfies
/// `‖y − c‖² ≤ r²` in floating point, which makes re-projection a no-op.
pub fn project_ball(x: &[f64], c: &[f64], r: f64) -> Vec<f64> {
    let diff: Vec<f64> = x.iter().zip(c).map(|(a, b)| a - b).collect();
    let n2 = norm_sq(&diff);
    if n2 <= r * r {
        return x.to_vec();
    }
    let mut s = r / n2.sqrt();
    loop {
        let y: Vec<f64> = diff.iter().zip(c).map(|(dv, cv)| cv + s * dv).collect();
        let ny2: f64 = y.iter().zip(c).map(|(a, b)| (a - b) * (a - b)).sum();
        if ny2 <= r * r {
            return y;
        }
        s *= 1.0 - 2.0 * f64::EPSILON;
    }
}

/// Sort-and-threshold projection onto `{x ≥ 0, Σx = z}`.
///
/// The stable sort keeps ties in original index order.
pub fn project_simplex(x: &[f64], z: f64) -> Vec<f64> {
    let mut u: Vec<f64> = x.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (j, &uj) in u.iter().enumerate() {
        cum += uj;
        let t = (cum - z) / (j as f64 + 1.0);
        if uj - t > 0.0 {
            theta = t;
        }
    }
    x.iter().map(|v| (v - theta).max(0.0)).collect()
}

/// Projection onto the ℓ1 ball via the simplex projection of `|x|`.
pub fn project_l1_ball(x: &[f64], r: f64) -> Vec<f64> {
    if norm1(x) <= r {
        return x.to_vec();
    }
    let abs: Vec<f64> = x.iter().map(|v| v.abs()).collect();
    let p = project_simplex(&abs, r);
    let mut y: Vec<f64> = x.iter().zip(&p).map(|(v, pv)| pv * v.signum()).collect();
    while norm1(&y) > r {
        y.iter_mut().for_each(|v| *v *= 1.0 - 2.0 * f64::EPSILON);
    }
    y
}

fn project_halfspace(x: &[f64], a: &[f64], b: f64) -> Vec<f64> {
    let viol = dot(a, x) - b;
    if viol <= 0.0 {
        return x.to_vec();
    }
    let s = viol / norm_sq(a);
    x.iter().zip(a).map(|(xi, ai)| xi - s * ai).collect()
}

/// Exact projection onto `{‖x‖ ≤ r} ∩ {⟨a, x⟩ ≤ b}`.
///
/// Candidates in order: `x` itself, the halfspace projection, the ball
/// projection, and finally the nearest point on the circle where the
/// hyperplane meets the sphere.
pub fn project_halfspace_cut(x: &[f64], a: &[f64], b: f64, r: f64) -> Vec<f64> {
    let inside = |y: &[f64]| norm_sq(y) <= r * r * (1.0 + 1e-15) && dot(a, y) - b <= 1e-15 * (1.0 + b.abs());
    if inside(x) {
        return x.to_vec();
    }
    let h = project_halfspace(x, a, b);
    if norm(&h) <= r {
        return h;
    }
    let bproj = project_ball(x, &vec![0.0; x.len()], r);
    if dot(a, &bproj) <= b {
        return bproj;
    }
    let na = norm(a);
    let ahat: Vec<f64> = a.iter().map(|v| v / na).collect();
    let offset = b / na;
    let along = dot(x, &ahat);
    let orth: Vec<f64> = x.iter().zip(&ahat).map(|(xi, ai)| xi - along * ai).collect();
    let no = norm(&orth);
    let rad = (r * r - offset * offset).max(0.0).sqrt();
    let dir: Vec<f64> = if no > 0.0 {
        orth.iter().map(|v| v / no).collect()
    } else {
        // x is parallel to a: every point of the circle is equally close.
        let mut e = vec![0.0; x.len()];
        let k = (0..a.len()).fold(0, |m, i| if ahat[i].abs() < ahat[m].abs() { i } else { m });
        e[k] = 1.0;
        let p = dot(&e, &ahat);
        let v: Vec<f64> = e.iter().zip(&ahat).map(|(ei, ai)| ei - p * ai).collect();
        let nv = norm(&v);
        v.iter().map(|t| t / nv).collect()
    };
    ahat.iter().zip(&dir).map(|(ai, di)| offset * ai + rad * di).collect()
}

/// Exact projection onto the intersection of the balls `‖x‖ ≤ r0` and
/// `‖x − c‖ ≤ r1`. Requires a non-empty intersection.
pub fn project_two_balls(x: &[f64], r0: f64, c: &[f64], r1: f64) -> Vec<f64> {
    let zero = vec![0.0; x.len()];
    let in0 = |y: &[f64]| norm(y) <= r0;
    let in1 = |y: &[f64]| crate::linalg::dist(y, c) <= r1;
    if in0(x) && in1(x) {
        return x.to_vec();
    }
    let p0 = project_ball(x, &zero, r0);
    if in1(&p0) {
        return p0;
    }
    let p1 = project_ball(x, c, r1);
    if in0(&p1) {
        return p1;
    }
    let dc = norm(c);
    if dc == 0.0 {
        return project_ball(x, &zero, r0.min(r1));
    }
    // Nearest point on the circle where the two spheres meet.
    let chat: Vec<f64> = c.iter().map(|v| v / dc).collect();
    let t = (r0 * r0 - r1 * r1 + dc * dc) / (2.0 * dc);
    let rad = (r0 * r0 - t * t).max(0.0).sqrt();
    let along = dot(x, &chat);
    let orth: Vec<f64> = x.iter().zip(&chat).map(|(xi, ci)| xi - along * ci).collect();
    let no = norm(&orth);
    let dir: Vec<f64> = if no > 0.0 {
        orth.iter().map(|v| v / no).collect()
    } else {
        let k = (0..c.len()).fold(0, |m, i| if chat[i].abs() < chat[m].abs() { i } else { m });
        let mut e = vec![0.0; x.len()];
        e[k] = 1.0;
        let p = dot(&e, &chat);
        let v: Vec<f64> = e.iter().zip(&chat).map(|(ei, ci)| ei - p * ci).collect();
        let nv = norm(&v);
        v.iter().map(|t| t / nv).collect()
    };
    let y: Vec<f64> = chat.iter().zip(&dir).map(|(ci, di)| t * ci + rad * di).collect();
    // Rounding can leave the circle point a hair outside either ball.
    let y = project_ball(&y, &zero, r0);
    project_ball(&y, c, r1)
}

/// Dykstra's alternating projections onto `A ∩ B`.
///
/// Stops once an A/B round moves the iterate by less than `tol` or after
/// `rounds` rounds. Returns the final point of the B-projection.
pub fn dykstra<PA, PB>(x: &[f64], mut proj_a: PA, mut proj_b: PB, rounds: usize, tol: f64) -> Vec<f64>
where
    PA: FnMut(&[f64]) -> Vec<f64>,
    PB: FnMut(&[f64]) -> Vec<f64>,
{
    let d = x.len();
    let mut y = x.to_vec();
    let mut p = vec![0.0; d];
    let mut q = vec![0.0; d];
    for _ in 0..rounds {
        let ya: Vec<f64> = (0..d).map(|i| y[i] + p[i]).collect();
        let a = proj_a(&ya);
        for i in 0..d {
            p[i] = ya[i] - a[i];
        }
        let yb: Vec<f64> = (0..d).map(|i| a[i] + q[i]).collect();
        let b = proj_b(&yb);
        for i in 0..d {
            q[i] = yb[i] - b[i];
        }
        let moved = crate::linalg::dist(&b, &y);
        y = b;
        if moved < tol {
            break;
        }
    }
    y
}
