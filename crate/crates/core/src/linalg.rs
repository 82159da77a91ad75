//! Small dense vector and matrix helpers.

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

pub fn norm1(a: &[f64]) -> f64 {
    a.iter().map(|x| x.abs()).sum()
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    dist_sq(a, b).sqrt()
}

pub fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

/// `y += a * x`
pub fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// `x - eta * g`
pub fn step(x: &[f64], eta: f64, g: &[f64]) -> Vec<f64> {
    x.iter().zip(g).map(|(xi, gi)| xi - eta * gi).collect()
}

pub fn is_finite(a: &[f64]) -> bool {
    a.iter().all(|x| x.is_finite())
}

/// Running uniform average of points.
#[derive(Debug, Clone)]
pub struct Averager {
    sum: Vec<f64>,
    count: usize,
}

impl Averager {
    pub fn new(d: usize) -> Self {
        Averager { sum: vec![0.0; d], count: 0 }
    }

    pub fn push(&mut self, x: &[f64]) {
        axpy(1.0, x, &mut self.sum);
        self.count += 1;
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn mean(&self) -> Vec<f64> {
        let c = self.count.max(1) as f64;
        self.sum.iter().map(|s| s / c).collect()
    }
}

/// Dense symmetric matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMat {
    d: usize,
    data: Vec<f64>,
}

impl SymMat {
    pub fn scaled_identity(d: usize, s: f64) -> Self {
        let mut data = vec![0.0; d * d];
        for i in 0..d {
            data[i * d + i] = s;
        }
        SymMat { d, data }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.d + j]
    }

    /// `self += c * v vᵀ`
    pub fn rank1_update(&mut self, c: f64, v: &[f64]) {
        let d = self.d;
        for i in 0..d {
            for j in 0..d {
                self.data[i * d + j] += c * v[i] * v[j];
            }
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let d = self.d;
        (0..d).map(|i| dot(&self.data[i * d..(i + 1) * d], x)).collect()
    }

    /// `xᵀ M x`
    pub fn quad(&self, x: &[f64]) -> f64 {
        dot(x, &self.matvec(x))
    }

    pub fn to_nalgebra(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_row_slice(self.d, self.d, &self.data)
    }
}

/// Largest eigenvalue of a symmetric PSD operator by power iteration.
///
/// Returns the estimate and whether successive estimates agreed to `tol`
/// (relative) before `max_steps` ran out. A fixed non-random start keeps
/// the result deterministic.
pub fn power_iteration<F>(d: usize, max_steps: usize, tol: f64, mut apply: F) -> (f64, bool)
where
    F: FnMut(&[f64]) -> Vec<f64>,
{
    if d == 0 {
        return (0.0, true);
    }
    // Uneven start so it is unlikely to be orthogonal to the top eigenvector.
    let mut v: Vec<f64> = (0..d).map(|i| 1.0 + (i as f64 + 1.0).sqrt() * 1e-3).collect();
    let n0 = norm(&v);
    v.iter_mut().for_each(|x| *x /= n0);
    let mut est = 0.0;
    for _ in 0..max_steps {
        let w = apply(&v);
        let nw = norm(&w);
        if nw == 0.0 {
            return (0.0, true);
        }
        let next = dot(&v, &w);
        v = w.into_iter().map(|x| x / nw).collect();
        if (next - est).abs() <= tol * next.abs().max(f64::MIN_POSITIVE) {
            return (next, true);
        }
        est = next;
    }
    (est, false)
}
