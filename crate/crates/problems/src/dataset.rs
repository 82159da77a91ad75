//! Sparse labelled data and the LIBSVM text format.
//!
//! One example per non-empty line: `label idx:val idx:val ...` with 1-based,
//! strictly increasing indices. Anything after `#` is a comment.

use std::path::Path;

use smoothconvex_core::linalg::norm;
use smoothconvex_core::SeededRng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("no examples")]
    Empty,
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

/// Sparse feature vector; `idx` holds 0-based column indices.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseRow {
    pub idx: Vec<usize>,
    pub val: Vec<f64>,
}

impl SparseRow {
    pub fn from_dense(x: &[f64]) -> Self {
        let (idx, val) = x.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(i, v)| (i, *v)).unzip();
        SparseRow { idx, val }
    }

    pub fn dot(&self, w: &[f64]) -> f64 {
        self.idx.iter().zip(&self.val).map(|(&i, v)| v * w[i]).sum()
    }

    /// `out += a * x`
    pub fn axpy_into(&self, a: f64, out: &mut [f64]) {
        for (&i, v) in self.idx.iter().zip(&self.val) {
            out[i] += a * v;
        }
    }

    pub fn norm(&self) -> f64 {
        norm(&self.val)
    }

    pub fn to_dense(&self, d: usize) -> Vec<f64> {
        let mut x = vec![0.0; d];
        self.axpy_into(1.0, &mut x);
        x
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    pub rows: Vec<SparseRow>,
    pub labels: Vec<f64>,
    pub d: usize,
}

impl LabeledDataset {
    pub fn from_dense(x: &[Vec<f64>], y: &[f64]) -> Self {
        let d = x.first().map_or(0, |r| r.len());
        LabeledDataset { rows: x.iter().map(|r| SparseRow::from_dense(r)).collect(), labels: y.to_vec(), d }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn is_classification(&self) -> bool {
        self.labels.iter().all(|y| *y == 1.0 || *y == -1.0)
    }

    /// Scale every row to unit Euclidean norm (zero rows are left alone).
    pub fn normalize_rows(&mut self) {
        for r in &mut self.rows {
            let n = r.norm();
            if n > 0.0 {
                r.val.iter_mut().for_each(|v| *v /= n);
            }
        }
    }

    /// `(1/n) Xᵀ X v`
    pub fn gram_apply(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.d];
        for r in &self.rows {
            r.axpy_into(r.dot(v), &mut out);
        }
        let n = self.n().max(1) as f64;
        out.iter_mut().for_each(|x| *x /= n);
        out
    }

    /// Gaussian features with labels from a random linear separator;
    /// a fraction `flip` of labels is flipped.
    pub fn synthetic_classification(n: usize, d: usize, flip: f64, rng: &mut SeededRng) -> Self {
        let w_true = rng.unit_vector(d);
        let mut x = Vec::with_capacity(n);
        let mut y = Vec::with_capacity(n);
        for _ in 0..n {
            let xi: Vec<f64> = rng.normal_vec(d).into_iter().map(|v| v / (d as f64).sqrt()).collect();
            let s = smoothconvex_core::linalg::dot(&w_true, &xi);
            let mut label = if s >= 0.0 { 1.0 } else { -1.0 };
            if rng.bernoulli(flip) {
                label = -label;
            }
            x.push(xi);
            y.push(label);
        }
        Self::from_dense(&x, &y)
    }

    /// Gaussian design whose rows live in a random `rank`-dimensional
    /// subspace, with responses from a random model plus Gaussian noise.
    pub fn synthetic_regression(n: usize, d: usize, rank: usize, noise: f64, rng: &mut SeededRng) -> Self {
        let basis: Vec<Vec<f64>> = (0..rank).map(|_| rng.normal_vec(d)).collect();
        let w_true = rng.normal_vec(d);
        let scale = 1.0 / (d as f64).sqrt();
        let mut x = Vec::with_capacity(n);
        let mut y = Vec::with_capacity(n);
        for _ in 0..n {
            let coef = rng.normal_vec(rank);
            let mut xi = vec![0.0; d];
            for (c, b) in coef.iter().zip(&basis) {
                smoothconvex_core::linalg::axpy(c * scale / (rank as f64).sqrt(), b, &mut xi);
            }
            let yi = smoothconvex_core::linalg::dot(&w_true, &xi) + noise * rng.normal();
            x.push(xi);
            y.push(yi);
        }
        Self::from_dense(&x, &y)
    }
}

pub fn parse_libsvm(text: &str) -> Result<LabeledDataset, ParseError> {
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    let mut d = 0usize;
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let bad = |msg: String| ParseError::Malformed { line: line_no, msg };
        let mut tokens = content.split_whitespace();
        let label_tok = tokens.next().unwrap_or_default();
        let label: f64 = label_tok.parse().map_err(|_| bad(format!("bad label '{label_tok}'")))?;
        if label == 0.0 || !label.is_finite() {
            return Err(bad(format!("invalid label '{label_tok}'")));
        }
        let mut idx = Vec::new();
        let mut val = Vec::new();
        for tok in tokens {
            let (i, v) = tok.split_once(':').ok_or_else(|| bad(format!("expected idx:val, got '{tok}'")))?;
            let i: usize = i.parse().map_err(|_| bad(format!("bad index in '{tok}'")))?;
            if i == 0 {
                return Err(bad("indices are 1-based".into()));
            }
            let v: f64 = v.parse().map_err(|_| bad(format!("bad value in '{tok}'")))?;
            if !v.is_finite() {
                return Err(bad(format!("non-finite value in '{tok}'")));
            }
            if let Some(&last) = idx.last() {
                if i - 1 <= last {
                    return Err(bad(format!("indices not strictly increasing at '{tok}'")));
                }
            }
            idx.push(i - 1);
            val.push(v);
            d = d.max(i);
        }
        rows.push(SparseRow { idx, val });
        labels.push(label);
    }
    if rows.is_empty() {
        return Err(ParseError::Empty);
    }
    Ok(LabeledDataset { rows, labels, d })
}

pub fn load_libsvm(path: impl AsRef<Path>, normalize: bool) -> Result<LabeledDataset, ParseError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|source| ParseError::Io { path: path.display().to_string(), source })?;
    let mut data = parse_libsvm(&text)?;
    if normalize {
        data.normalize_rows();
    }
    Ok(data)
}
