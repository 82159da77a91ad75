use smoothconvex_core::linalg::dist_sq;
use smoothconvex_core::{Error, Result};

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::Input("need at least two paired points".into()));
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::Input("log-log fit needs positive finite values".into()));
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Input("all x values equal".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    Ok(sxy / sxx)
}

/// `F(w_t) − F*` for each recorded objective value.
pub fn suboptimality(values: &[f64], f_star: f64) -> Vec<f64> {
    values.iter().map(|v| v - f_star).collect()
}

/// Mean squared distance of vector samples from their mean.
pub fn empirical_variance(samples: &[Vec<f64>]) -> Result<f64> {
    let first = samples.first().ok_or_else(|| Error::Input("no samples".into()))?;
    let mut mean = vec![0.0; first.len()];
    for s in samples {
        smoothconvex_core::linalg::axpy(1.0 / samples.len() as f64, s, &mut mean);
    }
    Ok(samples.iter().map(|s| dist_sq(s, &mean)).sum::<f64>() / samples.len() as f64)
}
