use crate::error::{Error, Result};

/// Componentwise clipping `sign(gᵢ)·min(γ, |gᵢ|)`.
pub fn clip_component(gamma: f64, g: &[f64]) -> Result<Vec<f64>> {
    if !(gamma > 0.0) {
        return Err(Error::Config(format!("clip level must be positive, got {gamma}")));
    }
    Ok(g.iter()
        .map(|&v| if v.abs() <= gamma { v } else { gamma.copysign(v) })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clips_large_entries() {
        assert_eq!(clip_component(1.0, &[2.0, -0.5]).unwrap(), vec![1.0, -0.5]);
    }

    #[test]
    fn no_op_within_bound() {
        assert_eq!(clip_component(10.0, &[2.0, -0.5]).unwrap(), vec![2.0, -0.5]);
    }

    #[test]
    fn preserves_sign_and_boundary() {
        assert_eq!(clip_component(0.25, &[-3.0, 0.25, 0.0]).unwrap(), vec![-0.25, 0.25, 0.0]);
    }

    #[test]
    fn rejects_non_positive_level() {
        assert!(clip_component(0.0, &[1.0]).is_err());
        assert!(clip_component(-1.0, &[1.0]).is_err());
    }
}
