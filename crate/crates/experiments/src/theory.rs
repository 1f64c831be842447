//! Closed-form scaling predictions.

use qaoa_mps::{floor_log2, max_space_sum, max_space_sum_truncated};

use crate::error::{ExperimentError, Result};

/// Predicted truncated/untruncated ratio of the space-time entropy sum as a
/// function of `x = 2·log2(χ)/N`: `(16/3)·u(1−u)(1−u+u²)` with `u = x/2`.
pub fn theory_curve(x: f64) -> Result<f64> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(ExperimentError::Invalid(format!("theory curve needs 0 < x <= 1, got {x}")));
    }
    let u = x / 2.0;
    Ok(16.0 / 3.0 * u * (1.0 - u) * (1.0 - u + u * u))
}

/// Predicted sum of bond entropies over all snapshots.
///
/// Untruncated: `(3/16)·α·N⁴`. Truncated at `chi`:
/// `α·max_space_sum_truncated(N, χ)·(N² − N·f + f²)` with `f = ⌊log2 χ⌋`.
pub fn theory_space_time_sums(n: usize, chi: Option<usize>, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(ExperimentError::Invalid(format!("alpha must be positive, got {alpha}")));
    }
    max_space_sum(n)?;
    let nf = n as f64;
    match chi {
        None => Ok(3.0 / 16.0 * alpha * nf.powi(4)),
        Some(chi) => {
            let max = max_space_sum_truncated(n, chi)?;
            let f = floor_log2(chi) as f64;
            Ok(alpha * max * (nf * nf - nf * f + f * f))
        }
    }
}

/// Truncated/untruncated quotient of [`theory_space_time_sums`] without the
/// `⌊log2 χ⌋ ≈ log2 χ` approximation behind [`theory_curve`].
pub fn theory_ratio_floor(n: usize, chi: usize) -> Result<f64> {
    Ok(theory_space_time_sums(n, Some(chi), 1.0)? / theory_space_time_sums(n, None, 1.0)?)
}

/// `x = 2·log2(χ)/N`.
pub fn x_of(n: usize, chi: usize) -> f64 {
    2.0 * (chi as f64).log2() / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_values() {
        assert_eq!(theory_curve(1.0).unwrap(), 1.0);
        assert_eq!(theory_curve(0.5).unwrap(), 0.8125);
        assert!(theory_curve(1e-9).unwrap() < 1e-8);
        assert!(theory_curve(0.0).is_err());
        assert!(theory_curve(1.5).is_err());
        assert!(theory_curve(f64::NAN).is_err());
    }

    #[test]
    fn curve_strictly_increasing() {
        let mut prev = 0.0;
        for k in 1..1000 {
            let h = theory_curve(k as f64 / 1000.0).unwrap();
            assert!(h > prev);
            prev = h;
        }
    }

    #[test]
    fn sums() {
        assert_eq!(theory_space_time_sums(8, None, 1.0).unwrap(), 768.0);
        for n in [4usize, 6, 8, 10, 12] {
            let full = 1usize << (n / 2);
            assert!((theory_ratio_floor(n, full).unwrap() - 1.0).abs() < 1e-12);
            for chi in [2usize, 4] {
                let r1 = theory_space_time_sums(n, Some(chi), 0.3).unwrap() / theory_space_time_sums(n, None, 0.3).unwrap();
                let r2 = theory_space_time_sums(n, Some(chi), 2.5).unwrap() / theory_space_time_sums(n, None, 2.5).unwrap();
                assert!((r1 - r2).abs() < 1e-14);
            }
        }
        assert!(theory_space_time_sums(8, None, 0.0).is_err());
        assert!(theory_space_time_sums(7, None, 1.0).is_err());
        assert!(theory_space_time_sums(8, Some(32), 1.0).is_err());
    }

    #[test]
    fn x_lattice() {
        assert_eq!(x_of(8, 16), 1.0);
        assert_eq!(x_of(8, 4), 0.5);
    }
}
