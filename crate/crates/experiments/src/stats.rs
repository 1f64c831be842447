//! Small statistics helpers used by the aggregators.

/// Mean and sample standard deviation (`n - 1` denominator; zero for one value).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    // Welford updates; a constant input keeps its mean exactly
    let (mut mean, mut m2) = (0.0, 0.0);
    for (k, &v) in values.iter().enumerate() {
        let d = v - mean;
        mean += d / (k + 1) as f64;
        m2 += d * (v - mean);
    }
    if values.len() == 1 {
        return (mean, 0.0);
    }
    (mean, (m2 / (values.len() - 1) as f64).sqrt())
}

pub fn mean(values: &[f64]) -> f64 {
    mean_std(values).0
}

/// Least-squares slope of `ys` against `xs`. Needs two distinct abscissae.
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let (mx, my) = (mean(xs), mean(ys));
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Some(sxy / sxx)
}

/// Piecewise-linear interpolation through `(xs, ys)` (xs increasing).
/// `None` outside `[xs[0], xs[last]]`.
pub fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> Option<f64> {
    const EDGE: f64 = 1e-12;
    let (first, last) = (*xs.first()?, *xs.last()?);
    if x < first - EDGE || x > last + EDGE {
        return None;
    }
    if xs.len() == 1 {
        return Some(ys[0]);
    }
    let k = xs.partition_point(|&v| v < x).clamp(1, xs.len() - 1);
    let (x0, x1, y0, y1) = (xs[k - 1], xs[k], ys[k - 1], ys[k]);
    if (x - x0).abs() <= EDGE {
        return Some(y0);
    }
    if (x - x1).abs() <= EDGE {
        return Some(y1);
    }
    Some(y0 + (y1 - y0) * (x - x0) / (x1 - x0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_std_basics() {
        assert_eq!(mean_std(&[3.0]), (3.0, 0.0));
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!(mean_std(&[]).0.is_nan());
    }

    #[test]
    fn slope_of_line() {
        let xs: Vec<f64> = (0..10).map(f64::from).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x - 1.0).collect();
        assert!((ls_slope(&xs, &ys).unwrap() - 3.0).abs() < 1e-12);
        assert!(ls_slope(&[1.0], &[1.0]).is_none());
        assert!(ls_slope(&[1.0, 1.0], &[0.0, 2.0]).is_none());
    }

    #[test]
    fn interpolation() {
        let xs = [0.25, 0.5, 1.0];
        let ys = [1.0, 2.0, 4.0];
        assert_eq!(interpolate(&xs, &ys, 0.5), Some(2.0));
        assert_eq!(interpolate(&xs, &ys, 0.75), Some(3.0));
        assert_eq!(interpolate(&xs, &ys, 1.0), Some(4.0));
        assert_eq!(interpolate(&xs, &ys, 0.2), None);
        assert_eq!(interpolate(&xs, &ys, 1.1), None);
    }
}
