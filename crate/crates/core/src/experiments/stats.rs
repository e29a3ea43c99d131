//! Estimators with normal-approximation 95% half-widths.

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Blocks used by [`median_of_means`].
pub const MOM_BLOCKS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub half_width: f64,
    /// Standard error of the plain mean.
    pub std_error: f64,
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance.
pub fn variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64
}

/// Sample mean with a 95% confidence half-width.
pub fn mean_ci(xs: &[f64]) -> Estimate {
    let se = (variance(xs) / xs.len() as f64).sqrt();
    Estimate {
        value: mean(xs),
        half_width: Z95 * se,
        std_error: se,
    }
}

pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

/// Median of the means of `blocks` contiguous, near-equal blocks. The
/// half-width is `Z95·sd(block means)/√blocks`.
pub fn median_of_means(xs: &[f64], blocks: usize) -> Estimate {
    let blocks = blocks.clamp(1, xs.len().max(1));
    let base = xs.len() / blocks;
    let extra = xs.len() % blocks;
    let mut means = Vec::with_capacity(blocks);
    let mut start = 0;
    for b in 0..blocks {
        let len = base + usize::from(b < extra);
        means.push(mean(&xs[start..start + len]));
        start += len;
    }
    let se = (variance(&means) / blocks as f64).sqrt();
    Estimate {
        value: median(&means),
        half_width: Z95 * se,
        std_error: se,
    }
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let lp: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let k = lp.len() as f64;
    let mx = lp.iter().map(|p| p.0).sum::<f64>() / k;
    let my = lp.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = lp.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lp.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_estimators() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(mean(&xs), 2.5);
        assert!((variance(&xs) - 5.0 / 3.0).abs() < 1e-15);
        assert_eq!(median(&xs), 2.5);
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        let e = mean_ci(&xs);
        assert!((e.half_width - Z95 * (5.0f64 / 12.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn median_of_means_resists_outliers() {
        let mut xs = vec![1.0; 2000];
        xs[7] = 1e9;
        let e = median_of_means(&xs, MOM_BLOCKS);
        assert_eq!(e.value, 1.0);
        assert!(mean(&xs) > 1e5);
        // uneven block sizes still cover every sample exactly once
        let ys: Vec<f64> = (0..45).map(f64::from).collect();
        let e = median_of_means(&ys, 20);
        assert!(e.value > 15.0 && e.value < 30.0);
    }

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = (2..8)
            .map(|n| (n as f64, 3.0 * (n as f64).powi(4)))
            .collect();
        assert!((log_log_slope(&pts) - 4.0).abs() < 1e-12);
    }
}
