//! One-sided bounds: averages of `μ_F²` over eigenpairs and the cost and
//! density bounds of the `Ω_n` sampler.

use std::f64::consts::E;

use super::identities::unit_sphere_sample;
use super::per_sample_fallible;
use super::report::{Check, ExperimentReport};
use super::stats::{mean, median_of_means, MOM_BLOCKS};
use crate::error::{Error, Result};
use crate::geometry::{condition_numbers, EigenTriple};
use crate::linalg::eig::{reference_eigendecomposition, ORACLE_MAX_ORDER};
use crate::linalg::lu::Lu;
use crate::linalg::sample::sample_gaussian_matrix;
use crate::linalg::ComplexMatrix;
use crate::rng::RngHandle;
use crate::solvers::{phi_n, sample_omega};

/// `(1/n)·Σ_{eigenpairs} μ_F²` of `a`.
pub fn mean_mu_f_squared(a: &ComplexMatrix) -> Result<f64> {
    let n = a.rows();
    let mut s = 0.0;
    for p in reference_eigendecomposition(a)? {
        let t = EigenTriple::new(a.clone(), p.lambda, &p.vector)?;
        let m = condition_numbers(&t)?.mu_f;
        s += m * m;
    }
    Ok(s / n as f64)
}

fn check_mu_order(n: usize) -> Result<()> {
    if !(2..=ORACLE_MAX_ORDER.min(8)).contains(&n) {
        return Err(Error::Domain(format!(
            "condition averages need n in 2..=8, got {n}"
        )));
    }
    Ok(())
}

/// `E[(1/n)Σ μ_F²/‖A‖_F²]` for `A ~ N_C(Â, σ²)` against `n/σ²`
/// (one-sided, median-of-means).
pub fn exp_mu_average(
    n: usize,
    sigma: f64,
    center: &ComplexMatrix,
    samples: u64,
    seed: RngHandle,
) -> Result<ExperimentReport> {
    check_mu_order(n)?;
    let xs = per_sample_fallible(seed, samples, |rng| {
        let a = sample_gaussian_matrix(n, n, center, sigma, rng)?;
        Ok(mean_mu_f_squared(&a)? / a.frobenius_norm_sqr())
    })?;
    let e = median_of_means(&xs, MOM_BLOCKS);
    Ok(ExperimentReport::new(
        "mu_average",
        n,
        samples,
        e.value,
        e.half_width,
        n as f64 / (sigma * sigma),
        Check::UpperBound,
        seed,
    )
    .with_plain_mean(mean(&xs)))
}

/// `E[(1/n)Σ μ_F²]` for `A` uniform on the unit sphere against `n³`.
pub fn exp_mu_sphere(n: usize, samples: u64, seed: RngHandle) -> Result<ExperimentReport> {
    check_mu_order(n)?;
    let xs = per_sample_fallible(seed, samples, |rng| {
        mean_mu_f_squared(&unit_sphere_sample(n, rng))
    })?;
    let e = median_of_means(&xs, MOM_BLOCKS);
    Ok(ExperimentReport::new(
        "mu_sphere",
        n,
        samples,
        e.value,
        e.half_width,
        (n as f64).powi(3),
        Check::UpperBound,
        seed,
    )
    .with_plain_mean(mean(&xs)))
}

/// Sampler statistics: mean number of `(z, M)` rounds (at most 4), the
/// per-round acceptance probability (at least 1/2, i.e. `C_n ≤ 2`) and the
/// largest observed `|det B|²/|det(B − zI)|²` (at most `2e`). Half-widths of
/// the first two are three standard errors.
pub fn exp_sn_cn_bounds(n: usize, samples: u64, seed: RngHandle) -> Result<Vec<ExperimentReport>> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "sampler bounds need n >= 2, got {n}"
        )));
    }
    let rows = super::per_sample_rows(seed, samples, |rng| {
        let s = sample_omega(n, rng)?;
        let start = phi_n(&s)?;
        let b = start.a0.submatrix(1, 1, n - 1, n - 1);
        let det_b = Lu::new(&b)?.determinant().norm_sqr();
        let det_shift = Lu::new(&b.shifted_negated(s.z))?.determinant().norm_sqr();
        Ok([s.draws() as f64, det_b / det_shift])
    })?;
    let draws: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let total_draws: f64 = draws.iter().sum();
    let d = super::stats::mean_ci(&draws);
    let p = samples as f64 / total_draws;
    let p_se = (p * (1.0 - p) / total_draws).sqrt();
    let ratio_max = rows.iter().map(|r| r[1]).fold(0.0, f64::max);
    Ok(vec![
        ExperimentReport::new(
            "sampler_draws",
            n,
            samples,
            d.value,
            3.0 * d.std_error,
            4.0,
            Check::UpperBound,
            seed,
        ),
        ExperimentReport::new(
            "sampler_acceptance",
            n,
            samples,
            p,
            3.0 * p_se,
            0.5,
            Check::LowerBound,
            seed,
        ),
        ExperimentReport::new(
            "sn_ratio",
            n,
            samples,
            ratio_max,
            0.0,
            2.0 * E,
            Check::UpperBound,
            seed,
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::report::Verdict;
    use crate::linalg::sample::standard_gaussian_matrix;

    #[test]
    fn references() {
        let s = RngHandle::new(1);
        let zero = ComplexMatrix::zeros(3, 3);
        assert_eq!(exp_mu_average(3, 1.0, &zero, 40, s).unwrap().reference, 3.0);
        let zero4 = ComplexMatrix::zeros(4, 4);
        assert_eq!(
            exp_mu_average(4, 2.0, &zero4, 40, s).unwrap().reference,
            1.0
        );
        assert_eq!(
            exp_mu_average(3, 1.0, &ComplexMatrix::identity(3), 40, s)
                .unwrap()
                .reference,
            3.0
        );
        assert_eq!(exp_mu_sphere(2, 40, s).unwrap().reference, 8.0);
        assert_eq!(exp_mu_sphere(3, 40, s).unwrap().reference, 27.0);
    }

    #[test]
    fn sphere_and_gaussian_per_sample_values_agree() {
        let mut rng = RngHandle::new(2).generator();
        for _ in 0..10 {
            let a = standard_gaussian_matrix(3, 3, &mut rng);
            let unit = a.scale_real(1.0 / a.frobenius_norm());
            let g = mean_mu_f_squared(&a).unwrap() / a.frobenius_norm_sqr();
            let s = mean_mu_f_squared(&unit).unwrap();
            // equal unless the max(1, ·) clamp is active
            if s > 1.0 + 1e-9 && g * a.frobenius_norm_sqr() > 1.0 + 1e-9 {
                assert!((g * a.frobenius_norm_sqr() - s).abs() < 1e-8 * s);
            }
        }
    }

    #[test]
    fn sampler_small_run() {
        let reports = exp_sn_cn_bounds(3, 3000, RngHandle::new(3)).unwrap();
        assert_eq!(reports.len(), 3);
        for r in &reports {
            assert_eq!(r.verdict, Verdict::Pass, "{}", r.summary_line());
        }
        assert!(reports[1].estimate >= 0.5);
    }

    #[test]
    fn ratio_is_one_at_zero_shift() {
        let mut rng = RngHandle::new(5).generator();
        let b = standard_gaussian_matrix(1, 1, &mut rng);
        let w = super::super::identities::CoareaWeight::new(&b, crate::linalg::c64::new(0.0, 0.0))
            .unwrap();
        assert!((w.value - b[(0, 0)].norm_sqr()).abs() < 1e-15);
    }
}
