//! Exact identities: Gaussian determinant moments, the pseudoinverse moment,
//! the coarea deintegration formula and the mean geodesic distance.

use std::f64::consts::FRAC_PI_2;

use super::report::{Check, ExperimentReport};
use super::stats::{mean_ci, median_of_means, MOM_BLOCKS};
use super::{per_sample, per_sample_fallible};
use crate::error::{Error, Result};
use crate::linalg::eig::reference_eigendecomposition;
use crate::linalg::lu::Lu;
use crate::linalg::sample::{
    sample_gaussian_matrix, standard_complex_normal, standard_complex_vector,
    standard_gaussian_matrix,
};
use crate::linalg::svd::pinv_norms;
use crate::linalg::{c64, ComplexMatrix};
use crate::rng::RngHandle;

/// Relative tolerance of the determinant moment.
pub const DET_MOMENT_TOLERANCE: f64 = 0.10;
/// Relative tolerance of the inverse-determinant moment.
pub const INV_DET_MOMENT_TOLERANCE: f64 = 0.15;
/// Relative tolerance of the pseudoinverse moment.
pub const PINV_MOMENT_TOLERANCE: f64 = 0.20;
/// Absolute tolerance of the mean geodesic distance.
pub const GEODESIC_TOLERANCE: f64 = 0.01;

fn factorial(m: usize) -> f64 {
    (1..=m).map(|k| k as f64).product()
}

fn check_order(m: usize, max: usize, what: &str) -> Result<()> {
    if m == 0 || m > max {
        return Err(Error::Domain(format!(
            "{what} needs order in 1..={max}, got {m}"
        )));
    }
    Ok(())
}

/// `E|det A|²` for `A ~ N_C(0, σ²)^{m×m}` against `σ^{2m}·m!`.
pub fn exp_det_moment(
    m: usize,
    sigma: f64,
    samples: u64,
    seed: RngHandle,
) -> Result<ExperimentReport> {
    check_order(m, 6, "determinant moment")?;
    let zero = ComplexMatrix::zeros(m, m);
    let xs = per_sample_fallible(seed, samples, |rng| {
        let a = sample_gaussian_matrix(m, m, &zero, sigma, rng)?;
        Ok(Lu::new(&a)?.determinant().norm_sqr())
    })?;
    let e = mean_ci(&xs);
    let reference = sigma.powi(2 * m as i32) * factorial(m);
    Ok(ExperimentReport::new(
        "det_moment",
        m,
        samples,
        e.value,
        e.half_width,
        reference,
        Check::Equality {
            tolerance: DET_MOMENT_TOLERANCE * reference,
        },
        seed,
    ))
}

/// `‖A⁻¹‖_F²·|det A|²`, i.e. the squared Frobenius norm of the adjugate.
fn inv_det_sample(a: &ComplexMatrix) -> Result<f64> {
    let m = a.rows();
    if m == 1 {
        return Ok(1.0);
    }
    let lu = Lu::new(a)?;
    let det2 = lu.determinant().norm_sqr();
    let mut inv2 = 0.0;
    for j in 0..m {
        let col = lu.solve(&crate::linalg::matrix::unit_vector(m, j))?;
        inv2 += col.iter().map(|z| z.norm_sqr()).sum::<f64>();
    }
    Ok(inv2 * det2)
}

/// Median-of-means of `‖A⁻¹‖_F²·|det A|²` for standard Gaussian `A`
/// against `m!·m`.
pub fn exp_inv_det_moment(m: usize, samples: u64, seed: RngHandle) -> Result<ExperimentReport> {
    check_order(m, 5, "inverse determinant moment")?;
    let xs = per_sample_fallible(seed, samples, |rng| {
        inv_det_sample(&standard_gaussian_matrix(m, m, rng))
    })?;
    let e = median_of_means(&xs, MOM_BLOCKS);
    let reference = factorial(m) * m as f64;
    Ok(ExperimentReport::new(
        "inv_det_moment",
        m,
        samples,
        e.value,
        e.half_width,
        reference,
        Check::Equality {
            tolerance: INV_DET_MOMENT_TOLERANCE * reference,
        },
        seed,
    )
    .with_plain_mean(super::stats::mean(&xs)))
}

/// Median-of-means of `‖M†‖_F²` for a standard Gaussian `(n−1)×n` matrix
/// against `n − 1`.
pub fn exp_pinv_moment(n: usize, samples: u64, seed: RngHandle) -> Result<ExperimentReport> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "pseudoinverse moment needs n >= 2, got {n}"
        )));
    }
    let xs = per_sample_fallible(seed, samples, |rng| {
        let m = standard_gaussian_matrix(n - 1, n, rng);
        let f = pinv_norms(&m, Some(n - 1))?.frobenius;
        Ok(f * f)
    })?;
    let e = median_of_means(&xs, MOM_BLOCKS);
    let reference = (n - 1) as f64;
    Ok(ExperimentReport::new(
        "pinv_moment",
        n,
        samples,
        e.value,
        e.half_width,
        reference,
        Check::Equality {
            tolerance: PINV_MOMENT_TOLERANCE * reference,
        },
        seed,
    )
    .with_plain_mean(super::stats::mean(&xs)))
}

/// Built-in bounded, unitarily invariant test functions for the coarea
/// identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoareaTest {
    /// `φ ≡ 1`, counting eigenpairs.
    One,
    /// `φ(A, λ, v) = exp(−|λ|²)`.
    GaussianWeight,
}

impl CoareaTest {
    pub fn eval(&self, _a: &ComplexMatrix, lambda: c64, _v: &[c64]) -> f64 {
        match self {
            CoareaTest::One => 1.0,
            CoareaTest::GaussianWeight => (-lambda.norm_sqr()).exp(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CoareaTest::One => "coarea_one",
            CoareaTest::GaussianWeight => "coarea_gauss",
        }
    }
}

/// The coarea weight `|det(B − λI)|²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoareaWeight {
    pub value: f64,
}

impl CoareaWeight {
    pub fn new(b: &ComplexMatrix, lambda: c64) -> Result<Self> {
        let det = Lu::new(&b.shifted_negated(lambda))?.determinant();
        Ok(Self {
            value: det.norm_sqr(),
        })
    }
}

fn gamma_integer(n: usize) -> f64 {
    factorial(n - 1)
}

/// Both sides of the coarea identity
/// `E_A Σ_{eigenpairs} φ = (1/Γ(n))·E_{λ,w,B}[φ([[λ, w],[0, B]], λ, e₁)·|det(B − λI)|²]`.
///
/// The report carries the right side as `estimate`, the left side as
/// `reference`, and passes when the two 95% intervals overlap.
pub fn exp_coarea_identity<F>(
    n: usize,
    name: &str,
    phi: F,
    samples: u64,
    seed: RngHandle,
) -> Result<ExperimentReport>
where
    F: Fn(&ComplexMatrix, c64, &[c64]) -> f64 + Sync,
{
    if !(2..=5).contains(&n) {
        return Err(Error::Domain(format!(
            "coarea identity needs n in 2..=5, got {n}"
        )));
    }
    let left_seed = seed.derive(0);
    let right_seed = seed.derive(1);
    let left = per_sample_fallible(left_seed, samples, |rng| {
        let a = standard_gaussian_matrix(n, n, rng);
        let pairs = reference_eigendecomposition(&a)?;
        Ok(pairs.iter().map(|p| phi(&a, p.lambda, &p.vector)).sum())
    })?;
    let e1 = crate::linalg::matrix::unit_vector(n, 0);
    let scale = 1.0 / gamma_integer(n);
    let right = per_sample_fallible(right_seed, samples, |rng| {
        let lambda = standard_complex_normal(rng);
        let w = standard_complex_vector(n - 1, rng);
        let b = standard_gaussian_matrix(n - 1, n - 1, rng);
        let mut a = ComplexMatrix::zeros(n, n);
        a[(0, 0)] = lambda;
        for j in 1..n {
            a[(0, j)] = w[j - 1];
            for i in 1..n {
                a[(i, j)] = b[(i - 1, j - 1)];
            }
        }
        let weight = CoareaWeight::new(&b, lambda)?;
        Ok(scale * phi(&a, lambda, &e1) * weight.value)
    })?;
    let l = mean_ci(&left);
    let r = mean_ci(&right);
    let combined = l.half_width + r.half_width;
    Ok(ExperimentReport::new(
        name,
        n,
        samples,
        r.value,
        combined,
        l.value,
        Check::Equality {
            tolerance: combined,
        },
        seed,
    ))
}

/// Spherical distance `arccos Re⟨A, B⟩` of unit-norm matrices, in `[0, π]`.
pub fn sphere_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let c = a.inner(b).re;
    let s = a.lin_comb(1.0, b, -c).frobenius_norm();
    s.atan2(c)
}

pub(crate) fn unit_sphere_sample<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    loop {
        let a = standard_gaussian_matrix(n, n, rng);
        let norm = a.frobenius_norm();
        if norm > 0.0 {
            return a.scale_real(1.0 / norm);
        }
    }
}

/// Mean spherical distance of independent uniform points of the unit
/// Frobenius sphere in `C^{n×n}` against `π/2`.
pub fn exp_geodesic_constant(n: usize, samples: u64, seed: RngHandle) -> Result<ExperimentReport> {
    if n < 1 {
        return Err(Error::Domain("geodesic constant needs n >= 1".into()));
    }
    let xs = per_sample(seed, samples, |rng| {
        let a = unit_sphere_sample(n, rng);
        let b = unit_sphere_sample(n, rng);
        sphere_distance(&a, &b)
    });
    let e = mean_ci(&xs);
    Ok(ExperimentReport::new(
        "geodesic",
        n,
        samples,
        e.value,
        e.half_width,
        FRAC_PI_2,
        Check::Equality {
            tolerance: GEODESIC_TOLERANCE,
        },
        seed,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::report::Verdict;

    #[test]
    fn scalar_references() {
        let s = RngHandle::new(1);
        assert_eq!(exp_det_moment(2, 1.0, 10, s).unwrap().reference, 2.0);
        assert_eq!(exp_det_moment(3, 1.0, 10, s).unwrap().reference, 6.0);
        assert_eq!(exp_det_moment(1, 2.0, 10, s).unwrap().reference, 4.0);
        assert_eq!(exp_inv_det_moment(2, 10, s).unwrap().reference, 4.0);
        assert_eq!(exp_inv_det_moment(3, 10, s).unwrap().reference, 18.0);
        assert_eq!(exp_pinv_moment(5, 10, s).unwrap().reference, 4.0);
        assert!(exp_det_moment(7, 1.0, 10, s).is_err());
    }

    #[test]
    fn scalar_inverse_determinant_is_identically_one() {
        let r = exp_inv_det_moment(1, 500, RngHandle::new(3)).unwrap();
        assert_eq!(r.estimate, 1.0);
        assert_eq!(r.half_width, 0.0);
    }

    #[test]
    fn adjugate_norm_oracle() {
        // 2×2: adj [[a,b],[c,d]] = [[d,−b],[−c,a]], so ‖A⁻¹‖²|det|² = ‖A‖²
        let mut rng = RngHandle::new(4).generator();
        let a = standard_gaussian_matrix(2, 2, &mut rng);
        assert!((inv_det_sample(&a).unwrap() - a.frobenius_norm_sqr()).abs() < 1e-12);
    }

    #[test]
    fn moments_small_sample() {
        let s = RngHandle::new(10);
        assert_eq!(
            exp_det_moment(2, 1.0, 20_000, s).unwrap().verdict,
            Verdict::Pass
        );
        assert_eq!(
            exp_det_moment(1, 2.0, 20_000, s).unwrap().verdict,
            Verdict::Pass
        );
        assert_eq!(
            exp_pinv_moment(2, 20_000, s).unwrap().verdict,
            Verdict::Pass
        );
        assert_eq!(
            exp_inv_det_moment(2, 20_000, s).unwrap().verdict,
            Verdict::Pass
        );
    }

    #[test]
    fn coarea_count_is_exact_on_the_left() {
        let r = exp_coarea_identity(
            2,
            "coarea_one",
            |a, l, v| CoareaTest::One.eval(a, l, v),
            20_000,
            RngHandle::new(6),
        )
        .unwrap();
        assert_eq!(r.reference, 2.0);
        assert!((r.estimate - 2.0).abs() < 0.1, "{}", r.estimate);
        assert_eq!(r.verdict, Verdict::Pass, "{}", r.summary_line());
    }

    #[test]
    fn geodesic_antipodal_symmetry() {
        let mut rng = RngHandle::new(6).generator();
        for _ in 0..100 {
            let a = unit_sphere_sample(3, &mut rng);
            let b = unit_sphere_sample(3, &mut rng);
            let s = sphere_distance(&a, &b) + sphere_distance(&a, &b.scale_real(-1.0));
            assert!((s - std::f64::consts::PI).abs() < 1e-12);
        }
        let r = exp_geodesic_constant(2, 20_000, RngHandle::new(7)).unwrap();
        assert!((r.estimate - FRAC_PI_2).abs() < 0.02);
    }

    #[test]
    fn reports_are_deterministic() {
        let s = RngHandle::new(99);
        assert_eq!(
            exp_pinv_moment(3, 2000, s).unwrap(),
            exp_pinv_moment(3, 2000, s).unwrap()
        );
    }
}
