//! Gaussian and Haar ensembles.

use rand::Rng;
use rand_distr::StandardNormal;

use super::c64;
use super::matrix::{phase, ComplexMatrix};
use super::qr::householder_qr_reduced;
use crate::error::{Error, Result};

/// One draw of `N_C(0, 1)`: independent real and imaginary parts of
/// variance 1/2.
#[inline]
pub fn standard_complex_normal<R: Rng + ?Sized>(rng: &mut R) -> c64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn standard_complex_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<c64> {
    (0..n).map(|_| standard_complex_normal(rng)).collect()
}

/// Ginibre matrix: i.i.d. `N_C(0, 1)` entries.
pub fn standard_gaussian_matrix<R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| standard_complex_normal(rng))
}

/// Entries independent `N_C(center_ij, σ²)`.
pub fn sample_gaussian_matrix<R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    center: &ComplexMatrix,
    sigma: f64,
    rng: &mut R,
) -> Result<ComplexMatrix> {
    if center.shape() != (rows, cols) {
        return Err(Error::Dimension(format!(
            "center is {}x{}, requested {rows}x{cols}",
            center.rows(),
            center.cols()
        )));
    }
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::Domain(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    Ok(ComplexMatrix::from_fn(rows, cols, |i, j| {
        center[(i, j)] + standard_complex_normal(rng) * sigma
    }))
}

/// Rejection sampler for the Gaussian truncated to `‖A − Â‖_F ≤ radius`.
pub fn sample_truncated_gaussian_matrix<R: Rng + ?Sized>(
    center: &ComplexMatrix,
    sigma: f64,
    radius: f64,
    rng: &mut R,
) -> Result<(ComplexMatrix, usize)> {
    if radius.is_nan() || radius <= 0.0 {
        return Err(Error::Domain(format!(
            "truncation radius must be positive, got {radius}"
        )));
    }
    let (r, c) = center.shape();
    let mut draws = 0;
    loop {
        draws += 1;
        let a = sample_gaussian_matrix(r, c, center, sigma, rng)?;
        if (&a - center).frobenius_norm() <= radius {
            return Ok((a, draws));
        }
    }
}

/// Haar-distributed unitary matrix: the Q factor of a Ginibre matrix with its
/// columns rephased by `r_ii/|r_ii|`.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    loop {
        let b = standard_gaussian_matrix(n, n, rng);
        // rank deficiency has probability zero; redraw if it ever happens
        let Ok(f) = householder_qr_reduced(&b) else {
            continue;
        };
        let mut q = f.q;
        for j in 0..n {
            let d = phase(f.r[(j, j)]);
            for i in 0..n {
                q[(i, j)] *= d;
            }
        }
        return q;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngHandle;

    #[test]
    fn vanishing_variance_collapses_to_center() {
        let mut rng = RngHandle::new(1).generator();
        let center = standard_gaussian_matrix(4, 4, &mut rng);
        let a = sample_gaussian_matrix(4, 4, &center, 1e-12, &mut rng).unwrap();
        assert!((&a - &center).frobenius_norm() < 1e-9);
    }

    #[test]
    fn shape_and_sigma_are_validated() {
        let mut rng = RngHandle::new(1).generator();
        let c = ComplexMatrix::zeros(2, 3);
        assert!(matches!(
            sample_gaussian_matrix(3, 2, &c, 1.0, &mut rng),
            Err(Error::Dimension(_))
        ));
        assert!(sample_gaussian_matrix(2, 3, &c, 0.0, &mut rng).is_err());
    }

    #[test]
    fn haar_is_unitary() {
        let mut rng = RngHandle::new(9).generator();
        for n in 1..7 {
            let u = haar_unitary(n, &mut rng);
            let g = &u.adjoint() * &u;
            assert!((&g - &ComplexMatrix::identity(n)).frobenius_norm() < 1e-12);
        }
        let u1 = haar_unitary(1, &mut rng);
        assert!((u1[(0, 0)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn truncated_sampler_respects_radius() {
        let mut rng = RngHandle::new(3).generator();
        let c = ComplexMatrix::identity(3);
        for _ in 0..50 {
            let (a, draws) = sample_truncated_gaussian_matrix(&c, 1.0, 2.0, &mut rng).unwrap();
            assert!(draws >= 1);
            assert!((&a - &c).frobenius_norm() <= 2.0);
        }
    }
}
