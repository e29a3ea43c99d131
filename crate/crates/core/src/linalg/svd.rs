//! One-sided (Hestenes) Jacobi SVD and the pseudoinverse norms built on it.
//!
//! One-sided Jacobi computes small singular values to high relative accuracy,
//! which is what the condition numbers need: they are reciprocals of the
//! smallest nonzero singular value.

use super::c64;
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 80;

#[derive(Debug, Clone)]
pub struct SvdResult {
    /// Descending, nonnegative; length `min(rows, cols)`.
    pub singular_values: Vec<f64>,
    /// `rows × p` left singular vectors, when requested.
    pub u: Option<ComplexMatrix>,
    /// `cols × p` right singular vectors, when requested.
    pub v: Option<ComplexMatrix>,
}

impl SvdResult {
    pub fn largest(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    pub fn smallest(&self) -> f64 {
        self.singular_values.last().copied().unwrap_or(0.0)
    }

    /// `U·diag(σ)·V*`, if the bases were computed.
    pub fn reconstruct(&self) -> Option<ComplexMatrix> {
        let (u, v) = (self.u.as_ref()?, self.v.as_ref()?);
        let mut us = u.clone();
        for i in 0..us.rows() {
            for (j, s) in self.singular_values.iter().enumerate() {
                us[(i, j)] *= *s;
            }
        }
        Some(&us * &v.adjoint())
    }
}

/// Jacobi sweeps over the columns of `cols` (each of equal length); `basis`,
/// when present, receives the same column operations.
fn jacobi_columns(cols: &mut [Vec<c64>], mut basis: Option<&mut [Vec<c64>]>) -> Result<()> {
    let k = cols.len();
    if k < 2 {
        return Ok(());
    }
    // rounding leaves relative inner products of a few ulps per entry
    let tol = cols[0].len().max(1) as f64 * f64::EPSILON;
    let mut norms: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum())
        .collect();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..k - 1 {
            for q in p + 1..k {
                let alpha = norms[p];
                let beta = norms[q];
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma: c64 = cols[p]
                    .iter()
                    .zip(&cols[q])
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let g = gamma.norm();
                if g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // rotate column q by the conjugate phase so ⟨a_p, a_q⟩ is real
                let ph = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (left, right) = cols.split_at_mut(q);
                let (cp, cq) = (&mut left[p], &mut right[0]);
                for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                    let yq = *y * ph;
                    let xp = *x;
                    *x = xp * c - yq * s;
                    *y = xp * s + yq * c;
                }
                if let Some(b) = basis.as_deref_mut() {
                    let (left, right) = b.split_at_mut(q);
                    let (bp, bq) = (&mut left[p], &mut right[0]);
                    for (x, y) in bp.iter_mut().zip(bq.iter_mut()) {
                        let yq = *y * ph;
                        let xp = *x;
                        *x = xp * c - yq * s;
                        *y = xp * s + yq * c;
                    }
                }
                norms[p] = cols[p].iter().map(|z| z.norm_sqr()).sum();
                norms[q] = cols[q].iter().map(|z| z.norm_sqr()).sum();
            }
        }
        if !rotated {
            return Ok(());
        }
    }
    Err(Error::NonConvergence("Jacobi SVD"))
}

/// Completes a set of orthonormal columns (some possibly zero placeholders,
/// listed in `missing`) to an orthonormal set by Gram–Schmidt against the
/// standard basis.
fn fill_orthonormal(cols: &mut [Vec<c64>], missing: &[usize]) {
    let m = cols.first().map_or(0, |c| c.len());
    let mut candidate = 0;
    for &j in missing {
        while candidate < m {
            let mut x = vec![c64::new(0.0, 0.0); m];
            x[candidate] = c64::new(1.0, 0.0);
            candidate += 1;
            for _ in 0..2 {
                for (i, c) in cols.iter().enumerate() {
                    if i == j || (missing.contains(&i) && i > j) {
                        continue;
                    }
                    let d: c64 = c.iter().zip(&x).map(|(a, b)| a.conj() * b).sum();
                    for (xi, ci) in x.iter_mut().zip(c) {
                        *xi -= ci * d;
                    }
                }
            }
            let n: f64 = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if n > 0.5 {
                cols[j] = x.into_iter().map(|z| z / n).collect();
                break;
            }
        }
    }
}

fn svd_tall(m: &ComplexMatrix, want_vectors: bool) -> Result<SvdResult> {
    let (rows, k) = m.shape();
    let mut cols: Vec<Vec<c64>> = (0..k).map(|j| m.column(j)).collect();
    let mut basis: Option<Vec<Vec<c64>>> = want_vectors.then(|| {
        (0..k)
            .map(|j| {
                let mut e = vec![c64::new(0.0, 0.0); k];
                e[j] = c64::new(1.0, 0.0);
                e
            })
            .collect()
    });
    jacobi_columns(&mut cols, basis.as_deref_mut())?;

    let sigma: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]));
    let singular_values: Vec<f64> = order.iter().map(|&j| sigma[j]).collect();

    let (u, v) = if let Some(basis) = basis {
        let mut ucols: Vec<Vec<c64>> = Vec::with_capacity(k);
        let mut missing = Vec::new();
        let smax = singular_values.first().copied().unwrap_or(0.0);
        for (slot, &j) in order.iter().enumerate() {
            let s = sigma[j];
            if s > 0.0 && s > smax * f64::EPSILON * 1e-3 {
                ucols.push(cols[j].iter().map(|z| z / s).collect());
            } else {
                ucols.push(vec![c64::new(0.0, 0.0); rows]);
                missing.push(slot);
            }
        }
        if !missing.is_empty() {
            fill_orthonormal(&mut ucols, &missing);
        }
        let u = ComplexMatrix::from_fn(rows, k, |i, j| ucols[j][i]);
        let v = ComplexMatrix::from_fn(k, k, |i, j| basis[order[j]][i]);
        (Some(u), Some(v))
    } else {
        (None, None)
    };
    Ok(SvdResult {
        singular_values,
        u,
        v,
    })
}

/// Thin SVD `M = U·diag(σ)·V*` with `p = min(rows, cols)` singular triplets.
pub fn svd(m: &ComplexMatrix, want_vectors: bool) -> Result<SvdResult> {
    if !m.is_finite() {
        return Err(Error::Domain(
            "SVD of a matrix with non-finite entries".into(),
        ));
    }
    if m.rows() >= m.cols() {
        svd_tall(m, want_vectors)
    } else {
        let r = svd_tall(&m.adjoint(), want_vectors)?;
        Ok(SvdResult {
            singular_values: r.singular_values,
            u: r.v,
            v: r.u,
        })
    }
}

pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(svd(m, false)?.singular_values)
}

/// Operator norm (largest singular value).
pub fn operator_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(svd(m, false)?.largest())
}

/// Operator and Frobenius norms of the Moore–Penrose pseudoinverse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PinvNorms {
    pub operator: f64,
    pub frobenius: f64,
}

impl PinvNorms {
    pub const INFINITE: PinvNorms = PinvNorms {
        operator: f64::INFINITY,
        frobenius: f64::INFINITY,
    };

    pub fn is_finite(&self) -> bool {
        self.operator.is_finite()
    }
}

/// Pseudoinverse norms from a descending list of singular values.
///
/// `expected_rank` is the rank the caller's context requires (defaults to
/// `min(rows, cols)`); singular values below `max(rows, cols)·σ₁·2⁻⁵²` count
/// as zero, and if fewer than `expected_rank` survive both norms are infinite.
/// Only the leading `expected_rank` values enter the norms.
pub fn pinv_norms_from_singular_values(
    sigma: &[f64],
    rows: usize,
    cols: usize,
    expected_rank: Option<usize>,
) -> PinvNorms {
    let k = expected_rank.unwrap_or(rows.min(cols)).min(sigma.len());
    let s1 = sigma.first().copied().unwrap_or(0.0);
    if s1 == 0.0 || k == 0 {
        return PinvNorms::INFINITE;
    }
    let tol = (rows.max(cols) as f64) * s1 * f64::EPSILON;
    let sk = sigma[k - 1];
    if sk < tol || sk == 0.0 {
        return PinvNorms::INFINITE;
    }
    let frob: f64 = sigma[..k].iter().map(|s| 1.0 / (s * s)).sum::<f64>().sqrt();
    PinvNorms {
        operator: 1.0 / sk,
        frobenius: frob,
    }
}

pub fn pinv_norms(m: &ComplexMatrix, expected_rank: Option<usize>) -> Result<PinvNorms> {
    let sigma = singular_values(m)?;
    Ok(pinv_norms_from_singular_values(
        &sigma,
        m.rows(),
        m.cols(),
        expected_rank,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sample::{haar_unitary, standard_gaussian_matrix};
    use crate::rng::RngHandle;

    /// Independent estimate of σ₁ by power iteration on `M*M`.
    fn power_iteration_norm(m: &ComplexMatrix) -> f64 {
        let g = &m.adjoint() * m;
        let mut x: Vec<c64> = (0..g.cols())
            .map(|i| c64::new(1.0 + i as f64, 0.5))
            .collect();
        let mut lambda = 0.0;
        for _ in 0..5000 {
            let y = g.matvec(&x);
            let n = crate::linalg::matrix::vec_norm(&y);
            x = y.into_iter().map(|z| z / n).collect();
            lambda = n;
        }
        lambda.sqrt()
    }

    #[test]
    fn diagonal_values_sorted() {
        let m = ComplexMatrix::from_real_rows(&[&[3.0, 0.0], &[0.0, 4.0]]);
        let s = singular_values(&m).unwrap();
        assert!((s[0] - 4.0).abs() < 1e-15 && (s[1] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn unitary_has_unit_singular_values() {
        let mut rng = RngHandle::new(8).generator();
        let u = haar_unitary(6, &mut rng);
        for s in singular_values(&u).unwrap() {
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn largest_matches_power_iteration() {
        let mut rng = RngHandle::new(21).generator();
        let m = standard_gaussian_matrix(5, 5, &mut rng);
        let s = singular_values(&m).unwrap();
        assert!((s[0] - power_iteration_norm(&m)).abs() < 1e-8);
    }

    #[test]
    fn reconstruction_wide_and_tall() {
        let mut rng = RngHandle::new(2).generator();
        for &(r, c) in &[(5, 3), (3, 5), (4, 4), (1, 3)] {
            let m = standard_gaussian_matrix(r, c, &mut rng);
            let f = svd(&m, true).unwrap();
            let back = f.reconstruct().unwrap();
            assert!((&back - &m).frobenius_norm() < 1e-11 * m.frobenius_norm());
            let energy: f64 = f.singular_values.iter().map(|s| s * s).sum();
            assert!((energy - m.frobenius_norm_sqr()).abs() < 1e-12 * energy);
        }
    }

    #[test]
    fn rank_deficient_reconstruction() {
        let m =
            ComplexMatrix::from_real_rows(&[&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0], &[0.0, 0.0, 0.0]]);
        let f = svd(&m, true).unwrap();
        assert!((&f.reconstruct().unwrap() - &m).frobenius_norm() < 1e-12);
        let u = f.u.unwrap();
        let g = &u.adjoint() * &u;
        assert!((&g - &ComplexMatrix::identity(3)).frobenius_norm() < 1e-12);
    }

    #[test]
    fn pinv_of_diagonal_and_zero() {
        let m = ComplexMatrix::from_real_rows(&[&[2.0, 0.0], &[0.0, 4.0]]);
        let p = pinv_norms(&m, None).unwrap();
        assert!((p.operator - 0.5).abs() < 1e-15);
        assert!((p.frobenius - (0.25_f64 + 1.0 / 16.0).sqrt()).abs() < 1e-15);
        assert_eq!(
            pinv_norms(&ComplexMatrix::zeros(3, 3), None).unwrap(),
            PinvNorms::INFINITE
        );
    }

    #[test]
    fn pinv_matches_inverse_on_square_full_rank() {
        let mut rng = RngHandle::new(4).generator();
        let m = standard_gaussian_matrix(4, 4, &mut rng);
        let inv = crate::linalg::lu::inverse(&m).unwrap();
        let p = pinv_norms(&m, None).unwrap();
        let op = operator_norm(&inv).unwrap();
        assert!((p.operator - op).abs() < 1e-10 * op);
        assert!((p.frobenius - inv.frobenius_norm()).abs() < 1e-10 * p.frobenius);
    }
}
