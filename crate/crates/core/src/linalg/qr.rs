//! Householder reflections and the reduced QR factorization.
//!
//! Sign convention (frozen): the reflector acting on `x` maps it to
//! `α·e₁` with `α = −phase(x₁)·‖x‖`, so the diagonal of `R` is
//! `r_jj = −phase(x₁)·‖x‖` at every stage. With `phase(0) = 1` this makes
//! `M ↦ Q` a deterministic function, continuous wherever no `x₁` vanishes.

use super::c64;
use super::matrix::{phase, vec_norm, ComplexMatrix};
use crate::error::{Error, Result};

/// `H = I − τ·w·w*`, Hermitian and unitary.
#[derive(Debug, Clone)]
pub struct Reflector {
    pub w: Vec<c64>,
    pub tau: f64,
    /// Image of the generating vector: `H·x = alpha·e₁`.
    pub alpha: c64,
}

impl Reflector {
    pub fn new(x: &[c64]) -> Self {
        let norm = vec_norm(x);
        if norm == 0.0 {
            return Self {
                w: vec![c64::new(0.0, 0.0); x.len()],
                tau: 0.0,
                alpha: c64::new(0.0, 0.0),
            };
        }
        let alpha = -phase(x[0]) * norm;
        let mut w = x.to_vec();
        w[0] -= alpha;
        let ww: f64 = w.iter().map(|z| z.norm_sqr()).sum();
        let tau = if ww == 0.0 { 0.0 } else { 2.0 / ww };
        Self { w, tau, alpha }
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    /// `y ← H·y`.
    pub fn apply(&self, y: &mut [c64]) {
        if self.tau == 0.0 {
            return;
        }
        let dot: c64 = self.w.iter().zip(y.iter()).map(|(w, y)| w.conj() * y).sum();
        let s = dot * self.tau;
        for (yi, wi) in y.iter_mut().zip(&self.w) {
            *yi -= wi * s;
        }
    }

    /// Applies `H` from the left to rows `offset..offset+len` of columns
    /// `col0..` of `m`.
    pub fn apply_left(&self, m: &mut ComplexMatrix, offset: usize, col0: usize) {
        if self.tau == 0.0 {
            return;
        }
        let cols = m.cols();
        for j in col0..cols {
            let mut dot = c64::new(0.0, 0.0);
            for (k, wk) in self.w.iter().enumerate() {
                dot += wk.conj() * m[(offset + k, j)];
            }
            let s = dot * self.tau;
            for (k, wk) in self.w.iter().enumerate() {
                m[(offset + k, j)] -= wk * s;
            }
        }
    }

    /// Applies `H` from the right to columns `offset..offset+len` of rows
    /// `row0..` of `m`: `m ← m·H`.
    pub fn apply_right(&self, m: &mut ComplexMatrix, offset: usize, row0: usize) {
        if self.tau == 0.0 {
            return;
        }
        let rows = m.rows();
        for i in row0..rows {
            let mut dot = c64::new(0.0, 0.0);
            for (k, wk) in self.w.iter().enumerate() {
                dot += m[(i, offset + k)] * wk;
            }
            let s = dot * self.tau;
            for (k, wk) in self.w.iter().enumerate() {
                m[(i, offset + k)] -= s * wk.conj();
            }
        }
    }

    /// Dense matrix of the reflector.
    pub fn to_matrix(&self) -> ComplexMatrix {
        let n = self.len();
        ComplexMatrix::from_fn(n, n, |i, j| {
            let d = if i == j { 1.0 } else { 0.0 };
            c64::new(d, 0.0) - self.w[i] * self.w[j].conj() * self.tau
        })
    }
}

/// Reduced QR factors of an `n×k` matrix, `k ≤ n`.
#[derive(Debug, Clone)]
pub struct QrFactors {
    pub q: ComplexMatrix,
    pub r: ComplexMatrix,
}

fn rank_tolerance(m: &ComplexMatrix) -> f64 {
    (m.rows().max(m.cols()) as f64) * f64::EPSILON * m.frobenius_norm()
}

/// Reduced Householder QR: `M = Q·R`, `Q` is `n×k` with orthonormal columns,
/// `R` is `k×k` upper triangular.
pub fn householder_qr_reduced(m: &ComplexMatrix) -> Result<QrFactors> {
    let (n, k) = m.shape();
    if k > n {
        return Err(Error::Dimension(format!(
            "reduced QR needs rows >= cols, got {n}x{k}"
        )));
    }
    let tol = rank_tolerance(m);
    let mut r = m.clone();
    let mut reflectors = Vec::with_capacity(k);
    for j in 0..k {
        let x: Vec<c64> = (j..n).map(|i| r[(i, j)]).collect();
        let h = Reflector::new(&x);
        if h.alpha.norm() <= tol {
            return Err(Error::RankDeficient { column: j });
        }
        h.apply_left(&mut r, j, j);
        // exact zeros below the diagonal
        r[(j, j)] = h.alpha;
        for i in j + 1..n {
            r[(i, j)] = c64::new(0.0, 0.0);
        }
        reflectors.push(h);
    }
    let mut q = ComplexMatrix::zeros(n, k);
    for j in 0..k {
        q[(j, j)] = c64::new(1.0, 0.0);
    }
    for (j, h) in reflectors.iter().enumerate().rev() {
        h.apply_left(&mut q, j, j);
    }
    Ok(QrFactors {
        q,
        r: r.submatrix(0, 0, k, k),
    })
}

/// Solves the square system `a·x = b` by Householder QR. Fails with
/// [`Error::RankDeficient`] when some `|r_jj|` falls below the rank tolerance.
pub fn qr_solve(a: &ComplexMatrix, b: &[c64]) -> Result<Vec<c64>> {
    let n = a.rows();
    if !a.is_square() || b.len() != n {
        return Err(Error::Dimension(format!(
            "qr_solve needs a square system, got {}x{} with rhs {}",
            a.rows(),
            a.cols(),
            b.len()
        )));
    }
    let tol = rank_tolerance(a);
    let mut r = a.clone();
    let mut y = b.to_vec();
    for j in 0..n {
        let x: Vec<c64> = (j..n).map(|i| r[(i, j)]).collect();
        let h = Reflector::new(&x);
        if h.alpha.norm() <= tol {
            return Err(Error::RankDeficient { column: j });
        }
        h.apply_left(&mut r, j, j);
        h.apply(&mut y[j..]);
    }
    back_substitute(&r, &mut y);
    Ok(y)
}

/// In-place back substitution with the upper triangle of `r`.
pub(crate) fn back_substitute(r: &ComplexMatrix, y: &mut [c64]) {
    let n = y.len();
    for i in (0..n).rev() {
        let mut s = y[i];
        for j in i + 1..n {
            s -= r[(i, j)] * y[j];
        }
        y[i] = s / r[(i, i)];
    }
}

/// Orthonormal basis of the Hermitian complement of a unit vector `v`,
/// returned as the `n×(n−1)` matrix `H` of columns `2..n` of the Householder
/// reflector that maps `v` onto a multiple of `e₁`.
pub fn complement_basis(v: &[c64]) -> ComplexMatrix {
    let h = Reflector::new(v);
    let p = h.to_matrix();
    let n = v.len();
    p.submatrix(0, 1, n, n - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sample::standard_gaussian_matrix;
    use crate::rng::RngHandle;

    fn orthonormality_defect(q: &ComplexMatrix) -> f64 {
        let g = &q.adjoint() * q;
        (&g - &ComplexMatrix::identity(q.cols())).frobenius_norm()
    }

    #[test]
    fn identity_follows_sign_convention() {
        let f = householder_qr_reduced(&ComplexMatrix::identity(3)).unwrap();
        // r_jj = −phase(1)·1 = −1, hence Q = R = −I
        let minus_i = ComplexMatrix::identity(3).scale_real(-1.0);
        assert!(f.q.max_abs_diff(&minus_i) < 1e-15);
        assert!(f.r.max_abs_diff(&minus_i) < 1e-15);
    }

    #[test]
    fn random_tall_residuals() {
        let mut rng = RngHandle::new(11).generator();
        let m = standard_gaussian_matrix(4, 3, &mut rng);
        let f = householder_qr_reduced(&m).unwrap();
        assert!((&m - &(&f.q * &f.r)).frobenius_norm() < 1e-12 * m.frobenius_norm());
        assert!(orthonormality_defect(&f.q) < 1e-12);
        for i in 0..3 {
            for j in 0..i {
                assert_eq!(f.r[(i, j)], c64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn proportional_columns_are_rank_deficient() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 6.0], &[-1.0, -2.0]]);
        assert!(matches!(
            householder_qr_reduced(&m),
            Err(Error::RankDeficient { column: 1 })
        ));
    }

    #[test]
    fn complement_is_orthonormal_and_orthogonal() {
        let mut rng = RngHandle::new(5).generator();
        let x = standard_gaussian_matrix(5, 1, &mut rng).into_vec();
        let v = crate::linalg::matrix::vec_normalized(&x).unwrap();
        let h = complement_basis(&v);
        assert!(orthonormality_defect(&h) < 1e-13);
        let hv = h.adjoint().matvec(&v);
        assert!(vec_norm(&hv) < 1e-14);
    }

    #[test]
    fn solves_square_systems() {
        let mut rng = RngHandle::new(3).generator();
        let a = standard_gaussian_matrix(5, 5, &mut rng);
        let x = standard_gaussian_matrix(5, 1, &mut rng).into_vec();
        let b = a.matvec(&x);
        let y = qr_solve(&a, &b).unwrap();
        let err: f64 = x
            .iter()
            .zip(&y)
            .map(|(p, q)| (p - q).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-11);
        assert!(qr_solve(&ComplexMatrix::zeros(2, 2), &[c64::new(1.0, 0.0); 2]).is_err());
    }
}
