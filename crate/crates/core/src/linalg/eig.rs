//! Reference dense eigensolver: Householder reduction to Hessenberg form,
//! single-shift complex QR iteration to Schur form, eigenvectors by
//! triangular back substitution polished with one step of inverse iteration.
//!
//! This is a test and experiment oracle only. It carries no certification.

use super::c64;
use super::lu::Lu;
use super::matrix::{phase, vec_norm, ComplexMatrix};
use super::qr::Reflector;
use crate::error::{Error, Result};

/// Largest order the oracle accepts.
pub const ORACLE_MAX_ORDER: usize = 64;

#[derive(Debug, Clone)]
pub struct EigenPair {
    pub lambda: c64,
    /// Unit-norm eigenvector.
    pub vector: Vec<c64>,
}

/// Schur form `A = Z·T·Z*` with `T` upper triangular and `Z` unitary.
#[derive(Debug, Clone)]
pub struct Schur {
    pub t: ComplexMatrix,
    pub z: ComplexMatrix,
}

fn hessenberg(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.rows();
    let mut h = a.clone();
    let mut z = ComplexMatrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        let x: Vec<c64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let r = Reflector::new(&x);
        r.apply_left(&mut h, k + 1, k);
        r.apply_right(&mut h, k + 1, 0);
        r.apply_right(&mut z, k + 1, 0);
        h[(k + 1, k)] = r.alpha;
        for i in k + 2..n {
            h[(i, k)] = c64::new(0.0, 0.0);
        }
    }
    (h, z)
}

/// Givens pair `(c, s)` with `[c s; −s̄ c]·[a; b] = [r; 0]`.
#[inline]
fn givens(a: c64, b: c64) -> (f64, c64) {
    let rho = (a.norm_sqr() + b.norm_sqr()).sqrt();
    if rho == 0.0 {
        return (1.0, c64::new(0.0, 0.0));
    }
    (a.norm() / rho, phase(a) * b.conj() / rho)
}

fn wilkinson_shift(a: c64, b: c64, c: c64, d: c64) -> c64 {
    let p = (a - d) * 0.5;
    let bc = b * c;
    let disc = (p * p + bc).sqrt();
    let (d1, d2) = (p + disc, p - disc);
    let denom = if d1.norm() >= d2.norm() { d1 } else { d2 };
    if denom.norm() == 0.0 {
        d
    } else {
        d - bc / denom
    }
}

/// Complex Schur decomposition.
pub fn schur(a: &ComplexMatrix) -> Result<Schur> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "Schur form of a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    if !a.is_finite() {
        return Err(Error::Domain(
            "eigendecomposition of a non-finite matrix".into(),
        ));
    }
    let n = a.rows();
    let (mut h, mut z) = hessenberg(a);
    if n < 2 {
        return Ok(Schur { t: h, z });
    }
    let norm = h.frobenius_norm();
    let max_iterations = 100 * n;
    let mut total = 0;
    let mut since_deflation = 0;
    let mut hi = n - 1;
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let mut s = h[(l - 1, l - 1)].l1_norm() + h[(l, l)].l1_norm();
            if s == 0.0 {
                s = norm;
            }
            if h[(l, l - 1)].l1_norm() <= f64::EPSILON * s {
                h[(l, l - 1)] = c64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        total += 1;
        since_deflation += 1;
        if total > max_iterations {
            return Err(Error::NonConvergence("reference QR iteration"));
        }
        let sigma = if since_deflation % 11 == 10 {
            // exceptional shift breaks rare cycles
            h[(hi, hi)] + c64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };
        for k in l..=hi {
            h[(k, k)] -= sigma;
        }
        let mut rotations = Vec::with_capacity(hi - l);
        for k in l..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..n {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = x * c + s * y;
                h[(k + 1, j)] = -s.conj() * x + y * c;
            }
            h[(k + 1, k)] = c64::new(0.0, 0.0);
            rotations.push((c, s));
        }
        for (idx, &(c, s)) in rotations.iter().enumerate() {
            let k = l + idx;
            for i in 0..=(k + 1).min(hi) {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = x * c + y * s.conj();
                h[(i, k + 1)] = -x * s + y * c;
            }
            for i in 0..n {
                let x = z[(i, k)];
                let y = z[(i, k + 1)];
                z[(i, k)] = x * c + y * s.conj();
                z[(i, k + 1)] = -x * s + y * c;
            }
        }
        for k in l..=hi {
            h[(k, k)] += sigma;
        }
    }
    // clean the strictly lower triangle
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = c64::new(0.0, 0.0);
        }
    }
    Ok(Schur { t: h, z })
}

fn residual(a: &ComplexMatrix, lambda: c64, v: &[c64]) -> f64 {
    let av = a.matvec(v);
    let r: Vec<c64> = av.iter().zip(v).map(|(x, y)| x - lambda * y).collect();
    vec_norm(&r)
}

/// All `n` eigenpairs of `a`, eigenvalues repeated per algebraic multiplicity.
pub fn reference_eigendecomposition(a: &ComplexMatrix) -> Result<Vec<EigenPair>> {
    let n = a.rows();
    if n > ORACLE_MAX_ORDER {
        return Err(Error::Domain(format!(
            "reference eigensolver is capped at order {ORACLE_MAX_ORDER}, got {n}"
        )));
    }
    let Schur { t, z } = schur(a)?;
    let tnorm = t.frobenius_norm().max(f64::MIN_POSITIVE);
    let small = f64::EPSILON * tnorm;
    let mut pairs = Vec::with_capacity(n);
    for k in 0..n {
        let lambda = t[(k, k)];
        let mut x = vec![c64::new(0.0, 0.0); n];
        x[k] = c64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut s = c64::new(0.0, 0.0);
            for j in i + 1..=k {
                s += t[(i, j)] * x[j];
            }
            let mut d = t[(i, i)] - lambda;
            if d.norm() < small {
                d = c64::new(small, 0.0);
            }
            x[i] = -s / d;
        }
        let mut v = z.matvec(&x);
        let nv = vec_norm(&v);
        v.iter_mut().for_each(|e| *e /= nv);

        // one step of inverse iteration, kept only if it helps
        let mut shifted = a.shifted_negated(lambda).scale_real(-1.0);
        for i in 0..n {
            shifted[(i, i)] -= c64::new(small, 0.0);
        }
        if let Ok(lu) = Lu::new(&shifted) {
            if let Ok(y) = lu.solve(&v) {
                let ny = vec_norm(&y);
                if ny.is_finite() && ny > 0.0 {
                    let w: Vec<c64> = y.iter().map(|e| e / ny).collect();
                    if residual(a, lambda, &w) < residual(a, lambda, &v) {
                        v = w;
                    }
                }
            }
        }
        pairs.push(EigenPair { lambda, vector: v });
    }
    Ok(pairs)
}

pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<c64>> {
    let s = schur(a)?;
    Ok((0..a.rows()).map(|k| s.t[(k, k)]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::lu::determinant;
    use crate::linalg::sample::standard_gaussian_matrix;
    use crate::rng::RngHandle;

    #[test]
    fn diagonal_matrix() {
        let a =
            ComplexMatrix::from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, 2.0, 0.0], &[0.0, 0.0, 3.0]]);
        let mut pairs = reference_eigendecomposition(&a).unwrap();
        pairs.sort_by(|p, q| p.lambda.re.total_cmp(&q.lambda.re));
        for (k, p) in pairs.iter().enumerate() {
            assert!((p.lambda - c64::new(k as f64 + 1.0, 0.0)).norm() < 1e-15);
            assert!((p.vector[k].norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn jordan_block() {
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let pairs = reference_eigendecomposition(&a).unwrap();
        assert_eq!(pairs.len(), 2);
        for p in &pairs {
            assert!(p.lambda.norm() < 1e-15);
            assert!(residual(&a, p.lambda, &p.vector) <= 1e-8);
        }
    }

    #[test]
    fn random_residuals_and_determinant() {
        let mut rng = RngHandle::new(77).generator();
        for n in [2usize, 3, 6, 10, 20] {
            let a = standard_gaussian_matrix(n, n, &mut rng);
            let pairs = reference_eigendecomposition(&a).unwrap();
            let af = a.frobenius_norm();
            for p in &pairs {
                assert!(residual(&a, p.lambda, &p.vector) <= 1e-10 * af, "n = {n}");
                assert!((vec_norm(&p.vector) - 1.0).abs() < 1e-12);
            }
            if n == 6 {
                let prod = pairs
                    .iter()
                    .fold(c64::new(1.0, 0.0), |acc, p| acc * p.lambda);
                let det = determinant(&a).unwrap();
                assert!((prod - det).norm() <= 1e-8 * det.norm());
            }
        }
    }

    #[test]
    fn schur_reconstructs() {
        let mut rng = RngHandle::new(5).generator();
        let a = standard_gaussian_matrix(7, 7, &mut rng);
        let s = schur(&a).unwrap();
        let back = &(&s.z * &s.t) * &s.z.adjoint();
        assert!((&back - &a).frobenius_norm() < 1e-12 * a.frobenius_norm());
    }

    #[test]
    fn oracle_cap() {
        assert!(reference_eigendecomposition(&ComplexMatrix::identity(65)).is_err());
    }
}
