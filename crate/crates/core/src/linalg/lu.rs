//! LU with partial pivoting: determinants, solves and explicit inverses.

use super::c64;
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Lu {
    lu: ComplexMatrix,
    perm: Vec<usize>,
    sign: f64,
    singular: bool,
}

impl Lu {
    pub fn new(a: &ComplexMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Dimension(format!(
                "LU needs a square matrix, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let mut singular = false;
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmax == 0.0 {
                singular = true;
                continue;
            }
            if p != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                if f == c64::new(0.0, 0.0) {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= f * u;
                }
            }
        }
        Ok(Self {
            lu,
            perm,
            sign,
            singular,
        })
    }

    pub fn determinant(&self) -> c64 {
        if self.singular {
            return c64::new(0.0, 0.0);
        }
        let n = self.lu.rows();
        (0..n).fold(c64::new(self.sign, 0.0), |d, i| d * self.lu[(i, i)])
    }

    pub fn solve(&self, b: &[c64]) -> Result<Vec<c64>> {
        let n = self.lu.rows();
        if b.len() != n {
            return Err(Error::Dimension(format!(
                "rhs of length {} for order {n}",
                b.len()
            )));
        }
        if self.singular {
            return Err(Error::RankDeficient { column: 0 });
        }
        let mut y: Vec<c64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: c64 = self.lu.row(i)[..i]
                .iter()
                .zip(&y[..i])
                .map(|(l, x)| l * x)
                .sum();
            y[i] -= s;
        }
        super::qr::back_substitute(&self.lu, &mut y);
        Ok(y)
    }
}

pub fn determinant(a: &ComplexMatrix) -> Result<c64> {
    Ok(Lu::new(a)?.determinant())
}

pub fn inverse(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let lu = Lu::new(a)?;
    let n = a.rows();
    let mut inv = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let col = lu.solve(&super::matrix::unit_vector(n, j))?;
        inv.set_column(j, &col);
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_of_small_matrices() {
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[2.0, 3.0]]);
        assert!((determinant(&a).unwrap() - c64::new(-2.0, 0.0)).norm() < 1e-15);
        let s = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert!(determinant(&s).unwrap().norm() < 1e-15);
        let d =
            ComplexMatrix::diagonal(&[c64::new(0.0, 1.0), c64::new(2.0, 0.0), c64::new(3.0, 0.0)]);
        assert!((determinant(&d).unwrap() - c64::new(0.0, 6.0)).norm() < 1e-14);
    }

    #[test]
    fn inverse_round_trip() {
        let a = ComplexMatrix::from_fn(3, 3, |i, j| {
            c64::new((i * 3 + j) as f64, if i == j { 2.0 } else { 0.0 })
        });
        let inv = inverse(&a).unwrap();
        let e = &(&a * &inv) - &ComplexMatrix::identity(3);
        assert!(e.frobenius_norm() < 1e-13);
    }
}
