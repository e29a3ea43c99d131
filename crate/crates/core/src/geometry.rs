//! Geometry of the eigenvalue problem: the restricted operator `A_{λ,v}`,
//! the condition numbers `μ` and `μ_F`, projective distances and the
//! projective Newton operator.
//!
//! Every computation here goes through one frame: the Householder reflector
//! `P` with `P·v = α·e₁` and the conjugated matrix `X = P·(λI − A)·P`. In that
//! basis `A_{λ,v}` is the trailing `(n−1)×(n−1)` block of `X`, and the rows
//! `1..n` of `X` are `(I − vv*)(λI − A)` written in an orthonormal basis of
//! `v⊥` (up to a unitary change of columns), so its singular values give the
//! extended condition number off the solution variety.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::matrix::{vec_norm, vec_normalized};
use crate::linalg::qr::{qr_solve, Reflector};
use crate::linalg::svd::{pinv_norms_from_singular_values, singular_values, PinvNorms};
use crate::linalg::{c64, ComplexMatrix};

/// Radius constant of the approximate-eigenpair ball, `c₀ = 0.0739`.
pub const C0: f64 = 0.0739;

/// A matrix with a candidate eigenvalue and unit eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenTriple {
    pub a: ComplexMatrix,
    pub lambda: c64,
    pub v: Vec<c64>,
}

impl EigenTriple {
    /// Builds a triple, normalizing `v`.
    pub fn new(a: ComplexMatrix, lambda: c64, v: &[c64]) -> Result<Self> {
        if !a.is_square() || a.rows() != v.len() {
            return Err(Error::Dimension(format!(
                "triple needs a square matrix matching the vector, got {}x{} and {}",
                a.rows(),
                a.cols(),
                v.len()
            )));
        }
        let v =
            vec_normalized(v).ok_or_else(|| Error::Domain("eigenvector must be nonzero".into()))?;
        Ok(Self { a, lambda, v })
    }

    pub fn order(&self) -> usize {
        self.v.len()
    }

    /// `‖(λI − A)v‖`.
    pub fn residual(&self) -> f64 {
        let av = self.a.matvec(&self.v);
        let r: Vec<c64> = av
            .iter()
            .zip(&self.v)
            .map(|(x, y)| self.lambda * y - x)
            .collect();
        vec_norm(&r)
    }

    /// `U·(A, λ, v) = (UAU*, λ, Uv)` for unitary `U`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        let a = &(u * &self.a) * &u.adjoint();
        Self {
            a,
            lambda: self.lambda,
            v: u.matvec(&self.v),
        }
    }

    /// `(sA, sλ, v)`.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            a: self.a.scale_real(s),
            lambda: self.lambda * s,
            v: self.v.clone(),
        }
    }

    pub fn with_matrix(&self, a: ComplexMatrix) -> Self {
        Self {
            a,
            lambda: self.lambda,
            v: self.v.clone(),
        }
    }
}

/// `μ` and `μ_F`; infinite on ill-posed triples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub mu: f64,
    pub mu_f: f64,
}

impl ConditionReport {
    pub const INFINITE: ConditionReport = ConditionReport {
        mu: f64::INFINITY,
        mu_f: f64::INFINITY,
    };

    pub fn is_finite(&self) -> bool {
        self.mu.is_finite()
    }
}

/// `P` and `X = P·(λI − A)·P` for the triple's `v`.
pub(crate) struct Frame {
    pub reflector: Reflector,
    pub x: ComplexMatrix,
}

impl Frame {
    pub fn new(a: &ComplexMatrix, lambda: c64, v: &[c64]) -> Self {
        let reflector = Reflector::new(v);
        let mut x = a.shifted_negated(lambda);
        reflector.apply_left(&mut x, 0, 0);
        reflector.apply_right(&mut x, 0, 0);
        Self { reflector, x }
    }

    fn order(&self) -> usize {
        self.x.rows()
    }

    /// Trailing block: `A_{λ,v}` in the basis `P·e₂, …, P·eₙ`.
    pub fn restricted(&self) -> ComplexMatrix {
        let n = self.order();
        self.x.submatrix(1, 1, n - 1, n - 1)
    }

    /// Pseudoinverse norms of `(I − vv*)(λI − A)`, required rank `n − 1`.
    pub fn projected_pinv_norms(&self) -> Result<PinvNorms> {
        let n = self.order();
        let rows = self.x.submatrix(1, 0, n - 1, n);
        let sigma = singular_values(&rows)?;
        Ok(pinv_norms_from_singular_values(
            &sigma,
            n - 1,
            n,
            Some(n - 1),
        ))
    }
}

/// `Π_{v⊥}(λI − A)|_{v⊥}` as an `(n−1)×(n−1)` matrix in the orthonormal basis
/// of `v⊥` given by the Householder completion of `v`.
pub fn restricted_operator(t: &EigenTriple) -> ComplexMatrix {
    Frame::new(&t.a, t.lambda, &t.v).restricted()
}

fn condition_from_frame(a_norm: f64, frame: &Frame) -> Result<ConditionReport> {
    if frame.order() == 1 {
        return Ok(ConditionReport { mu: 1.0, mu_f: 1.0 });
    }
    let p = frame.projected_pinv_norms()?;
    if !p.is_finite() {
        return Ok(ConditionReport::INFINITE);
    }
    Ok(ConditionReport {
        mu: (a_norm * p.operator).max(1.0),
        mu_f: (a_norm * p.frobenius).max(1.0),
    })
}

/// `μ = max(1, ‖A‖_F·‖((I − vv*)(λI − A))†‖)` and its Frobenius analogue.
pub fn condition_numbers(t: &EigenTriple) -> Result<ConditionReport> {
    let frame = Frame::new(&t.a, t.lambda, &t.v);
    condition_from_frame(t.a.frobenius_norm(), &frame)
}

/// Extended `μ` only.
pub fn mu(t: &EigenTriple) -> Result<f64> {
    Ok(condition_numbers(t)?.mu)
}

/// Riemannian distance between the projective classes of `u` and `w`,
/// in `[0, π/2]`.
pub fn proj_distance(u: &[c64], w: &[c64]) -> Result<f64> {
    if u.len() != w.len() {
        return Err(Error::Dimension(format!(
            "vectors of length {} and {}",
            u.len(),
            w.len()
        )));
    }
    let un = vec_normalized(u)
        .ok_or_else(|| Error::Domain("zero vector has no projective class".into()))?;
    let wn = vec_normalized(w)
        .ok_or_else(|| Error::Domain("zero vector has no projective class".into()))?;
    Ok(unit_proj_distance(&un, &wn))
}

/// Chordal form `2·asin(‖u − e^{iθ}w‖/2)` after aligning phases; accurate
/// down to distances of order machine epsilon.
fn unit_proj_distance(u: &[c64], w: &[c64]) -> f64 {
    let inner: c64 = u.iter().zip(w).map(|(a, b)| a * b.conj()).sum();
    let ph = crate::linalg::matrix::phase(inner);
    let d: f64 = u
        .iter()
        .zip(w)
        .map(|(a, b)| (a - b * ph).norm_sqr())
        .sum::<f64>()
        .sqrt();
    2.0 * (0.5 * d).min(1.0).asin()
}

/// Projective distance between `(A₁, λ₁)` and `(A₂, λ₂)` viewed as points of
/// `P(C^{n²+1})`, with the Hermitian inner product
/// `⟨A₁, A₂⟩ + λ₁·conj(λ₂)`.
pub fn matrix_scalar_distance(
    a1: &ComplexMatrix,
    l1: c64,
    a2: &ComplexMatrix,
    l2: c64,
) -> Result<f64> {
    if a1.shape() != a2.shape() {
        return Err(Error::Dimension("matrices of different shapes".into()));
    }
    let mut x: Vec<c64> = a1.as_slice().to_vec();
    x.push(l1);
    let mut y: Vec<c64> = a2.as_slice().to_vec();
    y.push(l2);
    proj_distance(&x, &y)
}

/// Product distance `sqrt(d_P((A₁,λ₁),(A₂,λ₂))² + d_P(v₁,v₂)²)`.
pub fn dp2(t1: &EigenTriple, t2: &EigenTriple) -> Result<f64> {
    let d1 = matrix_scalar_distance(&t1.a, t1.lambda, &t2.a, t2.lambda)?;
    let d2 = proj_distance(&t1.v, &t2.v)?;
    Ok(d1.hypot(d2))
}

/// One projective Newton step `N_A(λ, v)`.
pub fn newton_step(t: &EigenTriple) -> Result<EigenTriple> {
    let frame = Frame::new(&t.a, t.lambda, &t.v);
    newton_from_frame(t, &frame)
}

pub(crate) fn newton_from_frame(t: &EigenTriple, frame: &Frame) -> Result<EigenTriple> {
    let n = t.order();
    if n == 1 {
        return Ok(EigenTriple {
            a: t.a.clone(),
            lambda: t.a[(0, 0)],
            v: t.v.clone(),
        });
    }
    let x = &frame.x;
    let alpha = frame.reflector.alpha;
    // H*(λI − A)v = α·X[1.., 0]
    let rhs: Vec<c64> = (1..n).map(|i| x[(i, 0)] * alpha).collect();
    let y = qr_solve(&frame.restricted(), &rhs).map_err(|e| match e {
        Error::RankDeficient { .. } => Error::IllPosed,
        other => other,
    })?;
    // v − v̇ = P·u with u = (α, −y)
    let mut u = Vec::with_capacity(n);
    u.push(alpha);
    u.extend(y.iter().map(|z| -z));
    let xu0: c64 = (0..n).map(|j| x[(0, j)] * u[j]).sum();
    let lambda_dot = alpha.conj() * xu0;
    let mut new_v = u;
    frame.reflector.apply(&mut new_v);
    let new_v = vec_normalized(&new_v).ok_or(Error::IllPosed)?;
    if !lambda_dot.re.is_finite() || !lambda_dot.im.is_finite() {
        return Err(Error::IllPosed);
    }
    Ok(EigenTriple {
        a: t.a.clone(),
        lambda: t.lambda - lambda_dot,
        v: new_v,
    })
}

/// `dP2(t, exact) ≤ c₀/μ(exact)`: inside the ball where Newton's method
/// converges immediately and quadratically to `exact`.
pub fn certify_approximate(t: &EigenTriple, exact: &EigenTriple) -> Result<bool> {
    let m = mu(exact)?;
    if !m.is_finite() {
        return Ok(false);
    }
    Ok(dp2(t, exact)? <= C0 / m)
}

/// Checks `μ(t)/(1+ε) ≤ μ(t') ≤ μ(t)/(1−ε)` for a perturbation `t'` of a
/// well-posed `t` on the unit sphere within `dP2 ≤ ε/(5μ(t))`.
pub fn mu_perturbation_bound(t: &EigenTriple, t_prime: &EigenTriple, eps: f64) -> Result<bool> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::Contract(format!(
            "eps must lie in (0, 1/2], got {eps}"
        )));
    }
    if t.a != t_prime.a {
        return Err(Error::Contract(
            "both triples must share the same matrix".into(),
        ));
    }
    let norm = t.a.frobenius_norm();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::Contract(format!(
            "matrix must have unit Frobenius norm, got {norm}"
        )));
    }
    let m = mu(t)?;
    if !m.is_finite() {
        return Err(Error::Contract(
            "condition number of the reference triple is infinite".into(),
        ));
    }
    let d = dp2(t, t_prime)?;
    if d > eps / (5.0 * m) {
        return Err(Error::Contract(format!(
            "perturbation {d:.3e} exceeds eps/(5 mu) = {:.3e}",
            eps / (5.0 * m)
        )));
    }
    let m2 = mu(t_prime)?;
    Ok(m / (1.0 + eps) <= m2 && m2 <= m / (1.0 - eps))
}

/// Residual history of a few extra Newton refinements.
#[derive(Debug, Clone)]
pub struct Refinement {
    pub refined: EigenTriple,
    /// `residuals[0]` is the input residual.
    pub residuals: Vec<f64>,
    pub passed: bool,
}

/// Residual floor for certification, relative to `‖A‖_F`.
pub const REFINEMENT_TOLERANCE: f64 = 1e-12;

/// Applies `steps` Newton refinements and checks the decay
/// `r_k ≤ max(2^{1−2^k}·r₀, 10⁻¹²‖A‖_F)` with final residual below the floor.
pub fn certify_by_refinement(t: &EigenTriple, steps: usize) -> Result<Refinement> {
    let floor = REFINEMENT_TOLERANCE * t.a.frobenius_norm();
    let mut residuals = vec![t.residual()];
    let mut cur = t.clone();
    for _ in 0..steps {
        cur = newton_step(&cur)?;
        residuals.push(cur.residual());
    }
    let r0 = residuals[0];
    let decays = residuals.iter().enumerate().skip(1).all(|(k, &r)| {
        let factor = 2f64.powi(1 - (1i32 << k.min(30)));
        r <= (factor * r0).max(floor)
    });
    let passed = decays && residuals.last().is_some_and(|&r| r <= floor);
    Ok(Refinement {
        refined: cur,
        residuals,
        passed,
    })
}
