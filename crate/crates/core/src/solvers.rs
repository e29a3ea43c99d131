//! The two homotopy solvers.
//!
//! Algorithm a) starts from a diagonal matrix whose eigenvalues are the
//! innermost points of the hexagonal lattice and follows all `n` paths.
//! Algorithm b) draws a random block-triangular start `φ_n(z, M, U, w)` with a
//! known eigenpair `(z, e₁)` and follows one path.

use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::{certify_by_refinement, condition_numbers, EigenTriple};
use crate::homotopy::{rescale_to_input, track, GreatCirclePath, TrackConfig};
use crate::linalg::matrix::unit_vector;
use crate::linalg::qr::householder_qr_reduced;
use crate::linalg::sample::{
    haar_unitary, standard_complex_normal, standard_complex_vector, standard_gaussian_matrix,
};
use crate::linalg::svd::pinv_norms;
use crate::linalg::{c64, ComplexMatrix};
use crate::rng::RngHandle;

/// Newton refinements applied to every tracked endpoint before it is returned.
pub const REFINEMENT_STEPS: usize = 3;

/// The first `n` centers of the unit-side hexagonal tiling, by increasing
/// modulus and then by argument in `[0, 2π)`.
pub fn hexagonal_lattice_points(n: usize) -> Vec<c64> {
    // centers are √3·(i + j·e^{iπ/3}) with squared modulus 3·(i² + ij + j²);
    // the box |i|, |j| ≤ r contains every center with i² + ij + j² < 3(r+1)²/4
    let key = |i: i64, j: i64| i * i + i * j + j * j;
    let mut r: i64 = 1;
    loop {
        let limit = 3 * (r + 1) * (r + 1);
        let mut pts: Vec<(i64, f64, i64, i64)> = Vec::new();
        for i in -r..=r {
            for j in -r..=r {
                let k = key(i, j);
                if 4 * k < limit {
                    let z = point(i, j);
                    let arg = z.im.atan2(z.re).rem_euclid(std::f64::consts::TAU);
                    pts.push((k, arg, i, j));
                }
            }
        }
        if pts.len() >= n {
            pts.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
            return pts
                .into_iter()
                .take(n)
                .map(|(_, _, i, j)| point(i, j))
                .collect();
        }
        r *= 2;
    }
}

fn point(i: i64, j: i64) -> c64 {
    let s3 = 3f64.sqrt();
    c64::new(s3 * (i as f64 + 0.5 * j as f64), 1.5 * j as f64)
}

/// `μ(Diag(λ))² = ‖Λ‖² · max_{i≠j} |λᵢ − λⱼ|⁻²`.
pub fn diagonal_mu_squared(lambdas: &[c64]) -> f64 {
    let norm2: f64 = lambdas.iter().map(|z| z.norm_sqr()).sum();
    let mut min_gap2 = f64::INFINITY;
    for (i, a) in lambdas.iter().enumerate() {
        for b in &lambdas[i + 1..] {
            min_gap2 = min_gap2.min((a - b).norm_sqr());
        }
    }
    norm2 / min_gap2
}

/// Rejection-sampled point of `Ω_n`, with the number of rejected `(z, M)`
/// draws.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaSample {
    pub z: c64,
    pub m: ComplexMatrix,
    pub u: ComplexMatrix,
    pub w: Vec<c64>,
    pub rejections: u64,
    /// `‖M†‖_F` of the accepted `M`.
    pub pinv_frobenius: f64,
}

impl OmegaSample {
    pub fn order(&self) -> usize {
        self.m.cols()
    }

    /// Number of `(z, M)` rounds, accepted one included.
    pub fn draws(&self) -> u64 {
        self.rejections + 1
    }

    /// `n·|z|·‖M†‖_F ≤ 1`.
    pub fn accepted(&self) -> bool {
        self.order() as f64 * self.z.norm() * self.pinv_frobenius <= 1.0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "m": matrix_value(&self.m),
            "rejections": self.rejections,
            "u": matrix_value(&self.u),
            "w": vector_value(&self.w),
            "z": complex_value(self.z),
        })
    }
}

/// A start matrix with some of its eigenpairs known exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct StartSystem {
    pub a0: ComplexMatrix,
    pub pairs: Vec<(c64, Vec<c64>)>,
    pub omega: Option<OmegaSample>,
}

impl StartSystem {
    pub fn order(&self) -> usize {
        self.a0.rows()
    }

    pub fn to_json(&self) -> Value {
        let pairs: Vec<Value> = self
            .pairs
            .iter()
            .map(|(l, v)| json!({"lambda": complex_value(*l), "v": vector_value(v)}))
            .collect();
        let mut out = json!({"a0": matrix_value(&self.a0), "pairs": pairs});
        if let Some(o) = &self.omega {
            out["omega"] = o.to_json();
        }
        out
    }
}

pub fn complex_value(z: c64) -> Value {
    json!([z.re, z.im])
}

pub fn vector_value(v: &[c64]) -> Value {
    Value::Array(v.iter().map(|&z| complex_value(z)).collect())
}

pub fn matrix_value(m: &ComplexMatrix) -> Value {
    serde_json::to_value(m).expect("matrix serializes")
}

/// Diagonal start with the first `n` lattice points as eigenvalues.
pub fn hexagonal_start(n: usize) -> Result<StartSystem> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "hexagonal start needs n >= 2, got {n}"
        )));
    }
    let lambdas = hexagonal_lattice_points(n);
    let pairs = lambdas
        .iter()
        .enumerate()
        .map(|(i, &l)| (l, unit_vector(n, i)))
        .collect();
    Ok(StartSystem {
        a0: ComplexMatrix::diagonal(&lambdas),
        pairs,
        omega: None,
    })
}

pub fn sample_omega<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<OmegaSample> {
    if n < 2 {
        return Err(Error::Domain(format!("Omega_n needs n >= 2, got {n}")));
    }
    let scale = 1.0 / (2.0 * (n as f64).powi(3)).sqrt();
    let mut rejections = 0;
    let (z, m, pinv_frobenius) = loop {
        let z = standard_complex_normal(rng) * scale;
        let m = standard_gaussian_matrix(n - 1, n, rng);
        let p = pinv_norms(&m, Some(n - 1))?;
        if p.is_finite() && n as f64 * z.norm() * p.frobenius <= 1.0 {
            break (z, m, p.frobenius);
        }
        rejections += 1;
    };
    let w = standard_complex_vector(n - 1, rng);
    let u = haar_unitary(n - 1, rng);
    Ok(OmegaSample {
        z,
        m,
        u,
        w,
        rejections,
        pinv_frobenius,
    })
}

/// `φ_n(z, M, U, w) = [[z, w*], [0, M·Q_M·U]]` with the known pair `(z, e₁)`;
/// `Q_M` is the Q factor of the reduced QR decomposition of `M*`.
pub fn phi_n(s: &OmegaSample) -> Result<StartSystem> {
    let n = s.order();
    if s.m.rows() + 1 != n || s.u.shape() != (n - 1, n - 1) || s.w.len() != n - 1 {
        return Err(Error::Dimension("inconsistent Omega_n sample".into()));
    }
    let qm = householder_qr_reduced(&s.m.adjoint())?.q;
    let b = &(&s.m * &qm) * &s.u;
    let mut a0 = ComplexMatrix::zeros(n, n);
    a0[(0, 0)] = s.z;
    for j in 1..n {
        a0[(0, j)] = s.w[j - 1].conj();
        for i in 1..n {
            a0[(i, j)] = b[(i - 1, j - 1)];
        }
    }
    Ok(StartSystem {
        a0,
        pairs: vec![(s.z, unit_vector(n, 0))],
        omega: Some(s.clone()),
    })
}

/// A certified eigenpair of the input together with its path statistics.
#[derive(Debug, Clone)]
pub struct SolvedPair {
    pub triple: EigenTriple,
    pub mu: f64,
    pub steps: u64,
    pub path: usize,
    /// Residual history of the certifying refinement.
    pub residuals: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct PathFailure {
    pub path: usize,
    pub error: Error,
}

#[derive(Debug, Clone)]
pub struct SolveOutput {
    pub pairs: Vec<SolvedPair>,
    pub failures: Vec<PathFailure>,
    pub wall_time: Duration,
    pub seed: Option<RngHandle>,
    /// Rejected `(z, M)` rounds of the start sampler (algorithm b).
    pub rejections: Option<u64>,
    /// Start system of the returned pairs, `None` if no attempt succeeded.
    pub start: Option<StartSystem>,
}

impl SolveOutput {
    pub fn steps(&self) -> Vec<u64> {
        self.pairs.iter().map(|p| p.steps).collect()
    }

    pub fn total_steps(&self) -> u64 {
        self.pairs.iter().map(|p| p.steps).sum()
    }

    pub fn is_complete(&self) -> bool {
        self.failures.is_empty()
    }
}

fn validate_input(a: &ComplexMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "matrix must be square, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if a.rows() < 2 {
        return Err(Error::Domain("matrix order must be at least 2".into()));
    }
    if !a.is_finite() {
        return Err(Error::Domain("matrix has non-finite entries".into()));
    }
    if a.frobenius_norm() == 0.0 {
        return Err(Error::Domain(
            "zero matrix has a multiple eigenvalue".into(),
        ));
    }
    Ok(())
}

/// Tracks one known pair of `start` to `a` and certifies the result.
fn solve_path(
    path: &GreatCirclePath,
    start: &StartSystem,
    index: usize,
    a: &ComplexMatrix,
    config: &TrackConfig,
) -> Result<SolvedPair> {
    let (l0, v0) = &start.pairs[index];
    let state = track(path, l0 / start.a0.frobenius_norm(), v0, *config)?;
    let raw = rescale_to_input(&state.current, a);
    let cert = certify_by_refinement(&raw, REFINEMENT_STEPS)?;
    if !cert.passed {
        return Err(Error::CertificationFailed {
            residual: *cert.residuals.last().unwrap_or(&f64::NAN),
        });
    }
    let mu = condition_numbers(&cert.refined)?.mu;
    Ok(SolvedPair {
        triple: cert.refined,
        mu,
        steps: state.steps,
        path: index,
        residuals: cert.residuals,
    })
}

/// All `n` eigenpairs of `a` from the hexagonal start. Paths run in parallel
/// on the current rayon pool; failed paths are reported, not fatal.
pub fn algorithm_a(a: &ComplexMatrix, config: &TrackConfig) -> Result<SolveOutput> {
    let clock = Instant::now();
    validate_input(a)?;
    let start = hexagonal_start(a.rows())?;
    let path = GreatCirclePath::between(&start.a0, a)?;
    let results: Vec<Result<SolvedPair>> = (0..a.rows())
        .into_par_iter()
        .map(|i| solve_path(&path, &start, i, a, config))
        .collect();
    let mut pairs = Vec::new();
    let mut failures = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(p) => pairs.push(p),
            Err(error) => failures.push(PathFailure { path: i, error }),
        }
    }
    Ok(SolveOutput {
        pairs,
        failures,
        wall_time: clock.elapsed(),
        seed: None,
        rejections: None,
        start: Some(start),
    })
}

fn retryable(e: &Error) -> bool {
    matches!(
        e,
        Error::PathIllPosed { .. }
            | Error::BudgetExceeded { .. }
            | Error::DegeneratePath { .. }
            | Error::CertificationFailed { .. }
            | Error::IllPosed
            | Error::RankDeficient { .. }
    )
}

/// One eigenpair of `a` from a random `Ω_n` start; a failed path is retried
/// once with a fresh start.
pub fn algorithm_b(
    a: &ComplexMatrix,
    seed: RngHandle,
    config: &TrackConfig,
) -> Result<SolveOutput> {
    let clock = Instant::now();
    validate_input(a)?;
    let mut rng = seed.generator();
    let mut rejections = 0;
    let mut last_error = None;
    for _ in 0..2 {
        let sample = sample_omega(a.rows(), &mut rng)?;
        rejections += sample.rejections;
        let attempt = phi_n(&sample).and_then(|start| {
            let path = GreatCirclePath::between(&start.a0, a)?;
            Ok((solve_path(&path, &start, 0, a, config)?, start))
        });
        match attempt {
            Ok((pair, start)) => {
                return Ok(SolveOutput {
                    pairs: vec![pair],
                    failures: Vec::new(),
                    wall_time: clock.elapsed(),
                    seed: Some(seed),
                    rejections: Some(rejections),
                    start: Some(start),
                })
            }
            Err(e) if retryable(&e) => last_error = Some(e),
            Err(e) => return Err(e),
        }
    }
    Ok(SolveOutput {
        pairs: Vec::new(),
        failures: vec![PathFailure {
            path: 0,
            error: last_error.expect("loop ran"),
        }],
        wall_time: clock.elapsed(),
        seed: Some(seed),
        rejections: Some(rejections),
        start: None,
    })
}

/// Smallest `t` such that a perfect matching exists using only costs `≤ t`,
/// i.e. `min_π max_i cost[i][π(i)]`.
pub fn bottleneck_matching(cost: &[Vec<f64>]) -> f64 {
    let n = cost.len();
    if n == 0 {
        return 0.0;
    }
    let mut levels: Vec<f64> = cost.iter().flatten().copied().collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let (mut lo, mut hi) = (0, levels.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if has_perfect_matching(cost, levels[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    levels[lo]
}

fn has_perfect_matching(cost: &[Vec<f64>], t: f64) -> bool {
    fn augment(
        i: usize,
        cost: &[Vec<f64>],
        t: f64,
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for j in 0..cost.len() {
            if cost[i][j] <= t && !seen[j] {
                seen[j] = true;
                if owner[j].is_none_or(|k| augment(k, cost, t, seen, owner)) {
                    owner[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }
    let n = cost.len();
    let mut owner = vec![None; n];
    (0..n).all(|i| augment(i, cost, t, &mut vec![false; n], &mut owner))
}

/// Optimal matching distance between two eigenvalue multisets.
pub fn eigenvalue_matching_distance(a: &[c64], b: &[c64]) -> f64 {
    assert_eq!(a.len(), b.len(), "multisets of different sizes");
    let cost: Vec<Vec<f64>> = a
        .iter()
        .map(|x| b.iter().map(|y| (x - y).norm()).collect())
        .collect();
    bottleneck_matching(&cost)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{dp2, mu, C0};
    use crate::linalg::eig::{eigenvalues, reference_eigendecomposition};

    fn re(x: f64) -> c64 {
        c64::new(x, 0.0)
    }

    fn min_pairwise(points: &[c64]) -> f64 {
        let mut d = f64::INFINITY;
        for (i, a) in points.iter().enumerate() {
            for b in &points[i + 1..] {
                d = d.min((a - b).norm());
            }
        }
        d
    }

    #[test]
    fn lattice_points() {
        assert_eq!(hexagonal_lattice_points(1), vec![re(0.0)]);
        let p7 = hexagonal_lattice_points(7);
        assert_eq!(p7[0], re(0.0));
        assert!((p7[1] - re(3f64.sqrt())).norm() < 1e-15);
        for z in &p7[1..] {
            assert!((z.norm() - 3f64.sqrt()).abs() < 1e-14);
        }
        assert!((min_pairwise(&p7) - 3f64.sqrt()).abs() < 1e-14);
        let p19 = hexagonal_lattice_points(19);
        assert!(p19.iter().all(|z| z.norm() <= 2.0 * 3f64.sqrt() + 1e-12));
        assert!((min_pairwise(&p19) - 3f64.sqrt()).abs() < 1e-14);
        let big = hexagonal_lattice_points(200);
        assert!(big.windows(2).all(|w| w[0].norm() <= w[1].norm() + 1e-12));
        assert!((min_pairwise(&big) - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn lattice_is_an_initial_segment_by_modulus() {
        // brute-force oracle: every lattice point not chosen is at least as
        // far out as every chosen one
        let chosen = hexagonal_lattice_points(37);
        let rmax = chosen.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let mut inside = 0;
        for i in -20i64..=20 {
            for j in -20i64..=20 {
                if point(i, j).norm() < rmax - 1e-9 {
                    inside += 1;
                    assert!(chosen.iter().any(|z| (z - point(i, j)).norm() < 1e-9));
                }
            }
        }
        assert!(inside <= 37);
    }

    #[test]
    fn hexagonal_start_condition() {
        let s2 = hexagonal_start(2).unwrap();
        let l: Vec<c64> = s2.pairs.iter().map(|p| p.0).collect();
        assert!((diagonal_mu_squared(&l) - 1.0).abs() < 1e-14);
        let s7 = hexagonal_start(7).unwrap();
        let l: Vec<c64> = s7.pairs.iter().map(|p| p.0).collect();
        assert!((diagonal_mu_squared(&l) - 6.0).abs() < 1e-13);
        assert!(6.0 <= 3f64.sqrt() * std::f64::consts::PI / 27.0 * 49.0);
        // agreement with the general condition number at each lattice pair
        let worst = s7
            .pairs
            .iter()
            .map(|(l, v)| mu(&EigenTriple::new(s7.a0.clone(), *l, v).unwrap()).unwrap())
            .fold(0.0, f64::max);
        assert!((worst * worst - 6.0).abs() < 1e-12);
        assert!(hexagonal_start(1).is_err());
    }

    #[test]
    fn algorithm_a_on_diagonal() {
        let a = ComplexMatrix::diagonal(&[re(1.0), re(2.0)]);
        let out = algorithm_a(&a, &TrackConfig::default()).unwrap();
        assert!(out.is_complete());
        let got: Vec<c64> = out.pairs.iter().map(|p| p.triple.lambda).collect();
        assert!(eigenvalue_matching_distance(&got, &[re(1.0), re(2.0)]) < 1e-10);
    }

    #[test]
    fn algorithm_a_on_its_own_start() {
        let a0 = hexagonal_start(4).unwrap().a0;
        let out = algorithm_a(&a0, &TrackConfig::default()).unwrap();
        assert!(out.is_complete());
        assert!(out.steps().iter().all(|&s| s == 0));
        for (p, z) in out.pairs.iter().zip(hexagonal_lattice_points(4)) {
            assert!((p.triple.lambda - z).norm() < 1e-14);
        }
    }

    #[test]
    fn algorithm_a_matches_oracle() {
        let mut rng = RngHandle::new(50).generator();
        for _ in 0..3 {
            let a = standard_gaussian_matrix(5, 5, &mut rng);
            let out = algorithm_a(&a, &TrackConfig::default()).unwrap();
            assert!(out.is_complete(), "{:?}", out.failures);
            let got: Vec<c64> = out.pairs.iter().map(|p| p.triple.lambda).collect();
            let want = eigenvalues(&a).unwrap();
            assert!(eigenvalue_matching_distance(&got, &want) < 1e-8);
            for (i, p) in out.pairs.iter().enumerate() {
                for q in &out.pairs[i + 1..] {
                    assert!(dp2(&p.triple, &q.triple).unwrap() > 0.0);
                }
            }
        }
        let err = algorithm_a(&ComplexMatrix::zeros(3, 2), &TrackConfig::default()).unwrap_err();
        assert!(err.to_string().contains("matrix must be square"));
    }

    #[test]
    fn omega_sampler() {
        let mut rng = RngHandle::new(2).generator();
        let mut draws = 0;
        let runs = 10_000;
        for _ in 0..runs {
            let s = sample_omega(3, &mut rng).unwrap();
            draws += s.draws();
            let recheck = pinv_norms(&s.m, Some(2)).unwrap().frobenius;
            assert!(3.0 * s.z.norm() * recheck <= 1.0 + 1e-12);
            assert!(s.accepted());
        }
        assert!(draws as f64 / runs as f64 <= 4.0);
        let s = sample_omega(5, &mut rng).unwrap();
        let g = &s.u.adjoint() * &s.u;
        assert!(g.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-12);
    }

    #[test]
    fn pseudoinverse_markov_tail() {
        let mut rng = RngHandle::new(6).generator();
        let (n, t, runs) = (4usize, 5.0, 20_000);
        let hits = (0..runs)
            .filter(|_| {
                let m = standard_gaussian_matrix(n - 1, n, &mut rng);
                pinv_norms(&m, Some(n - 1)).unwrap().frobenius >= t
            })
            .count();
        let p = hits as f64 / runs as f64;
        let se = (p * (1.0 - p) / runs as f64).sqrt();
        assert!(p <= n as f64 / (t * t) + 3.0 * se);
    }

    #[test]
    fn phi_structure() {
        let mut rng = RngHandle::new(7).generator();
        let s = sample_omega(2, &mut rng).unwrap();
        let st = phi_n(&s).unwrap();
        let a0 = &st.a0;
        assert_eq!(a0[(1, 0)], re(0.0));
        assert_eq!(a0[(0, 0)], s.z);
        assert_eq!(a0[(0, 1)], s.w[0].conj());
        // 1×2 M: M·Q_M = ‖M‖ up to phase, so the block is ‖M‖·u
        let mnorm = s.m.frobenius_norm();
        assert!((a0[(1, 1)].norm() - mnorm).abs() < 1e-14);

        for _ in 0..10 {
            let s = sample_omega(4, &mut rng).unwrap();
            let st = phi_n(&s).unwrap();
            let col = st.a0.column(0);
            assert_eq!(col[0], s.z);
            assert!(col[1..].iter().all(|&x| x == re(0.0)));
            let got = eigenvalues(&st.a0).unwrap();
            let block = st.a0.submatrix(1, 1, 3, 3);
            let mut want = eigenvalues(&block).unwrap();
            want.push(s.z);
            assert!(eigenvalue_matching_distance(&got, &want) < 1e-10);
            // B = M·Q_M·U has the singular values of M, so ‖B⁻¹‖_F = ‖M†‖_F
            let inv = crate::linalg::lu::inverse(&block).unwrap();
            assert!((inv.frobenius_norm() - s.pinv_frobenius).abs() < 1e-10 * s.pinv_frobenius);
        }
    }

    #[test]
    fn algorithm_b_diagonal_and_determinism() {
        let a = ComplexMatrix::diagonal(&[re(1.0), re(5.0)]);
        let seed = RngHandle::new(11);
        let out = algorithm_b(&a, seed, &TrackConfig::default()).unwrap();
        assert!(out.is_complete());
        let p = &out.pairs[0];
        assert!(
            (p.triple.lambda - re(1.0)).norm() < 1e-10
                || (p.triple.lambda - re(5.0)).norm() < 1e-10
        );
        assert!(p.triple.residual() <= 1e-10);
        let again = algorithm_b(&a, seed, &TrackConfig::default()).unwrap();
        assert_eq!(again.pairs[0].triple, p.triple);
        assert_eq!(again.pairs[0].steps, p.steps);
        assert_eq!(again.rejections, out.rejections);
    }

    #[test]
    fn algorithm_b_matches_oracle_pairs() {
        let mut rng = RngHandle::new(77).generator();
        let mut ok = 0;
        for s in 0..30 {
            let a = standard_gaussian_matrix(4, 4, &mut rng);
            let out = algorithm_b(&a, RngHandle::new(s), &TrackConfig::default()).unwrap();
            let Some(p) = out.pairs.first() else { continue };
            let best = reference_eigendecomposition(&a)
                .unwrap()
                .into_iter()
                .map(|e| EigenTriple::new(a.clone(), e.lambda, &e.vector).unwrap())
                .min_by(|x, y| {
                    dp2(x, &p.triple)
                        .unwrap()
                        .total_cmp(&dp2(y, &p.triple).unwrap())
                })
                .unwrap();
            let m = mu(&best).unwrap();
            assert!(dp2(&best, &p.triple).unwrap() <= C0 / (4.0 * m));
            ok += 1;
        }
        assert_eq!(ok, 30);
    }

    #[test]
    fn bottleneck_matching_small() {
        let c = vec![vec![1.0, 5.0], vec![2.0, 3.0]];
        assert_eq!(bottleneck_matching(&c), 3.0);
        let d = eigenvalue_matching_distance(
            &[re(0.0), re(1.0), re(2.0)],
            &[re(2.1), re(0.0), re(0.95)],
        );
        assert!((d - 0.1).abs() < 1e-12);
    }

    #[test]
    fn start_system_json() {
        let v = hexagonal_start(2).unwrap().to_json();
        assert_eq!(v["pairs"][0]["lambda"], json!([0.0, 0.0]));
        assert_eq!(v["a0"]["rows"], json!(2));
        let mut rng = RngHandle::new(1).generator();
        let st = phi_n(&sample_omega(3, &mut rng).unwrap()).unwrap();
        let v = st.to_json();
        assert!(v["omega"]["rejections"].is_u64());
        assert_eq!(v["omega"]["w"].as_array().unwrap().len(), 2);
    }
}
