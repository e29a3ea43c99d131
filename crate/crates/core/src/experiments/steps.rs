//! Step counts: an independent quadrature of `∫₀ᵃ μ(B_t, λ_t, v_t)² dt` along
//! the exact eigenpair branch, and measured step-scaling tables.
//!
//! The branch is continued with the reference eigensolver alone. At each node
//! the oracle pair nearest in `dP2` to the previous node's pair is taken; an
//! interval is bisected when that choice is ambiguous or when `μ²` changes by
//! more than [`MU2_RATIO`] across it, then integrated by the trapezoid rule.

use rayon::prelude::*;

use super::report::{Check, ExperimentReport};
use super::stats::{log_log_slope, mean};
use crate::error::{Error, Result};
use crate::geometry::{condition_numbers, dp2, EigenTriple};
use crate::homotopy::{GreatCirclePath, TrackConfig};
use crate::linalg::eig::reference_eigendecomposition;
use crate::linalg::sample::standard_gaussian_matrix;
use crate::linalg::ComplexMatrix;
use crate::rng::RngHandle;
use crate::solvers::{algorithm_a, algorithm_b, SolveOutput};

/// Largest `μ²` ratio accepted across one trapezoid interval.
pub const MU2_RATIO: f64 = 1.25;
/// Bisection depth limit.
const MAX_DEPTH: u32 = 24;
/// Continuation is ambiguous when the nearest candidate is farther than this
/// fraction of the second nearest.
const AMBIGUITY: f64 = 0.25;
/// Nominal tracker steps per initial quadrature interval.
const STEPS_PER_NODE: u64 = 32;

/// The step bound constant: steps ≤ `STEP_BOUND_FACTOR·∫μ²`.
pub const STEP_BOUND_FACTOR: f64 = 1000.0;

#[derive(Debug, Clone)]
struct Node {
    t: f64,
    pair: EigenTriple,
    mu2: f64,
}

fn node(t: f64, pair: EigenTriple) -> Result<Node> {
    let m = condition_numbers(&pair)?.mu;
    if !m.is_finite() {
        return Err(Error::PathIllPosed { t });
    }
    Ok(Node {
        t,
        pair,
        mu2: m * m,
    })
}

/// Oracle pair on `B_t` continuing `prev`, and whether the choice was clear.
fn continue_pair(
    path: &GreatCirclePath,
    t: f64,
    prev: &EigenTriple,
) -> Result<(EigenTriple, bool)> {
    let b = path.point(t);
    let mut cands: Vec<(f64, EigenTriple)> = reference_eigendecomposition(&b)?
        .into_iter()
        .map(|p| {
            let e = EigenTriple::new(b.clone(), p.lambda, &p.vector)?;
            Ok((dp2(&e, prev)?, e))
        })
        .collect::<Result<_>>()?;
    cands.sort_by(|x, y| x.0.total_cmp(&y.0));
    let clear = cands.len() < 2 || cands[0].0 <= AMBIGUITY * cands[1].0;
    Ok((cands.swap_remove(0).1, clear))
}

fn advance(path: &GreatCirclePath, from: &Node, t: f64, depth: u32) -> Result<(Node, f64)> {
    let (pair, clear) = continue_pair(path, t, &from.pair)?;
    let next = node(t, pair)?;
    let ratio = next.mu2.max(from.mu2) / next.mu2.min(from.mu2);
    if (!clear || ratio > MU2_RATIO) && depth < MAX_DEPTH {
        let mid = 0.5 * (from.t + t);
        let (m, left) = advance(path, from, mid, depth + 1)?;
        let (end, right) = advance(path, &m, t, depth + 1)?;
        return Ok((end, left + right));
    }
    if !clear {
        return Err(Error::NonConvergence("oracle branch continuation"));
    }
    let area = 0.5 * (t - from.t) * (from.mu2 + next.mu2);
    Ok((next, area))
}

/// `∫₀ᵃ μ(B_t, λ_t, v_t)² dt` along the branch through the start pair
/// `(λ₀, v₀)` of `B_0`. `steps_hint` sets the initial grid resolution.
pub fn branch_mu_squared_integral(
    path: &GreatCirclePath,
    start: &EigenTriple,
    steps_hint: u64,
) -> Result<f64> {
    if path.arc() == 0.0 {
        return Ok(0.0);
    }
    let (pair, _) = continue_pair(path, 0.0, start)?;
    let mut cur = node(0.0, pair)?;
    let k = (steps_hint / STEPS_PER_NODE).max(64);
    let mut total = 0.0;
    for i in 1..=k {
        let t = if i == k {
            path.arc()
        } else {
            path.arc() * i as f64 / k as f64
        };
        let (next, part) = advance(path, &cur, t, 0)?;
        total += part;
        cur = next;
    }
    Ok(total)
}

/// Per-path `(steps, ∫μ²)` for every returned pair of a solve on `a`.
pub fn step_bound_data(a: &ComplexMatrix, out: &SolveOutput) -> Result<Vec<(u64, f64)>> {
    let Some(start) = &out.start else {
        return Ok(Vec::new());
    };
    let path = GreatCirclePath::between(&start.a0, a)?;
    let norm0 = start.a0.frobenius_norm();
    out.pairs
        .par_iter()
        .map(|p| {
            let (l0, v0) = &start.pairs[p.path];
            let s = EigenTriple::new(path.start().clone(), l0 / norm0, v0)?;
            Ok((p.steps, branch_mu_squared_integral(&path, &s, p.steps)?))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    A,
    B,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::A => "a",
            Algorithm::B => "b",
        }
    }
}

/// Measured step-scaling table.
#[derive(Debug, Clone)]
pub struct StepScaling {
    /// One informational row per `n` (mean total steps per run), then the
    /// fitted log-log slope, then, when requested, the worst observed
    /// `steps/(1000·∫μ²)` as an upper-bound row with reference 1.
    pub reports: Vec<ExperimentReport>,
    pub slope: f64,
    /// Failed runs, excluded from the means.
    pub failures: usize,
}

/// Runs `trials` random Gaussian inputs per order and tabulates mean steps.
pub fn exp_step_scaling(
    algo: Algorithm,
    orders: &[usize],
    trials: u64,
    seed: RngHandle,
    config: &TrackConfig,
    check_bound: bool,
) -> Result<StepScaling> {
    let mut reports = Vec::new();
    let mut points = Vec::new();
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    let mut checked = 0u64;
    let name = format!("steps_{}", algo.name());
    for &n in orders {
        let handle = seed.derive(n as u64);
        let runs: Vec<Result<(SolveOutput, ComplexMatrix)>> = (0..trials)
            .into_par_iter()
            .map(|i| {
                let h = handle.derive(i);
                let mut rng = h.generator();
                let a = standard_gaussian_matrix(n, n, &mut rng);
                let out = match algo {
                    Algorithm::A => algorithm_a(&a, config)?,
                    Algorithm::B => algorithm_b(&a, h.derive(1), config)?,
                };
                Ok((out, a))
            })
            .collect();
        let mut totals = Vec::new();
        for r in runs {
            let (out, a) = r?;
            failures += out.failures.len();
            if !out.is_complete() {
                continue;
            }
            totals.push(out.total_steps() as f64);
            if check_bound {
                for (steps, integral) in step_bound_data(&a, &out)? {
                    worst = worst.max(steps as f64 / (STEP_BOUND_FACTOR * integral));
                    checked += 1;
                }
            }
        }
        let m = if totals.is_empty() {
            f64::NAN
        } else {
            mean(&totals)
        };
        points.push((n as f64, m));
        reports.push(ExperimentReport::new(
            &name,
            n,
            totals.len() as u64,
            m,
            f64::NAN,
            f64::NAN,
            Check::Informational,
            handle,
        ));
    }
    let slope = log_log_slope(&points);
    reports.push(ExperimentReport::new(
        &format!("{name}_slope"),
        orders.iter().copied().max().unwrap_or(0),
        orders.len() as u64,
        slope,
        f64::NAN,
        f64::NAN,
        Check::Informational,
        seed,
    ));
    if check_bound {
        reports.push(ExperimentReport::new(
            &format!("{name}_bound"),
            orders.iter().copied().max().unwrap_or(0),
            checked,
            worst,
            0.0,
            1.0,
            Check::UpperBound,
            seed,
        ));
    }
    Ok(StepScaling {
        reports,
        slope,
        failures,
    })
}
