//! Monte Carlo checks of the identities and bounds behind the solvers.
//!
//! Every experiment draws trial `i` from its own stream `seed.derive(i)` and
//! reduces in trial order, so results depend on the seed only, not on the
//! thread count.

pub mod bounds;
pub mod identities;
pub mod report;
pub mod stats;
pub mod steps;

use rayon::prelude::*;

pub use bounds::{exp_mu_average, exp_mu_sphere, exp_sn_cn_bounds, mean_mu_f_squared};
pub use identities::{
    exp_coarea_identity, exp_det_moment, exp_geodesic_constant, exp_inv_det_moment,
    exp_pinv_moment, sphere_distance, CoareaTest, CoareaWeight,
};
pub use report::{reports_to_csv, reports_to_json, Check, ExperimentReport, Verdict};
pub use steps::{
    branch_mu_squared_integral, exp_step_scaling, step_bound_data, Algorithm, StepScaling,
};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::rng::{RngHandle, SampleRng};

pub(crate) fn per_sample<F>(seed: RngHandle, samples: u64, f: F) -> Vec<f64>
where
    F: Fn(&mut SampleRng) -> f64 + Sync,
{
    (0..samples)
        .into_par_iter()
        .map(|i| f(&mut seed.derive(i).generator()))
        .collect()
}

pub(crate) fn per_sample_fallible<F>(seed: RngHandle, samples: u64, f: F) -> Result<Vec<f64>>
where
    F: Fn(&mut SampleRng) -> Result<f64> + Sync,
{
    per_sample_rows(seed, samples, |rng| f(rng).map(|x| [x]))
        .map(|v| v.into_iter().map(|[x]| x).collect())
}

pub(crate) fn per_sample_rows<const K: usize, F>(
    seed: RngHandle,
    samples: u64,
    f: F,
) -> Result<Vec<[f64; K]>>
where
    F: Fn(&mut SampleRng) -> Result<[f64; K]> + Sync,
{
    (0..samples)
        .into_par_iter()
        .map(|i| f(&mut seed.derive(i).generator()))
        .collect()
}

/// Names accepted by [`run_suite`], in run order.
pub const DEFAULT_EXPERIMENTS: &[&str] = &[
    "det_moment",
    "inv_det_moment",
    "pinv_moment",
    "coarea",
    "geodesic",
    "mu_average",
    "mu_sphere",
    "sampler",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Samples for scalar-moment experiments.
    pub scalar_samples: u64,
    /// Samples for experiments that run the reference eigensolver per sample.
    pub eig_samples: u64,
}

impl SuiteConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            scalar_samples: 100_000,
            eig_samples: 10_000,
        }
    }
}

/// Runs the named experiments (all of [`DEFAULT_EXPERIMENTS`] when `only` is
/// `None`).
pub fn run_suite(config: &SuiteConfig, only: Option<&[String]>) -> Result<Vec<ExperimentReport>> {
    if let Some(names) = only {
        if let Some(bad) = names
            .iter()
            .find(|n| !DEFAULT_EXPERIMENTS.contains(&n.as_str()))
        {
            return Err(Error::Domain(format!(
                "unknown experiment '{bad}', expected one of {}",
                DEFAULT_EXPERIMENTS.join(", ")
            )));
        }
    }
    let root = RngHandle::new(config.seed);
    let mut out = Vec::new();
    for (id, name) in DEFAULT_EXPERIMENTS.iter().enumerate() {
        if only.is_some_and(|names| !names.iter().any(|n| n == name)) {
            continue;
        }
        let base = root.derive(id as u64);
        out.extend(run_experiment(name, base, config)?);
    }
    Ok(out)
}

fn run_experiment(name: &str, base: RngHandle, c: &SuiteConfig) -> Result<Vec<ExperimentReport>> {
    let s = |k: u64| base.derive(k);
    let (ns, ne) = (c.scalar_samples, c.eig_samples);
    Ok(match name {
        "det_moment" => vec![
            exp_det_moment(2, 1.0, ns, s(0))?,
            exp_det_moment(3, 1.0, ns, s(1))?,
            exp_det_moment(1, 2.0, ns, s(2))?,
        ],
        "inv_det_moment" => vec![
            exp_inv_det_moment(2, ns, s(0))?,
            exp_inv_det_moment(3, ns, s(1))?,
        ],
        "pinv_moment" => vec![
            exp_pinv_moment(2, ns, s(0))?,
            exp_pinv_moment(3, ns, s(1))?,
            exp_pinv_moment(5, ns, s(2))?,
        ],
        "coarea" => {
            let mut v = Vec::new();
            for (k, n) in [2usize, 3].into_iter().enumerate() {
                for (j, phi) in [CoareaTest::One, CoareaTest::GaussianWeight]
                    .into_iter()
                    .enumerate()
                {
                    let seed = s((2 * k + j) as u64);
                    v.push(exp_coarea_identity(
                        n,
                        phi.name(),
                        |a, l, x| phi.eval(a, l, x),
                        ns,
                        seed,
                    )?);
                }
            }
            v
        }
        "geodesic" => vec![
            exp_geodesic_constant(2, ns, s(0))?,
            exp_geodesic_constant(4, ns, s(1))?,
        ],
        "mu_average" => {
            let mut v = Vec::new();
            let mut k = 0;
            for n in 2..=6 {
                for sigma in [1.0, 2.0] {
                    for center in [ComplexMatrix::zeros(n, n), ComplexMatrix::identity(n)] {
                        v.push(exp_mu_average(n, sigma, &center, ne, s(k))?);
                        k += 1;
                    }
                }
            }
            v
        }
        "mu_sphere" => (2..=6)
            .map(|n| exp_mu_sphere(n, ne, s(n as u64)))
            .collect::<Result<_>>()?,
        "sampler" => {
            let mut v = Vec::new();
            for n in 2..=6 {
                v.extend(exp_sn_cn_bounds(n, ns, s(n as u64))?);
            }
            v
        }
        other => return Err(Error::Domain(format!("unknown experiment '{other}'"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn per_sample_is_thread_independent() {
        let seed = RngHandle::new(5);
        let f = |rng: &mut SampleRng| crate::linalg::sample::standard_complex_normal(rng).re;
        let a = per_sample(seed, 1000, f);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(3)
            .build()
            .unwrap();
        let b = pool.install(|| per_sample(seed, 1000, f));
        assert_eq!(a, b);
    }

    #[test]
    fn suite_filter() {
        let cfg = SuiteConfig {
            seed: 1,
            scalar_samples: 2000,
            eig_samples: 100,
        };
        let r = run_suite(&cfg, Some(&["det_moment".to_string()])).unwrap();
        assert_eq!(r.len(), 3);
        assert!(r.iter().all(|x| x.name == "det_moment"));
        assert!(run_suite(&cfg, Some(&["nope".to_string()])).is_err());
    }
}
