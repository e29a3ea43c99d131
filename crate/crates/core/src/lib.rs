//! Certified eigenpair computation for dense complex matrices by homotopy
//! continuation.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: dense complex kernels (Householder QR, Jacobi SVD,
//!   pseudoinverse norms, a reference Schur eigensolver) and Gaussian / Haar
//!   sampling.
//! * [`geometry`]: the restricted operator `A_{λ,v}`, condition numbers
//!   `μ`/`μ_F`, projective distances and the projective Newton operator.
//! * [`homotopy`]: great-circle paths on the unit Frobenius sphere and the
//!   certified path tracker with explicit step-size constants.
//! * [`solvers`]: the deterministic all-pairs solver started from a
//!   hexagonal-lattice diagonal matrix, and the randomized one-pair solver
//!   started from a rejection-sampled block-triangular matrix.
//! * [`experiments`]: Monte Carlo checks of the probabilistic identities and
//!   bounds the method rests on.

pub mod error;
pub mod experiments;
pub mod geometry;
pub mod homotopy;
pub mod linalg;
pub mod rng;
pub mod solvers;

pub use error::{Error, Result};
pub use geometry::{ConditionReport, EigenTriple};
pub use homotopy::{GreatCirclePath, StepConstants, TrackConfig, TrackerState};
pub use linalg::{c64, ComplexMatrix, SvdResult};
pub use rng::RngHandle;
pub use solvers::{OmegaSample, SolveOutput, SolvedPair, StartSystem};
