//! Dense complex linear algebra and random matrix sampling.

pub mod eig;
pub mod io;
pub mod lu;
pub mod matrix;
pub mod qr;
pub mod sample;
pub mod svd;

pub use eig::{reference_eigendecomposition, EigenPair};
pub use matrix::{c64, vec_inner, vec_norm, vec_normalized, ComplexMatrix};
pub use qr::{householder_qr_reduced, QrFactors};
pub use sample::{haar_unitary, sample_gaussian_matrix, standard_gaussian_matrix};
pub use svd::{pinv_norms, svd, PinvNorms, SvdResult};
