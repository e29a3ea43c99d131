use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is numerically rank deficient (column {column})")]
    RankDeficient { column: usize },

    #[error("{0} did not converge")]
    NonConvergence(&'static str),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("ill-posed triple: restricted operator is singular")]
    IllPosed,

    #[error("degenerate path: endpoints are identical or antipodal (arc length {arc})")]
    DegeneratePath { arc: f64 },

    #[error("path is ill-posed at t = {t}: condition number is infinite")]
    PathIllPosed { t: f64 },

    #[error("step budget of {max_steps} exhausted at t = {t} of {arc}")]
    BudgetExceeded { max_steps: u64, t: f64, arc: f64 },

    #[error("refined pair failed certification (residual {residual:.3e})")]
    CertificationFailed { residual: f64 },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("parse error: {0}")]
    Parse(String),
}
