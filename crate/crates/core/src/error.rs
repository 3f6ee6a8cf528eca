use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },

    #[error("series not resolved within order {max_order}")]
    NotResolved { max_order: usize },

    #[error("point {t} lies outside [{a}, {b}]")]
    OutOfDomain { t: f64, a: f64, b: f64 },

    #[error("coefficient q is not strictly positive (q({t}) = {value})")]
    NonPositiveQ { t: f64, value: f64 },

    #[error("derivative vanishes near t = {t}")]
    VanishingDerivative { t: f64 },

    #[error("collocation matrix is numerically singular (pivot ratio {pivot_ratio:e})")]
    SingularLinearSystem { pivot_ratio: f64 },

    #[error("iteration did not converge; residual history {history:?}")]
    NoConvergence { history: Vec<f64> },

    #[error("input has not decayed at the window edge (|f| = {edge_value:e})")]
    WindowTooSmall { edge_value: f64 },

    #[error("exponential series impractical for L1 norm {l1}")]
    Divergence { l1: f64 },

    #[error("J_{n}({t}) underflows double precision")]
    Underflow { n: u64, t: f64 },

    #[error("argument {y} outside the domain of the requested Lambert W branch")]
    OutOfBranchDomain { y: f64 },

    #[error("connection system is ill conditioned (condition number {cond:e})")]
    IllConditioned { cond: f64 },

    #[error("solution left the admissible range at t = {t}")]
    BlowUp { t: f64 },

    #[error("integrator failed at t = {t}: {reason}")]
    IntegratorFailure { t: f64, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
