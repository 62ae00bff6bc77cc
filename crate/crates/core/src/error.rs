use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("field `{field}` is not finite (got {value})")]
    NonFinite { field: &'static str, value: f64 },

    #[error("trim airspeed u0 must be positive, got {0}")]
    NonPositiveAirspeed(f64),

    #[error("gravitational acceleration g must be nonnegative, got {0}")]
    NegativeGravity(f64),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: String, actual: String },

    #[error("weight matrix R is not positive definite")]
    NonPositiveDefiniteR,

    #[error("weight matrix Q is not symmetric positive semidefinite")]
    InvalidQ,

    #[error("no stabilizing Riccati solution: closed-loop eigenvalue {0} has nonnegative real part")]
    NotStabilizing(String),

    #[error("Riccati sign iteration did not converge (Hamiltonian may have imaginary-axis eigenvalues)")]
    SignIterationDiverged,

    #[error("stable invariant subspace is rank-deficient (U1 not invertible)")]
    SingularSubspace,

    #[error("eigenvalue iteration did not converge")]
    EigenIterationDiverged,

    #[error("simulation diverged: non-finite state at t = {t} (step {step})")]
    Divergence { t: f64, step: usize },

    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),

    #[error("invalid microburst profile: {0}")]
    InvalidProfile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
