use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("pole of {func} at z = {arg}")]
    Pole { func: &'static str, arg: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("argument outside the supported domain: {0}")]
    Domain(String),

    #[error("series did not converge within {terms} terms (|z| too large for the series regime)")]
    SlowConvergence { terms: usize },

    #[error("truncation tail estimate {estimate:e} exceeds tolerance {tol:e}")]
    TruncationFailure { estimate: f64, tol: f64 },

    #[error("limit sequence not converged: successive doublings differ by {diff:e} (> {allowed:e})")]
    NonConvergence { diff: f64, allowed: f64 },

    #[error("Mellin-Barnes sector violated: Re z must be positive, got {0}")]
    Sector(String),

    #[error("Mellin-Barnes tail bound {estimate:e} at the contour end exceeds tolerance {tol:e}")]
    TailTooLarge { estimate: f64, tol: f64 },

    #[error("no evaluation regime covers |z| = {abs:e} with Re(-z) <= 0")]
    UnsupportedRegion { abs: f64 },

    #[error("degenerate double root a* = b* = {0}; the confluent solution is not implemented")]
    DegenerateRoots(String),

    #[error("spectral coefficients are of kind {found}, expected {expected}")]
    KindMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("subordinator did not cross level 1 within {0} steps; decrease dt or check alpha")]
    StepBudget(usize),

    #[error("reflected Euler-Maruyama step left the state space and could not be projected back")]
    DomainExit,

    #[error("numerical failure: {0}")]
    Numerical(String),
}
