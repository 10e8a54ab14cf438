//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("site {site} out of range 1..={n_spins}")]
    SiteOutOfRange { site: usize, n_spins: usize },

    #[error("operation requires a cavity: fock_cutoff must be >= 1")]
    CavityRequired,

    #[error(
        "fock cutoff {n_max} too small for n_bar = {n_bar}: Poisson tail {tail:.3e} > {bound:.3e}, need n_max >= {required}"
    )]
    TruncationTooSmall {
        n_max: usize,
        n_bar: f64,
        tail: f64,
        bound: f64,
        required: usize,
    },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("momentum grids require even N >= 2, got N = {n}")]
    OddSpinCount { n: usize },

    #[error("singular detuning: omega0 - h - omega_a = 0")]
    SingularDetuning,

    #[error("matrix flagged Hermitian deviates from its adjoint by {dev:.3e} (limit {limit:.3e})")]
    NotHermitian { dev: f64, limit: f64 },

    #[error("state vector norm deviates from 1 by {dev:.3e}")]
    NotNormalized { dev: f64 },

    #[error("regime `{regime}` precondition violated: {condition}")]
    RegimePrecondition {
        regime: &'static str,
        condition: String,
    },

    #[error("finite-difference step too small: overlap deficit {deficit:.3e} < {floor:.0e}")]
    StepTooSmall { deficit: f64, floor: f64 },

    #[error("finite-difference step too large: overlap deficit {deficit:.3e} > {ceiling:.0e}")]
    StepTooLarge { deficit: f64, ceiling: f64 },

    #[error("{what} = {size} exceeds the dense-solver budget of {limit}")]
    BudgetExceeded {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("scaling fit rejected: {0}")]
    FitDomain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("LAPACK {routine} failed with info = {info}")]
    Lapack { routine: &'static str, info: i32 },
}
