use thiserror::Error;

/// Errors raised by the covariance-matrix, channel, threshold and oracle
/// routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix must be square with even dimension >= 2, got {rows}x{cols}")]
    BadDimension { rows: usize, cols: usize },

    #[error("matrix is not symmetric: |M[{row}][{col}] - M[{col}][{row}]| = {deviation:e}")]
    NonSymmetric {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("symplectic eigenvalue magnitudes {first} and {second} do not pair up")]
    PairingFailure { first: f64, second: f64 },

    #[error("mode index {index} out of range for a {n_modes}-mode state")]
    BadModeIndex { index: usize, n_modes: usize },

    #[error("closed-form symplectic eigenvalue is negative ({value:e}); inputs are not a physical state")]
    NegativeEigenvalue { value: f64 },

    #[error("expected a {expected}-mode state, got {actual} modes")]
    WrongModeCount { expected: usize, actual: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("negative thermal occupation {0}")]
    NegativeOccupation(f64),

    #[error("covariance matrix violates the uncertainty relation")]
    Unphysical,

    #[error("amplifier gain {0} is below unity")]
    GainBelowUnity(f64),

    #[error("population parameter eta = {0} must be finite and non-negative")]
    NegativeEta(f64),

    #[error("squeeze magnitude {0} must be finite and non-negative")]
    NegativeSqueeze(f64),

    #[error("squeeze magnitudes must be strictly positive, got r = {r}, r' = {r_prime}")]
    NonPositiveSqueeze { r: f64, r_prime: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid mode selection: {0}")]
    BadSelection(String),

    #[error("no sign change of nu_minus - 1/2 found below gain {limit:e}")]
    BracketFailure { limit: f64 },

    #[error("invalid bath: {0}")]
    InvalidBath(String),

    #[error("integration step too large: halving dt changed results by {change:e}")]
    StepTooLarge { change: f64 },

    #[error("Fock truncation leakage {leakage:e} exceeds {limit:e}")]
    TruncationLeakage { leakage: f64, limit: f64 },

    #[error("density matrix lost hermiticity (deviation {deviation:e})")]
    NonHermitianDrift { deviation: f64 },

    #[error("density matrix trace drifted from 1 by {deviation:e}")]
    TraceDrift { deviation: f64 },

    #[error("time step {dt} exceeds the RK4 stability limit {limit:e}")]
    UnstableStep { dt: f64, limit: f64 },

    #[error("invalid Fock configuration: {0}")]
    InvalidFockConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
