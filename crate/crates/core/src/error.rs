//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("state vector has zero norm and cannot be normalized")]
    ZeroStateVector,

    #[error("operator is not Hermitian: max |M - M^dag| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    #[error("operator is not positive semidefinite: min eigenvalue = {min_eigenvalue:.3e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("operator is not a density operator: trace = {trace:.12}")]
    NotDensity { trace: f64 },

    #[error("probability {value:.6e} lies outside [0, 1] beyond tolerance")]
    ProbabilityOutOfRange { value: f64 },

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("invalid POVM: min eigenvalue {min_eigenvalue:.3e}, completeness deviation {completeness_deviation:.3e}")]
    InvalidPovm {
        min_eigenvalue: f64,
        completeness_deviation: f64,
    },

    #[error(
        "outcome {index} never occurs (probability {probability:.3e}); its posterior is undefined"
    )]
    OutcomeNeverOccurs { index: usize, probability: f64 },

    #[error(
        "outcome index {index} addresses the inconclusive element; no state is hypothesized for it"
    )]
    InconclusiveOutcome { index: usize },

    #[error("index {index} is out of bounds (length {len})")]
    IndexOutOfBounds { index: usize, len: usize },

    #[error("theta = {theta_deg} deg is outside the valid range [0, 45] deg")]
    ThetaOutOfRange { theta_deg: f64 },

    #[error("state {index} lies outside the support of the ensemble density operator")]
    StateOutsideSupport { index: usize },

    #[error("minimum-error construction requires an equiprobable symmetric ensemble: {0}")]
    NotSymmetricEnsemble(String),

    #[error("beamsplitter leak intensity {leak} is outside [0, 0.05]")]
    LeakOutOfRange { leak: f64 },

    #[error("detector voltages must be nonnegative, got {value:.3e}")]
    NegativeVoltage { value: f64 },

    #[error("optical element cannot be embedded in a single arm: {0}")]
    UnsupportedElement(String),

    #[error("angle solver failed at theta = {theta_deg} deg: best residual {residual:.3e} after the retry schedule")]
    SolverFailed { theta_deg: f64, residual: f64 },
}
