//! Numerical tolerances used across the crate.
//!
//! Exact double-precision constructions leave residuals around 1e-15, so
//! these thresholds give several orders of headroom without masking real
//! errors. Keeping them in one place stops ad-hoc magic numbers from
//! drifting between the library, the verifier, and the tests.

/// State amplitudes and prior probabilities must normalize to this accuracy.
pub const NORMALIZATION: f64 = 1e-12;

/// Eigenvalues above `-PSD_FLOOR` count as nonnegative.
pub const PSD_FLOOR: f64 = 1e-10;

/// Maximum entrywise deviation of a POVM element sum from the identity.
pub const COMPLETENESS: f64 = 1e-10;

/// Maximum `|M - M^dag|` entry for an operator accepted as Hermitian.
pub const HERMITICITY: f64 = 1e-10;

/// Eigenvalues below this are treated as exactly zero when inverting on
/// the support of an operator.
pub const SUPPORT_CUTOFF: f64 = 1e-10;

/// Probabilities may stray this far outside [0, 1] before being clamped;
/// anything worse is an error.
pub const PROBABILITY_SLACK: f64 = 1e-10;

/// Outcomes with probability below this never occur; posteriors conditioned
/// on them are undefined.
pub const OUTCOME_PROBABILITY_MIN: f64 = 1e-15;

/// Ideal waveplate and beamsplitter transfers must be unitary to this
/// accuracy, entrywise.
pub const ELEMENT_UNITARITY: f64 = 1e-12;

/// Composed ideal networks must preserve the four-mode norm to this accuracy.
pub const NETWORK_UNITARITY: f64 = 1e-10;

/// The angle solver must reproduce the target probability matrix with a
/// maximum absolute residual below this before it reports success.
pub const SOLVER_RESIDUAL: f64 = 1e-8;

/// A solved network is accepted as a faithful realization of the POVM when
/// every detector probability matches the target within this bound.
pub const DILATION_FIDELITY: f64 = 1e-6;

/// Solved waveplate angles are compared to the reference settings table
/// within this many degrees, after equivalence-class reduction.
pub const REFERENCE_ANGLE_DEG: f64 = 0.2;

/// Accuracy demanded of the 2/3 confidence value and the minimum-error
/// closed form.
pub const CONFIDENCE: f64 = 1e-9;

/// Accuracy of the inconclusive-probability law cos(2 theta).
pub const INCONCLUSIVE_LAW: f64 = 1e-12;

/// Outcome probabilities for the symmetric ensemble may depend only on
/// (outcome - input) mod 3 up to this bound.
pub const CYCLIC_SYMMETRY: f64 = 1e-12;

/// Detectors PD0 and PD2 must agree to this bound for the middle input
/// state at correctly solved settings.
pub const DETECTOR_BALANCE: f64 = 1e-9;

/// No sampled rank-1 element may beat the optimal confidence by more than
/// this much in the Bloch-sphere spot check.
pub const OPTIMALITY_SLACK: f64 = 1e-6;
