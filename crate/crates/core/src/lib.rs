//! Construction and simulation of optimal quantum state-discrimination
//! measurements for qubit ensembles.
//!
//! The crate has three layers:
//!
//! - [`qstate`]: 2x2 complex linear algebra and the measurement-theoretic
//!   primitives (Born rule, POVM validity, Bayes posterior).
//! - [`strategies`]: the maximum-confidence measurement for three symmetric
//!   qubit states, the minimum-error square-root measurement used for
//!   comparison, and the figures of merit behind both.
//! - [`optics`]: a Jones-calculus model of the polarization interferometer
//!   that realizes the four-outcome measurement, including a numerical
//!   solver for the waveplate angles and a non-ideal beamsplitter model.
//!
//! [`verify`] bundles the full invariant battery used by the CLI `verify`
//! subcommand and the acceptance test suite.

pub mod error;
pub mod optics;
pub mod qstate;
pub mod strategies;
pub mod tol;
pub mod verify;

pub use error::{Error, Result};
