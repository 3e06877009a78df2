//! Qubit states, Hermitian operators, ensembles, and POVMs, together with
//! the Born rule and the Bayes posterior every discrimination strategy is
//! built from.
//!
//! All types are immutable values and all operations are pure functions, so
//! everything here is safe to share across threads.

mod mat2;

pub use mat2::Mat2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

/// A normalized pure qubit state `amp0 |0> + amp1 |1>`.
///
/// Global phase is physically meaningless, so equality testing goes through
/// [`PureQubit::approx_eq`], which compares `|<a|b>|` to 1.
#[derive(Debug, Clone, Copy)]
pub struct PureQubit {
    amp0: Complex64,
    amp1: Complex64,
}

impl PureQubit {
    /// Normalizing constructor. Fails only for the zero vector.
    pub fn new(amp0: Complex64, amp1: Complex64) -> Result<Self> {
        let norm = (amp0.norm_sqr() + amp1.norm_sqr()).sqrt();
        if norm < 1e-15 {
            return Err(Error::ZeroStateVector);
        }
        Ok(Self {
            amp0: amp0 / norm,
            amp1: amp1 / norm,
        })
    }

    pub fn basis_zero() -> Self {
        Self {
            amp0: Complex64::ONE,
            amp1: Complex64::ZERO,
        }
    }

    pub fn basis_one() -> Self {
        Self {
            amp0: Complex64::ZERO,
            amp1: Complex64::ONE,
        }
    }

    /// State at the given Bloch-sphere point: polar angle from +z, then
    /// azimuth around the equator.
    pub fn from_bloch_angles(polar: f64, azimuth: f64) -> Self {
        let amp0 = Complex64::new((0.5 * polar).cos(), 0.0);
        let amp1 = Complex64::from_polar((0.5 * polar).sin(), azimuth);
        Self { amp0, amp1 }
    }

    pub fn amp0(&self) -> Complex64 {
        self.amp0
    }

    pub fn amp1(&self) -> Complex64 {
        self.amp1
    }

    pub fn amps(&self) -> [Complex64; 2] {
        [self.amp0, self.amp1]
    }

    /// Inner product `<self|other>`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amp0.conj() * other.amp0 + self.amp1.conj() * other.amp1
    }

    /// `|<self|other>|`, 1 for physically identical states.
    pub fn overlap(&self, other: &Self) -> f64 {
        self.inner(other).norm()
    }

    /// Phase-insensitive equality.
    pub fn approx_eq(&self, other: &Self, tolerance: f64) -> bool {
        (self.overlap(other) - 1.0).abs() <= tolerance
    }

    /// The rank-1 projector `|self><self|`.
    pub fn projector(&self) -> QubitOperator {
        QubitOperator::from_mat2(Mat2::projector(self.amps()))
    }
}

/// A 2x2 complex operator; density operators and POVM elements both live
/// here. Hermiticity and positivity are checked on demand rather than
/// enforced by construction, so invalid operators can be built and reported.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitOperator {
    entries: Mat2,
}

impl QubitOperator {
    pub fn from_mat2(entries: Mat2) -> Self {
        Self { entries }
    }

    pub fn zero() -> Self {
        Self::from_mat2(Mat2::zero())
    }

    pub fn identity() -> Self {
        Self::from_mat2(Mat2::identity())
    }

    pub fn entries(&self) -> &Mat2 {
        &self.entries
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_mat2(self.entries.scale(s))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_mat2(self.entries + other.entries)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_mat2(self.entries - other.entries)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_mat2(self.entries * other.entries)
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    /// Max `|M - M^dag|` entry.
    pub fn hermiticity_deviation(&self) -> f64 {
        self.entries.hermiticity_deviation()
    }

    /// Smaller eigenvalue, assuming Hermitian input.
    pub fn min_eigenvalue(&self) -> f64 {
        self.entries.eigenvalues_hermitian()[0]
    }

    pub fn eigenvalues(&self) -> [f64; 2] {
        self.entries.eigenvalues_hermitian()
    }

    fn require_hermitian(&self) -> Result<()> {
        let deviation = self.hermiticity_deviation();
        if deviation > tol::HERMITICITY {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(())
    }

    fn require_psd(&self) -> Result<()> {
        self.require_hermitian()?;
        let min_eigenvalue = self.min_eigenvalue();
        if min_eigenvalue < -tol::PSD_FLOOR {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(())
    }

    fn require_density(&self) -> Result<()> {
        self.require_psd()?;
        let trace = self.trace().re;
        if (trace - 1.0).abs() > tol::PSD_FLOOR {
            return Err(Error::NotDensity { trace });
        }
        Ok(())
    }

    /// Projector onto the support (eigenspaces with eigenvalue above the
    /// support cutoff).
    pub fn support_projector(&self) -> Self {
        Self::from_mat2(self.entries.hermitian_map(|lam| {
            if lam > tol::SUPPORT_CUTOFF {
                1.0
            } else {
                0.0
            }
        }))
    }

    /// Moore-Penrose pseudo-inverse restricted to the support.
    pub fn support_inverse(&self) -> Result<Self> {
        self.require_hermitian()?;
        Ok(Self::from_mat2(self.entries.hermitian_map(|lam| {
            if lam > tol::SUPPORT_CUTOFF {
                1.0 / lam
            } else {
                0.0
            }
        })))
    }

    /// Inverse square root restricted to the support.
    pub fn support_inverse_sqrt(&self) -> Result<Self> {
        self.require_hermitian()?;
        Ok(Self::from_mat2(self.entries.hermitian_map(|lam| {
            if lam > tol::SUPPORT_CUTOFF {
                1.0 / lam.sqrt()
            } else {
                0.0
            }
        })))
    }
}

/// A prior-weighted list of pure states to be discriminated.
#[derive(Debug, Clone)]
pub struct Ensemble {
    states: Vec<PureQubit>,
    priors: Vec<f64>,
}

impl Ensemble {
    pub fn new(states: Vec<PureQubit>, priors: Vec<f64>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::InvalidEnsemble("ensemble must be non-empty".into()));
        }
        if states.len() != priors.len() {
            return Err(Error::InvalidEnsemble(format!(
                "{} states but {} priors",
                states.len(),
                priors.len()
            )));
        }
        if let Some(p) = priors.iter().find(|p| **p < 0.0) {
            return Err(Error::InvalidEnsemble(format!("negative prior {p}")));
        }
        let total: f64 = priors.iter().sum();
        if (total - 1.0).abs() > tol::NORMALIZATION {
            return Err(Error::InvalidEnsemble(format!(
                "priors sum to {total}, not 1"
            )));
        }
        Ok(Self { states, priors })
    }

    /// Equal priors over the given states.
    pub fn equiprobable(states: Vec<PureQubit>) -> Result<Self> {
        let n = states.len();
        if n == 0 {
            return Err(Error::InvalidEnsemble("ensemble must be non-empty".into()));
        }
        let priors = vec![1.0 / n as f64; n];
        Self::new(states, priors)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, i: usize) -> &PureQubit {
        &self.states[i]
    }

    pub fn prior(&self, i: usize) -> f64 {
        self.priors[i]
    }

    pub fn states(&self) -> &[PureQubit] {
        &self.states
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }
}

/// Outcome identifier carried by each POVM element. Labels are explicit
/// data, never positional convention, so the inconclusive outcome cannot be
/// confused with a conclusive one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutcomeLabel {
    /// Outcome that identifies the state with the given ensemble index.
    Conclusive(usize),
    /// Outcome that identifies nothing.
    Inconclusive,
}

impl std::fmt::Display for OutcomeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OutcomeLabel::Conclusive(i) => write!(f, "w{i}"),
            OutcomeLabel::Inconclusive => write!(f, "w?"),
        }
    }
}

/// Validity report for a candidate POVM: the most negative eigenvalue seen
/// across elements and the largest entrywise deviation of the element sum
/// from the identity.
#[derive(Debug, Clone, Copy)]
pub struct PovmValidity {
    pub min_eigenvalue: f64,
    pub completeness_deviation: f64,
}

impl PovmValidity {
    pub fn passes(&self) -> bool {
        self.min_eigenvalue >= -tol::PSD_FLOOR && self.completeness_deviation <= tol::COMPLETENESS
    }
}

/// An ordered list of labeled measurement elements. `new` enforces
/// positivity and completeness; `new_unchecked` skips the check so that
/// deliberately broken measurements can be fed to [`povm_validate`].
#[derive(Debug, Clone)]
pub struct Povm {
    elements: Vec<(OutcomeLabel, QubitOperator)>,
}

impl Povm {
    pub fn new(elements: Vec<(OutcomeLabel, QubitOperator)>) -> Result<Self> {
        let povm = Self::new_unchecked(elements);
        let report = povm.validate();
        if !report.passes() {
            return Err(Error::InvalidPovm {
                min_eigenvalue: report.min_eigenvalue,
                completeness_deviation: report.completeness_deviation,
            });
        }
        Ok(povm)
    }

    pub fn new_unchecked(elements: Vec<(OutcomeLabel, QubitOperator)>) -> Self {
        Self { elements }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, i: usize) -> &QubitOperator {
        &self.elements[i].1
    }

    pub fn label(&self, i: usize) -> OutcomeLabel {
        self.elements[i].0
    }

    pub fn labels(&self) -> Vec<OutcomeLabel> {
        self.elements.iter().map(|(l, _)| *l).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(OutcomeLabel, QubitOperator)> {
        self.elements.iter()
    }

    /// Position of the inconclusive element, if present.
    pub fn inconclusive_index(&self) -> Option<usize> {
        self.elements
            .iter()
            .position(|(l, _)| *l == OutcomeLabel::Inconclusive)
    }

    pub fn validate(&self) -> PovmValidity {
        povm_validate(self)
    }
}

/// Positivity and completeness report for a POVM. This never fails; broken
/// measurements simply produce a report that does not pass.
pub fn povm_validate(povm: &Povm) -> PovmValidity {
    let mut min_eigenvalue = f64::INFINITY;
    let mut sum = Mat2::zero();
    for (_, op) in povm.iter() {
        min_eigenvalue = min_eigenvalue.min(op.min_eigenvalue());
        sum = sum + *op.entries();
    }
    if povm.is_empty() {
        min_eigenvalue = 0.0;
    }
    PovmValidity {
        min_eigenvalue,
        completeness_deviation: sum.max_abs_diff(&Mat2::identity()),
    }
}

/// Born rule `Tr(rho Pi)`, clamped to [0, 1] only when within tolerance of
/// the boundary. Inputs are checked: `state` must be a density operator and
/// `element` positive semidefinite.
pub fn born_probability(state: &QubitOperator, element: &QubitOperator) -> Result<f64> {
    state.require_density()?;
    element.require_psd()?;
    let value = state.mul(element).trace().re;
    clamp_probability(value)
}

fn clamp_probability(value: f64) -> Result<f64> {
    if !(-tol::PROBABILITY_SLACK..=1.0 + tol::PROBABILITY_SLACK).contains(&value) {
        return Err(Error::ProbabilityOutOfRange { value });
    }
    Ok(value.clamp(0.0, 1.0))
}

/// Prior-weighted density operator `sum_i p_i |psi_i><psi_i|`.
pub fn density_from_ensemble(ensemble: &Ensemble) -> QubitOperator {
    let mut sum = Mat2::zero();
    for (state, prior) in ensemble.states().iter().zip(ensemble.priors()) {
        sum = sum + Mat2::projector(state.amps()).scale(*prior);
    }
    QubitOperator::from_mat2(sum)
}

/// Moore-Penrose pseudo-inverse on the support; eigenvalues below the
/// support cutoff are treated as exactly zero.
pub fn support_inverse(op: &QubitOperator) -> Result<QubitOperator> {
    op.support_inverse()
}

/// Bayes posterior `p_j Tr(rho_j Pi_j) / Tr(rho Pi_j)`: the confidence that
/// state `j` was present given that the element at `outcome_index` fired.
///
/// The index addresses the POVM positionally; the element's label names the
/// hypothesized state. An outcome that never occurs has no posterior and is
/// reported as an error rather than 0 or NaN.
pub fn posterior_confidence(ensemble: &Ensemble, povm: &Povm, outcome_index: usize) -> Result<f64> {
    if outcome_index >= povm.len() {
        return Err(Error::IndexOutOfBounds {
            index: outcome_index,
            len: povm.len(),
        });
    }
    let hypothesized = match povm.label(outcome_index) {
        OutcomeLabel::Conclusive(j) => j,
        OutcomeLabel::Inconclusive => {
            return Err(Error::InconclusiveOutcome {
                index: outcome_index,
            })
        }
    };
    if hypothesized >= ensemble.len() {
        return Err(Error::IndexOutOfBounds {
            index: hypothesized,
            len: ensemble.len(),
        });
    }
    let element = povm.element(outcome_index);
    let rho = density_from_ensemble(ensemble);
    let outcome_probability = born_probability(&rho, element)?;
    if outcome_probability <= tol::OUTCOME_PROBABILITY_MIN {
        return Err(Error::OutcomeNeverOccurs {
            index: outcome_index,
            probability: outcome_probability,
        });
    }
    let joint = ensemble.prior(hypothesized)
        * born_probability(&ensemble.state(hypothesized).projector(), element)?;
    clamp_probability(joint / outcome_probability)
}
