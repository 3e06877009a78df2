//! Discrimination strategies for the family of three symmetric qubit states
//! `cos(theta)|0> + e^{i phi_k} sin(theta)|1>` with `phi_k` in {0, +-2pi/3}:
//! the maximum-confidence measurement, the minimum-error square-root
//! measurement used as a comparison, and the derived figures of merit.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qstate::{
    born_probability, density_from_ensemble, posterior_confidence, Ensemble, OutcomeLabel, Povm,
    PureQubit, QubitOperator,
};
use crate::tol;

/// Azimuthal phases of the three symmetric states, in radians.
pub const SYMMETRIC_PHASES: [f64; 3] = [0.0, 2.0 * PI / 3.0, -2.0 * PI / 3.0];

/// Half-opening angle of the symmetric family, restricted to [0, 45] degrees.
/// Above 45 degrees the inconclusive element of the maximum-confidence
/// measurement would turn negative, so the constructor rejects loudly
/// instead of clamping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrineParams {
    theta_deg: f64,
}

impl TrineParams {
    pub fn new(theta_deg: f64) -> Result<Self> {
        if !(0.0..=45.0).contains(&theta_deg) || !theta_deg.is_finite() {
            return Err(Error::ThetaOutOfRange { theta_deg });
        }
        Ok(Self { theta_deg })
    }

    pub fn theta_deg(&self) -> f64 {
        self.theta_deg
    }

    pub fn theta_rad(&self) -> f64 {
        self.theta_deg.to_radians()
    }
}

/// Which strategy a report describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    MaxConfidence,
    MinError,
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Strategy::MaxConfidence => write!(f, "max_confidence"),
            Strategy::MinError => write!(f, "min_error"),
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "max_confidence" => Ok(Strategy::MaxConfidence),
            "min_error" => Ok(Strategy::MinError),
            other => Err(format!(
                "unknown strategy '{other}' (expected max_confidence or min_error)"
            )),
        }
    }
}

/// The three symmetric input states with equal priors.
pub fn symmetric_states(params: &TrineParams) -> Ensemble {
    let theta = params.theta_rad();
    let states = SYMMETRIC_PHASES
        .iter()
        .map(|phi| {
            PureQubit::new(
                Complex64::new(theta.cos(), 0.0),
                Complex64::from_polar(theta.sin(), *phi),
            )
            .expect("cos and sin cannot both vanish")
        })
        .collect();
    Ensemble::equiprobable(states).expect("three equal priors sum to 1")
}

/// Unnormalized direction of the maximum-confidence element for one state:
/// `rho^-1 |psi_j><psi_j| rho^-1` with the inverse taken on the support.
/// Rank 1 and positive semidefinite; the caller chooses the scaling.
pub fn max_confidence_direction(ensemble: &Ensemble, state_index: usize) -> Result<QubitOperator> {
    if state_index >= ensemble.len() {
        return Err(Error::IndexOutOfBounds {
            index: state_index,
            len: ensemble.len(),
        });
    }
    let rho = density_from_ensemble(ensemble);
    let pinv = rho.support_inverse()?;
    let psi = ensemble.state(state_index);

    // A state with weight outside the support has no defined confidence.
    let outside = QubitOperator::identity()
        .sub(&rho.support_projector())
        .entries()
        .apply(psi.amps());
    if (outside[0].norm_sqr() + outside[1].norm_sqr()).sqrt() > 1e-8 {
        return Err(Error::StateOutsideSupport { index: state_index });
    }

    Ok(pinv.mul(&psi.projector()).mul(&pinv))
}

/// The four-outcome maximum-confidence measurement for the symmetric family:
/// conclusive elements `(3 cos^2 theta)^-1 |phi_i><phi_i|` with
/// `|phi_i> = sin(theta)|0> + e^{i phi_i} cos(theta)|1>`, completed by the
/// inconclusive element `(1 - tan^2 theta)|0><0|`. The proportionality
/// constants are the choice that minimizes the inconclusive probability.
pub fn trine_max_confidence_povm(params: &TrineParams) -> Result<Povm> {
    let theta = params.theta_rad();
    let (sin, cos) = theta.sin_cos();
    let weight = 1.0 / (3.0 * cos * cos);
    let mut elements: Vec<(OutcomeLabel, QubitOperator)> = SYMMETRIC_PHASES
        .iter()
        .enumerate()
        .map(|(i, phi)| {
            let ket = PureQubit::new(Complex64::new(sin, 0.0), Complex64::from_polar(cos, *phi))
                .expect("cos(theta) > 0 on the valid range");
            (OutcomeLabel::Conclusive(i), ket.projector().scale(weight))
        })
        .collect();
    let tan2 = (sin / cos) * (sin / cos);
    elements.push((
        OutcomeLabel::Inconclusive,
        PureQubit::basis_zero().projector().scale(1.0 - tan2),
    ));
    Povm::new(elements)
}

/// The square-root measurement `Pi_j = p_j rho^-1/2 |psi_j><psi_j| rho^-1/2`,
/// optimal for minimum error on equiprobable symmetric pure states. Refuses
/// other ensembles, where its optimality is not guaranteed.
///
/// When `rho` is rank deficient the raw elements only resolve the identity
/// on the support; the orthogonal complement is then spread equally over
/// the outcomes, which leaves every outcome probability unchanged because
/// no state has weight there.
pub fn min_error_srm(ensemble: &Ensemble) -> Result<Povm> {
    require_equiprobable_symmetric(ensemble)?;
    let n = ensemble.len();
    let rho = density_from_ensemble(ensemble);
    let inv_sqrt = rho.support_inverse_sqrt()?;
    let support = rho.support_projector();

    for (i, state) in ensemble.states().iter().enumerate() {
        let outside = QubitOperator::identity()
            .sub(&support)
            .entries()
            .apply(state.amps());
        if (outside[0].norm_sqr() + outside[1].norm_sqr()).sqrt() > 1e-8 {
            return Err(Error::StateOutsideSupport { index: i });
        }
    }

    let complement = QubitOperator::identity().sub(&support);
    let complement_share = complement.scale(1.0 / n as f64);
    let needs_completion = complement.trace().re > 0.5;

    let elements = ensemble
        .states()
        .iter()
        .enumerate()
        .map(|(j, psi)| {
            let mut op = inv_sqrt
                .mul(&psi.projector())
                .mul(&inv_sqrt)
                .scale(ensemble.prior(j));
            if needs_completion {
                op = op.add(&complement_share);
            }
            (OutcomeLabel::Conclusive(j), op)
        })
        .collect();
    Povm::new(elements)
}

fn require_equiprobable_symmetric(ensemble: &Ensemble) -> Result<()> {
    let n = ensemble.len();
    if n < 2 {
        return Err(Error::NotSymmetricEnsemble(
            "need at least two states".into(),
        ));
    }
    let p = 1.0 / n as f64;
    if ensemble.priors().iter().any(|q| (q - p).abs() > 1e-10) {
        return Err(Error::NotSymmetricEnsemble("priors are not equal".into()));
    }
    // Symmetry shows up as a circulant Gram matrix: <psi_i|psi_j> may depend
    // only on (j - i) mod n.
    let gram = |i: usize, j: usize| ensemble.state(i).inner(ensemble.state(j));
    for i in 0..n {
        for j in 0..n {
            let shifted = gram((i + 1) % n, (j + 1) % n);
            if (gram(i, j) - shifted).norm() > 1e-9 {
                return Err(Error::NotSymmetricEnsemble(
                    "overlap structure is not cyclic".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Outcome probabilities `P(omega_j | psi_i)`, rows indexed by input state
/// and columns by POVM element. Every row of a valid measurement sums to 1.
#[derive(Debug, Clone)]
pub struct OutcomeProbabilityMatrix {
    entries: Vec<Vec<f64>>,
    labels: Vec<OutcomeLabel>,
}

impl OutcomeProbabilityMatrix {
    pub fn entry(&self, input: usize, outcome: usize) -> f64 {
        self.entries[input][outcome]
    }

    pub fn row(&self, input: usize) -> &[f64] {
        &self.entries[input]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.entries
    }

    pub fn labels(&self) -> &[OutcomeLabel] {
        &self.labels
    }

    pub fn n_inputs(&self) -> usize {
        self.entries.len()
    }

    pub fn n_outcomes(&self) -> usize {
        self.labels.len()
    }

    /// Largest deviation of any row sum from 1.
    pub fn row_sum_deviation(&self) -> f64 {
        self.entries
            .iter()
            .map(|row| (row.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Born-rule probability matrix for an ensemble under a measurement.
pub fn outcome_probability_matrix(
    ensemble: &Ensemble,
    povm: &Povm,
) -> Result<OutcomeProbabilityMatrix> {
    let mut entries = Vec::with_capacity(ensemble.len());
    for state in ensemble.states() {
        let rho = state.projector();
        let row = (0..povm.len())
            .map(|j| born_probability(&rho, povm.element(j)))
            .collect::<Result<Vec<f64>>>()?;
        entries.push(row);
    }
    Ok(OutcomeProbabilityMatrix {
        entries,
        labels: povm.labels(),
    })
}

/// Everything a single strategy evaluation produces for one theta.
#[derive(Debug, Clone)]
pub struct StrategyReport {
    pub strategy: Strategy,
    pub theta: TrineParams,
    pub povm: Povm,
    pub probabilities: OutcomeProbabilityMatrix,
    /// Posterior confidence per conclusive outcome; `None` when that outcome
    /// never occurs (all conclusive outcomes at theta = 0).
    pub confidence_per_outcome: Vec<Option<f64>>,
    /// Prior-weighted probability of the inconclusive outcome; 0 when the
    /// measurement has no inconclusive element.
    pub inconclusive_probability: f64,
}

/// Evaluate one strategy over a grid of theta values. Deterministic; one
/// report per grid point, in grid order.
pub fn strategy_sweep(
    theta_grid: &[TrineParams],
    strategy: Strategy,
) -> Result<Vec<StrategyReport>> {
    theta_grid
        .iter()
        .map(|params| evaluate_strategy(params, strategy))
        .collect()
}

/// Evaluate one strategy at a single theta.
pub fn evaluate_strategy(params: &TrineParams, strategy: Strategy) -> Result<StrategyReport> {
    let ensemble = symmetric_states(params);
    let povm = match strategy {
        Strategy::MaxConfidence => trine_max_confidence_povm(params)?,
        Strategy::MinError => min_error_srm(&ensemble)?,
    };
    let probabilities = outcome_probability_matrix(&ensemble, &povm)?;

    let mut confidence_per_outcome = Vec::new();
    for j in 0..povm.len() {
        if povm.label(j) == OutcomeLabel::Inconclusive {
            continue;
        }
        match posterior_confidence(&ensemble, &povm, j) {
            Ok(c) => confidence_per_outcome.push(Some(c)),
            Err(Error::OutcomeNeverOccurs { .. }) => confidence_per_outcome.push(None),
            Err(e) => return Err(e),
        }
    }

    let inconclusive_probability = match povm.inconclusive_index() {
        Some(q) => (0..ensemble.len())
            .map(|i| ensemble.prior(i) * probabilities.entry(i, q))
            .sum(),
        None => 0.0,
    };

    Ok(StrategyReport {
        strategy,
        theta: *params,
        povm,
        probabilities,
        confidence_per_outcome,
        inconclusive_probability,
    })
}

/// Confidence estimated from normalized detector voltages: for detector `k`,
/// the share `V_k^{(k)} / sum_i V_k^{(i)}` of its signal that came from the
/// matching input state. With equal priors this equals the Bayes posterior.
pub fn confidence_from_normalized_voltages(
    voltages_per_state: &[f64],
    detector_index: usize,
) -> Result<f64> {
    if detector_index >= voltages_per_state.len() {
        return Err(Error::IndexOutOfBounds {
            index: detector_index,
            len: voltages_per_state.len(),
        });
    }
    if let Some(v) = voltages_per_state.iter().find(|v| **v < 0.0) {
        return Err(Error::NegativeVoltage { value: *v });
    }
    let total: f64 = voltages_per_state.iter().sum();
    if total <= tol::OUTCOME_PROBABILITY_MIN {
        return Err(Error::OutcomeNeverOccurs {
            index: detector_index,
            probability: total,
        });
    }
    Ok(voltages_per_state[detector_index] / total)
}

/// Closed-form confidence of the minimum-error measurement on the symmetric
/// family, `(1 + sin 2 theta) / 3`. Used as an oracle against the
/// constructed measurement.
pub fn min_error_confidence_closed_form(params: &TrineParams) -> f64 {
    (1.0 + (2.0 * params.theta_rad()).sin()) / 3.0
}

/// Closed-form inconclusive probability of the maximum-confidence
/// measurement, `cos 2 theta`, independent of the input state.
pub fn inconclusive_probability_closed_form(params: &TrineParams) -> f64 {
    (2.0 * params.theta_rad()).cos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::Mat2;
    use proptest::prelude::*;

    // The explicit import wins over proptest's glob-exported Strategy trait.
    use super::Strategy;

    fn trine(theta: f64) -> (TrineParams, Ensemble) {
        let params = TrineParams::new(theta).unwrap();
        let ensemble = symmetric_states(&params);
        (params, ensemble)
    }

    #[test]
    fn theta_range_is_enforced() {
        assert!(TrineParams::new(45.0).is_ok());
        assert!(TrineParams::new(0.0).is_ok());
        assert!(matches!(
            TrineParams::new(45.2),
            Err(Error::ThetaOutOfRange { .. })
        ));
        assert!(TrineParams::new(-1.0).is_err());
        assert!(TrineParams::new(f64::NAN).is_err());
    }

    #[test]
    fn symmetric_states_match_direct_substitution() {
        let (_, e0) = trine(0.0);
        for i in 0..3 {
            assert!(e0.state(i).approx_eq(&PureQubit::basis_zero(), 1e-12));
        }

        let (_, e45) = trine(45.0);
        let plus = PureQubit::new(Complex64::ONE, Complex64::ONE).unwrap();
        assert!(e45.state(0).approx_eq(&plus, 1e-12));

        let (_, e30) = trine(30.0);
        let expect = PureQubit::new(
            Complex64::new(3f64.sqrt() / 2.0, 0.0),
            Complex64::from_polar(0.5, 2.0 * PI / 3.0),
        )
        .unwrap();
        assert!(e30.state(1).approx_eq(&expect, 1e-12));
        // Relative phase, not just overlap magnitude.
        let ratio = e30.state(1).amp1() / e30.state(1).amp0();
        assert!((ratio.arg() - 2.0 * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn direction_at_45_is_scaled_projector() {
        let (_, ensemble) = trine(45.0);
        let dir = max_confidence_direction(&ensemble, 0).unwrap();
        let expect = ensemble.state(0).projector().scale(4.0);
        assert!(dir.entries().max_abs_diff(expect.entries()) < 1e-12);
    }

    #[test]
    fn direction_at_30_points_along_flipped_ket() {
        let (_, ensemble) = trine(30.0);
        let dir = max_confidence_direction(&ensemble, 0).unwrap();
        // Rank 1 and aligned with (sin theta, cos theta).
        let evals = dir.eigenvalues();
        assert!(evals[0].abs() < 1e-10);
        let flipped = PureQubit::new(
            Complex64::new(30f64.to_radians().sin(), 0.0),
            Complex64::new(30f64.to_radians().cos(), 0.0),
        )
        .unwrap();
        let expect = flipped.projector().scale(evals[1]);
        assert!(dir.entries().max_abs_diff(expect.entries()) < 1e-10);
    }

    #[test]
    fn direction_for_orthogonal_pair_is_projective() {
        let ensemble =
            Ensemble::equiprobable(vec![PureQubit::basis_zero(), PureQubit::basis_one()]).unwrap();
        let dir = max_confidence_direction(&ensemble, 0).unwrap();
        let expect = PureQubit::basis_zero().projector().scale(4.0);
        assert!(dir.entries().max_abs_diff(expect.entries()) < 1e-12);
    }

    #[test]
    fn direction_rejects_state_outside_support() {
        // rho = |0><0| while the probe state is |1>: undefined confidence.
        let ensemble = Ensemble::new(
            vec![
                PureQubit::basis_zero(),
                PureQubit::basis_zero(),
                PureQubit::basis_one(),
            ],
            vec![0.5, 0.5, 0.0],
        )
        .unwrap();
        assert!(matches!(
            max_confidence_direction(&ensemble, 2),
            Err(Error::StateOutsideSupport { index: 2 })
        ));
    }

    #[test]
    fn trine_povm_boundary_cases() {
        let povm45 = trine_max_confidence_povm(&TrineParams::new(45.0).unwrap()).unwrap();
        let q = povm45.inconclusive_index().unwrap();
        assert!(povm45.element(q).entries().max_abs_diff(&Mat2::zero()) < 1e-12);
        for (j, phi) in SYMMETRIC_PHASES.iter().enumerate() {
            let expect = PureQubit::new(Complex64::ONE, Complex64::from_polar(1.0, *phi))
                .unwrap()
                .projector()
                .scale(2.0 / 3.0);
            assert!(povm45.element(j).entries().max_abs_diff(expect.entries()) < 1e-12);
        }

        let povm0 = trine_max_confidence_povm(&TrineParams::new(0.0).unwrap()).unwrap();
        let q = povm0.inconclusive_index().unwrap();
        let p0 = PureQubit::basis_zero().projector();
        assert!(povm0.element(q).entries().max_abs_diff(p0.entries()) < 1e-12);
        let third = PureQubit::basis_one().projector().scale(1.0 / 3.0);
        for j in 0..3 {
            assert!(povm0.element(j).entries().max_abs_diff(third.entries()) < 1e-12);
        }
    }

    #[test]
    fn trine_povm_inconclusive_rate_at_30() {
        let (params, ensemble) = trine(30.0);
        let povm = trine_max_confidence_povm(&params).unwrap();
        let q = povm.inconclusive_index().unwrap();
        for i in 0..3 {
            let p = born_probability(&ensemble.state(i).projector(), povm.element(q)).unwrap();
            assert!((p - 0.5).abs() < 1e-12, "P(w?|psi_{i}) = {p}");
        }
    }

    #[test]
    fn srm_coincides_with_max_confidence_at_45() {
        let (params, ensemble) = trine(45.0);
        let srm = min_error_srm(&ensemble).unwrap();
        let mc = trine_max_confidence_povm(&params).unwrap();
        for j in 0..3 {
            assert!(
                srm.element(j)
                    .entries()
                    .max_abs_diff(mc.element(j).entries())
                    < 1e-12
            );
        }
        assert_eq!(srm.len(), 3);
    }

    #[test]
    fn srm_success_probability_matches_closed_form() {
        let (params, ensemble) = trine(30.0);
        let srm = min_error_srm(&ensemble).unwrap();
        // Brute-force Born-rule sum over correct outcomes.
        let mut correct = 0.0;
        for j in 0..3 {
            correct += ensemble.prior(j)
                * born_probability(&ensemble.state(j).projector(), srm.element(j)).unwrap();
        }
        let expect = min_error_confidence_closed_form(&params);
        assert!((correct - expect).abs() < 1e-12);
        assert!((expect - 0.622_008_467_928_146_2).abs() < 1e-14);
    }

    #[test]
    fn srm_touches_helstrom_bound_for_two_states() {
        // Symmetric pair cos|0> +- sin|1> with overlap cos(2 theta).
        let theta = 17f64.to_radians();
        let pair = Ensemble::equiprobable(vec![
            PureQubit::new(
                Complex64::new(theta.cos(), 0.0),
                Complex64::new(theta.sin(), 0.0),
            )
            .unwrap(),
            PureQubit::new(
                Complex64::new(theta.cos(), 0.0),
                Complex64::new(-theta.sin(), 0.0),
            )
            .unwrap(),
        ])
        .unwrap();
        let srm = min_error_srm(&pair).unwrap();
        let mut wrong = 0.0;
        for j in 0..2 {
            wrong += pair.prior(j)
                * born_probability(&pair.state(j).projector(), srm.element(1 - j)).unwrap();
        }
        let helstrom = 0.5 * (1.0 - (2.0 * theta).sin());
        assert!(
            (wrong - helstrom).abs() < 1e-12,
            "error {wrong} vs {helstrom}"
        );
    }

    #[test]
    fn srm_refuses_unbalanced_or_asymmetric_ensembles() {
        let lopsided = Ensemble::new(
            vec![PureQubit::basis_zero(), PureQubit::basis_one()],
            vec![0.7, 0.3],
        )
        .unwrap();
        assert!(matches!(
            min_error_srm(&lopsided),
            Err(Error::NotSymmetricEnsemble(_))
        ));

        let skewed = Ensemble::equiprobable(vec![
            PureQubit::basis_zero(),
            PureQubit::basis_one(),
            PureQubit::new(Complex64::ONE, Complex64::new(0.3, 0.0)).unwrap(),
        ])
        .unwrap();
        assert!(matches!(
            min_error_srm(&skewed),
            Err(Error::NotSymmetricEnsemble(_))
        ));
    }

    #[test]
    fn srm_completes_identity_at_theta_zero() {
        let (_, ensemble) = trine(0.0);
        let srm = min_error_srm(&ensemble).unwrap();
        assert!(srm.validate().passes());
        // Degenerate states: every outcome is equally likely.
        for j in 0..3 {
            let p = born_probability(&ensemble.state(0).projector(), srm.element(j)).unwrap();
            assert!((p - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn inconclusive_probability_decreases_with_theta() {
        let mut previous = f64::INFINITY;
        for k in 0..=45 {
            let (params, _) = trine(k as f64);
            let report = evaluate_strategy(&params, Strategy::MaxConfidence).unwrap();
            assert!(
                (report.inconclusive_probability - inconclusive_probability_closed_form(&params))
                    .abs()
                    < 1e-12
            );
            assert!(report.inconclusive_probability < previous + 1e-15);
            previous = report.inconclusive_probability;
        }
    }

    #[test]
    fn probability_matrix_at_30_degrees() {
        let (params, ensemble) = trine(30.0);
        let povm = trine_max_confidence_povm(&params).unwrap();
        let matrix = outcome_probability_matrix(&ensemble, &povm).unwrap();
        let expect = [1.0 / 3.0, 1.0 / 12.0, 1.0 / 12.0, 0.5];
        for (got, want) in matrix.row(0).iter().zip(expect) {
            assert!((got - want).abs() < 1e-12, "row {:?}", matrix.row(0));
        }
        assert!(matrix.row_sum_deviation() < 1e-12);
    }

    #[test]
    fn probability_matrix_at_theta_zero_is_all_inconclusive() {
        let (params, ensemble) = trine(0.0);
        let povm = trine_max_confidence_povm(&params).unwrap();
        let matrix = outcome_probability_matrix(&ensemble, &povm).unwrap();
        for i in 0..3 {
            assert_eq!(matrix.row(i), &[0.0, 0.0, 0.0, 1.0]);
        }
    }

    #[test]
    fn probability_matrix_for_projective_pair_is_identity() {
        let ensemble =
            Ensemble::equiprobable(vec![PureQubit::basis_zero(), PureQubit::basis_one()]).unwrap();
        let povm = Povm::new(vec![
            (
                OutcomeLabel::Conclusive(0),
                PureQubit::basis_zero().projector(),
            ),
            (
                OutcomeLabel::Conclusive(1),
                PureQubit::basis_one().projector(),
            ),
        ])
        .unwrap();
        let matrix = outcome_probability_matrix(&ensemble, &povm).unwrap();
        assert_eq!(matrix.row(0), &[1.0, 0.0]);
        assert_eq!(matrix.row(1), &[0.0, 1.0]);
    }

    #[test]
    fn sweep_reproduces_both_confidence_curves() {
        let grid: Vec<TrineParams> = (0..10)
            .map(|k| TrineParams::new(5.0 * k as f64).unwrap())
            .collect();

        let mc = strategy_sweep(&grid, Strategy::MaxConfidence).unwrap();
        assert_eq!(mc.len(), 10);
        for report in &mc[1..] {
            for conf in &report.confidence_per_outcome {
                let c = conf.expect("conclusive outcomes occur for theta > 0");
                assert!((c - 2.0 / 3.0).abs() < 1e-9);
            }
        }
        // At theta = 0 no conclusive outcome ever fires.
        assert!(mc[0].confidence_per_outcome.iter().all(Option::is_none));

        let me = strategy_sweep(&grid, Strategy::MinError).unwrap();
        for (report, params) in me.iter().zip(&grid) {
            let expect = min_error_confidence_closed_form(params);
            for conf in &report.confidence_per_outcome {
                let c = conf.expect("min-error outcomes always occur");
                assert!((c - expect).abs() < 1e-9);
            }
            if params.theta_deg() < 45.0 {
                assert!(expect < 2.0 / 3.0);
            }
        }

        assert!(strategy_sweep(&[], Strategy::MaxConfidence)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn voltage_confidence_examples() {
        let got =
            confidence_from_normalized_voltages(&[1.0 / 3.0, 1.0 / 12.0, 1.0 / 12.0], 0).unwrap();
        assert!((got - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(
            confidence_from_normalized_voltages(&[1.0, 0.0, 0.0], 0).unwrap(),
            1.0
        );
        let uniform = confidence_from_normalized_voltages(&[0.2, 0.2, 0.2], 1).unwrap();
        assert!((uniform - 1.0 / 3.0).abs() < 1e-12);
        assert!(matches!(
            confidence_from_normalized_voltages(&[0.0, 0.0, 0.0], 0),
            Err(Error::OutcomeNeverOccurs { .. })
        ));
        assert!(matches!(
            confidence_from_normalized_voltages(&[0.1, -0.2, 0.3], 0),
            Err(Error::NegativeVoltage { .. })
        ));
    }

    proptest! {
        #[test]
        fn cyclic_symmetry_of_trine_probabilities(theta in 0.0f64..=45.0) {
            let (params, ensemble) = trine(theta);
            let povm = trine_max_confidence_povm(&params).unwrap();
            let matrix = outcome_probability_matrix(&ensemble, &povm).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    let base = matrix.entry(0, (j + 3 - i) % 3);
                    prop_assert!((matrix.entry(i, j) - base).abs() < 1e-12);
                }
                let q = matrix.entry(i, 3);
                prop_assert!((q - inconclusive_probability_closed_form(&params)).abs() < 1e-12);
            }
        }

        #[test]
        fn max_confidence_dominates_min_error(theta in 0.0f64..=45.0) {
            let params = TrineParams::new(theta).unwrap();
            let me = min_error_confidence_closed_form(&params);
            prop_assert!(me <= 2.0 / 3.0 + 1e-12);
            if theta < 44.999 {
                prop_assert!(me < 2.0 / 3.0);
            }
        }

        #[test]
        fn srm_rows_sum_to_one(theta in 0.0f64..=45.0) {
            let (_, ensemble) = trine(theta);
            let srm = min_error_srm(&ensemble).unwrap();
            let matrix = outcome_probability_matrix(&ensemble, &srm).unwrap();
            prop_assert!(matrix.row_sum_deviation() < 1e-10);
        }
    }
}
