//! The full invariant battery behind the CLI `verify` subcommand and the
//! acceptance test suite. Every check returns a [`CheckOutcome`] instead of
//! panicking, so the battery always runs to completion and reports measured
//! residuals.

use std::f64::consts::PI;

use crate::error::Result;
use crate::optics::{
    build_measurement_network, detector_intensities, max_reference_deviation, nonideal_band,
    prepare_input, solve_measurement_grid, JonesVector, SolvedSettings, REFERENCE_TABLE,
};
use crate::qstate::{born_probability, posterior_confidence, povm_validate, Povm, PureQubit};
use crate::strategies::{
    inconclusive_probability_closed_form, min_error_confidence_closed_form, min_error_srm,
    outcome_probability_matrix, symmetric_states, trine_max_confidence_povm, Strategy, TrineParams,
};
use crate::tol;

/// Result of one verification check.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn pass(name: &'static str, detail: String) -> Self {
        Self {
            name,
            passed: true,
            detail,
        }
    }

    fn fail(name: &'static str, detail: String) -> Self {
        Self {
            name,
            passed: false,
            detail,
        }
    }

    fn from_bound(name: &'static str, measured: f64, bound: f64) -> Self {
        Self {
            name,
            passed: measured <= bound,
            detail: format!("measured {measured:.3e}, bound {bound:.1e}"),
        }
    }
}

/// Options for the verification battery.
#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    /// Grid spacing in degrees over [0, 45].
    pub theta_step_deg: f64,
    /// Leak intensity for the non-ideal model check.
    pub leak_intensity: f64,
    /// Negative control: corrupt the inconclusive-element scaling and
    /// demand that validation catches it.
    pub mutate: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            theta_step_deg: 5.0,
            leak_intensity: 0.005,
            mutate: false,
        }
    }
}

/// Theta grid from 0 to 45 degrees inclusive.
pub fn theta_grid(step_deg: f64) -> Vec<TrineParams> {
    let n = ((45.0 / step_deg) + 1e-9).floor() as usize;
    let mut grid: Vec<TrineParams> = (0..=n)
        .map(|k| TrineParams::new((step_deg * k as f64).min(45.0)).expect("grid stays in range"))
        .collect();
    if grid.last().map(|p| p.theta_deg()) != Some(45.0) {
        grid.push(TrineParams::new(45.0).unwrap());
    }
    grid
}

fn guard(name: &'static str, f: impl FnOnce() -> Result<CheckOutcome>) -> CheckOutcome {
    match f() {
        Ok(outcome) => outcome,
        Err(e) => CheckOutcome::fail(name, format!("error: {e}")),
    }
}

/// Posterior confidence of every conclusive outcome equals 2/3 for every
/// theta > 0 on the grid.
pub fn check_confidence_reproduction(step_deg: f64) -> CheckOutcome {
    const NAME: &str = "confidence_is_two_thirds";
    guard(NAME, || {
        let mut worst = 0.0f64;
        for params in theta_grid(step_deg) {
            if params.theta_deg() == 0.0 {
                continue;
            }
            let ensemble = symmetric_states(&params);
            let povm = trine_max_confidence_povm(&params)?;
            for j in 0..3 {
                let conf = posterior_confidence(&ensemble, &povm, j)?;
                worst = worst.max((conf - 2.0 / 3.0).abs());
            }
        }
        Ok(CheckOutcome::from_bound(NAME, worst, tol::CONFIDENCE))
    })
}

/// The inconclusive probability equals cos(2 theta) for every input state,
/// cross-checked against a direct expectation-value evaluation that does
/// not share code with the Born-rule implementation.
pub fn check_inconclusive_law(step_deg: f64) -> CheckOutcome {
    const NAME: &str = "inconclusive_probability_law";
    guard(NAME, || {
        let mut worst = 0.0f64;
        for params in theta_grid(step_deg) {
            let expect = inconclusive_probability_closed_form(&params);
            let ensemble = symmetric_states(&params);
            let povm = trine_max_confidence_povm(&params)?;
            let q = povm.inconclusive_index().expect("inconclusive element");
            for i in 0..3 {
                let rho = ensemble.state(i).projector();
                let born = born_probability(&rho, povm.element(q))?;
                worst = worst.max((born - expect).abs());

                // Independent route: <psi| Pi |psi> summed entry by entry.
                let psi = ensemble.state(i).amps();
                let pi = povm.element(q).entries();
                let mut direct = 0.0;
                for a in 0..2 {
                    for b in 0..2 {
                        direct += (psi[a].conj() * pi.e[a][b] * psi[b]).re;
                    }
                }
                worst = worst.max((direct - expect).abs());
            }
        }
        Ok(CheckOutcome::from_bound(NAME, worst, tol::INCONCLUSIVE_LAW))
    })
}

/// The minimum-error confidence equals (1 + sin 2 theta)/3, sits strictly
/// below 2/3 before 45 degrees, and meets it there.
pub fn check_min_error_comparison(step_deg: f64) -> CheckOutcome {
    const NAME: &str = "min_error_comparison";
    guard(NAME, || {
        let mut worst = 0.0f64;
        for params in theta_grid(step_deg) {
            let ensemble = symmetric_states(&params);
            let srm = min_error_srm(&ensemble)?;
            let expect = min_error_confidence_closed_form(&params);

            // Brute-force success probability over the Born rule.
            let mut success = 0.0;
            for j in 0..3 {
                success += ensemble.prior(j)
                    * born_probability(&ensemble.state(j).projector(), srm.element(j))?;
            }
            worst = worst.max((success - expect).abs());

            for j in 0..3 {
                let conf = posterior_confidence(&ensemble, &srm, j)?;
                worst = worst.max((conf - expect).abs());
                if params.theta_deg() < 45.0 - 1e-9 && conf >= 2.0 / 3.0 {
                    return Ok(CheckOutcome::fail(
                        NAME,
                        format!(
                            "confidence {conf} not strictly below 2/3 at theta {}",
                            params.theta_deg()
                        ),
                    ));
                }
            }
            if params.theta_deg() == 45.0 {
                worst = worst.max((expect - 2.0 / 3.0).abs());
            }
        }
        Ok(CheckOutcome::from_bound(NAME, worst, tol::CONFIDENCE))
    })
}

fn prepared_inputs(params: &TrineParams) -> Result<[JonesVector; 3]> {
    Ok([
        prepare_input(params, 0)?,
        prepare_input(params, 1)?,
        prepare_input(params, 2)?,
    ])
}

/// Ideal detector probabilities at given settings for the three prepared
/// inputs, detectors ordered (PD0, PD1, PD2, PD?), normalized by the total
/// detected power exactly as the non-ideal model normalizes voltages.
fn ideal_intensity_matrix(params: &TrineParams, solved: &SolvedSettings) -> Result<[[f64; 4]; 3]> {
    let network = build_measurement_network(&solved.settings, 0.0, 0.0)?;
    let inputs = prepared_inputs(params)?;
    let mut out = [[0.0; 4]; 3];
    for (row, input) in out.iter_mut().zip(inputs.iter()) {
        let reading = detector_intensities(&network, input)?;
        let total = reading.total();
        *row = reading.as_array().map(|x| x / total);
    }
    Ok(out)
}

fn target_matrix(params: &TrineParams) -> Result<[[f64; 4]; 3]> {
    let ensemble = symmetric_states(params);
    let povm = trine_max_confidence_povm(params)?;
    let matrix = outcome_probability_matrix(&ensemble, &povm)?;
    let mut out = [[0.0; 4]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = matrix.entry(i, j);
        }
    }
    Ok(out)
}

/// The solved network reproduces the POVM probabilities across all twelve
/// (input, outcome) pairs at every grid theta.
pub fn check_dilation_fidelity(grid: &[TrineParams], solved: &[SolvedSettings]) -> CheckOutcome {
    const NAME: &str = "dilation_fidelity";
    guard(NAME, || {
        let mut worst = 0.0f64;
        for (params, s) in grid.iter().zip(solved) {
            let simulated = ideal_intensity_matrix(params, s)?;
            let target = target_matrix(params)?;
            for i in 0..3 {
                for d in 0..4 {
                    worst = worst.max((simulated[i][d] - target[i][d]).abs());
                }
            }
        }
        Ok(CheckOutcome::from_bound(
            NAME,
            worst,
            tol::DILATION_FIDELITY,
        ))
    })
}

/// Solved half-wave angles land on the reference settings table. A row may
/// miss the printed angles only if its probability fidelity still holds, in
/// which case it is reported as a convention discrepancy.
pub fn check_reference_table() -> CheckOutcome {
    const NAME: &str = "reference_angle_table";
    guard(NAME, || {
        let grid: Vec<TrineParams> = REFERENCE_TABLE
            .iter()
            .map(|row| TrineParams::new(row.theta_deg).expect("table thetas are valid"))
            .collect();
        let solved = solve_measurement_grid(&grid)?;

        let mut matched = 0usize;
        let mut max_dev = 0.0f64;
        let mut discrepancies = Vec::new();
        for ((row, params), s) in REFERENCE_TABLE.iter().zip(&grid).zip(&solved) {
            let dev = max_reference_deviation(&s.settings, row);
            max_dev = max_dev.max(dev);
            if dev <= tol::REFERENCE_ANGLE_DEG {
                matched += 1;
                continue;
            }
            // A convention discrepancy is tolerable only when the realized
            // probabilities are still faithful.
            let simulated = ideal_intensity_matrix(params, s)?;
            let target = target_matrix(params)?;
            let mut fidelity = 0.0f64;
            for i in 0..3 {
                for d in 0..4 {
                    fidelity = fidelity.max((simulated[i][d] - target[i][d]).abs());
                }
            }
            if fidelity > tol::DILATION_FIDELITY {
                return Ok(CheckOutcome::fail(
                    NAME,
                    format!(
                        "theta {} misses the table by {dev:.3} deg and the probabilities by {fidelity:.3e}",
                        row.theta_deg
                    ),
                ));
            }
            discrepancies.push(format!("theta {} off by {dev:.3} deg", row.theta_deg));
        }

        let detail = if discrepancies.is_empty() {
            format!("{matched}/10 rows within 0.2 deg, max deviation {max_dev:.3} deg")
        } else {
            format!(
                "{matched}/10 rows within 0.2 deg; convention discrepancies: {}",
                discrepancies.join(", ")
            )
        };
        Ok(CheckOutcome::pass(NAME, detail))
    })
}

/// Zero leak reproduces the ideal curves exactly, and at the real
/// beamsplitter coefficients the leaky confidence stays above the
/// minimum-error curve for 10 deg <= theta <= 30 deg while dropping
/// visibly below 2/3 at small theta.
pub fn check_nonideal_model(
    grid: &[TrineParams],
    solved: &[SolvedSettings],
    leak_intensity: f64,
) -> CheckOutcome {
    const NAME: &str = "nonideal_model";
    // Real transmission and reflection coefficients: leak phase 0 or pi.
    const REAL_PHASES: [f64; 2] = [0.0, PI];
    guard(NAME, || {
        let mut margin = f64::INFINITY;
        for (params, s) in grid.iter().zip(solved) {
            let inputs = prepared_inputs(params)?;

            // Leak 0: the model reduces to the ideal network bit for bit.
            let band = nonideal_band(&inputs, &s.settings, 0.0, &[0.0, 1.0, 2.0])?;
            let ideal = ideal_intensity_matrix(params, s)?;
            let collapsed = ideal.iter().enumerate().all(|(i, row)| {
                row.iter().enumerate().all(|(d, value)| {
                    band.intensity_lo[i][d] == *value && band.intensity_hi[i][d] == *value
                })
            });
            if !collapsed {
                return Ok(CheckOutcome::fail(
                    NAME,
                    format!(
                        "zero-leak envelope differs from ideal at theta {}",
                        params.theta_deg()
                    ),
                ));
            }

            let theta = params.theta_deg();
            if !(10.0..=30.0).contains(&theta) {
                continue;
            }
            let band = nonideal_band(&inputs, &s.settings, leak_intensity, &REAL_PHASES)?;
            let me = min_error_confidence_closed_form(params);
            for k in 0..3 {
                let lo = band.confidence_lo[k]
                    .expect("conclusive detectors are lit for theta >= 10 deg");
                margin = margin.min(lo - me);
            }
        }
        if margin <= 0.0 {
            return Ok(CheckOutcome::fail(
                NAME,
                format!("leaky confidence fell below the minimum-error curve by {margin:.3e}"),
            ));
        }

        // Small theta: the leaky confidence visibly loses the ideal 2/3.
        let small = TrineParams::new(5.0)?;
        let s5 = solve_measurement_grid(&[small])?[0];
        let band = nonideal_band(
            &prepared_inputs(&small)?,
            &s5.settings,
            leak_intensity,
            &REAL_PHASES,
        )?;
        let top = band
            .confidence_hi
            .iter()
            .map(|c| c.expect("conclusive detectors are lit at theta 5 deg"))
            .fold(f64::NEG_INFINITY, f64::max);
        if top > 2.0 / 3.0 - 0.02 {
            return Ok(CheckOutcome::fail(
                NAME,
                format!("confidence at theta 5 deg only dropped to {top:.4}"),
            ));
        }
        Ok(CheckOutcome::pass(
            NAME,
            format!(
                "zero-leak exact; min margin over minimum error {margin:.4}; theta 5 deg ceiling {top:.4}"
            ),
        ))
    })
}

/// Positivity and completeness of every constructed measurement. With
/// `corrupt_inconclusive` the inconclusive element is rescaled first and
/// the battery must flag the broken measurement.
pub fn check_povm_validity(step_deg: f64, corrupt_inconclusive: bool) -> CheckOutcome {
    const NAME: &str = "povm_validity";
    guard(NAME, || {
        if corrupt_inconclusive {
            let params = TrineParams::new(30.0)?;
            let povm = trine_max_confidence_povm(&params)?;
            let q = povm.inconclusive_index().expect("inconclusive element");
            let corrupted = Povm::new_unchecked(
                povm.iter()
                    .enumerate()
                    .map(|(i, (label, op))| {
                        let op = if i == q { op.scale(1.05) } else { *op };
                        (*label, op)
                    })
                    .collect(),
            );
            let report = povm_validate(&corrupted);
            return Ok(if report.passes() {
                CheckOutcome::fail(
                    NAME,
                    "corrupted inconclusive scaling slipped through validation".into(),
                )
            } else {
                CheckOutcome::fail(
                    NAME,
                    format!(
                        "negative control: completeness deviation {:.3e} correctly rejected",
                        report.completeness_deviation
                    ),
                )
            });
        }

        let mut worst_eig = 0.0f64;
        let mut worst_sum = 0.0f64;
        for params in theta_grid(step_deg) {
            for povm in [
                trine_max_confidence_povm(&params)?,
                min_error_srm(&symmetric_states(&params))?,
            ] {
                let report = povm_validate(&povm);
                if !report.passes() {
                    return Ok(CheckOutcome::fail(
                        NAME,
                        format!("invalid measurement at theta {}", params.theta_deg()),
                    ));
                }
                worst_eig = worst_eig.max((-report.min_eigenvalue).max(0.0));
                worst_sum = worst_sum.max(report.completeness_deviation);
            }
        }
        Ok(CheckOutcome::pass(
            NAME,
            format!(
                "min eigenvalue >= -{worst_eig:.3e}, completeness deviation <= {worst_sum:.3e}"
            ),
        ))
    })
}

/// Probability-matrix rows sum to 1 for both strategies across the grid.
pub fn check_row_sums(step_deg: f64) -> CheckOutcome {
    const NAME: &str = "probability_row_sums";
    guard(NAME, || {
        let mut worst = 0.0f64;
        for params in theta_grid(step_deg) {
            let ensemble = symmetric_states(&params);
            for strategy in [Strategy::MaxConfidence, Strategy::MinError] {
                let povm = match strategy {
                    Strategy::MaxConfidence => trine_max_confidence_povm(&params)?,
                    Strategy::MinError => min_error_srm(&ensemble)?,
                };
                let matrix = outcome_probability_matrix(&ensemble, &povm)?;
                worst = worst.max(matrix.row_sum_deviation());
            }
        }
        Ok(CheckOutcome::from_bound(NAME, worst, tol::COMPLETENESS))
    })
}

/// Outcome probabilities depend only on (outcome - input) mod 3, both in
/// operator form and through the solved network.
pub fn check_cyclic_symmetry(grid: &[TrineParams], solved: &[SolvedSettings]) -> CheckOutcome {
    const NAME: &str = "cyclic_symmetry";
    guard(NAME, || {
        let mut worst_operator = 0.0f64;
        let mut worst_network = 0.0f64;
        for (params, s) in grid.iter().zip(solved) {
            let ensemble = symmetric_states(params);
            let povm = trine_max_confidence_povm(params)?;
            let matrix = outcome_probability_matrix(&ensemble, &povm)?;
            for i in 0..3 {
                for j in 0..3 {
                    let base = matrix.entry(0, (j + 3 - i) % 3);
                    worst_operator = worst_operator.max((matrix.entry(i, j) - base).abs());
                }
            }

            let simulated = ideal_intensity_matrix(params, s)?;
            for i in 0..3 {
                for d in 0..3 {
                    let rotated = simulated[(i + 1) % 3][(d + 1) % 3];
                    worst_network = worst_network.max((simulated[i][d] - rotated).abs());
                }
            }
        }
        if worst_operator > tol::CYCLIC_SYMMETRY {
            return Ok(CheckOutcome::fail(
                NAME,
                format!("operator-level asymmetry {worst_operator:.3e}"),
            ));
        }
        Ok(CheckOutcome::from_bound(
            NAME,
            worst_network,
            tol::DETECTOR_BALANCE,
        ))
    })
}

/// Detectors PD0 and PD2 agree for the second input state at solved
/// settings, the balance the interferometer phase is set by.
pub fn check_detector_balance(grid: &[TrineParams], solved: &[SolvedSettings]) -> CheckOutcome {
    const NAME: &str = "detector_balance";
    guard(NAME, || {
        let mut worst = 0.0f64;
        for (params, s) in grid.iter().zip(solved) {
            let network = build_measurement_network(&s.settings, 0.0, 0.0)?;
            let input = prepare_input(params, 1)?;
            let reading = detector_intensities(&network, &input)?;
            worst = worst.max((reading.pd0 - reading.pd2).abs());
        }
        Ok(CheckOutcome::from_bound(NAME, worst, tol::DETECTOR_BALANCE))
    })
}

/// Deterministic Fibonacci lattice on the Bloch sphere.
fn bloch_lattice(count: usize) -> impl Iterator<Item = PureQubit> {
    let golden_angle = PI * (3.0 - 5.0f64.sqrt());
    (0..count).map(move |n| {
        let z = 1.0 - 2.0 * (n as f64 + 0.5) / count as f64;
        let polar = z.clamp(-1.0, 1.0).acos();
        let azimuth = golden_angle * n as f64;
        PureQubit::from_bloch_angles(polar, azimuth)
    })
}

/// No rank-1 element sampled from a 10^4-point Bloch lattice achieves a
/// posterior above 2/3 for any state, at any grid theta above zero.
pub fn check_bloch_optimality(step_deg: f64) -> CheckOutcome {
    const NAME: &str = "bloch_optimality_spot_check";
    const LATTICE_POINTS: usize = 10_000;
    guard(NAME, || {
        let mut best = 0.0f64;
        for params in theta_grid(step_deg) {
            if params.theta_deg() == 0.0 {
                continue;
            }
            let ensemble = symmetric_states(&params);
            let rho = crate::qstate::density_from_ensemble(&ensemble);
            for probe in bloch_lattice(LATTICE_POINTS) {
                let chi = probe.amps();
                let denom = {
                    let out = rho.entries().apply(chi);
                    (chi[0].conj() * out[0] + chi[1].conj() * out[1]).re
                };
                if denom < 1e-12 {
                    continue;
                }
                for j in 0..3 {
                    let overlap = ensemble.state(j).inner(&probe).norm_sqr();
                    let conf = ensemble.prior(j) * overlap / denom;
                    best = best.max(conf);
                }
            }
        }
        let outcome = CheckOutcome::from_bound(NAME, best, 2.0 / 3.0 + tol::OPTIMALITY_SLACK);
        Ok(CheckOutcome {
            detail: format!("best sampled posterior {best:.9} vs 2/3"),
            ..outcome
        })
    })
}

/// Run the whole battery in order.
pub fn run_all(options: &VerifyOptions) -> Vec<CheckOutcome> {
    let mut outcomes = Vec::new();
    outcomes.push(check_confidence_reproduction(options.theta_step_deg));
    outcomes.push(check_inconclusive_law(options.theta_step_deg));
    outcomes.push(check_min_error_comparison(options.theta_step_deg));

    let grid = theta_grid(options.theta_step_deg);
    match solve_measurement_grid(&grid) {
        Ok(solved) => {
            outcomes.push(check_dilation_fidelity(&grid, &solved));
            outcomes.push(check_reference_table());
            outcomes.push(check_nonideal_model(&grid, &solved, options.leak_intensity));
            outcomes.push(check_povm_validity(options.theta_step_deg, options.mutate));
            outcomes.push(check_row_sums(options.theta_step_deg));
            outcomes.push(check_cyclic_symmetry(&grid, &solved));
            outcomes.push(check_detector_balance(&grid, &solved));
        }
        Err(e) => {
            for name in [
                "dilation_fidelity",
                "reference_angle_table",
                "nonideal_model",
                "povm_validity",
                "probability_row_sums",
                "cyclic_symmetry",
                "detector_balance",
            ] {
                outcomes.push(CheckOutcome::fail(name, format!("grid solve failed: {e}")));
            }
        }
    }
    outcomes.push(check_bloch_optimality(options.theta_step_deg));
    outcomes
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mutation_mode_surfaces_the_corruption() {
        let outcome = check_povm_validity(5.0, true);
        assert!(!outcome.passed);
        assert!(outcome.detail.contains("correctly rejected"));
    }

    #[test]
    fn theta_grid_covers_endpoints() {
        let grid = theta_grid(5.0);
        assert_eq!(grid.len(), 10);
        assert_eq!(grid[0].theta_deg(), 0.0);
        assert_eq!(grid[9].theta_deg(), 45.0);

        let fine = theta_grid(1.0);
        assert_eq!(fine.len(), 46);

        let odd = theta_grid(7.0);
        assert_eq!(odd.last().unwrap().theta_deg(), 45.0);
    }
}
