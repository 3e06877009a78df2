//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! with the measured residual. Run with
//! `cargo test -p qsd-core --test acceptance -- --nocapture` to see the
//! measurements even when everything passes.

use qsd_core::optics::solve_measurement_grid;
use qsd_core::verify::{
    check_bloch_optimality, check_confidence_reproduction, check_cyclic_symmetry,
    check_detector_balance, check_dilation_fidelity, check_inconclusive_law,
    check_min_error_comparison, check_nonideal_model, check_povm_validity, check_reference_table,
    check_row_sums, theta_grid, CheckOutcome,
};

const GRID_STEP_DEG: f64 = 5.0;
const LEAK_INTENSITY: f64 = 0.005;

fn assert_outcome(criterion: &str, outcome: CheckOutcome) {
    let verdict = if outcome.passed { "PASS" } else { "FAIL" };
    println!(
        "{criterion} [{verdict}] {}: {}",
        outcome.name, outcome.detail
    );
    assert!(
        outcome.passed,
        "{criterion} {}: {}",
        outcome.name, outcome.detail
    );
}

#[test]
fn criterion_1_confidence_reproduction() {
    assert_outcome("criterion 1", check_confidence_reproduction(GRID_STEP_DEG));
}

#[test]
fn criterion_2_inconclusive_law() {
    assert_outcome("criterion 2", check_inconclusive_law(GRID_STEP_DEG));
}

#[test]
fn criterion_3_min_error_comparison() {
    assert_outcome("criterion 3", check_min_error_comparison(GRID_STEP_DEG));
}

#[test]
fn criterion_4_dilation_fidelity() {
    let grid = theta_grid(GRID_STEP_DEG);
    let solved = solve_measurement_grid(&grid).expect("grid solve");
    assert_outcome("criterion 4", check_dilation_fidelity(&grid, &solved));
}

#[test]
fn criterion_5_reference_table_reproduction() {
    assert_outcome("criterion 5", check_reference_table());
}

#[test]
fn criterion_6_nonideal_model_sanity() {
    let grid = theta_grid(GRID_STEP_DEG);
    let solved = solve_measurement_grid(&grid).expect("grid solve");
    assert_outcome(
        "criterion 6",
        check_nonideal_model(&grid, &solved, LEAK_INTENSITY),
    );
}

#[test]
fn criterion_7_property_suites() {
    let grid = theta_grid(GRID_STEP_DEG);
    let solved = solve_measurement_grid(&grid).expect("grid solve");
    assert_outcome("criterion 7", check_povm_validity(GRID_STEP_DEG, false));
    assert_outcome("criterion 7", check_row_sums(GRID_STEP_DEG));
    assert_outcome("criterion 7", check_cyclic_symmetry(&grid, &solved));
    assert_outcome("criterion 7", check_detector_balance(&grid, &solved));
    assert_outcome("criterion 7", check_bloch_optimality(GRID_STEP_DEG));
}
