//! The three subcommands: sweep, table, verify.

use std::fs;
use std::io::Write;

use qsd_core::optics::{
    max_reference_deviation, nonideal_band, prepare_input, reference_row, solve_measurement_grid,
    JonesVector,
};
use qsd_core::qstate::posterior_confidence;
use qsd_core::strategies::{
    min_error_srm, outcome_probability_matrix, symmetric_states, trine_max_confidence_povm,
    Strategy, TrineParams,
};
use qsd_core::verify::{run_all, VerifyOptions};
use qsd_core::Error as CoreError;

use crate::config::{OutputFormat, RunConfig};
use crate::records::{
    sig12, ConfigRecord, EnvelopeRecord, SettingsRecord, SweepFile, SweepRecord, TableFile,
    TableRow,
};

/// Command failure, split by exit code: usage problems exit 2, runtime
/// failures exit 1.
#[derive(Debug)]
pub enum CommandError {
    Usage(String),
    Runtime(String),
}

impl CommandError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CommandError::Usage(_) => 2,
            CommandError::Runtime(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CommandError::Usage(m) | CommandError::Runtime(m) => m,
        }
    }
}

impl From<CoreError> for CommandError {
    fn from(e: CoreError) -> Self {
        CommandError::Runtime(e.to_string())
    }
}

fn config_record(config: &RunConfig) -> ConfigRecord {
    ConfigRecord {
        theta_start_deg: sig12(config.theta_start_deg),
        theta_end_deg: sig12(config.theta_end_deg),
        theta_step_deg: sig12(config.theta_step_deg),
        strategies: config.strategies.iter().map(|s| s.to_string()).collect(),
        leak_intensity: sig12(config.leak_intensity),
        leak_phase_grid_rad: config
            .leak_phase_grid_rad
            .iter()
            .map(|p| sig12(*p))
            .collect(),
    }
}

fn prepared_inputs(params: &TrineParams) -> Result<[JonesVector; 3], CoreError> {
    Ok([
        prepare_input(params, 0)?,
        prepare_input(params, 1)?,
        prepare_input(params, 2)?,
    ])
}

fn write_output(path: &std::path::Path, text: &str) -> Result<(), CommandError> {
    let mut file = fs::File::create(path)
        .map_err(|e| CommandError::Runtime(format!("cannot write {}: {e}", path.display())))?;
    file.write_all(text.as_bytes())
        .map_err(|e| CommandError::Runtime(format!("cannot write {}: {e}", path.display())))
}

/// Sweep theta and write one record per grid point: the outcome-probability
/// matrix, both confidence curves, the solved settings, and the non-ideal
/// envelopes. Output is deterministic for a given configuration.
pub fn cmd_sweep(config: &RunConfig) -> Result<(), CommandError> {
    let grid = config.theta_grid();
    let solved = solve_measurement_grid(&grid)
        .map_err(|e| CommandError::Runtime(format!("angle solve failed: {e}")))?;

    let mut records = Vec::with_capacity(grid.len());
    for (params, s) in grid.iter().zip(&solved) {
        let ensemble = symmetric_states(params);
        let povm = trine_max_confidence_povm(params)?;
        let matrix = outcome_probability_matrix(&ensemble, &povm)?;
        let mut probability_matrix = [[0.0; 4]; 3];
        for (i, row) in probability_matrix.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = sig12(matrix.entry(i, j));
            }
        }

        let max_confidence = if config.wants(Strategy::MaxConfidence) {
            let mut confs = [None; 3];
            for (j, conf) in confs.iter_mut().enumerate() {
                *conf = match posterior_confidence(&ensemble, &povm, j) {
                    Ok(c) => Some(sig12(c)),
                    Err(CoreError::OutcomeNeverOccurs { .. }) => None,
                    Err(e) => return Err(e.into()),
                };
            }
            Some(confs)
        } else {
            None
        };

        let min_error_confidence = if config.wants(Strategy::MinError) {
            let srm = min_error_srm(&ensemble)?;
            Some(sig12(posterior_confidence(&ensemble, &srm, 0)?))
        } else {
            None
        };

        let inputs = prepared_inputs(params)?;
        let band = nonideal_band(
            &inputs,
            &s.settings,
            config.leak_intensity,
            &config.leak_phase_grid_rad,
        )?;
        let envelope = EnvelopeRecord {
            intensity_lo: band.intensity_lo.map(|row| row.map(sig12)),
            intensity_hi: band.intensity_hi.map(|row| row.map(sig12)),
            confidence_lo: band.confidence_lo.map(|c| c.map(sig12)),
            confidence_hi: band.confidence_hi.map(|c| c.map(sig12)),
        };

        records.push(SweepRecord {
            theta_deg: sig12(params.theta_deg()),
            probability_matrix,
            max_confidence,
            min_error_confidence,
            settings: SettingsRecord::from_settings(&s.settings),
            network_residual: sig12(s.residual),
            envelope,
        });
    }

    let file = SweepFile {
        config: config_record(config),
        records,
    };
    let text = match config.format {
        OutputFormat::Csv => file.to_csv(),
        OutputFormat::Json => file.to_json(),
    };
    write_output(&config.out_path, &text)
}

/// Solve the waveplate angles across the grid and write them next to their
/// deviations from the reference settings table.
pub fn cmd_table(config: &RunConfig) -> Result<(), CommandError> {
    let grid = config.theta_grid();
    let solved = solve_measurement_grid(&grid)
        .map_err(|e| CommandError::Runtime(format!("angle solve failed: {e}")))?;

    let rows = grid
        .iter()
        .zip(&solved)
        .map(|(params, s)| {
            let reference = reference_row(params.theta_deg());
            let dev = |solved_deg: f64, printed: fn(&qsd_core::optics::ReferenceRow) -> f64| {
                reference.map(|row| {
                    sig12(qsd_core::optics::hwp_angle_distance(
                        solved_deg,
                        printed(row),
                    ))
                })
            };
            TableRow {
                theta_deg: sig12(params.theta_deg()),
                settings: SettingsRecord::from_settings(&s.settings),
                network_residual: sig12(s.residual),
                dev_hwp4_deg: dev(s.settings.hwp4_deg, |r| r.hwp4_deg),
                dev_hwp5_deg: dev(s.settings.hwp5_deg, |r| r.hwp5_deg),
                dev_hwp6_deg: dev(s.settings.hwp6_deg, |r| r.hwp6_deg),
                dev_hwp7_deg: dev(s.settings.hwp7_deg, |r| r.hwp7_deg),
            }
        })
        .collect();

    let file = TableFile {
        config: config_record(config),
        rows,
    };
    let text = match config.format {
        OutputFormat::Csv => file.to_csv(),
        OutputFormat::Json => file.to_json(),
    };
    write_output(&config.out_path, &text)?;

    // Reference comparison summary on stderr for interactive use.
    for (params, s) in grid.iter().zip(&solved) {
        if let Some(row) = reference_row(params.theta_deg()) {
            let dev = max_reference_deviation(&s.settings, row);
            if dev > qsd_core::tol::REFERENCE_ANGLE_DEG {
                eprintln!(
                    "note: theta {} deviates from the reference table by {dev:.3} deg",
                    params.theta_deg()
                );
            }
        }
    }
    Ok(())
}

/// Run the invariant battery, print one line per check, and fail the
/// process if any check fails.
pub fn cmd_verify(
    theta_step_deg: f64,
    leak_intensity: f64,
    mutate: bool,
) -> Result<(), CommandError> {
    if !theta_step_deg.is_finite() || theta_step_deg <= 0.0 || theta_step_deg > 45.0 {
        return Err(CommandError::Usage(format!(
            "--theta-step must be in (0, 45], got {theta_step_deg}"
        )));
    }
    if !(0.0..=0.05).contains(&leak_intensity) {
        return Err(CommandError::Usage(format!(
            "--leak {leak_intensity} is outside [0, 0.05]"
        )));
    }
    let options = VerifyOptions {
        theta_step_deg,
        leak_intensity,
        mutate,
    };
    let outcomes = run_all(&options);
    let mut all_passed = true;
    for outcome in &outcomes {
        let verdict = if outcome.passed { "PASS" } else { "FAIL" };
        println!("{verdict} {}: {}", outcome.name, outcome.detail);
        all_passed &= outcome.passed;
    }
    if all_passed {
        println!("all {} checks passed", outcomes.len());
        Ok(())
    } else {
        Err(CommandError::Runtime(format!(
            "{} of {} checks failed",
            outcomes.iter().filter(|o| !o.passed).count(),
            outcomes.len()
        )))
    }
}
