//! Run configuration shared by the sweep and table commands.

use std::f64::consts::PI;
use std::str::FromStr;

use qsd_core::strategies::{Strategy, TrineParams};

/// Output format for data files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Validated sweep configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub theta_start_deg: f64,
    pub theta_end_deg: f64,
    pub theta_step_deg: f64,
    pub strategies: Vec<Strategy>,
    pub leak_intensity: f64,
    pub leak_phase_grid_rad: Vec<f64>,
    pub format: OutputFormat,
    pub out_path: std::path::PathBuf,
}

/// Default leak-phase grid: twelve points covering a full turn.
pub fn default_leak_phase_grid() -> Vec<f64> {
    (0..12).map(|k| k as f64 * PI / 6.0).collect()
}

impl RunConfig {
    #[allow(clippy::too_many_arguments)]
    pub fn validated(
        theta_start_deg: f64,
        theta_end_deg: f64,
        theta_step_deg: f64,
        strategy_names: &[String],
        leak_intensity: f64,
        leak_phase_grid: Option<&str>,
        format: OutputFormat,
        out_path: std::path::PathBuf,
    ) -> Result<Self, String> {
        if !theta_step_deg.is_finite() || theta_step_deg <= 0.0 {
            return Err(format!(
                "--theta-step must be positive, got {theta_step_deg}"
            ));
        }
        if theta_start_deg > theta_end_deg {
            return Err(format!(
                "--theta-start {theta_start_deg} exceeds --theta-end {theta_end_deg}"
            ));
        }
        TrineParams::new(theta_start_deg).map_err(|e| e.to_string())?;
        TrineParams::new(theta_end_deg).map_err(|e| e.to_string())?;
        if !(0.0..=0.05).contains(&leak_intensity) {
            return Err(format!("--leak {leak_intensity} is outside [0, 0.05]"));
        }

        let strategies = if strategy_names.is_empty() {
            vec![Strategy::MaxConfidence, Strategy::MinError]
        } else {
            let mut parsed = Vec::new();
            for name in strategy_names {
                for part in name.split(',').filter(|p| !p.is_empty()) {
                    let strategy = Strategy::from_str(part)?;
                    if !parsed.contains(&strategy) {
                        parsed.push(strategy);
                    }
                }
            }
            parsed
        };

        let leak_phase_grid_rad = match leak_phase_grid {
            None => default_leak_phase_grid(),
            Some(list) => {
                let mut grid = Vec::new();
                for part in list.split(',').filter(|p| !p.is_empty()) {
                    let value: f64 = part
                        .trim()
                        .parse()
                        .map_err(|_| format!("bad leak phase '{part}'"))?;
                    if !value.is_finite() {
                        return Err(format!("leak phase {value} is not finite"));
                    }
                    grid.push(value);
                }
                if grid.is_empty() {
                    return Err("--leak-phase-grid is empty".into());
                }
                grid
            }
        };

        Ok(Self {
            theta_start_deg,
            theta_end_deg,
            theta_step_deg,
            strategies,
            leak_intensity,
            leak_phase_grid_rad,
            format,
            out_path,
        })
    }

    /// The arithmetic theta grid the config describes.
    pub fn theta_grid(&self) -> Vec<TrineParams> {
        let n = ((self.theta_end_deg - self.theta_start_deg) / self.theta_step_deg + 1e-9).floor()
            as usize;
        (0..=n)
            .map(|k| {
                let theta = self.theta_start_deg + self.theta_step_deg * k as f64;
                TrineParams::new(theta.min(45.0)).expect("validated range")
            })
            .collect()
    }

    pub fn wants(&self, strategy: Strategy) -> bool {
        self.strategies.contains(&strategy)
    }
}
