//! Serializable sweep and table records, plus the deterministic number
//! formatting both output formats share.
//!
//! Every floating-point value is rounded to 12 significant digits before it
//! is stored, so the CSV text, the JSON text, and a parse-then-reserialize
//! round trip are all byte-stable.

use serde::{Deserialize, Serialize};

use qsd_core::optics::MeasurementSettings;

/// Round to 12 significant decimal digits.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}")
        .parse()
        .expect("formatted float reparses")
}

/// Render a rounded value for CSV; the shortest representation of a
/// 12-digit value is reproducible.
pub fn csv_number(x: f64) -> String {
    format!("{}", sig12(x))
}

pub fn csv_opt(x: Option<f64>) -> String {
    x.map(csv_number).unwrap_or_default()
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SettingsRecord {
    pub hwp4_deg: f64,
    pub hwp5_deg: f64,
    pub hwp6_deg: f64,
    pub hwp7_deg: f64,
    pub qwp2_deg: f64,
    pub qwp3_deg: f64,
    pub interferometer_phase_rad: f64,
}

impl SettingsRecord {
    pub fn from_settings(s: &MeasurementSettings) -> Self {
        Self {
            hwp4_deg: sig12(s.hwp4_deg),
            hwp5_deg: sig12(s.hwp5_deg),
            hwp6_deg: sig12(s.hwp6_deg),
            hwp7_deg: sig12(s.hwp7_deg),
            qwp2_deg: sig12(s.qwp2_deg),
            qwp3_deg: sig12(s.qwp3_deg),
            interferometer_phase_rad: sig12(s.interferometer_phase_rad),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EnvelopeRecord {
    /// Intensity envelopes indexed [input][detector], detectors ordered
    /// (PD0, PD1, PD2, PD?).
    pub intensity_lo: [[f64; 4]; 3],
    pub intensity_hi: [[f64; 4]; 3],
    /// Confidence envelopes per conclusive detector; null when the detector
    /// never fires.
    pub confidence_lo: [Option<f64>; 3],
    pub confidence_hi: [Option<f64>; 3],
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SweepRecord {
    pub theta_deg: f64,
    /// Outcome probabilities indexed [input][detector], detectors ordered
    /// (PD0, PD1, PD2, PD?).
    pub probability_matrix: [[f64; 4]; 3],
    /// Maximum-confidence posterior per conclusive outcome; absent when the
    /// strategy was not requested, null entries when an outcome never
    /// occurs.
    pub max_confidence: Option<[Option<f64>; 3]>,
    /// Minimum-error confidence; absent when the strategy was not requested.
    pub min_error_confidence: Option<f64>,
    pub settings: SettingsRecord,
    /// Worst detector-probability mismatch of the solved network.
    pub network_residual: f64,
    pub envelope: EnvelopeRecord,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ConfigRecord {
    pub theta_start_deg: f64,
    pub theta_end_deg: f64,
    pub theta_step_deg: f64,
    pub strategies: Vec<String>,
    pub leak_intensity: f64,
    pub leak_phase_grid_rad: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SweepFile {
    pub config: ConfigRecord,
    pub records: Vec<SweepRecord>,
}

/// Fixed CSV schema for sweep output, one row per (theta, input state).
pub const SWEEP_CSV_HEADER: &str = "theta_deg,input_index,p_pd0,p_pd1,p_pd2,p_pdq,conf_mc,conf_me,\
envelope_lo_pd0,envelope_lo_pd1,envelope_lo_pd2,envelope_lo_pdq,envelope_lo_conf,\
envelope_hi_pd0,envelope_hi_pd1,envelope_hi_pd2,envelope_hi_pdq,envelope_hi_conf";

impl SweepFile {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(SWEEP_CSV_HEADER);
        out.push('\n');
        for record in &self.records {
            for input in 0..3 {
                let p = &record.probability_matrix[input];
                let conf_mc = record.max_confidence.and_then(|c| c[input]);
                let mut fields = vec![
                    csv_number(record.theta_deg),
                    input.to_string(),
                    csv_number(p[0]),
                    csv_number(p[1]),
                    csv_number(p[2]),
                    csv_number(p[3]),
                    csv_opt(conf_mc),
                    csv_opt(record.min_error_confidence),
                ];
                for d in 0..4 {
                    fields.push(csv_number(record.envelope.intensity_lo[input][d]));
                }
                fields.push(csv_opt(record.envelope.confidence_lo[input]));
                for d in 0..4 {
                    fields.push(csv_number(record.envelope.intensity_hi[input][d]));
                }
                fields.push(csv_opt(record.envelope.confidence_hi[input]));
                out.push_str(&fields.join(","));
                out.push('\n');
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("serializable");
        text.push('\n');
        text
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TableRow {
    pub theta_deg: f64,
    pub settings: SettingsRecord,
    pub network_residual: f64,
    /// Deviations from the reference settings table after equivalence-class
    /// reduction; null off the tabulated grid.
    pub dev_hwp4_deg: Option<f64>,
    pub dev_hwp5_deg: Option<f64>,
    pub dev_hwp6_deg: Option<f64>,
    pub dev_hwp7_deg: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TableFile {
    pub config: ConfigRecord,
    pub rows: Vec<TableRow>,
}

pub const TABLE_CSV_HEADER: &str = "theta_deg,hwp4_deg,hwp5_deg,hwp6_deg,hwp7_deg,qwp2_deg,\
qwp3_deg,interferometer_phase_rad,network_residual,dev_hwp4_deg,dev_hwp5_deg,dev_hwp6_deg,dev_hwp7_deg";

impl TableFile {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(TABLE_CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            let fields = [
                csv_number(row.theta_deg),
                csv_number(row.settings.hwp4_deg),
                csv_number(row.settings.hwp5_deg),
                csv_number(row.settings.hwp6_deg),
                csv_number(row.settings.hwp7_deg),
                csv_number(row.settings.qwp2_deg),
                csv_number(row.settings.qwp3_deg),
                csv_number(row.settings.interferometer_phase_rad),
                csv_number(row.network_residual),
                csv_opt(row.dev_hwp4_deg),
                csv_opt(row.dev_hwp5_deg),
                csv_opt(row.dev_hwp6_deg),
                csv_opt(row.dev_hwp7_deg),
            ];
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("serializable");
        text.push('\n');
        text
    }
}
