//! Jones-calculus simulation of the measurement apparatus: state
//! preparation, the four-mode interferometer network, ideal and leaky
//! polarizing beamsplitters, and the numerical solver that derives the
//! waveplate settings realizing the four-outcome measurement.

pub mod jones;
pub mod network;
pub mod solver;

pub use jones::{
    encode_qubit, hwp_matrix, ket_h, ket_l, ket_r, ket_v, preparation_settings, prepare_input,
    qwp_matrix, JonesVector, PreparationSettings,
};
pub use network::{
    build_measurement_network, detector_intensities, nonideal_band, pbs_scatter, Arm,
    DetectorIntensities, FourModeState, MeasurementSettings, NonidealBand, OpticalElement,
    OpticalNetwork, Transfer4, MEASUREMENT_QWP_DEG,
};
pub use solver::{
    hwp_angle_distance, max_reference_deviation, qwp_angle_distance, reference_row,
    solve_measurement_angles, solve_measurement_grid, ReferenceRow, SolvedSettings,
    REFERENCE_TABLE,
};
