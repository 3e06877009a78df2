//! Four-mode model of the measurement interferometer.
//!
//! The mode vector is indexed `(arm A . H, arm A . V, arm B . H, arm B . V)`.
//! The input beam occupies arm A; the vacuum port of the first beamsplitter
//! provides arm B, giving the four orthogonal modes a four-outcome
//! measurement needs. Polarizing beamsplitters transmit H within an arm and
//! exchange V between arms.
//!
//! # Layout
//!
//! ```text
//! input (arm A): QWP2 -> HWP4 -> PBS2 -> HWP6, phase(M1) -> PBS3 -> HWP7 -> PBS4 -> PD?, PD0
//!                                  \-> HWP5 (arm B)      -> PBS3 -> QWP3 -> PBS5 -> PD1, PD2
//! ```
//!
//! After the recombining beamsplitter, arm A carries the outcome pair
//! {inconclusive, w0} and arm B the pair {w1, w2}. The final splitters PBS4
//! and PBS5 are ideal, so they reduce to reading one detector per mode:
//! PD? = |A.H|^2, PD0 = |A.V|^2, PD1 = |B.H|^2, PD2 = |B.V|^2. This detector
//! assignment, the quarter-wave settings of -45 deg, and the placement of
//! the interferometer phase on arm A are the configuration constants that
//! reproduce the reference settings table; see `solver::REFERENCE_TABLE`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::optics::jones::{hwp_matrix, qwp_matrix, JonesVector};
use crate::qstate::Mat2;
use crate::strategies::confidence_from_normalized_voltages;

/// The two spatial paths of the interferometer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arm {
    A,
    B,
}

/// A 4x4 complex transfer on the mode vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transfer4 {
    pub e: [[Complex64; 4]; 4],
}

impl Transfer4 {
    pub fn identity() -> Self {
        let mut e = [[Complex64::ZERO; 4]; 4];
        for (i, row) in e.iter_mut().enumerate() {
            row[i] = Complex64::ONE;
        }
        Self { e }
    }

    pub fn compose_after(&self, first: &Self) -> Self {
        let mut out = [[Complex64::ZERO; 4]; 4];
        for (out_row, self_row) in out.iter_mut().zip(&self.e) {
            for (j, cell) in out_row.iter_mut().enumerate() {
                for (coeff, first_row) in self_row.iter().zip(&first.e) {
                    *cell += coeff * first_row[j];
                }
            }
        }
        Self { e: out }
    }

    pub fn apply(&self, state: &FourModeState) -> FourModeState {
        let mut amps = [Complex64::ZERO; 4];
        for (i, row) in self.e.iter().enumerate() {
            for (j, amp) in state.amps.iter().enumerate() {
                amps[i] += row[j] * amp;
            }
        }
        FourModeState { amps }
    }

    /// Largest entrywise deviation of `T^dag T` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                let mut dot = Complex64::ZERO;
                for row in &self.e {
                    dot += row[i].conj() * row[j];
                }
                let expect = if i == j {
                    Complex64::ONE
                } else {
                    Complex64::ZERO
                };
                worst = worst.max((dot - expect).norm());
            }
        }
        worst
    }
}

/// Complex amplitudes on the four interferometer modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourModeState {
    pub amps: [Complex64; 4],
}

impl FourModeState {
    pub const ARM_A_H: usize = 0;
    pub const ARM_A_V: usize = 1;
    pub const ARM_B_H: usize = 2;
    pub const ARM_B_V: usize = 3;

    pub fn new(amps: [Complex64; 4]) -> Self {
        Self { amps }
    }

    /// Input beam in arm A; arm B starts in vacuum.
    pub fn from_input_beam(input: &JonesVector) -> Self {
        Self::new([input.h, input.v, Complex64::ZERO, Complex64::ZERO])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// Scattering matrix of a polarizing beamsplitter with intensity fraction
/// `leak_intensity` routed to the wrong output port at relative phase
/// `leak_phase`. The transfer is unitary for every admissible leak; at zero
/// leak it reduces exactly to the ideal permutation (H stays in its arm,
/// V swaps arms).
pub fn pbs_scatter(leak_intensity: f64, leak_phase: f64) -> Result<Transfer4> {
    if !(0.0..=0.05).contains(&leak_intensity) || !leak_intensity.is_finite() {
        return Err(Error::LeakOutOfRange {
            leak: leak_intensity,
        });
    }
    let t = Complex64::new((1.0 - leak_intensity).sqrt(), 0.0);
    let l = Complex64::from_polar(leak_intensity.sqrt(), leak_phase);
    let mut e = [[Complex64::ZERO; 4]; 4];
    // H subspace (modes 0 and 2): mostly transmit, leak crosses arms.
    e[0][0] = t;
    e[2][0] = l;
    e[0][2] = -l.conj();
    e[2][2] = t;
    // V subspace (modes 1 and 3): mostly exchange, leak stays in its arm.
    e[3][1] = t;
    e[1][1] = l;
    e[1][3] = t;
    e[3][3] = -l.conj();
    Ok(Transfer4 { e })
}

/// One element of the interferometer, in beam order. Bare waveplates act on
/// both arms; `ArmLocal` confines a waveplate to a single arm. `ArmPhase`
/// is the path phase the movable mirror applies to arm A.
#[derive(Debug, Clone, PartialEq)]
pub enum OpticalElement {
    Hwp(f64),
    Qwp(f64),
    Pbs {
        leak_intensity: f64,
        leak_phase: f64,
    },
    ArmPhase(f64),
    ArmLocal(Arm, Box<OpticalElement>),
}

impl OpticalElement {
    pub fn transfer(&self) -> Result<Transfer4> {
        match self {
            OpticalElement::Hwp(angle) => Ok(both_arms(&hwp_matrix(*angle))),
            OpticalElement::Qwp(angle) => Ok(both_arms(&qwp_matrix(*angle))),
            OpticalElement::Pbs {
                leak_intensity,
                leak_phase,
            } => pbs_scatter(*leak_intensity, *leak_phase),
            OpticalElement::ArmPhase(delta) => {
                let mut t = Transfer4::identity();
                let phase = Complex64::from_polar(1.0, *delta);
                t.e[0][0] = phase;
                t.e[1][1] = phase;
                Ok(t)
            }
            OpticalElement::ArmLocal(arm, inner) => {
                let block = match inner.as_ref() {
                    OpticalElement::Hwp(angle) => hwp_matrix(*angle),
                    OpticalElement::Qwp(angle) => qwp_matrix(*angle),
                    other => {
                        return Err(Error::UnsupportedElement(format!("{other:?}")));
                    }
                };
                Ok(one_arm(*arm, &block))
            }
        }
    }
}

fn both_arms(block: &Mat2) -> Transfer4 {
    let mut t = Transfer4::identity();
    for arm_offset in [0, 2] {
        for i in 0..2 {
            for j in 0..2 {
                t.e[arm_offset + i][arm_offset + j] = block.e[i][j];
            }
        }
    }
    t
}

fn one_arm(arm: Arm, block: &Mat2) -> Transfer4 {
    let offset = match arm {
        Arm::A => 0,
        Arm::B => 2,
    };
    let mut t = Transfer4::identity();
    for i in 0..2 {
        for j in 0..2 {
            t.e[offset + i][offset + j] = block.e[i][j];
        }
    }
    t
}

/// An ordered sequence of optical elements acting on the four-mode vector.
#[derive(Debug, Clone)]
pub struct OpticalNetwork {
    elements: Vec<OpticalElement>,
}

impl OpticalNetwork {
    pub fn new(elements: Vec<OpticalElement>) -> Self {
        Self { elements }
    }

    pub fn elements(&self) -> &[OpticalElement] {
        &self.elements
    }

    /// Total transfer, elements applied in order.
    pub fn transfer(&self) -> Result<Transfer4> {
        let mut total = Transfer4::identity();
        for element in &self.elements {
            total = element.transfer()?.compose_after(&total);
        }
        Ok(total)
    }

    pub fn propagate(&self, state: &FourModeState) -> Result<FourModeState> {
        Ok(self.transfer()?.apply(state))
    }
}

/// Fast-axis angles and interferometer phase for one measurement
/// configuration. Angles in degrees, phase in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSettings {
    pub hwp4_deg: f64,
    pub hwp5_deg: f64,
    pub hwp6_deg: f64,
    pub hwp7_deg: f64,
    pub qwp2_deg: f64,
    pub qwp3_deg: f64,
    pub interferometer_phase_rad: f64,
}

/// Fixed setting of the two quarter-wave plates in the measurement section.
/// Under this crate's rotation convention the apparatus value of 45 deg
/// lands at -45 deg; probabilities do not depend on the choice.
pub const MEASUREMENT_QWP_DEG: f64 = -45.0;

impl MeasurementSettings {
    /// Settings with the quarter-wave plates at their fixed orientation.
    pub fn with_fixed_quarter_waves(
        hwp4_deg: f64,
        hwp5_deg: f64,
        hwp6_deg: f64,
        hwp7_deg: f64,
        interferometer_phase_rad: f64,
    ) -> Self {
        Self {
            hwp4_deg,
            hwp5_deg,
            hwp6_deg,
            hwp7_deg,
            qwp2_deg: MEASUREMENT_QWP_DEG,
            qwp3_deg: MEASUREMENT_QWP_DEG,
            interferometer_phase_rad,
        }
    }
}

/// Assemble the measurement network for the given settings and beamsplitter
/// imperfection. Only the two interferometer beamsplitters leak; the final
/// detector splitters are ideal and are realized by the per-mode readout in
/// [`detector_intensities`].
pub fn build_measurement_network(
    settings: &MeasurementSettings,
    leak_intensity: f64,
    leak_phase: f64,
) -> Result<OpticalNetwork> {
    if !(0.0..=0.05).contains(&leak_intensity) || !leak_intensity.is_finite() {
        return Err(Error::LeakOutOfRange {
            leak: leak_intensity,
        });
    }
    let local =
        |arm: Arm, element: OpticalElement| OpticalElement::ArmLocal(arm, Box::new(element));
    Ok(OpticalNetwork::new(vec![
        local(Arm::A, OpticalElement::Qwp(settings.qwp2_deg)),
        local(Arm::A, OpticalElement::Hwp(settings.hwp4_deg)),
        OpticalElement::Pbs {
            leak_intensity,
            leak_phase,
        },
        local(Arm::A, OpticalElement::Hwp(settings.hwp6_deg)),
        local(Arm::B, OpticalElement::Hwp(settings.hwp5_deg)),
        OpticalElement::ArmPhase(settings.interferometer_phase_rad),
        OpticalElement::Pbs {
            leak_intensity,
            leak_phase,
        },
        local(Arm::A, OpticalElement::Hwp(settings.hwp7_deg)),
        local(Arm::B, OpticalElement::Qwp(settings.qwp3_deg)),
    ]))
}

/// Normalized power on the four photodetectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorIntensities {
    pub pd0: f64,
    pub pd1: f64,
    pub pd2: f64,
    pub pdq: f64,
}

impl DetectorIntensities {
    pub fn from_output_state(state: &FourModeState) -> Self {
        Self {
            pdq: state.amps[FourModeState::ARM_A_H].norm_sqr(),
            pd0: state.amps[FourModeState::ARM_A_V].norm_sqr(),
            pd1: state.amps[FourModeState::ARM_B_H].norm_sqr(),
            pd2: state.amps[FourModeState::ARM_B_V].norm_sqr(),
        }
    }

    pub fn total(&self) -> f64 {
        self.pd0 + self.pd1 + self.pd2 + self.pdq
    }

    /// Detector values in the order (PD0, PD1, PD2, PD?).
    pub fn as_array(&self) -> [f64; 4] {
        [self.pd0, self.pd1, self.pd2, self.pdq]
    }
}

/// Propagate a polarization input through the network and read the four
/// detectors. For unitary networks the intensities sum to the input power.
pub fn detector_intensities(
    network: &OpticalNetwork,
    input: &JonesVector,
) -> Result<DetectorIntensities> {
    let output = network.propagate(&FourModeState::from_input_beam(input))?;
    Ok(DetectorIntensities::from_output_state(&output))
}

/// Per-theta envelopes of the non-ideal model over a grid of leak phases:
/// detector intensities per input state, and the normalized-voltage
/// confidence per conclusive detector.
#[derive(Debug, Clone)]
pub struct NonidealBand {
    /// Detector-intensity envelopes indexed `[input][detector]` with
    /// detectors ordered (PD0, PD1, PD2, PD?).
    pub intensity_lo: [[f64; 4]; 3],
    pub intensity_hi: [[f64; 4]; 3],
    /// Confidence envelopes per conclusive detector; `None` when the
    /// detector stayed dark at some grid phase (theta = 0 with zero leak),
    /// where the confidence is undefined.
    pub confidence_lo: [Option<f64>; 3],
    pub confidence_hi: [Option<f64>; 3],
}

/// Evaluate the non-ideal beamsplitter model at fixed settings for every
/// leak phase in the grid and collect min/max envelopes. With zero leak the
/// model reduces to the ideal network, so the envelopes collapse onto the
/// ideal curves exactly. An empty grid is treated as the single phase 0.
pub fn nonideal_band(
    inputs: &[JonesVector; 3],
    settings: &MeasurementSettings,
    leak_intensity: f64,
    phase_grid: &[f64],
) -> Result<NonidealBand> {
    let phase_grid = if phase_grid.is_empty() {
        &[0.0][..]
    } else {
        phase_grid
    };
    let mut intensity_lo = [[f64::INFINITY; 4]; 3];
    let mut intensity_hi = [[f64::NEG_INFINITY; 4]; 3];
    let mut confidence_lo: [Option<f64>; 3] = [Some(f64::INFINITY); 3];
    let mut confidence_hi: [Option<f64>; 3] = [Some(f64::NEG_INFINITY); 3];

    for &leak_phase in phase_grid {
        let network = build_measurement_network(settings, leak_intensity, leak_phase)?;
        let mut matrix = [[0.0f64; 4]; 3];
        for (i, input) in inputs.iter().enumerate() {
            let reading = detector_intensities(&network, input)?;
            let total = reading.total();
            let values = reading.as_array().map(|x| x / total);
            matrix[i] = values;
            for d in 0..4 {
                intensity_lo[i][d] = intensity_lo[i][d].min(values[d]);
                intensity_hi[i][d] = intensity_hi[i][d].max(values[d]);
            }
        }
        for k in 0..3 {
            let column = [matrix[0][k], matrix[1][k], matrix[2][k]];
            match confidence_from_normalized_voltages(&column, k) {
                Ok(conf) => {
                    confidence_lo[k] = confidence_lo[k].map(|lo| lo.min(conf));
                    confidence_hi[k] = confidence_hi[k].map(|hi| hi.max(conf));
                }
                Err(Error::OutcomeNeverOccurs { .. }) => {
                    confidence_lo[k] = None;
                    confidence_hi[k] = None;
                }
                Err(e) => return Err(e),
            }
        }
    }

    Ok(NonidealBand {
        intensity_lo,
        intensity_hi,
        confidence_lo,
        confidence_hi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::jones::ket_h;
    use proptest::prelude::*;

    #[test]
    fn ideal_pbs_routes_h_and_v() {
        let pbs = pbs_scatter(0.0, 0.0).unwrap();
        let h_in = FourModeState::new([
            Complex64::ONE,
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::ZERO,
        ]);
        let out = pbs.apply(&h_in);
        assert_eq!(out.amps[0], Complex64::ONE);
        assert_eq!(out.amps[1], Complex64::ZERO);

        let v_in = FourModeState::new([
            Complex64::ZERO,
            Complex64::ONE,
            Complex64::ZERO,
            Complex64::ZERO,
        ]);
        let out = pbs.apply(&v_in);
        assert_eq!(out.amps[3], Complex64::ONE);
        assert_eq!(out.amps[1], Complex64::ZERO);
    }

    #[test]
    fn leaky_pbs_splits_intensity() {
        let pbs = pbs_scatter(0.005, 0.0).unwrap();
        let h_in = FourModeState::new([
            Complex64::ONE,
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::ZERO,
        ]);
        let out = pbs.apply(&h_in);
        assert!((out.amps[0].norm_sqr() - 0.995).abs() < 1e-12);
        assert!((out.amps[2].norm_sqr() - 0.005).abs() < 1e-12);
    }

    #[test]
    fn pbs_rejects_out_of_range_leak() {
        assert!(matches!(
            pbs_scatter(0.06, 0.0),
            Err(Error::LeakOutOfRange { .. })
        ));
        assert!(pbs_scatter(0.05, 1.0).is_ok());
    }

    #[test]
    fn zero_leak_transfer_is_bit_identical_to_ideal() {
        for phase in [0.0, 1.0, 2.5] {
            assert_eq!(
                pbs_scatter(0.0, phase).unwrap(),
                pbs_scatter(0.0, 0.0).unwrap()
            );
        }
    }

    #[test]
    fn identity_settings_send_h_to_the_inconclusive_detector() {
        let settings = MeasurementSettings {
            hwp4_deg: 0.0,
            hwp5_deg: 0.0,
            hwp6_deg: 0.0,
            hwp7_deg: 0.0,
            qwp2_deg: 0.0,
            qwp3_deg: 0.0,
            interferometer_phase_rad: 0.0,
        };
        let network = build_measurement_network(&settings, 0.0, 0.0).unwrap();
        let reading = detector_intensities(&network, &ket_h()).unwrap();
        assert!((reading.pdq - 1.0).abs() < 1e-12);
        assert!(reading.pd0.abs() < 1e-12);
        assert!(reading.pd1.abs() < 1e-12);
        assert!(reading.pd2.abs() < 1e-12);
    }

    #[test]
    fn arm_local_rejects_non_plate_elements() {
        let bad = OpticalElement::ArmLocal(
            Arm::A,
            Box::new(OpticalElement::Pbs {
                leak_intensity: 0.0,
                leak_phase: 0.0,
            }),
        );
        assert!(matches!(bad.transfer(), Err(Error::UnsupportedElement(_))));
    }

    proptest! {
        #[test]
        fn pbs_is_unitary_for_any_leak(leak in 0.0f64..=0.05, phase in 0.0f64..(2.0 * std::f64::consts::PI)) {
            prop_assert!(pbs_scatter(leak, phase).unwrap().unitarity_deviation() < 1e-12);
        }

        #[test]
        fn ideal_network_preserves_norm(
            h4 in -90.0f64..90.0,
            h5 in -90.0f64..90.0,
            h6 in -90.0f64..90.0,
            h7 in -90.0f64..90.0,
            phase in 0.0f64..(2.0 * std::f64::consts::PI),
            hr in -1.0f64..1.0,
            hi in -1.0f64..1.0,
            vr in -1.0f64..1.0,
            vi in -1.0f64..1.0,
        ) {
            let settings = MeasurementSettings::with_fixed_quarter_waves(h4, h5, h6, h7, phase);
            let network = build_measurement_network(&settings, 0.0, 0.0).unwrap();
            prop_assert!(network.transfer().unwrap().unitarity_deviation() < 1e-12);

            let raw = JonesVector::new(Complex64::new(hr, hi), Complex64::new(vr, vi));
            prop_assume!(raw.intensity() > 1e-6);
            let input = raw.normalized().unwrap();
            let reading = detector_intensities(&network, &input).unwrap();
            prop_assert!((reading.total() - 1.0).abs() < 1e-10);
        }

        #[test]
        fn leaky_network_preserves_norm(
            leak in 0.0f64..=0.05,
            phase in 0.0f64..(2.0 * std::f64::consts::PI),
        ) {
            let settings = MeasurementSettings::with_fixed_quarter_waves(10.0, 20.0, 30.0, 40.0, 1.0);
            let network = build_measurement_network(&settings, leak, phase).unwrap();
            let reading = detector_intensities(&network, &ket_h()).unwrap();
            prop_assert!((reading.total() - 1.0).abs() < 1e-10);
        }

        #[test]
        fn waveplate_settings_are_periodic(
            h4 in 0.0f64..90.0,
            h7 in 0.0f64..90.0,
            q in -90.0f64..90.0,
            phase in 0.0f64..(2.0 * std::f64::consts::PI),
        ) {
            // Half-wave plates repeat every 90 degrees, quarter-wave plates
            // every 180, up to a global phase the detectors cannot see.
            let base = MeasurementSettings {
                hwp4_deg: h4,
                hwp5_deg: 33.0,
                hwp6_deg: 12.0,
                hwp7_deg: h7,
                qwp2_deg: q,
                qwp3_deg: q,
                interferometer_phase_rad: phase,
            };
            let shifted = MeasurementSettings {
                hwp4_deg: h4 + 90.0,
                hwp7_deg: h7 - 90.0,
                qwp2_deg: q + 180.0,
                qwp3_deg: q - 180.0,
                ..base
            };
            let input = JonesVector::new(
                Complex64::new(0.6, 0.0),
                Complex64::new(0.0, -0.8),
            );
            let a = detector_intensities(
                &build_measurement_network(&base, 0.0, 0.0).unwrap(),
                &input,
            )
            .unwrap();
            let b = detector_intensities(
                &build_measurement_network(&shifted, 0.0, 0.0).unwrap(),
                &input,
            )
            .unwrap();
            for (x, y) in a.as_array().iter().zip(b.as_array()) {
                prop_assert!((x - y).abs() < 1e-12);
            }
        }
    }
}
