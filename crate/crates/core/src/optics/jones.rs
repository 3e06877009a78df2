//! Jones calculus for fully polarized light in the linear (H, V) basis:
//! waveplate matrices, the circular-basis encoding of qubit states, and the
//! three-waveplate preparation pipeline.
//!
//! # Conventions
//!
//! Waveplate angles are fast-axis orientations in degrees, measured from
//! horizontal. The half-wave plate is
//! `[[cos 2a, sin 2a], [sin 2a, -cos 2a]]` and the quarter-wave plate is
//! `R(a) diag(1, i) R(-a)`. The computational basis maps to circular
//! polarization as
//!
//! ```text
//! |0> -> |R> = (|H> - i|V>)/sqrt(2)
//! |1> -> |L> = (|V> - i|H>)/sqrt(2)
//! ```
//!
//! The quarter-turn phase folded into `|L>` is the choice that makes both
//! the preparation pipeline and the reference measurement settings exact;
//! detector intensities never depend on it.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qstate::{Mat2, PureQubit};
use crate::strategies::{TrineParams, SYMMETRIC_PHASES};

/// Electric-field amplitudes on the horizontal and vertical axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JonesVector {
    pub h: Complex64,
    pub v: Complex64,
}

impl JonesVector {
    pub fn new(h: Complex64, v: Complex64) -> Self {
        Self { h, v }
    }

    pub fn intensity(&self) -> f64 {
        self.h.norm_sqr() + self.v.norm_sqr()
    }

    /// Inner product `<self|other>`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.h.conj() * other.h + self.v.conj() * other.v
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.intensity().sqrt();
        if norm < 1e-15 {
            return Err(Error::ZeroStateVector);
        }
        Ok(Self::new(self.h / norm, self.v / norm))
    }

    pub fn apply(&self, m: &Mat2) -> Self {
        let out = m.apply([self.h, self.v]);
        Self::new(out[0], out[1])
    }

    /// Phase-insensitive equality for normalized vectors.
    pub fn approx_eq_up_to_phase(&self, other: &Self, tolerance: f64) -> bool {
        (self.inner(other).norm() - 1.0).abs() <= tolerance
    }
}

pub fn ket_h() -> JonesVector {
    JonesVector::new(Complex64::ONE, Complex64::ZERO)
}

pub fn ket_v() -> JonesVector {
    JonesVector::new(Complex64::ZERO, Complex64::ONE)
}

/// Right-circular ket, the image of `|0>`.
pub fn ket_r() -> JonesVector {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    JonesVector::new(Complex64::new(s, 0.0), Complex64::new(0.0, -s))
}

/// Left-circular ket, the image of `|1>`; see the module notes for the
/// phase convention.
pub fn ket_l() -> JonesVector {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    JonesVector::new(Complex64::new(0.0, -s), Complex64::new(s, 0.0))
}

/// Map a qubit state to its polarization encoding.
pub fn encode_qubit(state: &PureQubit) -> JonesVector {
    let r = ket_r();
    let l = ket_l();
    JonesVector::new(
        state.amp0() * r.h + state.amp1() * l.h,
        state.amp0() * r.v + state.amp1() * l.v,
    )
}

fn rotation(angle_deg: f64) -> Mat2 {
    let (s, c) = angle_deg.to_radians().sin_cos();
    Mat2::new([
        [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
        [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
    ])
}

/// Half-wave plate with its fast axis at `angle_deg`. Maps linear
/// polarization at angle b to 2a - b.
pub fn hwp_matrix(angle_deg: f64) -> Mat2 {
    let (s2, c2) = (2.0 * angle_deg.to_radians()).sin_cos();
    Mat2::new([
        [Complex64::new(c2, 0.0), Complex64::new(s2, 0.0)],
        [Complex64::new(s2, 0.0), Complex64::new(-c2, 0.0)],
    ])
}

/// Quarter-wave plate with its fast axis at `angle_deg`; at 0 degrees it is
/// `diag(1, i)`.
pub fn qwp_matrix(angle_deg: f64) -> Mat2 {
    let retarder = Mat2::from_diag(Complex64::ONE, Complex64::I);
    rotation(angle_deg) * retarder * rotation(-angle_deg)
}

/// Preparation pipeline settings for one input state: the waveplates a
/// horizontally polarized beam crosses, in beam order.
#[derive(Debug, Clone, Copy)]
pub struct PreparationSettings {
    pub hwp2_deg: f64,
    pub qwp1_deg: f64,
    pub hwp3_deg: f64,
}

/// Waveplate settings that prepare the symmetric state `which`: HWP2 at
/// theta/2 - 45 deg sets the amplitude split, QWP1 at 45 deg moves it to
/// the circular basis, and HWP3 at -phi/4 dials in the azimuthal phase, so
/// cycling through the three states only touches HWP3.
pub fn preparation_settings(params: &TrineParams, which: usize) -> Result<PreparationSettings> {
    if which >= SYMMETRIC_PHASES.len() {
        return Err(Error::IndexOutOfBounds {
            index: which,
            len: SYMMETRIC_PHASES.len(),
        });
    }
    Ok(PreparationSettings {
        hwp2_deg: 0.5 * params.theta_deg() - 45.0,
        qwp1_deg: 45.0,
        hwp3_deg: -0.25 * SYMMETRIC_PHASES[which].to_degrees(),
    })
}

/// Send `|H>` through the preparation pipeline. The output equals the
/// symmetric state `which` in the circular encoding, up to global phase.
pub fn prepare_input(params: &TrineParams, which: usize) -> Result<JonesVector> {
    let s = preparation_settings(params, which)?;
    Ok(ket_h()
        .apply(&hwp_matrix(s.hwp2_deg))
        .apply(&qwp_matrix(s.qwp1_deg))
        .apply(&hwp_matrix(s.hwp3_deg)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategies::symmetric_states;
    use proptest::prelude::*;

    #[test]
    fn hwp_limits() {
        let m = hwp_matrix(0.0);
        assert!(m.max_abs_diff(&Mat2::from_real_diag(1.0, -1.0)) < 1e-15);

        let swap = Mat2::new([
            [Complex64::ZERO, Complex64::ONE],
            [Complex64::ONE, Complex64::ZERO],
        ]);
        assert!(hwp_matrix(45.0).max_abs_diff(&swap) < 1e-15);

        let out = ket_h().apply(&hwp_matrix(22.5));
        let diag = JonesVector::new(
            Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        );
        assert!((out.h - diag.h).norm() < 1e-15);
        assert!((out.v - diag.v).norm() < 1e-15);
    }

    #[test]
    fn two_quarter_waves_make_a_half_wave() {
        let q = qwp_matrix(0.0);
        let composed = q * q;
        // Equal up to a global phase.
        let h = hwp_matrix(0.0);
        let phase = composed.e[0][0] / h.e[0][0];
        assert!((phase.norm() - 1.0).abs() < 1e-15);
        assert!(composed.max_abs_diff(&h.scale_complex(phase)) < 1e-15);
    }

    #[test]
    fn qwp_at_45_circularizes_horizontal_light() {
        let out = ket_h().apply(&qwp_matrix(45.0));
        let r_weight = ket_r().inner(&out).norm();
        let l_weight = ket_l().inner(&out).norm();
        assert!((r_weight - 1.0).abs() < 1e-14 || (l_weight - 1.0).abs() < 1e-14);
    }

    #[test]
    fn circular_kets_are_orthonormal() {
        assert!((ket_r().intensity() - 1.0).abs() < 1e-15);
        assert!((ket_l().intensity() - 1.0).abs() < 1e-15);
        assert!(ket_r().inner(&ket_l()).norm() < 1e-15);
    }

    #[test]
    fn preparation_at_theta_zero_is_right_circular() {
        let params = TrineParams::new(0.0).unwrap();
        for which in 0..3 {
            let out = prepare_input(&params, which).unwrap();
            assert!((ket_r().inner(&out).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn preparation_at_45_with_zero_phase_is_linear() {
        let params = TrineParams::new(45.0).unwrap();
        let out = prepare_input(&params, 0).unwrap();
        // Equal circular weights.
        assert!((ket_r().inner(&out).norm_sqr() - 0.5).abs() < 1e-12);
        // Zero relative phase between the circular components means linear
        // polarization: H and V amplitudes in phase (or opposed).
        let rel = out.v / out.h;
        assert!(rel.im.abs() < 1e-12, "polarization is elliptical: {rel}");
    }

    #[test]
    fn preparation_at_30_sets_weight_and_phase() {
        let params = TrineParams::new(30.0).unwrap();
        let out = prepare_input(&params, 1).unwrap();
        let a_r = ket_r().inner(&out);
        let a_l = ket_l().inner(&out);
        assert!((a_r.norm_sqr() - 0.75).abs() < 1e-12);
        let rel_phase = (a_l / a_r).arg();
        assert!((rel_phase - 2.0 * std::f64::consts::PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn preparation_matches_encoded_states_exactly() {
        // Independent route: multiply the pipeline matrices against the
        // direct circular-basis encoding of the target kets.
        for k in 0..10 {
            let params = TrineParams::new(5.0 * k as f64).unwrap();
            let ensemble = symmetric_states(&params);
            for which in 0..3 {
                let prepared = prepare_input(&params, which).unwrap();
                let encoded = encode_qubit(ensemble.state(which));
                assert!(
                    prepared.approx_eq_up_to_phase(&encoded, 1e-12),
                    "theta {} state {which}: overlap {}",
                    params.theta_deg(),
                    prepared.inner(&encoded).norm()
                );
            }
        }
    }

    #[test]
    fn preparation_rejects_bad_index() {
        let params = TrineParams::new(10.0).unwrap();
        assert!(matches!(
            prepare_input(&params, 3),
            Err(Error::IndexOutOfBounds { index: 3, len: 3 })
        ));
    }

    proptest! {
        #[test]
        fn waveplates_are_unitary(angle in -360.0f64..360.0) {
            prop_assert!(hwp_matrix(angle).unitarity_deviation() < 1e-12);
            prop_assert!(qwp_matrix(angle).unitarity_deviation() < 1e-12);
        }

        #[test]
        fn hwp_maps_linear_to_mirrored_linear(a in 0.0f64..90.0, b in 0.0f64..180.0) {
            let input = JonesVector::new(
                Complex64::new(b.to_radians().cos(), 0.0),
                Complex64::new(b.to_radians().sin(), 0.0),
            );
            let out = input.apply(&hwp_matrix(a));
            let expect_angle = (2.0 * a - b).to_radians();
            let expected = JonesVector::new(
                Complex64::new(expect_angle.cos(), 0.0),
                Complex64::new(expect_angle.sin(), 0.0),
            );
            prop_assert!(out.approx_eq_up_to_phase(&expected, 1e-12));
        }
    }
}
