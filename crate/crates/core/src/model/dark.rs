//! Analytic dark and bright states of the four-level model in the
//! dark-state regime `Δ₁ = Δ₂ = ω₀`, uniform tones.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, SQRT_2};

use crate::error::ModelError;
use crate::linalg::{StateVector, C64, ZERO};
use crate::pulse::PulseSchedule;

fn ket(amps: [C64; 4]) -> StateVector {
    StateVector::new(amps.to_vec())
}

/// `(|D₁⟩, |D₂⟩)` for given pump/Stokes Rabi frequencies.
///
/// With no drive but `ω₀ > 0` the whole ground doublet is dark; the endpoint
/// convention then returns the `Ω_p → 0` limit, `|D₁⟩ = |1⟩` and
/// `|D₂⟩ = |B₁⟩ = -|2⟩`.
pub fn dark_states(
    pump: C64,
    stokes: C64,
    omega0: f64,
) -> Result<(StateVector, StateVector), ModelError> {
    let omega = pump.norm().hypot(stokes.norm());
    if omega == 0.0 {
        if omega0 == 0.0 {
            return Err(ModelError::DegenerateDarkStates);
        }
        let one = C64::new(1.0, 0.0);
        return Ok((ket([one, ZERO, ZERO, ZERO]), ket([ZERO, -one, ZERO, ZERO])));
    }
    let theta = (omega * omega + 2.0 * omega0 * omega0).sqrt();
    let d1 = ket([stokes.conj() / omega, pump.conj() / omega, ZERO, ZERO]);
    let excited = C64::new(0.0, omega / (SQRT_2 * theta));
    let bright = SQRT_2 * omega0 / theta;
    let d2 = ket([
        pump / omega * bright,
        -stokes / omega * bright,
        excited,
        -excited,
    ]);
    Ok((d1, d2))
}

/// `|B₁⟩ = (Ω_p|1⟩ - Ω_s|2⟩)/Ω`.
pub fn bright_state(pump: C64, stokes: C64) -> Result<StateVector, ModelError> {
    let omega = pump.norm().hypot(stokes.norm());
    if omega == 0.0 {
        return Err(ModelError::ZeroRabi);
    }
    Ok(ket([pump / omega, -stokes / omega, ZERO, ZERO]))
}

/// Dark frame built from a schedule's polar form, so it stays defined where
/// the envelope vanishes.
#[derive(Clone, Debug, PartialEq)]
pub struct DarkFrame {
    pub d1: StateVector,
    pub d2: StateVector,
}

impl DarkFrame {
    pub fn at(schedule: &PulseSchedule, t: f64) -> Self {
        let drive = schedule.drive(t);
        let (sc, cc) = drive.chi.sin_cos();
        let phi = schedule.phi;
        let d1_phase = C64::from_polar(1.0, -drive.psi);
        let b1_phase = C64::from_polar(1.0, drive.psi);
        let mix = if schedule.omega0 == 0.0 {
            FRAC_PI_2
        } else {
            drive.omega.atan2(SQRT_2 * schedule.omega0)
        };
        let (sm, cm) = mix.sin_cos();
        let d1 = ket([
            d1_phase * C64::from_polar(sc, phi),
            d1_phase * C64::from_polar(cc, -phi),
            ZERO,
            ZERO,
        ]);
        let excited = C64::new(0.0, sm * FRAC_1_SQRT_2);
        let d2 = ket([
            b1_phase * C64::from_polar(cc * cm, phi),
            b1_phase * C64::from_polar(-sc * cm, -phi),
            excited,
            -excited,
        ]);
        Self { d1, d2 }
    }

    pub fn states(&self) -> [&StateVector; 2] {
        [&self.d1, &self.d2]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{four_level_matrix, RabiValues};
    use crate::pulse::PulseSchedule;
    use std::f64::consts::PI;

    fn close(a: &StateVector, b: &StateVector, tol: f64) -> bool {
        a.sub(b).norm() <= tol
    }

    #[test]
    fn single_leg_limit() {
        let (d1, _) = dark_states(ZERO, C64::new(2.0, 0.0), 1.0).unwrap();
        assert!(close(&d1, &StateVector::basis(4, 0), 1e-15));
    }

    #[test]
    fn resonant_second_dark_state_is_excited_only() {
        let (_, d2) = dark_states(C64::new(3.0, 0.0), C64::new(3.0, 0.0), 0.0).unwrap();
        let s = FRAC_1_SQRT_2;
        let expected = ket([ZERO, ZERO, C64::new(0.0, s), C64::new(0.0, -s)]);
        assert!(close(&d2, &expected, 1e-15));
    }

    #[test]
    fn degenerate_inputs_rejected() {
        assert_eq!(
            dark_states(ZERO, ZERO, 0.0),
            Err(ModelError::DegenerateDarkStates)
        );
        assert_eq!(bright_state(ZERO, ZERO), Err(ModelError::ZeroRabi));
    }

    #[test]
    fn bright_state_examples() {
        let b = bright_state(C64::new(1.5, 0.0), ZERO).unwrap();
        assert!(close(&b, &StateVector::basis(4, 0), 1e-15));
        let b = bright_state(C64::new(2.0, 0.0), C64::new(2.0, 0.0)).unwrap();
        let s = C64::new(FRAC_1_SQRT_2, 0.0);
        assert!(close(&b, &ket([s, -s, ZERO, ZERO]), 1e-15));
    }

    #[test]
    fn zero_drive_convention_lies_in_kernel() {
        let (d1, d2) = dark_states(ZERO, ZERO, 5.0).unwrap();
        let h = four_level_matrix(5.0, 5.0, &RabiValues::uniform(ZERO, ZERO));
        assert_eq!(h.apply(&d1).norm(), 0.0);
        assert_eq!(h.apply(&d2).norm(), 0.0);
        assert!(d1.inner(&d2).norm() == 0.0);
    }

    #[test]
    fn frame_matches_closed_form() {
        let s = PulseSchedule::designed(0.3, 0.7, 20.0, 1.0);
        for &t in &[-2.0, -0.4, 0.0, 0.9, 3.0] {
            let (p, st) = crate::pulse::pump_stokes(t, &s);
            let (d1, d2) = dark_states(p, st, s.omega0).unwrap();
            let frame = DarkFrame::at(&s, t);
            assert!(close(&frame.d1, &d1, 1e-13), "t = {t}");
            assert!(close(&frame.d2, &d2, 1e-13), "t = {t}");
        }
    }

    #[test]
    fn frame_at_designed_endpoints() {
        let s = PulseSchedule::designed(-PI / 4.0, 0.0, 20.0, 1.0);
        let start = DarkFrame::at(&s, -1e3);
        let end = DarkFrame::at(&s, 1e3);
        // ψ runs from 0 to π, flipping the sign of both frame vectors.
        assert!(close(&start.d1, &end.d1.scale(C64::new(-1.0, 0.0)), 1e-14));
        assert!(close(&start.d2, &end.d2.scale(C64::new(-1.0, 0.0)), 1e-14));
    }
}
