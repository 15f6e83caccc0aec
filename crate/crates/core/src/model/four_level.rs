//! Excited-doublet four-level model in the interaction picture.
//!
//! Basis order: `|1⟩` (m_s = -1), `|2⟩` (m_s = +1), `|3⟩`, `|4⟩` (the two
//! excited A-states).

use serde::{Deserialize, Serialize};

use super::{Frame, HamiltonianModel};
use crate::linalg::{ComplexMatrix, C64, ZERO};
use crate::pulse::{pump_stokes, PulseSchedule};

/// The four Rabi frequencies at one instant, rad/µs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RabiValues {
    pub pump1: C64,
    pub pump2: C64,
    pub stokes1: C64,
    pub stokes2: C64,
}

impl RabiValues {
    /// Both pump tones share `pump`, both Stokes tones share `stokes`.
    pub fn uniform(pump: C64, stokes: C64) -> Self {
        Self {
            pump1: pump,
            pump2: pump,
            stokes1: stokes,
            stokes2: stokes,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourLevelParams {
    pub delta1: f64,
    pub delta2: f64,
    pub schedule: PulseSchedule,
}

/// Which dark-state-regime equality fails.
#[derive(Clone, Debug, PartialEq)]
pub enum RegimeViolation {
    Detunings { delta1: f64, delta2: f64 },
    DetuningVsOmega0 { delta: f64, omega0: f64 },
    PumpTones { pump1: f64, pump2: f64 },
    StokesTones { stokes1: f64, stokes2: f64 },
}

impl std::fmt::Display for RegimeViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Detunings { delta1, delta2 } => {
                write!(f, "Δ₁ = Δ₂ fails: Δ₁ = {delta1}, Δ₂ = {delta2}")
            }
            Self::DetuningVsOmega0 { delta, omega0 } => {
                write!(f, "Δ₁ = Δ₂ = ω₀ fails: Δ = {delta}, ω₀ = {omega0}")
            }
            Self::PumpTones { pump1, pump2 } => {
                write!(f, "Ω_p1 = Ω_p2 fails: tone scales {pump1} vs {pump2}")
            }
            Self::StokesTones { stokes1, stokes2 } => {
                write!(f, "Ω_s1 = Ω_s2 fails: tone scales {stokes1} vs {stokes2}")
            }
        }
    }
}

impl FourLevelParams {
    /// Dark-state working point `Δ₁ = Δ₂ = ω₀` with uniform tones.
    pub fn dark_regime(schedule: PulseSchedule) -> Self {
        Self {
            delta1: schedule.omega0,
            delta2: schedule.omega0,
            schedule,
        }
    }

    pub fn rabi(&self, t: f64) -> RabiValues {
        let (pump, stokes) = pump_stokes(t, &self.schedule);
        let tones = &self.schedule.tones;
        RabiValues {
            pump1: pump * tones.pump1,
            pump2: pump * tones.pump2,
            stokes1: stokes * tones.stokes1,
            stokes2: stokes * tones.stokes2,
        }
    }

    /// Every equality of the dark-state regime that does not hold exactly.
    pub fn regime_violations(&self) -> Vec<RegimeViolation> {
        let mut out = Vec::new();
        if self.delta1 != self.delta2 {
            out.push(RegimeViolation::Detunings {
                delta1: self.delta1,
                delta2: self.delta2,
            });
        } else if self.delta1 != self.schedule.omega0 {
            out.push(RegimeViolation::DetuningVsOmega0 {
                delta: self.delta1,
                omega0: self.schedule.omega0,
            });
        }
        let tones = &self.schedule.tones;
        if tones.pump1 != tones.pump2 {
            out.push(RegimeViolation::PumpTones {
                pump1: tones.pump1,
                pump2: tones.pump2,
            });
        }
        if tones.stokes1 != tones.stokes2 {
            out.push(RegimeViolation::StokesTones {
                stokes1: tones.stokes1,
                stokes2: tones.stokes2,
            });
        }
        out
    }
}

/// Interaction-picture Hamiltonian for explicit Rabi values.
pub fn four_level_matrix(delta1: f64, delta2: f64, rabi: &RabiValues) -> ComplexMatrix {
    let half_i = C64::new(0.0, 0.5);
    let mut h = ComplexMatrix::zeros(4);
    h[(0, 2)] = half_i * rabi.pump1;
    h[(0, 3)] = half_i * rabi.pump2;
    h[(1, 2)] = -half_i * rabi.stokes1;
    h[(1, 3)] = -half_i * rabi.stokes2;
    h[(2, 2)] = C64::new(delta1, 0.0);
    h[(3, 3)] = C64::new(-delta2, 0.0);
    for (r, c) in [(0, 2), (0, 3), (1, 2), (1, 3)] {
        h[(c, r)] = h[(r, c)].conj();
    }
    debug_assert_eq!(h[(0, 1)], ZERO);
    h
}

pub fn four_level_h(t: f64, params: &FourLevelParams) -> ComplexMatrix {
    four_level_matrix(params.delta1, params.delta2, &params.rabi(t))
}

#[derive(Clone, Debug)]
pub struct FourLevelModel {
    pub params: FourLevelParams,
}

impl FourLevelModel {
    pub fn new(params: FourLevelParams) -> Self {
        Self { params }
    }
}

impl HamiltonianModel for FourLevelModel {
    fn dim(&self) -> usize {
        4
    }

    fn frame(&self) -> Frame {
        Frame::Interaction
    }

    fn hamiltonian(&self, t: f64) -> ComplexMatrix {
        four_level_h(t, &self.params)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulse::ToneScales;
    use std::f64::consts::PI;

    #[test]
    fn drive_free_limit_is_diagonal() {
        let z = C64::new(0.0, 0.0);
        let h = four_level_matrix(10.0, 10.0, &RabiValues::uniform(z, z));
        assert_eq!(h, ComplexMatrix::from_real_diagonal(&[0.0, 0.0, 10.0, -10.0]));
    }

    #[test]
    fn pump_entry_layout() {
        let p = C64::new(3.0, 4.0);
        let z = C64::new(0.0, 0.0);
        let rabi = RabiValues {
            pump1: p,
            pump2: z,
            stokes1: z,
            stokes2: z,
        };
        let h = four_level_matrix(1.0, 2.0, &rabi);
        assert_eq!(h[(0, 2)], C64::new(0.0, 0.5) * p);
        assert_eq!(h[(2, 0)], -C64::new(0.0, 0.5) * p.conj());
        assert_eq!(h[(3, 3)], C64::new(-2.0, 0.0));
    }

    #[test]
    fn regime_violations_are_named() {
        let s = PulseSchedule::designed(-PI / 4.0, 0.0, 20.0, 1.0);
        let mut p = FourLevelParams::dark_regime(s.clone());
        assert!(p.regime_violations().is_empty());
        p.delta2 = 21.0;
        assert!(matches!(
            p.regime_violations()[0],
            RegimeViolation::Detunings { .. }
        ));
        let p = FourLevelParams::dark_regime(s.with_tones(ToneScales {
            pump2: 0.5,
            ..ToneScales::default()
        }));
        assert!(matches!(
            p.regime_violations()[0],
            RegimeViolation::PumpTones { .. }
        ));
    }
}
