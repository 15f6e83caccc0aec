//! Nine-level ³A₂ ⊕ ³E model of the NV center.
//!
//! The two pump tones and the two Stokes tones couple every transition their
//! polarization allows, not only the four-level ones. The rotating frame
//! puts the ground m_s = ±1 pair at zero, `A₁` at `Δ₁`, `A₂` at `-Δ₂` and
//! the remaining excited states in the frame of the first tone; couplings
//! that are off-resonant keep explicit beat phases. Only counter-rotating
//! terms are dropped.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{Frame, HamiltonianModel};
use crate::error::ModelError;
use crate::linalg::{ComplexMatrix, C64};
use crate::pulse::{pump_stokes, PulseSchedule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NineState {
    /// Ground m_s = -1, the four-level `|1⟩`.
    GroundMinus,
    /// Ground m_s = +1, the four-level `|2⟩`.
    GroundPlus,
    GroundZero,
    /// Four-level `|3⟩`.
    A1,
    /// Four-level `|4⟩`.
    A2,
    /// Spin-±1 E doublet.
    Ex,
    Ey,
    /// Spin-0 E' doublet.
    ExPrime,
    EyPrime,
}

impl NineState {
    pub const ALL: [NineState; 9] = [
        NineState::GroundMinus,
        NineState::GroundPlus,
        NineState::GroundZero,
        NineState::A1,
        NineState::A2,
        NineState::Ex,
        NineState::Ey,
        NineState::ExPrime,
        NineState::EyPrime,
    ];

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|&s| s == self).unwrap()
    }

    pub fn is_ground(self) -> bool {
        matches!(
            self,
            NineState::GroundMinus | NineState::GroundPlus | NineState::GroundZero
        )
    }

    pub fn label(self) -> &'static str {
        match self {
            NineState::GroundMinus => "ms_minus1",
            NineState::GroundPlus => "ms_plus1",
            NineState::GroundZero => "ms_0",
            NineState::A1 => "A1",
            NineState::A2 => "A2",
            NineState::Ex => "Ex",
            NineState::Ey => "Ey",
            NineState::ExPrime => "Ex_prime",
            NineState::EyPrime => "Ey_prime",
        }
    }

    /// Indices of `|1⟩, |2⟩, |3⟩, |4⟩` inside the nine-level basis.
    pub fn four_level_indices() -> [usize; 4] {
        [
            NineState::GroundMinus.index(),
            NineState::GroundPlus.index(),
            NineState::A1.index(),
            NineState::A2.index(),
        ]
    }
}

/// Polarization labels. Which label a tone carries is metadata; the coupling
/// topology is what the model enforces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarization {
    SigmaMinus,
    SigmaPlus,
    X,
    Y,
}

/// Polarization of both pump tones.
pub const PUMP_POLARIZATION: Polarization = Polarization::SigmaMinus;
/// Polarization of both Stokes tones.
pub const STOKES_POLARIZATION: Polarization = Polarization::SigmaPlus;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DipoleEntry {
    pub ground: NineState,
    pub excited: NineState,
    pub polarization: Polarization,
    pub allowed: bool,
    /// Relative complex dipole strength, `[re, im]` when serialized.
    pub strength: C64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DipoleTable {
    pub entries: Vec<DipoleEntry>,
}

/// The transitions the selection rules allow, as `(ground, excited, polarization)`.
fn allowed_pattern() -> [(NineState, NineState, Polarization); 10] {
    use NineState::*;
    [
        (GroundMinus, A1, PUMP_POLARIZATION),
        (GroundMinus, A2, PUMP_POLARIZATION),
        (GroundPlus, A1, STOKES_POLARIZATION),
        (GroundPlus, A2, STOKES_POLARIZATION),
        (GroundPlus, Ex, PUMP_POLARIZATION),
        (GroundPlus, Ey, PUMP_POLARIZATION),
        (GroundMinus, Ex, STOKES_POLARIZATION),
        (GroundMinus, Ey, STOKES_POLARIZATION),
        (GroundZero, EyPrime, Polarization::X),
        (GroundZero, ExPrime, Polarization::Y),
    ]
}

impl DipoleTable {
    /// Equal magnitudes everywhere; `|1⟩ ↔ A₂` carries the sign that makes
    /// the four-level reduction match the paired-tone coupling structure.
    pub fn nv_default() -> Self {
        let entries = allowed_pattern()
            .into_iter()
            .map(|(ground, excited, polarization)| {
                let sign = if ground == NineState::GroundMinus && excited == NineState::A2 {
                    -1.0
                } else {
                    1.0
                };
                DipoleEntry {
                    ground,
                    excited,
                    polarization,
                    allowed: true,
                    strength: C64::new(sign, 0.0),
                }
            })
            .collect();
        Self { entries }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let pattern: HashSet<_> = allowed_pattern().into_iter().collect();
        let mut seen = HashSet::new();
        for e in &self.entries {
            if !e.ground.is_ground() || e.excited.is_ground() {
                return Err(ModelError::SelectionRule(format!(
                    "{} -> {} is not a ground-to-excited transition",
                    e.ground.label(),
                    e.excited.label()
                )));
            }
            let key = (e.ground, e.excited, e.polarization);
            if !seen.insert(key) {
                return Err(ModelError::SelectionRule(format!(
                    "duplicate entry {} -> {} ({:?})",
                    e.ground.label(),
                    e.excited.label(),
                    e.polarization
                )));
            }
            if e.allowed && !pattern.contains(&key) {
                return Err(ModelError::SelectionRule(format!(
                    "{} -> {} with {:?} polarization is forbidden",
                    e.ground.label(),
                    e.excited.label(),
                    e.polarization
                )));
            }
            if !(e.strength.re.is_finite() && e.strength.im.is_finite()) {
                return Err(ModelError::SelectionRule("non-finite dipole strength".into()));
            }
        }
        for key in pattern {
            let present = self
                .entries
                .iter()
                .any(|e| e.allowed && (e.ground, e.excited, e.polarization) == key);
            if !present {
                return Err(ModelError::SelectionRule(format!(
                    "allowed transition {} -> {} ({:?}) is missing",
                    key.0.label(),
                    key.1.label(),
                    key.2
                )));
            }
        }
        Ok(())
    }
}

/// Fine-structure energies, rad/µs. Excited energies share an arbitrary
/// common zero; the optical offset cancels against the tone frequencies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FineStructure {
    /// Ground m_s = 0 sits this far below m_s = ±1.
    pub ground_zero_field_splitting: f64,
    pub a1: f64,
    pub a2: f64,
    pub ex: f64,
    pub ey: f64,
    pub ex_prime: f64,
    pub ey_prime: f64,
}

impl FineStructure {
    pub fn excited_energy(&self, state: NineState) -> Option<f64> {
        match state {
            NineState::A1 => Some(self.a1),
            NineState::A2 => Some(self.a2),
            NineState::Ex => Some(self.ex),
            NineState::Ey => Some(self.ey),
            NineState::ExPrime => Some(self.ex_prime),
            NineState::EyPrime => Some(self.ey_prime),
            _ => None,
        }
    }

    /// Excited-state energies multiplied by `factor` (ground splitting kept).
    pub fn scaled_excited(&self, factor: f64) -> Self {
        Self {
            a1: self.a1 * factor,
            a2: self.a2 * factor,
            ex: self.ex * factor,
            ey: self.ey * factor,
            ex_prime: self.ex_prime * factor,
            ey_prime: self.ey_prime * factor,
            ..*self
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NineLevelParams {
    pub fine_structure: FineStructure,
    pub dipoles: DipoleTable,
    pub delta1: f64,
    pub delta2: f64,
    pub schedule: PulseSchedule,
}

struct Tone {
    freq: f64,
    polarization: Polarization,
    /// `(i/2) × sign × Ω_tone(t)`.
    coefficient: C64,
}

impl NineLevelParams {
    pub fn new(
        fine_structure: FineStructure,
        dipoles: DipoleTable,
        delta1: f64,
        delta2: f64,
        schedule: PulseSchedule,
    ) -> Result<Self, ModelError> {
        dipoles.validate()?;
        Ok(Self {
            fine_structure,
            dipoles,
            delta1,
            delta2,
            schedule,
        })
    }

    /// `(ν₁, ν₂)`: tone frequencies relative to the optical offset. Pump and
    /// Stokes tones share them.
    pub fn tone_frequencies(&self) -> (f64, f64) {
        (
            self.fine_structure.a1 - self.delta1,
            self.fine_structure.a2 + self.delta2,
        )
    }

    fn frame_frequency(&self, state: NineState) -> f64 {
        let (nu1, nu2) = self.tone_frequencies();
        match state {
            s if s.is_ground() => 0.0,
            NineState::A2 => nu2,
            _ => nu1,
        }
    }

    /// Frame diagonal of the undriven Hamiltonian.
    pub fn detunings(&self) -> [f64; 9] {
        let mut d = [0.0; 9];
        for s in NineState::ALL {
            d[s.index()] = match s {
                NineState::GroundZero => -self.fine_structure.ground_zero_field_splitting,
                s if s.is_ground() => 0.0,
                s => self.fine_structure.excited_energy(s).unwrap() - self.frame_frequency(s),
            };
        }
        d
    }

    fn tones(&self, t: f64) -> [Tone; 4] {
        let (pump, stokes) = pump_stokes(t, &self.schedule);
        let scales = &self.schedule.tones;
        let (nu1, nu2) = self.tone_frequencies();
        let half_i = C64::new(0.0, 0.5);
        [
            Tone {
                freq: nu1,
                polarization: PUMP_POLARIZATION,
                coefficient: half_i * pump * scales.pump1,
            },
            Tone {
                freq: nu2,
                polarization: PUMP_POLARIZATION,
                coefficient: -half_i * pump * scales.pump2,
            },
            Tone {
                freq: nu1,
                polarization: STOKES_POLARIZATION,
                coefficient: -half_i * stokes * scales.stokes1,
            },
            Tone {
                freq: nu2,
                polarization: STOKES_POLARIZATION,
                coefficient: -half_i * stokes * scales.stokes2,
            },
        ]
    }
}

pub fn nine_level_h(t: f64, params: &NineLevelParams) -> ComplexMatrix {
    let mut h = ComplexMatrix::from_real_diagonal(&params.detunings());
    let tones = params.tones(t);
    for entry in params.dipoles.entries.iter().filter(|e| e.allowed) {
        let (g, e) = (entry.ground.index(), entry.excited.index());
        let frame = params.frame_frequency(entry.excited) - params.frame_frequency(entry.ground);
        for tone in tones.iter().filter(|tone| tone.polarization == entry.polarization) {
            let beat = C64::from_polar(1.0, (tone.freq - frame) * t);
            h[(g, e)] += tone.coefficient * entry.strength * beat;
        }
        h[(e, g)] = h[(g, e)].conj();
    }
    h
}

#[derive(Clone, Debug)]
pub struct NineLevelModel {
    pub params: NineLevelParams,
}

impl HamiltonianModel for NineLevelModel {
    fn dim(&self) -> usize {
        9
    }

    fn frame(&self) -> Frame {
        Frame::RotatingWithBeats
    }

    fn hamiltonian(&self, t: f64) -> ComplexMatrix {
        nine_level_h(t, &self.params)
    }
}
