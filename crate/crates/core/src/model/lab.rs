//! Lab-frame four-level Hamiltonian with explicit carriers, used only to
//! check the rotating-wave reduction.
//!
//! Each laser field is real, so every dipole entry carries both the
//! co-rotating part `(i/2) s Ω e^{+iνt}` (which survives the frame change)
//! and its counter-rotating partner `-(i/2) s Ω* e^{-iνt}`. Carriers are
//! desk-scale surrogates, not optical frequencies.

use serde::{Deserialize, Serialize};

use super::four_level::FourLevelParams;
use super::{Frame, HamiltonianModel};
use crate::linalg::{ComplexMatrix, StateVector, C64};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Carriers {
    /// Bare energies `ω₁…ω₄`, rad/µs.
    pub energies: [f64; 4],
    /// Keep the counter-rotating terms of the real fields.
    pub counter_rotating: bool,
}

impl Carriers {
    /// Pump tone frequencies `(ν_p1, ν_p2)` fixed by the detunings
    /// `Δ₁ = ω₃ - ω₁ - ν_p1` and `Δ₂ = ν_p2 + ω₁ - ω₄`. Stokes tones share
    /// these frequencies.
    pub fn tones(&self, params: &FourLevelParams) -> (f64, f64) {
        let [w1, _, w3, w4] = self.energies;
        (w3 - w1 - params.delta1, w4 - w1 + params.delta2)
    }

    /// Diagonal of the rotating-frame generator `H₀`.
    pub fn frame_energies(&self, params: &FourLevelParams) -> [f64; 4] {
        let [w1, w2, w3, w4] = self.energies;
        [w1, w2, w3 - params.delta1, w4 + params.delta2]
    }

    /// `e^{iH₀t}|ψ⟩`: lab-frame state to interaction picture.
    pub fn to_interaction(&self, params: &FourLevelParams, t: f64, lab: &StateVector) -> StateVector {
        let f = self.frame_energies(params);
        StateVector::new(
            lab.amplitudes()
                .iter()
                .zip(f)
                .map(|(a, e)| a * C64::from_polar(1.0, e * t))
                .collect(),
        )
    }

    /// `e^{-iH₀t}|ψ⟩`.
    pub fn to_lab(&self, params: &FourLevelParams, t: f64, state: &StateVector) -> StateVector {
        let f = self.frame_energies(params);
        StateVector::new(
            state
                .amplitudes()
                .iter()
                .zip(f)
                .map(|(a, e)| a * C64::from_polar(1.0, -e * t))
                .collect(),
        )
    }
}

pub fn lab_frame_h(t: f64, params: &FourLevelParams, carriers: &Carriers) -> ComplexMatrix {
    let rabi = params.rabi(t);
    let (nu1, nu2) = carriers.tones(params);
    let e1 = C64::from_polar(1.0, nu1 * t);
    let e2 = C64::from_polar(1.0, nu2 * t);
    // The pump pair carries the π phase difference between its two tones.
    let pump = rabi.pump1 * e1 - rabi.pump2 * e2;
    let stokes = rabi.stokes1 * e1 + rabi.stokes2 * e2;
    let half_i = C64::new(0.0, 0.5);
    let coupling = |amp: C64| {
        if carriers.counter_rotating {
            half_i * (amp - amp.conj())
        } else {
            half_i * amp
        }
    };
    let p = coupling(pump);
    let s = -coupling(stokes);

    let mut h = ComplexMatrix::from_real_diagonal(&carriers.energies);
    h[(0, 2)] = p;
    h[(0, 3)] = -p;
    h[(1, 2)] = s;
    h[(1, 3)] = s;
    for (r, c) in [(0, 2), (0, 3), (1, 2), (1, 3)] {
        h[(c, r)] = h[(r, c)].conj();
    }
    h
}

#[derive(Clone, Debug)]
pub struct LabFrameModel {
    pub params: FourLevelParams,
    pub carriers: Carriers,
}

impl HamiltonianModel for LabFrameModel {
    fn dim(&self) -> usize {
        4
    }

    fn frame(&self) -> Frame {
        Frame::LabOracle
    }

    fn hamiltonian(&self, t: f64) -> ComplexMatrix {
        lab_frame_h(t, &self.params, &self.carriers)
    }
}
