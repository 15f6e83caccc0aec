//! Driven NV-center Hamiltonians and their analytic eigenstructure.

mod dark;
mod four_level;
mod gate;
mod lab;
mod nine_level;

pub use dark::{bright_state, dark_states, DarkFrame};
pub use four_level::{
    four_level_h, four_level_matrix, FourLevelModel, FourLevelParams, RabiValues, RegimeViolation,
};
pub use gate::{d_vector, ideal_gate, minus_d_vector, rotation_axis};
pub use lab::{lab_frame_h, Carriers, LabFrameModel};
pub use nine_level::{
    nine_level_h, DipoleEntry, DipoleTable, FineStructure, NineLevelModel, NineLevelParams,
    NineState, Polarization,
};

use serde::{Deserialize, Serialize};

use crate::linalg::ComplexMatrix;

/// Reference frame a generator is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    /// Rotating frame with all retained couplings static (the four-level RWA form).
    Interaction,
    /// Rotating frame in which off-resonant co-rotating couplings keep explicit beat phases.
    RotatingWithBeats,
    /// Bare lab frame with carriers and counter-rotating terms.
    LabOracle,
}

/// A time-indexed Hermitian generator `H(t)` in rad/µs.
pub trait HamiltonianModel: Sync {
    fn dim(&self) -> usize;

    fn frame(&self) -> Frame;

    fn hamiltonian(&self, t: f64) -> ComplexMatrix;
}

impl<M: HamiltonianModel + ?Sized> HamiltonianModel for &M {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn frame(&self) -> Frame {
        (**self).frame()
    }

    fn hamiltonian(&self, t: f64) -> ComplexMatrix {
        (**self).hamiltonian(t)
    }
}

/// Constant generator; handy for tests and reference runs.
#[derive(Clone, Debug)]
pub struct StaticModel {
    pub h: ComplexMatrix,
}

impl HamiltonianModel for StaticModel {
    fn dim(&self) -> usize {
        self.h.dim()
    }

    fn frame(&self) -> Frame {
        Frame::Interaction
    }

    fn hamiltonian(&self, _t: f64) -> ComplexMatrix {
        self.h.clone()
    }
}
