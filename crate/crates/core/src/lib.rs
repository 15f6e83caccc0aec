//! Simulator for holonomic single-qubit rotations driven through the
//! excited-state manifold of an NV center.

pub mod analysis;
pub mod error;
pub mod grid;
pub mod linalg;
pub mod model;
pub mod propagation;
pub mod pulse;
pub mod scenario;

pub use error::*;
pub use grid::TimeGrid;
pub use linalg::{ComplexMatrix, StateVector, C64};
pub use pulse::PulseSchedule;
