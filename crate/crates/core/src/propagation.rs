//! Time-dependent Schrödinger propagation and the adiabatic dark-subspace
//! holonomy.
//!
//! Every step applies `exp(-i H(t_mid) dt)`, so states and propagators stay
//! unitary to the accuracy of the exponential regardless of step size.
//! Accuracy is second order in `dt`.

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{PropagationError, PulseError};
use crate::grid::TimeGrid;
use crate::linalg::{expm_skew, polar_unitary_2x2, unitarity_defect, ComplexMatrix, StateVector, C64, NORM_TOL};
use crate::model::{DarkFrame, HamiltonianModel};
use crate::pulse::PulseSchedule;

/// Largest `dt · ‖H‖` considered well resolved.
pub const STABILITY_LIMIT: f64 = 0.1;
/// Largest accepted unitarity defect of one dark-frame overlap step.
pub const FRAME_STEP_TOL: f64 = 0.1;

/// Resolution check collected while stepping.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub dt: f64,
    /// Largest 1-norm of `H` seen at the step midpoints.
    pub max_norm: f64,
    pub ok: bool,
    /// Step count that would bring `dt · ‖H‖` to the limit.
    pub suggested_steps: usize,
}

impl StabilityReport {
    fn new(grid: &TimeGrid, max_norm: f64) -> Self {
        let dt = grid.dt();
        let ok = dt * max_norm <= STABILITY_LIMIT;
        let span = grid.tf() - grid.t0();
        // Coarse grids can miss the peak of ‖H‖, so the suggestion carries 10% headroom.
        let suggested_steps =
            ((1.1 * span * max_norm / STABILITY_LIMIT).ceil() as usize).max(grid.steps());
        let report = Self {
            dt,
            max_norm,
            ok,
            suggested_steps,
        };
        if !ok {
            warn!(
                "time step {dt:.3e} us with |H| up to {max_norm:.3e} rad/us exceeds the stability guard {STABILITY_LIMIT}; use at least {suggested_steps} steps"
            );
        }
        report
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<StateVector>,
    pub stability: StabilityReport,
}

impl Trajectory {
    /// `|c_k(t)|` per sample, row-major in time.
    pub fn abs_amplitudes(&self) -> Vec<Vec<f64>> {
        self.states.iter().map(StateVector::abs_amplitudes).collect()
    }

    pub fn final_state(&self) -> &StateVector {
        self.states.last().expect("trajectory always holds the initial state")
    }

    /// Largest `|‖ψ(t)‖ - 1|` along the run.
    pub fn norm_drift(&self) -> f64 {
        self.states
            .iter()
            .map(|s| (s.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

fn step_unitaries<'a, M: HamiltonianModel>(
    model: &'a M,
    grid: &'a TimeGrid,
    max_norm: &'a mut f64,
) -> impl Iterator<Item = ComplexMatrix> + 'a {
    let dt = grid.dt();
    (0..grid.steps()).map(move |k| {
        let h = model.hamiltonian(grid.midpoint(k));
        *max_norm = max_norm.max(h.one_norm());
        expm_skew(&h, dt)
    })
}

pub fn propagate_state<M: HamiltonianModel>(
    model: &M,
    psi0: &StateVector,
    grid: &TimeGrid,
) -> Result<Trajectory, PropagationError> {
    if psi0.dim() != model.dim() {
        return Err(PropagationError::Linalg(
            crate::error::LinalgError::DimensionMismatch {
                expected: model.dim(),
                got: psi0.dim(),
            },
        ));
    }
    if !psi0.is_normalized(NORM_TOL) {
        return Err(PropagationError::NotNormalized(psi0.norm()));
    }
    let mut max_norm = 0.0;
    let mut states = Vec::with_capacity(grid.steps() + 1);
    states.push(psi0.clone());
    let mut psi = psi0.clone();
    for u in step_unitaries(model, grid, &mut max_norm) {
        psi = u.apply(&psi);
        states.push(psi.clone());
    }
    Ok(Trajectory {
        times: grid.times(),
        states,
        stability: StabilityReport::new(grid, max_norm),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Propagator {
    pub unitary: ComplexMatrix,
    pub stability: StabilityReport,
}

/// `U(tf, t0)` as the time-ordered product of step exponentials.
pub fn propagate_unitary<M: HamiltonianModel>(
    model: &M,
    grid: &TimeGrid,
) -> Result<Propagator, PropagationError> {
    let mut max_norm = 0.0;
    let mut u = ComplexMatrix::identity(model.dim());
    for step in step_unitaries(model, grid, &mut max_norm) {
        u = &step * &u;
    }
    Ok(Propagator {
        unitary: u,
        stability: StabilityReport::new(grid, max_norm),
    })
}

/// Adiabatic gate from the dark-subspace transport.
#[derive(Clone, Debug, PartialEq)]
pub struct DarkGate {
    /// Gate on `{|1⟩, |2⟩}` in the bare basis, polar-projected.
    pub gate: ComplexMatrix,
    /// Transport matrix in the moving `(D₁, D₂)` frame.
    pub transport: ComplexMatrix,
    /// Largest unitarity defect of a single overlap step before projection.
    pub max_step_defect: f64,
}

fn overlap(a: &DarkFrame, b: &DarkFrame) -> ComplexMatrix {
    let (bra, ket) = (a.states(), b.states());
    ComplexMatrix::from_fn(2, |i, j| bra[i].inner(ket[j]))
}

/// Adiabatic propagator restricted to `span{D₁(t), D₂(t)}`.
///
/// The transport is the ordered product of step overlaps
/// `M_ij = ⟨D_i(t_{k+1})|D_j(t_k)⟩`, each re-unitarized. Dark energies vanish,
/// so there is no dynamical phase. The bare-basis gate is
/// `F(tf) G F(t0)†` restricted to the ground doublet, where `F` holds the
/// frame vectors as columns; it does not depend on the frame gauge.
pub fn dark_subspace_propagator(
    schedule: &PulseSchedule,
    grid: &TimeGrid,
) -> Result<DarkGate, PropagationError> {
    if schedule.omega0 <= 0.0 {
        return Err(PulseError::NonPositiveDetuning(schedule.omega0).into());
    }
    let mut prev = DarkFrame::at(schedule, grid.t0());
    let first = prev.clone();
    let mut transport = ComplexMatrix::identity(2);
    let mut max_step_defect: f64 = 0.0;
    for k in 1..=grid.steps() {
        let next = DarkFrame::at(schedule, grid.time(k));
        let m = overlap(&next, &prev);
        let defect = unitarity_defect(&m);
        if defect > FRAME_STEP_TOL {
            return Err(PropagationError::FrameDiscontinuity {
                index: k - 1,
                defect,
                tol: FRAME_STEP_TOL,
            });
        }
        max_step_defect = max_step_defect.max(defect);
        let step = polar_unitary_2x2(&m).ok_or(PropagationError::FrameDiscontinuity {
            index: k - 1,
            defect,
            tol: FRAME_STEP_TOL,
        })?;
        transport = &step * &transport;
        prev = next;
    }
    let last = prev;
    // Ground-doublet rows of F(tf) G F(t0)†.
    let gate_raw = ComplexMatrix::from_fn(2, |r, c| {
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                acc += last.states()[i].amplitudes()[r]
                    * transport[(i, j)]
                    * first.states()[j].amplitudes()[c].conj();
            }
        }
        acc
    });
    let gate = polar_unitary_2x2(&gate_raw).unwrap_or(gate_raw);
    Ok(DarkGate {
        gate,
        transport,
        max_step_defect,
    })
}

/// Frame vector at `t` with its phase aligned so `⟨reference|v⟩` is real
/// and positive.
fn aligned(reference: &StateVector, v: StateVector) -> StateVector {
    let ov = reference.inner(&v);
    if ov.norm() == 0.0 {
        return v;
    }
    v.scale(ov.conj() / ov.norm())
}

/// `⟨D₂(t)|∂_t|D₁(t)⟩` by a symmetric difference with step `h`, after
/// aligning the phases of the shifted `D₁` to `D₁(t)`.
pub fn nonadiabatic_coupling(schedule: &PulseSchedule, t: f64, h: f64) -> C64 {
    let here = DarkFrame::at(schedule, t);
    let plus = aligned(&here.d1, DarkFrame::at(schedule, t + h).d1);
    let minus = aligned(&here.d1, DarkFrame::at(schedule, t - h).d1);
    let derivative = plus.sub(&minus).scale(C64::new(0.5 / h, 0.0));
    here.d2.inner(&derivative)
}
