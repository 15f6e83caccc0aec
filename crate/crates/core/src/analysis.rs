//! Qubit-gate extraction, operator fidelity and gate reports.

use serde::{Deserialize, Serialize};

use crate::error::{AnalysisError, LinalgError};
use crate::grid::TimeGrid;
use crate::linalg::{polar_unitary_2x2, unitarity_defect, ComplexMatrix, C64};
use crate::model::{
    d_vector, ideal_gate, minus_d_vector, FourLevelModel, FourLevelParams, NineLevelModel,
    NineLevelParams,
};
use crate::propagation::{dark_subspace_propagator, propagate_unitary, StabilityReport};
use crate::pulse::{geometric_phase, path_angles, principal_angle, PulseSchedule, DEFAULT_PATH_SAMPLES};

/// Largest unitarity defect accepted for gate inputs.
pub const GATE_UNITARY_TOL: f64 = 1e-6;
/// Off-diagonal magnitude in the `|±D⟩` basis above which the phase
/// estimate is flagged.
pub const EIGENBASIS_FLAG: f64 = 0.05;

#[derive(Clone, Debug, PartialEq)]
pub struct QubitGate {
    /// Block of the full propagator on the qubit rows and columns.
    pub raw: ComplexMatrix,
    /// Nearest unitary to `raw`.
    pub projected: ComplexMatrix,
    /// `1 - mean column norm²` of the raw block.
    pub leakage: f64,
    /// Unitarity defect of the raw block.
    pub projection_defect: f64,
}

fn check_unitary(u: &ComplexMatrix) -> Result<(), AnalysisError> {
    let defect = unitarity_defect(u);
    if defect > GATE_UNITARY_TOL {
        return Err(LinalgError::NotUnitary {
            defect,
            tol: GATE_UNITARY_TOL,
        }
        .into());
    }
    Ok(())
}

pub fn extract_qubit_gate(
    u_full: &ComplexMatrix,
    qubit: (usize, usize),
) -> Result<QubitGate, AnalysisError> {
    let dim = u_full.dim();
    let (a, b) = qubit;
    if a == b || a >= dim || b >= dim {
        return Err(AnalysisError::BadIndices(a, b, dim));
    }
    check_unitary(u_full)?;
    let raw = u_full.principal_block(&[a, b]);
    let col_norm2 = |c: usize| raw.column(c).norm().powi(2);
    let leakage = (1.0 - 0.5 * (col_norm2(0) + col_norm2(1))).max(0.0);
    let projected = polar_unitary_2x2(&raw).unwrap_or_else(|| raw.clone());
    Ok(QubitGate {
        projection_defect: unitarity_defect(&raw),
        raw,
        projected,
        leakage,
    })
}

/// `|Tr(U_ideal† U_actual)| / 2`.
pub fn operator_fidelity(ideal: &ComplexMatrix, actual: &ComplexMatrix) -> f64 {
    assert!(ideal.dim() == 2 && actual.dim() == 2, "operator fidelity is defined on 2x2 gates");
    (&ideal.adjoint() * actual).trace().norm() / 2.0
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseEstimate {
    pub gamma: f64,
    /// Largest off-diagonal magnitude of the gate in the `|±D⟩` basis.
    pub off_diagonal: f64,
    pub flagged: bool,
}

/// Relative phase `arg⟨-D|G|-D⟩ - arg⟨D|G|D⟩`, wrapped to `(-π, π]`.
pub fn propagation_phase_gamma(
    gate: &ComplexMatrix,
    chi: f64,
    phi: f64,
) -> Result<PhaseEstimate, AnalysisError> {
    if gate.dim() != 2 {
        return Err(LinalgError::DimensionMismatch {
            expected: 2,
            got: gate.dim(),
        }
        .into());
    }
    check_unitary(gate)?;
    let d = d_vector(chi, phi);
    let md = minus_d_vector(chi, phi);
    let gd = gate.apply(&d);
    let gmd = gate.apply(&md);
    let on_d = d.inner(&gd);
    let on_md = md.inner(&gmd);
    let off_diagonal = md.inner(&gd).norm().max(d.inner(&gmd).norm());
    Ok(PhaseEstimate {
        gamma: principal_angle(on_md.arg() - on_d.arg()),
        off_diagonal,
        flagged: off_diagonal > EIGENBASIS_FLAG,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum GateModel {
    FourLevel(FourLevelParams),
    NineLevel(NineLevelParams),
}

impl GateModel {
    pub fn schedule(&self) -> &PulseSchedule {
        match self {
            GateModel::FourLevel(p) => &p.schedule,
            GateModel::NineLevel(p) => &p.schedule,
        }
    }

    fn detunings(&self) -> (f64, f64) {
        match self {
            GateModel::FourLevel(p) => (p.delta1, p.delta2),
            GateModel::NineLevel(p) => (p.delta1, p.delta2),
        }
    }

    fn kind(&self) -> ModelKind {
        match self {
            GateModel::FourLevel(_) => ModelKind::FourLevel,
            GateModel::NineLevel(_) => ModelKind::NineLevel,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GateScenario {
    pub name: String,
    pub model: GateModel,
    pub grid: TimeGrid,
    /// Samples used for the solid-angle quadrature over the same window.
    pub path_samples: usize,
    pub provenance: Option<String>,
}

impl GateScenario {
    pub fn new(name: impl Into<String>, model: GateModel, grid: TimeGrid) -> Self {
        Self {
            name: name.into(),
            model,
            grid,
            path_samples: DEFAULT_PATH_SAMPLES,
            provenance: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    FourLevel,
    NineLevel,
}

/// 2×2 complex matrix as rows of `[re, im]` pairs.
pub type MatrixRows = Vec<Vec<[f64; 2]>>;

pub fn matrix_rows(m: &ComplexMatrix) -> MatrixRows {
    m.rows()
        .into_iter()
        .map(|row| row.into_iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub fn matrix_from_rows(rows: &MatrixRows) -> Result<ComplexMatrix, LinalgError> {
    let rows: Vec<Vec<C64>> = rows
        .iter()
        .map(|r| r.iter().map(|&[re, im]| C64::new(re, im)).collect())
        .collect();
    ComplexMatrix::from_rows(&rows)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParameterEcho {
    pub chi_rad: f64,
    pub phi_rad: f64,
    #[serde(rename = "omega0_MHz_angular")]
    pub omega0: f64,
    #[serde(rename = "alpha_MHz_angular")]
    pub alpha: f64,
    #[serde(rename = "delta1_MHz_angular")]
    pub delta1: f64,
    #[serde(rename = "delta2_MHz_angular")]
    pub delta2: f64,
    pub envelope: String,
    pub amplitude_scale: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridEcho {
    pub t0_us: f64,
    pub tf_us: f64,
    pub steps: usize,
    pub dt_us: f64,
    pub path_samples: usize,
    pub stability: StabilityReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaEstimates {
    pub solid_angle: f64,
    /// Quadrature error estimate; absent when the sample count does not
    /// allow halving.
    pub solid_angle_error: Option<f64>,
    pub dark_subspace: f64,
    pub propagation_phase: f64,
    pub propagation_off_diagonal: f64,
    pub propagation_flagged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fidelities {
    /// Raw extracted block against the target.
    pub raw: f64,
    /// Polar-projected block against the target.
    pub projected: f64,
    /// Dark-subspace holonomy against the target.
    pub dark_subspace: f64,
    /// Raw extracted block against the dark-subspace holonomy.
    pub propagation_vs_dark_subspace: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateReport {
    pub scenario: String,
    pub model: ModelKind,
    pub parameters: ParameterEcho,
    pub grid: GridEcho,
    pub gate: MatrixRows,
    pub gate_projected: MatrixRows,
    pub dark_subspace_gate: MatrixRows,
    /// `ideal_gate(χ, -φ, γ_solid)`.
    pub target_gate: MatrixRows,
    pub leakage: f64,
    pub projection_defect: f64,
    pub propagator_unitarity_defect: f64,
    pub gamma: GammaEstimates,
    pub fidelity: Fidelities,
    #[serde(default)]
    pub provenance: Option<String>,
}

impl GateReport {
    /// Worst of the pairwise fidelities among target, holonomy and propagation.
    pub fn min_fidelity(&self) -> f64 {
        self.fidelity
            .raw
            .min(self.fidelity.dark_subspace)
            .min(self.fidelity.propagation_vs_dark_subspace)
    }
}

fn envelope_name(schedule: &PulseSchedule) -> String {
    match &schedule.envelope {
        crate::pulse::Envelope::Designed => "designed",
        crate::pulse::Envelope::GaussianStirap { .. } => "gaussian_stirap",
        crate::pulse::Envelope::CustomTable(_) => "custom_table",
    }
    .to_string()
}

pub fn build_gate_report(scenario: &GateScenario) -> Result<GateReport, AnalysisError> {
    build_gate_report_with_propagator(scenario).map(|(report, _)| report)
}

/// As [`build_gate_report`], also returning the full propagator `U(tf, t0)`.
pub fn build_gate_report_with_propagator(
    scenario: &GateScenario,
) -> Result<(GateReport, ComplexMatrix), AnalysisError> {
    build(scenario).map_err(|e| AnalysisError::Scenario {
        scenario: scenario.name.clone(),
        source: Box::new(e),
    })
}

fn build(scenario: &GateScenario) -> Result<(GateReport, ComplexMatrix), AnalysisError> {
    let schedule = scenario.model.schedule();
    let grid = &scenario.grid;
    let propagator = match &scenario.model {
        GateModel::FourLevel(p) => propagate_unitary(&FourLevelModel::new(p.clone()), grid)?,
        GateModel::NineLevel(p) => propagate_unitary(
            &NineLevelModel {
                params: p.clone(),
            },
            grid,
        )?,
    };
    let qubit = extract_qubit_gate(&propagator.unitary, (0, 1))?;
    let dark = dark_subspace_propagator(schedule, grid)?;

    let path_grid = TimeGrid::new(grid.t0(), grid.tf(), scenario.path_samples.saturating_sub(1).max(1))?;
    let solid = geometric_phase(&path_angles(schedule, &path_grid)?)?;

    // Pulses realise the dark state with the opposite azimuthal sign.
    let phi_eff = -schedule.phi;
    let chi = schedule.chi;
    let target = ideal_gate(chi, phi_eff, solid.gamma);
    let from_dark = propagation_phase_gamma(&dark.gate, chi, phi_eff)?;
    let from_prop = propagation_phase_gamma(&qubit.projected, chi, phi_eff)?;

    let (delta1, delta2) = scenario.model.detunings();
    let report = GateReport {
        scenario: scenario.name.clone(),
        model: scenario.model.kind(),
        parameters: ParameterEcho {
            chi_rad: schedule.chi,
            phi_rad: schedule.phi,
            omega0: schedule.omega0,
            alpha: schedule.alpha,
            delta1,
            delta2,
            envelope: envelope_name(schedule),
            amplitude_scale: schedule.amplitude_scale,
        },
        grid: GridEcho {
            t0_us: grid.t0(),
            tf_us: grid.tf(),
            steps: grid.steps(),
            dt_us: grid.dt(),
            path_samples: path_grid.steps() + 1,
            stability: propagator.stability,
        },
        gate: matrix_rows(&qubit.raw),
        gate_projected: matrix_rows(&qubit.projected),
        dark_subspace_gate: matrix_rows(&dark.gate),
        target_gate: matrix_rows(&target),
        leakage: qubit.leakage,
        projection_defect: qubit.projection_defect,
        propagator_unitarity_defect: unitarity_defect(&propagator.unitary),
        gamma: GammaEstimates {
            solid_angle: solid.gamma,
            solid_angle_error: Some(solid.error_estimate).filter(|e| e.is_finite()),
            dark_subspace: from_dark.gamma,
            propagation_phase: from_prop.gamma,
            propagation_off_diagonal: from_prop.off_diagonal,
            propagation_flagged: from_prop.flagged,
        },
        fidelity: Fidelities {
            raw: operator_fidelity(&target, &qubit.raw),
            projected: operator_fidelity(&target, &qubit.projected),
            dark_subspace: operator_fidelity(&target, &dark.gate),
            propagation_vs_dark_subspace: operator_fidelity(&dark.gate, &qubit.raw),
        },
        provenance: scenario.provenance.clone(),
    };
    Ok((report, propagator.unitary))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{pauli_x, pauli_z, ONE, ZERO};
    use std::f64::consts::PI;

    #[test]
    fn identity_extracts_cleanly() {
        let g = extract_qubit_gate(&ComplexMatrix::identity(9), (0, 1)).unwrap();
        assert_eq!(g.raw, ComplexMatrix::identity(2));
        assert_eq!(g.leakage, 0.0);
    }

    #[test]
    fn sigma_x_block() {
        let mut u = ComplexMatrix::identity(4);
        u[(0, 0)] = ZERO;
        u[(1, 1)] = ZERO;
        u[(0, 1)] = ONE;
        u[(1, 0)] = ONE;
        let g = extract_qubit_gate(&u, (0, 1)).unwrap();
        assert_eq!(g.raw, pauli_x());
        assert_eq!(g.leakage, 0.0);
    }

    #[test]
    fn bad_inputs_rejected() {
        let u = ComplexMatrix::identity(4);
        assert!(matches!(extract_qubit_gate(&u, (1, 1)), Err(AnalysisError::BadIndices(..))));
        assert!(matches!(extract_qubit_gate(&u, (0, 4)), Err(AnalysisError::BadIndices(..))));
        let twice = u.scale(C64::new(2.0, 0.0));
        assert!(matches!(
            extract_qubit_gate(&twice, (0, 1)),
            Err(AnalysisError::Linalg(LinalgError::NotUnitary { .. }))
        ));
    }

    #[test]
    fn leakage_from_column_norms() {
        // Rotate half of |1> into |3>.
        let (c, s) = (0.5f64.sqrt(), 0.5f64.sqrt());
        let mut u = ComplexMatrix::identity(3);
        u[(0, 0)] = C64::new(c, 0.0);
        u[(2, 0)] = C64::new(s, 0.0);
        u[(0, 2)] = C64::new(-s, 0.0);
        u[(2, 2)] = C64::new(c, 0.0);
        let g = extract_qubit_gate(&u, (0, 1)).unwrap();
        assert!((g.leakage - 0.25).abs() < 1e-15);
    }

    #[test]
    fn fidelity_examples() {
        let u = ideal_gate(0.3, 0.2, 1.0);
        assert!((operator_fidelity(&u, &u) - 1.0).abs() < 1e-15);
        let shifted = u.scale(C64::from_polar(1.0, 0.7));
        assert!((operator_fidelity(&u, &shifted) - 1.0).abs() < 1e-15);
        assert!(operator_fidelity(&ComplexMatrix::identity(2), &pauli_x()) < 1e-16);
        assert!((operator_fidelity(&pauli_z(), &u) - operator_fidelity(&u, &pauli_z())).abs() < 1e-15);
    }

    #[test]
    fn phase_inverts_ideal_gate() {
        let g = ideal_gate(0.4, -0.9, 1.234);
        let est = propagation_phase_gamma(&g, 0.4, -0.9).unwrap();
        assert!((est.gamma - 1.234).abs() < 1e-12);
        assert!(!est.flagged);
        let id = propagation_phase_gamma(&ComplexMatrix::identity(2), 0.4, -0.9).unwrap();
        assert!(id.gamma.abs() < 1e-15);
    }

    #[test]
    fn phase_flags_wrong_eigenbasis() {
        let est = propagation_phase_gamma(&pauli_x(), 0.0, 0.0).unwrap();
        assert!(est.flagged);
    }

    #[test]
    fn frozen_scenario_reports_identity() {
        let schedule = PulseSchedule::designed(-PI / 4.0, 0.0, 20.0, 1.0).with_amplitude_scale(0.0);
        let grid = TimeGrid::symmetric(8.0, 200).unwrap();
        let mut sc = GateScenario::new(
            "frozen",
            GateModel::FourLevel(FourLevelParams::dark_regime(schedule)),
            grid,
        );
        sc.path_samples = 201;
        let r = build_gate_report(&sc).unwrap();
        let gate = matrix_from_rows(&r.gate).unwrap();
        assert!(gate.max_diff(&ComplexMatrix::identity(2)) < 1e-12);
        assert!((r.fidelity.raw - 1.0).abs() < 1e-12);
        assert!(r.gamma.solid_angle.abs() < 1e-15);
        assert!(r.gamma.dark_subspace.abs() < 1e-12);
        assert!(r.gamma.propagation_phase.abs() < 1e-12);
    }

    #[test]
    fn errors_carry_scenario_name() {
        let schedule = PulseSchedule::designed(0.0, 0.0, 0.0, 1.0);
        let sc = GateScenario::new(
            "resonant",
            GateModel::FourLevel(FourLevelParams::dark_regime(schedule)),
            TimeGrid::symmetric(1.0, 10).unwrap(),
        );
        let err = build_gate_report(&sc).unwrap_err();
        assert!(err.to_string().starts_with("scenario `resonant`"));
    }
}
