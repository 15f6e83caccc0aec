mod common;

use std::f64::consts::{PI, SQRT_2};

use nvholo_core::linalg::{unitarity_defect, StateVector, C64};
use nvholo_core::model::{dark_states, FourLevelModel, FourLevelParams, NineLevelModel};
use nvholo_core::propagation::{
    dark_subspace_propagator, nonadiabatic_coupling, propagate_state, propagate_unitary,
};
use nvholo_core::pulse::{pump_stokes, GaussianPulse, PulseSchedule};
use nvholo_core::TimeGrid;

fn fig3_model() -> FourLevelModel {
    FourLevelModel::new(common::fig3_params())
}

fn stirap_schedule(omega0: f64) -> PulseSchedule {
    PulseSchedule::gaussian_stirap(
        omega0,
        GaussianPulse { amplitude: 20.0, center: 1.5, width: 2.0 },
        GaussianPulse { amplitude: 20.0, center: -1.5, width: 2.0 },
    )
}

#[test]
fn propagator_columns_match_state_runs() {
    let model = fig3_model();
    let grid = TimeGrid::symmetric(8.0, 8000).unwrap();
    let u = propagate_unitary(&model, &grid).unwrap().unitary;
    for k in 0..4 {
        let traj = propagate_state(&model, &StateVector::basis(4, k), &grid).unwrap();
        assert!(traj.final_state().sub(&u.column(k)).norm() < 1e-9, "column {k}");
    }
}

#[test]
fn propagator_composes_over_split_windows() {
    let model = fig3_model();
    let full = propagate_unitary(&model, &TimeGrid::new(-8.0, 8.0, 16_000).unwrap()).unwrap();
    let a = propagate_unitary(&model, &TimeGrid::new(-8.0, 0.5, 8_500).unwrap()).unwrap();
    let b = propagate_unitary(&model, &TimeGrid::new(0.5, 8.0, 7_500).unwrap()).unwrap();
    let composed = &b.unitary * &a.unitary;
    assert!(composed.max_diff(&full.unitary) < 1e-8);
}

#[test]
fn nine_level_propagator_stays_unitary() {
    let params = common::nine_level_params(common::fig3_schedule());
    let model = NineLevelModel { params };
    let grid = TimeGrid::new(-0.05, 0.05, 2_000).unwrap();
    let prop = propagate_unitary(&model, &grid).unwrap();
    assert!(unitarity_defect(&prop.unitary) < 1e-10);
}

#[test]
fn midpoint_error_is_second_order() {
    let model = fig3_model();
    let psi0 = StateVector::basis(4, 0);
    let final_at = |steps: usize| {
        let grid = TimeGrid::symmetric(8.0, steps).unwrap();
        propagate_state(&model, &psi0, &grid).unwrap().final_state().clone()
    };
    let coarse_steps = 2_000;
    let fine_steps = coarse_steps * 10;
    let reference = final_at(fine_steps * 4);
    let e_coarse = final_at(coarse_steps).sub(&reference).norm();
    let e_fine = final_at(fine_steps).sub(&reference).norm();
    // Reference error contributes 1/16 of the fine error.
    let ratio = e_coarse / (e_fine * 16.0 / 15.0);
    assert!((100.0 / 3.0..=300.0).contains(&ratio), "error ratio over a decade = {ratio}");
}

#[test]
fn norm_is_preserved_on_long_runs() {
    let traj = propagate_state(&fig3_model(), &StateVector::basis(4, 0), &common::fig3_grid()).unwrap();
    assert!(traj.norm_drift() < 1e-10);
    assert!(traj.stability.ok);
    assert_eq!(traj.states.len(), 32_001);
}

#[test]
fn stability_guard_flags_coarse_grids() {
    let grid = TimeGrid::symmetric(8.0, 200).unwrap();
    let prop = propagate_unitary(&fig3_model(), &grid).unwrap();
    assert!(!prop.stability.ok);
    assert!(prop.stability.suggested_steps > 200);
    let fixed = grid.with_steps(prop.stability.suggested_steps);
    assert!(propagate_unitary(&fig3_model(), &fixed).unwrap().stability.ok);
}

#[test]
fn coupling_vanishes_for_designed_pulses() {
    // χ and φ are constant and D₁ carries only the overall phase e^{-iψ},
    // which the alignment removes.
    let s = common::fig3_schedule();
    for &t in &[-3.0, -0.5, 0.0, 0.7, 2.5] {
        assert!(nonadiabatic_coupling(&s, t, 1e-4).norm() < 1e-8, "t = {t}");
    }
}

#[test]
fn coupling_vanishes_at_zero_splitting_and_for_frozen_drive() {
    let s = stirap_schedule(0.0);
    for &t in &[-2.0, 0.0, 1.0] {
        assert!(nonadiabatic_coupling(&s, t, 1e-4).norm() < 1e-10);
    }
    let frozen = common::fig3_schedule().with_amplitude_scale(0.0);
    assert!(nonadiabatic_coupling(&frozen, 0.3, 1e-4).norm() < 1e-12);
}

/// Five-point derivative of `D₁` built from the closed-form dark states,
/// with each shifted sample phase-aligned to `D₁(t)`.
fn five_point_coupling(s: &PulseSchedule, t: f64, h: f64) -> C64 {
    let d = |tt: f64| {
        let (p, st) = pump_stokes(tt, s);
        dark_states(p, st, s.omega0).unwrap()
    };
    let (d1, d2) = d(t);
    let align = |v: StateVector| {
        let ov = d1.inner(&v);
        v.scale(ov.conj() / ov.norm())
    };
    let at = |k: f64| align(d(t + k * h).0);
    let deriv = at(-2.0)
        .sub(&at(-1.0).scale(C64::new(8.0, 0.0)))
        .add(&at(1.0).scale(C64::new(8.0, 0.0)))
        .sub(&at(2.0))
        .scale(C64::new(1.0 / (12.0 * h), 0.0));
    d2.inner(&deriv)
}

#[test]
fn gaussian_coupling_matches_closed_form_and_oracle() {
    let omega0 = 10.0;
    let s = stirap_schedule(omega0);
    for &t in &[-3.0, -1.0, 0.0, 0.5, 2.0] {
        let drive = s.drive(t);
        let theta = (drive.omega.powi(2) + 2.0 * omega0 * omega0).sqrt();
        let chi_dot = (-1.5 - 1.5) / 4.0 * drive.chi.sin() * drive.chi.cos();
        let closed = SQRT_2 * omega0 / theta * chi_dot;
        let got = nonadiabatic_coupling(&s, t, 1e-4);
        let oracle = five_point_coupling(&s, t, 1e-3);
        assert!(closed.abs() > 1e-3);
        assert!((got.re - closed).abs() <= 0.01 * closed.abs(), "t = {t}: {got} vs {closed}");
        assert!(got.im.abs() <= 0.01 * closed.abs());
        assert!((got - oracle).norm() <= 0.01 * oracle.norm(), "t = {t}: {got} vs {oracle}");
    }
}

#[test]
fn stirap_transfers_population() {
    let s = stirap_schedule(0.0);
    let (t0, tf) = s.default_window();
    let params = FourLevelParams::dark_regime(s);
    let grid = TimeGrid::new(t0, tf, 20_000).unwrap();
    let traj = propagate_state(&FourLevelModel::new(params), &StateVector::basis(4, 0), &grid).unwrap();
    let pop2 = traj.final_state().amplitudes()[1].norm_sqr();
    assert!(pop2 >= 0.99, "transfer {pop2}");
}

#[test]
fn slower_schedules_approach_the_holonomic_gate() {
    let mut previous = f64::INFINITY;
    for &alpha in &[4.0, 2.0, 1.0, 0.5] {
        let s = PulseSchedule::designed(-PI / 4.0, 0.0, 20.0, alpha);
        let grid = TimeGrid::symmetric(8.0 / alpha, (16_000.0 / alpha) as usize * 2).unwrap();
        let dark = dark_subspace_propagator(&s, &grid).unwrap().gate;
        let full = propagate_unitary(&FourLevelModel::new(FourLevelParams::dark_regime(s)), &grid)
            .unwrap()
            .unitary;
        let block = full.principal_block(&[0, 1]);
        let overlap = (&dark.adjoint() * &block).trace().norm() / 2.0;
        let infidelity = 1.0 - overlap;
        assert!(infidelity < previous, "alpha = {alpha}: {infidelity} !< {previous}");
        previous = infidelity;
    }
    assert!(previous < 1e-5);
}

#[test]
fn dark_transport_is_gauge_free_and_unitary() {
    let s = common::fig3_schedule();
    let g = dark_subspace_propagator(&s, &common::fig3_grid()).unwrap();
    assert!(unitarity_defect(&g.gate) < 1e-12);
    assert!(g.max_step_defect < 1e-6);
}
