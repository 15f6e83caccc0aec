use std::path::PathBuf;

use nvholo_core::linalg::StateVector;
use nvholo_core::model::{Carriers, FourLevelModel, FourLevelParams, LabFrameModel};
use nvholo_core::propagation::propagate_state;
use nvholo_core::scenario::{ResolvedModel, ScenarioConfig};

fn oracle_config() -> ScenarioConfig {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs/rwa_oracle.json");
    ScenarioConfig::load(&path).unwrap()
}

/// Worst and final `|⟨ψ_rwa|ψ_lab⟩|²` along the run, with the lab state taken
/// to the interaction picture.
fn overlap(params: &FourLevelParams, carriers: Carriers, steps: usize) -> (f64, f64) {
    let cfg = oracle_config();
    let grid = cfg.time_grid(&params.schedule).unwrap().with_steps(steps);
    let psi0 = StateVector::basis(4, 0);
    let lab0 = carriers.to_lab(params, grid.t0(), &psi0);
    let lab = propagate_state(&LabFrameModel { params: params.clone(), carriers }, &lab0, &grid).unwrap();
    assert!(lab.stability.ok);
    let rwa = propagate_state(&FourLevelModel::new(params.clone()), &psi0, &grid).unwrap();
    let f = |k: usize| {
        let moved = carriers.to_interaction(params, grid.time(k), &lab.states[k]);
        moved.inner(&rwa.states[k]).norm_sqr()
    };
    let worst = (0..=steps).step_by(steps / 400).map(f).fold(1.0, f64::min);
    (worst, f(steps))
}

#[test]
fn lab_frame_run_reduces_to_the_four_level_model() {
    let cfg = oracle_config();
    let ResolvedModel::LabOracle(params, carriers) = cfg.resolve_model().unwrap() else {
        panic!("rwa_oracle.json must use the lab_oracle model");
    };
    assert!(carriers.counter_rotating);
    let (nu1, nu2) = carriers.tones(&params);
    let grid = cfg.time_grid(&params.schedule).unwrap();
    let peak_rabi = (0..=1000)
        .map(|k| params.schedule.drive(grid.t0() + (grid.tf() - grid.t0()) * k as f64 / 1000.0).omega)
        .fold(0.0, f64::max);
    assert!(nu1.min(nu2) / peak_rabi >= 100.0, "carrier/Rabi = {}", nu1.min(nu2) / peak_rabi);

    let (worst, last) = overlap(&params, carriers, cfg.grid.steps);
    assert!(worst >= 0.999, "worst overlap {worst}");
    assert!(last >= 0.999, "final overlap {last}");

    // Slower carriers grow the counter-rotating error roughly as 1/ν.
    let mut slower = carriers;
    slower.energies = carriers.energies.map(|e| 0.5 * e);
    let (worst_half, _) = overlap(&params, slower, cfg.grid.steps / 2);
    let ratio = (1.0 - worst_half) / (1.0 - worst);
    assert!((1.5..=8.0).contains(&ratio), "error ratio {ratio}");
}
