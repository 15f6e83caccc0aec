//! JSON scenario configuration. Every physical quantity carries its unit in
//! the key: `_MHz_angular` for angular frequencies (rad/µs), `_us` for
//! times, `_rad` for angles.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::grid::TimeGrid;
use crate::model::{
    Carriers, DipoleTable, FineStructure, FourLevelParams, NineLevelParams, NineState,
};
use crate::pulse::{EnvelopeTable, GaussianPulse, PulseSchedule, ToneScales};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelChoice {
    FourLevel,
    NineLevel,
    LabOracle,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianConfig {
    #[serde(rename = "amplitude_MHz_angular")]
    pub amplitude: f64,
    pub center_us: f64,
    pub width_us: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EnvelopeConfig {
    Designed,
    GaussianStirap {
        pump: GaussianConfig,
        stokes: GaussianConfig,
    },
    /// Constant pump and Stokes amplitudes; overrides `chi_rad`.
    Constant {
        #[serde(rename = "pump_MHz_angular")]
        pump: f64,
        #[serde(rename = "stokes_MHz_angular")]
        stokes: f64,
        #[serde(default)]
        psi_rad: f64,
    },
    /// Rows `[t_us, omega_MHz_angular, psi_rad]`.
    Table { rows: Vec<[f64; 3]> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToneScaleConfig {
    #[serde(default = "one")]
    pub pump1: f64,
    #[serde(default = "one")]
    pub pump2: f64,
    #[serde(default = "one")]
    pub stokes1: f64,
    #[serde(default = "one")]
    pub stokes2: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseConfig {
    pub envelope: EnvelopeConfig,
    #[serde(default)]
    pub chi_rad: f64,
    #[serde(default)]
    pub phi_rad: f64,
    #[serde(rename = "omega0_MHz_angular")]
    pub omega0: f64,
    #[serde(rename = "alpha_MHz_angular", default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default = "one")]
    pub amplitude_scale: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tone_scales: Option<ToneScaleConfig>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetuningConfig {
    #[serde(rename = "delta1_MHz_angular")]
    pub delta1: f64,
    #[serde(rename = "delta2_MHz_angular")]
    pub delta2: f64,
}

/// Nine-level energies. Every value is required for nine-level runs; they
/// are optional here only so a missing key can be reported by name.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FineStructureConfig {
    #[serde(rename = "ground_zero_field_splitting_MHz_angular")]
    pub ground_zero_field_splitting: Option<f64>,
    #[serde(rename = "A1_MHz_angular")]
    pub a1: Option<f64>,
    #[serde(rename = "A2_MHz_angular")]
    pub a2: Option<f64>,
    #[serde(rename = "Ex_MHz_angular")]
    pub ex: Option<f64>,
    #[serde(rename = "Ey_MHz_angular")]
    pub ey: Option<f64>,
    #[serde(rename = "Ex_prime_MHz_angular")]
    pub ex_prime: Option<f64>,
    #[serde(rename = "Ey_prime_MHz_angular")]
    pub ey_prime: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

impl FineStructureConfig {
    pub fn resolve(&self) -> Result<FineStructure, ConfigError> {
        let get = |v: Option<f64>, key: &str| {
            let value = v.ok_or_else(|| ConfigError::Invalid {
                key: format!("fine_structure.{key}"),
                message: "required for nine_level runs".into(),
            })?;
            finite(value, &format!("fine_structure.{key}"))
        };
        Ok(FineStructure {
            ground_zero_field_splitting: get(
                self.ground_zero_field_splitting,
                "ground_zero_field_splitting_MHz_angular",
            )?,
            a1: get(self.a1, "A1_MHz_angular")?,
            a2: get(self.a2, "A2_MHz_angular")?,
            ex: get(self.ex, "Ex_MHz_angular")?,
            ey: get(self.ey, "Ey_MHz_angular")?,
            ex_prime: get(self.ex_prime, "Ex_prime_MHz_angular")?,
            ey_prime: get(self.ey_prime, "Ey_prime_MHz_angular")?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CarrierConfig {
    #[serde(rename = "energies_MHz_angular")]
    pub energies: [f64; 4],
    #[serde(default = "yes")]
    pub counter_rotating: bool,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    /// Window start; the pulse default window when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0_us: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tf_us: Option<f64>,
    pub steps: usize,
    /// Samples for the solid-angle quadrature.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path_samples: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Trajectory or sweep table file name inside the output directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
    /// JSON report file name inside the output directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "Tolerances::default_dark_residual")]
    pub dark_residual: f64,
    #[serde(default = "Tolerances::default_fidelity")]
    pub fidelity: f64,
    #[serde(default = "Tolerances::default_endpoint_amplitude")]
    pub endpoint_amplitude: f64,
    #[serde(default = "Tolerances::default_excited_endpoint")]
    pub excited_endpoint: f64,
    #[serde(default = "Tolerances::default_transfer")]
    pub transfer: f64,
    #[serde(default = "Tolerances::default_coupling")]
    pub coupling: f64,
    #[serde(default = "Tolerances::default_numerics")]
    pub numerics: f64,
}

impl Tolerances {
    fn default_dark_residual() -> f64 {
        1e-12
    }
    fn default_fidelity() -> f64 {
        0.999
    }
    fn default_endpoint_amplitude() -> f64 {
        0.01
    }
    fn default_excited_endpoint() -> f64 {
        1e-3
    }
    fn default_transfer() -> f64 {
        0.99
    }
    fn default_coupling() -> f64 {
        1e-10
    }
    fn default_numerics() -> f64 {
        1e-8
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            dark_residual: Self::default_dark_residual(),
            fidelity: Self::default_fidelity(),
            endpoint_amplitude: Self::default_endpoint_amplitude(),
            excited_endpoint: Self::default_excited_endpoint(),
            transfer: Self::default_transfer(),
            coupling: Self::default_coupling(),
            numerics: Self::default_numerics(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    Alpha,
    Omega0,
    Steps,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub axis: SweepAxis,
    /// Points in the axis unit (`MHz_angular` for rates, plain count for steps).
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckDarkConfig {
    #[serde(default = "CheckDarkConfig::default_samples")]
    pub samples: usize,
}

impl CheckDarkConfig {
    fn default_samples() -> usize {
        1000
    }
}

impl Default for CheckDarkConfig {
    fn default() -> Self {
        Self {
            samples: Self::default_samples(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: String,
    pub model: ModelChoice,
    pub pulse: PulseConfig,
    /// `Δ₁, Δ₂`; both default to `ω₀`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detunings: Option<DetuningConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fine_structure: Option<FineStructureConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dipoles: Option<DipoleTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub carriers: Option<CarrierConfig>,
    pub grid: GridConfig,
    #[serde(default = "ScenarioConfig::default_initial_state")]
    pub initial_state: String,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check_dark: Option<CheckDarkConfig>,
}

fn finite(v: f64, key: &str) -> Result<f64, ConfigError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ConfigError::Invalid {
            key: key.into(),
            message: format!("must be finite, got {v}"),
        })
    }
}

fn invalid(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key: key.into(),
        message: message.into(),
    }
}

/// Model parameters resolved from a config.
#[derive(Clone, Debug, PartialEq)]
pub enum ResolvedModel {
    FourLevel(FourLevelParams),
    NineLevel(NineLevelParams),
    LabOracle(FourLevelParams, Carriers),
}

impl ResolvedModel {
    pub fn dim(&self) -> usize {
        match self {
            ResolvedModel::NineLevel(_) => 9,
            _ => 4,
        }
    }

    pub fn schedule(&self) -> &PulseSchedule {
        match self {
            ResolvedModel::FourLevel(p) | ResolvedModel::LabOracle(p, _) => &p.schedule,
            ResolvedModel::NineLevel(p) => &p.schedule,
        }
    }

    /// Column labels of the basis states.
    pub fn state_labels(&self) -> Vec<String> {
        match self {
            ResolvedModel::NineLevel(_) => {
                NineState::ALL.iter().map(|s| s.label().to_string()).collect()
            }
            _ => (1..=4).map(|k| format!("c{k}")).collect(),
        }
    }
}

impl ScenarioConfig {
    fn default_initial_state() -> String {
        "ms_minus1".into()
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }

    /// Checks that do not need the model built.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let p = &self.pulse;
        finite(p.chi_rad, "pulse.chi_rad")?;
        finite(p.phi_rad, "pulse.phi_rad")?;
        finite(p.omega0, "pulse.omega0_MHz_angular")?;
        if p.omega0 < 0.0 {
            return Err(invalid("pulse.omega0_MHz_angular", "must be non-negative"));
        }
        finite(p.amplitude_scale, "pulse.amplitude_scale")?;
        if matches!(p.envelope, EnvelopeConfig::Designed) {
            let alpha = p
                .alpha
                .ok_or_else(|| invalid("pulse.alpha_MHz_angular", "required for designed pulses"))?;
            if !(alpha.is_finite() && alpha > 0.0) {
                return Err(invalid("pulse.alpha_MHz_angular", "must be positive"));
            }
        }
        if let Some(d) = &self.detunings {
            finite(d.delta1, "detunings.delta1_MHz_angular")?;
            finite(d.delta2, "detunings.delta2_MHz_angular")?;
        }
        if self.grid.steps == 0 {
            return Err(invalid("grid.steps", "must be positive"));
        }
        match (self.grid.t0_us, self.grid.tf_us) {
            (Some(a), Some(b)) if !(a.is_finite() && b.is_finite() && b > a) => {
                return Err(invalid("grid.tf_us", "window must satisfy t0_us < tf_us"));
            }
            (Some(_), None) | (None, Some(_)) => {
                return Err(invalid("grid", "give both t0_us and tf_us or neither"));
            }
            _ => {}
        }
        if matches!(p.envelope, EnvelopeConfig::Constant { .. }) && self.grid.t0_us.is_none() {
            return Err(invalid("grid.t0_us", "constant envelopes need an explicit window"));
        }
        if let Some(s) = &self.sweep {
            if s.values.is_empty() {
                return Err(invalid("sweep.values", "sweep needs at least one point"));
            }
        }
        if self.model == ModelChoice::LabOracle && self.carriers.is_none() {
            return Err(invalid("carriers", "required for lab_oracle runs"));
        }
        Ok(())
    }

    pub fn schedule(&self) -> Result<PulseSchedule, ConfigError> {
        let p = &self.pulse;
        let alpha = p.alpha.unwrap_or(0.0);
        let mut schedule = match &p.envelope {
            EnvelopeConfig::Designed => PulseSchedule::designed(p.chi_rad, p.phi_rad, p.omega0, alpha),
            EnvelopeConfig::GaussianStirap { pump, stokes } => {
                let g = |c: &GaussianConfig, key: &str| -> Result<GaussianPulse, ConfigError> {
                    if !(c.width_us > 0.0 && c.amplitude >= 0.0) {
                        return Err(invalid(
                            &format!("pulse.envelope.{key}"),
                            "width_us must be positive and amplitude non-negative",
                        ));
                    }
                    Ok(GaussianPulse {
                        amplitude: c.amplitude,
                        center: c.center_us,
                        width: c.width_us,
                    })
                };
                let mut s = PulseSchedule::gaussian_stirap(p.omega0, g(pump, "pump")?, g(stokes, "stokes")?);
                s.phi = crate::pulse::principal_angle(p.phi_rad);
                s.alpha = alpha;
                s
            }
            EnvelopeConfig::Constant {
                pump,
                stokes,
                psi_rad,
            } => {
                let (t0, tf) = (self.grid.t0_us.unwrap_or(0.0), self.grid.tf_us.unwrap_or(1.0));
                let omega = pump.hypot(*stokes);
                let table = EnvelopeTable::new(vec![[t0, omega, *psi_rad], [tf, omega, *psi_rad]])
                    .map_err(|e| invalid("pulse.envelope", e.to_string()))?;
                PulseSchedule::custom(stokes.atan2(*pump), p.phi_rad, p.omega0, table)
            }
            EnvelopeConfig::Table { rows } => {
                let table = EnvelopeTable::new(rows.clone())
                    .map_err(|e| invalid("pulse.envelope.rows", e.to_string()))?;
                PulseSchedule::custom(p.chi_rad, p.phi_rad, p.omega0, table)
            }
        };
        schedule = schedule.with_amplitude_scale(p.amplitude_scale);
        if let Some(t) = &p.tone_scales {
            schedule = schedule.with_tones(ToneScales {
                pump1: t.pump1,
                pump2: t.pump2,
                stokes1: t.stokes1,
                stokes2: t.stokes2,
            });
        }
        Ok(schedule)
    }

    pub fn detuning_pair(&self) -> (f64, f64) {
        match &self.detunings {
            Some(d) => (d.delta1, d.delta2),
            None => (self.pulse.omega0, self.pulse.omega0),
        }
    }

    pub fn resolve_model(&self) -> Result<ResolvedModel, ConfigError> {
        let schedule = self.schedule()?;
        let (delta1, delta2) = self.detuning_pair();
        let four = FourLevelParams {
            delta1,
            delta2,
            schedule: schedule.clone(),
        };
        Ok(match self.model {
            ModelChoice::FourLevel => ResolvedModel::FourLevel(four),
            ModelChoice::LabOracle => {
                let c = self.carriers.as_ref().ok_or_else(|| invalid("carriers", "required for lab_oracle runs"))?;
                ResolvedModel::LabOracle(
                    four,
                    Carriers {
                        energies: c.energies,
                        counter_rotating: c.counter_rotating,
                    },
                )
            }
            ModelChoice::NineLevel => {
                let fs = self
                    .fine_structure
                    .as_ref()
                    .ok_or_else(|| invalid("fine_structure", "required for nine_level runs"))?
                    .resolve()?;
                let dipoles = self.dipoles.clone().unwrap_or_else(DipoleTable::nv_default);
                let params = NineLevelParams::new(fs, dipoles, delta1, delta2, schedule)
                    .map_err(|e| invalid("dipoles", e.to_string()))?;
                ResolvedModel::NineLevel(params)
            }
        })
    }

    pub fn time_grid(&self, schedule: &PulseSchedule) -> Result<TimeGrid, ConfigError> {
        let (t0, tf) = match (self.grid.t0_us, self.grid.tf_us) {
            (Some(a), Some(b)) => (a, b),
            _ => schedule.default_window(),
        };
        TimeGrid::new(t0, tf, self.grid.steps).map_err(|e| invalid("grid", e.to_string()))
    }

    pub fn initial_index(&self, model: &ResolvedModel) -> Result<usize, ConfigError> {
        let label = self.initial_state.as_str();
        let state = NineState::ALL
            .into_iter()
            .find(|s| s.label() == label)
            .ok_or_else(|| invalid("initial_state", format!("unknown state label `{label}`")))?;
        match model {
            ResolvedModel::NineLevel(_) => Ok(state.index()),
            _ => NineState::four_level_indices()
                .iter()
                .position(|&i| i == state.index())
                .ok_or_else(|| {
                    invalid(
                        "initial_state",
                        format!("`{label}` is not part of the four-level model"),
                    )
                }),
        }
    }

    pub fn provenance(&self) -> Option<String> {
        self.fine_structure.as_ref().and_then(|f| f.provenance.clone())
    }
}
