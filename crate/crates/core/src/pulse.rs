//! Drive schedules and the Bloch-sphere geometry of the second dark state.
//!
//! Every schedule is reduced to a common polar form: a total Rabi envelope
//! `Ω(t) ≥ 0`, a pump/Stokes mixing angle `χ(t)`, a fixed relative phase
//! `φ` and a common phase `ψ(t)`:
//!
//! ```text
//! Ω_p(t) = Ω(t) cos χ(t) e^{+iφ} e^{iψ(t)}
//! Ω_s(t) = Ω(t) sin χ(t) e^{-iφ} e^{iψ(t)}
//! ```
//!
//! For the designed holonomic pulses `χ` is fixed and `(Ω, ψ)` trace a closed
//! loop; for counterintuitive Gaussian pulses `ψ = 0` and `χ` sweeps from
//! `π/2` (Stokes first) to `0`.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::PulseError;
use crate::grid::TimeGrid;
use crate::linalg::C64;

/// Largest mixing angle allowed at the ends of a path that counts as closed.
pub const PATH_CLOSURE_TOL: f64 = 1e-6;

/// Half-width of the default window in units of `1/α`. At `8/α` the ramp is
/// within 2.3e-7 of its limits, which closes the designed path below
/// [`PATH_CLOSURE_TOL`].
pub const DEFAULT_WINDOW_BANDWIDTHS: f64 = 8.0;

/// Default sample count for Bloch-path quadrature.
pub const DEFAULT_PATH_SAMPLES: usize = 20_001;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianPulse {
    /// Peak Rabi frequency, rad/µs.
    pub amplitude: f64,
    /// µs.
    pub center: f64,
    /// Standard deviation, µs.
    pub width: f64,
}

impl GaussianPulse {
    /// `ln(envelope(t))`, finite even where the envelope underflows.
    fn log_value(&self, t: f64) -> f64 {
        let x = (t - self.center) / self.width;
        self.amplitude.ln() - 0.5 * x * x
    }

    pub fn value(&self, t: f64) -> f64 {
        let x = (t - self.center) / self.width;
        self.amplitude * (-0.5 * x * x).exp()
    }
}

/// Linear interpolation table of `(t, Ω, ψ)` rows. Outside the table the
/// end rows are held.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeTable {
    rows: Vec<[f64; 3]>,
}

impl EnvelopeTable {
    pub fn new(rows: Vec<[f64; 3]>) -> Result<Self, PulseError> {
        if rows.is_empty() {
            return Err(PulseError::Invalid("envelope table is empty".into()));
        }
        if rows.windows(2).any(|w| w[1][0] <= w[0][0]) {
            return Err(PulseError::Invalid(
                "envelope table times must be strictly increasing".into(),
            ));
        }
        if rows.iter().any(|r| r[1] < 0.0 || r.iter().any(|v| !v.is_finite())) {
            return Err(PulseError::Invalid(
                "envelope table needs finite entries and nonnegative amplitudes".into(),
            ));
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[[f64; 3]] {
        &self.rows
    }

    fn sample(&self, t: f64) -> (f64, f64) {
        let first = self.rows[0];
        let last = self.rows[self.rows.len() - 1];
        if t <= first[0] {
            return (first[1], first[2]);
        }
        if t >= last[0] {
            return (last[1], last[2]);
        }
        let k = self.rows.partition_point(|r| r[0] <= t) - 1;
        let (a, b) = (self.rows[k], self.rows[k + 1]);
        let w = (t - a[0]) / (b[0] - a[0]);
        (a[1] + w * (b[1] - a[1]), a[2] + w * (b[2] - a[2]))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Envelope {
    /// The tanh-ramped holonomic loop.
    Designed,
    /// Counterintuitively ordered Gaussian pump and Stokes pulses.
    GaussianStirap {
        pump: GaussianPulse,
        stokes: GaussianPulse,
    },
    CustomTable(EnvelopeTable),
}

/// Per-tone real scale factors on top of the common pump/Stokes envelopes.
/// All ones puts the four-level model in the dark-state regime.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToneScales {
    pub pump1: f64,
    pub pump2: f64,
    pub stokes1: f64,
    pub stokes2: f64,
}

impl Default for ToneScales {
    fn default() -> Self {
        Self {
            pump1: 1.0,
            pump2: 1.0,
            stokes1: 1.0,
            stokes2: 1.0,
        }
    }
}

impl ToneScales {
    pub fn is_uniform(&self) -> bool {
        self.pump1 == self.pump2 && self.stokes1 == self.stokes2
    }
}

/// Full drive specification. Frequencies are angular (rad/µs), times µs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseSchedule {
    pub chi: f64,
    pub phi: f64,
    pub omega0: f64,
    pub alpha: f64,
    pub envelope: Envelope,
    /// Overall multiplier on `Ω(t)`; zero freezes the drive.
    pub amplitude_scale: f64,
    pub tones: ToneScales,
}

/// Polar form of the drive at one instant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Drive {
    pub omega: f64,
    pub chi: f64,
    pub psi: f64,
}

impl PulseSchedule {
    /// Designed holonomic schedule. Angles are reduced to principal ranges.
    pub fn designed(chi: f64, phi: f64, omega0: f64, alpha: f64) -> Self {
        Self {
            chi: principal_angle(chi),
            phi: principal_angle(phi),
            omega0,
            alpha,
            envelope: Envelope::Designed,
            amplitude_scale: 1.0,
            tones: ToneScales::default(),
        }
    }

    pub fn gaussian_stirap(omega0: f64, pump: GaussianPulse, stokes: GaussianPulse) -> Self {
        Self {
            chi: 0.0,
            phi: 0.0,
            omega0,
            alpha: 0.0,
            envelope: Envelope::GaussianStirap { pump, stokes },
            amplitude_scale: 1.0,
            tones: ToneScales::default(),
        }
    }

    pub fn custom(chi: f64, phi: f64, omega0: f64, table: EnvelopeTable) -> Self {
        Self {
            chi: principal_angle(chi),
            phi: principal_angle(phi),
            omega0,
            alpha: 0.0,
            envelope: Envelope::CustomTable(table),
            amplitude_scale: 1.0,
            tones: ToneScales::default(),
        }
    }

    pub fn with_amplitude_scale(mut self, scale: f64) -> Self {
        self.amplitude_scale = scale;
        self
    }

    pub fn with_tones(mut self, tones: ToneScales) -> Self {
        self.tones = tones;
        self
    }

    pub fn is_designed(&self) -> bool {
        matches!(self.envelope, Envelope::Designed)
    }

    /// Default integration window: `±8/α` for designed pulses, `±4σ` past
    /// the outer Gaussian centres, the table span otherwise.
    pub fn default_window(&self) -> (f64, f64) {
        match &self.envelope {
            Envelope::Designed => {
                let half = DEFAULT_WINDOW_BANDWIDTHS / self.alpha;
                (-half, half)
            }
            Envelope::GaussianStirap { pump, stokes } => {
                let lo = (pump.center - 4.0 * pump.width).min(stokes.center - 4.0 * stokes.width);
                let hi = (pump.center + 4.0 * pump.width).max(stokes.center + 4.0 * stokes.width);
                (lo, hi)
            }
            Envelope::CustomTable(table) => {
                let rows = table.rows();
                (rows[0][0], rows[rows.len() - 1][0])
            }
        }
    }

    /// `(Ω, χ, ψ)` at time `t`.
    pub fn drive(&self, t: f64) -> Drive {
        let (omega, chi, psi) = match &self.envelope {
            Envelope::Designed => {
                let (omega, psi) = designed_values(t, self.omega0, self.alpha);
                (omega, self.chi, psi)
            }
            Envelope::GaussianStirap { pump, stokes } => {
                let omega = pump.value(t).hypot(stokes.value(t));
                // tan χ = Ω_s / Ω_p, evaluated in log space so the angle stays
                // defined in the far tails.
                let chi = if pump.amplitude <= 0.0 {
                    FRAC_PI_2
                } else if stokes.amplitude <= 0.0 {
                    0.0
                } else {
                    let log_ratio = stokes.log_value(t) - pump.log_value(t);
                    log_ratio.exp().atan()
                };
                (omega, chi, 0.0)
            }
            Envelope::CustomTable(table) => {
                let (omega, psi) = table.sample(t);
                (omega, self.chi, psi)
            }
        };
        Drive {
            omega: omega * self.amplitude_scale,
            chi,
            psi,
        }
    }
}

/// Reduces an angle to `(-π, π]`.
pub fn principal_angle(x: f64) -> f64 {
    let r = x.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// Logistic pair `(s, 1 - s)` with `s = (1 + tanh(x)) / 2`, both computed
/// without cancellation.
fn logistic_pair(x: f64) -> (f64, f64) {
    let lo = 1.0 / (1.0 + (-2.0 * x).exp());
    let hi = 1.0 / (1.0 + (2.0 * x).exp());
    (lo, hi)
}

/// Ramp angle `η(t) = (π/2)(1 + tanh(α t))`, running from 0 to π.
pub fn eta(t: f64, alpha: f64) -> f64 {
    PI * logistic_pair(alpha * t).0
}

/// `(sin η, cos η)` with full relative precision near both ends.
fn eta_sin_cos(t: f64, alpha: f64) -> (f64, f64) {
    let (s, rest) = logistic_pair(alpha * t);
    let sin = (PI * s.min(rest)).sin();
    let cos = if s <= 0.5 {
        (PI * s).cos()
    } else {
        -(PI * rest).cos()
    };
    (sin, cos)
}

fn designed_values(t: f64, omega0: f64, alpha: f64) -> (f64, f64) {
    let (sin, cos) = eta_sin_cos(t, alpha);
    let omega = 3f64.sqrt() * omega0 * sin / (2.0 - 1.5 * sin * sin).sqrt();
    // Quadrant-aware form of π/2 - arctan(2 cos η / sin η): continuous from
    // 0 at η = 0 to π at η = π.
    let psi = sin.atan2(2.0 * cos);
    (omega, psi)
}

/// Designed envelope `(Ω(t), ψ(t))` of the holonomic loop.
pub fn designed_envelope(t: f64, schedule: &PulseSchedule) -> Result<(f64, f64), PulseError> {
    if !schedule.is_designed() {
        return Err(PulseError::NotDesigned);
    }
    if schedule.omega0 <= 0.0 {
        return Err(PulseError::NonPositiveDetuning(schedule.omega0));
    }
    let (omega, psi) = designed_values(t, schedule.omega0, schedule.alpha);
    Ok((omega * schedule.amplitude_scale, psi))
}

/// Complex pump and Stokes Rabi frequencies `(Ω_p, Ω_s)` at `t`.
pub fn pump_stokes(t: f64, schedule: &PulseSchedule) -> (C64, C64) {
    let d = schedule.drive(t);
    let pump = C64::from_polar(d.omega * d.chi.cos(), schedule.phi + d.psi);
    let stokes = C64::from_polar(d.omega * d.chi.sin(), -schedule.phi + d.psi);
    (pump, stokes)
}

/// Sampled path of the second dark state on its Bloch sphere.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochPath {
    pub times: Vec<f64>,
    /// Polar mixing angle with `tan = Ω / (√2 ω₀)`, in `[0, π/2)`.
    pub mix_angle: Vec<f64>,
    /// Continuous (unwrapped) azimuth `ψ`.
    pub azimuth: Vec<f64>,
}

impl BlochPath {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Same path traversed backwards.
    pub fn reversed(&self) -> Self {
        let mut rev = self.clone();
        rev.times.reverse();
        rev.mix_angle.reverse();
        rev.azimuth.reverse();
        rev
    }
}

/// Mixing and azimuth angles of the path over the grid's sample times.
pub fn path_angles(schedule: &PulseSchedule, grid: &TimeGrid) -> Result<BlochPath, PulseError> {
    path_angles_at(schedule, &grid.times())
}

pub fn path_angles_at(schedule: &PulseSchedule, times: &[f64]) -> Result<BlochPath, PulseError> {
    if schedule.omega0 <= 0.0 {
        return Err(PulseError::NonPositiveDetuning(schedule.omega0));
    }
    let denom = SQRT_2 * schedule.omega0;
    let mut mix_angle = Vec::with_capacity(times.len());
    let mut azimuth: Vec<f64> = Vec::with_capacity(times.len());
    for &t in times {
        let d = schedule.drive(t);
        mix_angle.push((d.omega / denom).atan());
        let psi = match azimuth.last() {
            Some(&prev) => prev + principal_angle(d.psi - prev),
            None => d.psi,
        };
        azimuth.push(psi);
    }
    Ok(BlochPath {
        times: times.to_vec(),
        mix_angle,
        azimuth,
    })
}

/// Gate phase from the Bloch path, with a quadrature error estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometricPhase {
    pub gamma: f64,
    /// `|I(h) - I(2h)|` from the trapezoid rule on every other sample.
    pub error_estimate: f64,
    /// Largest endpoint mixing angle.
    pub closure_defect: f64,
}

/// `γ_c = ½ ∮ (1 - cos 2φ_mix) dψ` by the trapezoid rule in `ψ`. Positive for
/// a counterclockwise loop around the north pole.
pub fn geometric_phase(path: &BlochPath) -> Result<GeometricPhase, PulseError> {
    geometric_phase_with_tol(path, PATH_CLOSURE_TOL)
}

pub fn geometric_phase_with_tol(path: &BlochPath, tol: f64) -> Result<GeometricPhase, PulseError> {
    let n = path.len();
    if n < 2 {
        return Err(PulseError::TooFewSamples);
    }
    let start = path.mix_angle[0];
    let end = path.mix_angle[n - 1];
    if start.abs() > tol || end.abs() > tol {
        return Err(PulseError::OpenPath { start, end, tol });
    }
    let integrand: Vec<f64> = path.mix_angle.iter().map(|a| a.sin().powi(2)).collect();
    let trapezoid = |stride: usize| -> f64 {
        let idx: Vec<usize> = (0..n).step_by(stride).collect();
        idx.windows(2)
            .map(|w| {
                let (a, b) = (w[0], w[1]);
                0.5 * (integrand[a] + integrand[b]) * (path.azimuth[b] - path.azimuth[a])
            })
            .sum()
    };
    let gamma = trapezoid(1);
    let error_estimate = if n >= 5 && (n - 1).is_multiple_of(2) {
        (gamma - trapezoid(2)).abs()
    } else {
        f64::NAN
    };
    Ok(GeometricPhase {
        gamma,
        error_estimate,
        closure_defect: start.abs().max(end.abs()),
    })
}
