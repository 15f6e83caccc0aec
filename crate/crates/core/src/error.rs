use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("time step must be finite, got {0}")]
    NonFiniteStep(f64),
    #[error("matrix is not Hermitian: |A[{row},{col}] - conj(A[{col},{row}])| = {defect:.3e} exceeds {tol:.1e}")]
    NotHermitian {
        row: usize,
        col: usize,
        defect: f64,
        tol: f64,
    },
    #[error("matrix is not unitary: max|U†U - I| = {defect:.3e} exceeds {tol:.1e}")]
    NotUnitary { defect: f64, tol: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PulseError {
    #[error("operation requires a designed envelope")]
    NotDesigned,
    #[error("two-photon detuning omega0 must be positive here, got {0}")]
    NonPositiveDetuning(f64),
    #[error("Bloch path is not closed: mixing angle is {start:.3e} at start and {end:.3e} at end (tolerance {tol:.1e})")]
    OpenPath { start: f64, end: f64, tol: f64 },
    #[error("Bloch path needs at least two samples")]
    TooFewSamples,
    #[error("invalid pulse schedule: {0}")]
    Invalid(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("dark states are degenerate: total Rabi frequency and omega0 are both zero")]
    DegenerateDarkStates,
    #[error("bright state undefined for zero total Rabi frequency")]
    ZeroRabi,
    #[error("dipole table violates the NV selection rules: {0}")]
    SelectionRule(String),
    #[error("missing fine-structure parameter `{0}`")]
    MissingParameter(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PropagationError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Pulse(#[from] PulseError),
    #[error("initial state is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
    #[error("dark frame jumps between samples {index} and {next}: overlap defect {defect:.3e} > {tol} (grid too coarse)", next = index + 1)]
    FrameDiscontinuity { index: usize, defect: f64, tol: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Propagation(#[from] PropagationError),
    #[error(transparent)]
    Pulse(#[from] PulseError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("qubit indices ({0}, {1}) must be distinct and below the dimension {2}")]
    BadIndices(usize, usize, usize),
    #[error("scenario `{scenario}`: {source}")]
    Scenario {
        scenario: String,
        #[source]
        source: Box<AnalysisError>,
    },
}

/// Failures while loading or running a scenario configuration.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("config error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("config key `{key}`: {message}")]
    Invalid { key: String, message: String },
}

impl From<serde_json::Error> for ConfigError {
    fn from(e: serde_json::Error) -> Self {
        let (line, column) = (e.line(), e.column());
        let full = e.to_string();
        let suffix = format!(" at line {line} column {column}");
        let message = full.strip_suffix(&suffix).unwrap_or(&full).to_string();
        ConfigError::Parse {
            line,
            column,
            message,
        }
    }
}
