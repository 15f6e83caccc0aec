//! Named scenarios behind the command-line front end.

pub mod config;
pub mod output;
pub mod runs;

pub use config::{ModelChoice, ResolvedModel, ScenarioConfig, SweepAxis};
pub use output::{format_number, round_sig, to_json, Csv};
pub use runs::{
    gate_report, run_check_dark, run_fig2, run_fig3, run_gate_report, run_stirap, run_sweep, Check,
    RunError, RunOptions, RunOutput,
};

use crate::error::ConfigError;

/// Scenario verbs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verb {
    Fig2,
    Fig3,
    Stirap,
    GateReport,
    Sweep,
    CheckDark,
}

impl Verb {
    pub const ALL: [Verb; 6] = [
        Verb::Fig2,
        Verb::Fig3,
        Verb::Stirap,
        Verb::GateReport,
        Verb::Sweep,
        Verb::CheckDark,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Verb::Fig2 => "fig2",
            Verb::Fig3 => "fig3",
            Verb::Stirap => "stirap",
            Verb::GateReport => "gate-report",
            Verb::Sweep => "sweep",
            Verb::CheckDark => "check-dark",
        }
    }

    /// Committed default configuration for the verb.
    pub fn default_config_text(self) -> &'static str {
        match self {
            Verb::Fig2 => include_str!("../../../../configs/fig2.json"),
            Verb::Fig3 => include_str!("../../../../configs/fig3.json"),
            Verb::Stirap => include_str!("../../../../configs/stirap.json"),
            Verb::GateReport => include_str!("../../../../configs/gate_report.json"),
            Verb::Sweep => include_str!("../../../../configs/sweep_alpha.json"),
            Verb::CheckDark => include_str!("../../../../configs/check_dark.json"),
        }
    }

    pub fn default_config(self) -> ScenarioConfig {
        ScenarioConfig::from_json(self.default_config_text())
            .unwrap_or_else(|e| panic!("embedded {} config is invalid: {e}", self.name()))
    }

    pub fn run(self, cfg: &ScenarioConfig, opts: &RunOptions) -> Result<RunOutput, RunError> {
        match self {
            Verb::Fig2 => run_fig2(cfg, opts),
            Verb::Fig3 => run_fig3(cfg, opts),
            Verb::Stirap => run_stirap(cfg, opts),
            Verb::GateReport => run_gate_report(cfg, opts),
            Verb::Sweep => run_sweep(cfg, opts),
            Verb::CheckDark => run_check_dark(cfg, opts),
        }
    }
}

/// Writes every output file of a run into `dir`.
pub fn write_outputs(output: &RunOutput, dir: &std::path::Path) -> Result<Vec<std::path::PathBuf>, ConfigError> {
    let io = |path: &std::path::Path, source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    };
    std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let mut written = Vec::new();
    for (name, contents) in &output.files {
        let path = dir.join(name);
        std::fs::write(&path, contents).map_err(|e| io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}
