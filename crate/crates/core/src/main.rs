use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use nvholo_core::scenario::{write_outputs, RunError, RunOptions, ScenarioConfig, Verb};

#[derive(Parser)]
#[command(name = "nvholo", version, about = "Holonomic single-qubit rotations in NV centers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Scenario config (JSON); the committed default when absent.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Override the grid step count.
    #[arg(long)]
    steps: Option<usize>,
    /// Seed for randomized checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerbArg {
    Fig2,
    Fig3,
    Stirap,
    GateReport,
    Sweep,
    CheckDark,
}

impl From<VerbArg> for Verb {
    fn from(v: VerbArg) -> Self {
        match v {
            VerbArg::Fig2 => Verb::Fig2,
            VerbArg::Fig3 => Verb::Fig3,
            VerbArg::Stirap => Verb::Stirap,
            VerbArg::GateReport => Verb::GateReport,
            VerbArg::Sweep => Verb::Sweep,
            VerbArg::CheckDark => Verb::CheckDark,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Nine-level run validating the four-level reduction.
    Fig2(RunArgs),
    /// Four-level holonomic rotation trajectory and gate report.
    Fig3(RunArgs),
    /// Resonant counterintuitive-pulse population transfer.
    Stirap(RunArgs),
    /// Gate report comparing ideal, holonomic and propagated gates.
    GateReport(RunArgs),
    /// Gate reports over a parameter axis.
    Sweep(RunArgs),
    /// Checks that the dark states lie in the kernel of the Hamiltonian.
    CheckDark(RunArgs),
    /// Prints the committed default config for a verb.
    PrintConfig {
        #[arg(value_enum)]
        verb: VerbArg,
    },
}

const EXIT_PHYSICS: u8 = 1;
const EXIT_CONFIG: u8 = 2;

fn run(verb: Verb, args: RunArgs) -> ExitCode {
    let cfg = match &args.config {
        Some(path) => match ScenarioConfig::load(path) {
            Ok(cfg) => cfg,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_CONFIG);
            }
        },
        None => verb.default_config(),
    };
    let opts = RunOptions {
        steps: args.steps,
        seed: args.seed,
    };
    let output = match verb.run(&cfg, &opts) {
        Ok(o) => o,
        Err(RunError::Config(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_PHYSICS);
        }
    };
    match write_outputs(&output, &args.out) {
        Ok(paths) => {
            for p in paths {
                println!("wrote {}", p.display());
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    }
    for check in &output.checks {
        println!("{}", check.line());
    }
    if output.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_PHYSICS)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::Fig2(a) => run(Verb::Fig2, a),
        Command::Fig3(a) => run(Verb::Fig3, a),
        Command::Stirap(a) => run(Verb::Stirap, a),
        Command::GateReport(a) => run(Verb::GateReport, a),
        Command::Sweep(a) => run(Verb::Sweep, a),
        Command::CheckDark(a) => run(Verb::CheckDark, a),
        Command::PrintConfig { verb } => {
            print!("{}", Verb::from(verb).default_config_text());
            ExitCode::SUCCESS
        }
    }
}
