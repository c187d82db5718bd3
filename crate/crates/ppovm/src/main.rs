use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ppovm::commands::{self, Direction, GenKind, GenParams, TomoData, ValidateKind};
use ppovm::{emit, CliError, OutputFormat, Report, RunConfig};

/// Process POVMs: build, realize, validate, reconstruct channels and
/// discriminate them.
#[derive(Debug, Parser)]
#[command(name = "ppovm", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Numerical tolerance for invariant checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Seed for sampling and random generators.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of simulated shots.
    #[arg(long, global = true, default_value_t = 10_000)]
    shots: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the JSON result to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    State,
    Povm,
    Channel,
    Ppovm,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ConvertDirection {
    Kraus2choi,
    Choi2kraus,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Generate {
    PauliProbe,
    SixState,
    IdentityVsContraction,
    Identity,
    Depolarizing,
    Contraction,
    Unitary,
    RandomUnitary,
    RandomChannel,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the invariants of a state, POVM, channel or PPOVM file.
    Validate {
        path: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
    },
    /// Convert a channel between Kraus and Choi representations.
    Convert {
        path: PathBuf,
        #[arg(long, value_enum)]
        direction: ConvertDirection,
    },
    /// Outcome probabilities of a PPOVM applied to a channel.
    Probs { ppovm: PathBuf, channel: PathBuf },
    /// Reconstruct a channel from exact probabilities or counts.
    Tomo {
        ppovm: PathBuf,
        /// Use exact probabilities of this channel.
        #[arg(long, conflicts_with = "counts", required_unless_present = "counts")]
        channel: Option<PathBuf>,
        /// Use a counts file produced by `simulate`.
        #[arg(long)]
        counts: Option<PathBuf>,
        /// Report the Hilbert–Schmidt error against this channel.
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Sample outcome counts of the realized PPOVM experiment.
    Simulate { channel: PathBuf, ppovm: PathBuf },
    /// Analyze perfect discrimination of two unitaries.
    Discriminate {
        u: PathBuf,
        v: PathBuf,
        /// Search for the smallest number of parallel copies up to this bound.
        #[arg(long)]
        copies: Option<usize>,
    },
    /// Emit built-in experiments, channels and unitaries.
    Gen {
        #[arg(value_enum)]
        what: Generate,
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Depolarizing probability.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// Basis index of the contraction target.
        #[arg(long, default_value_t = 0)]
        target: usize,
        /// Comma-separated eigenphases of a diagonal unitary.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        phases: Vec<f64>,
        /// Number of Kraus operators of a random channel.
        #[arg(long, default_value_t = 2)]
        kraus: usize,
        /// Emit the experiment as test couples instead of a PPOVM.
        #[arg(long)]
        couples: bool,
    },
}

fn run(cli: Cli) -> Result<Report, CliError> {
    let g = cli.global;
    if g.tol.is_nan() || g.tol <= 0.0 {
        return Err(CliError::Format(format!(
            "--tol must be positive, got {}",
            g.tol
        )));
    }
    let cfg = RunConfig {
        tol: g.tol,
        seed: g.seed,
        shots: g.shots,
        format: match g.format {
            Format::Json => OutputFormat::Json,
            Format::Table => OutputFormat::Table,
        },
        out: g.out,
    };
    let report = match cli.command {
        Command::Validate { path, kind } => {
            let kind = match kind {
                Kind::State => ValidateKind::State,
                Kind::Povm => ValidateKind::Povm,
                Kind::Channel => ValidateKind::Channel,
                Kind::Ppovm => ValidateKind::Ppovm,
            };
            commands::validate(&path, kind, &cfg)?
        }
        Command::Convert { path, direction } => {
            let direction = match direction {
                ConvertDirection::Kraus2choi => Direction::KrausToChoi,
                ConvertDirection::Choi2kraus => Direction::ChoiToKraus,
            };
            commands::convert(&path, direction, &cfg)?
        }
        Command::Probs { ppovm, channel } => commands::probs(&ppovm, &channel, &cfg)?,
        Command::Tomo {
            ppovm,
            channel,
            counts,
            truth,
        } => {
            let data = match (&channel, &counts) {
                (Some(c), _) => TomoData::Exact(c),
                (None, Some(c)) => TomoData::Counts(c),
                (None, None) => {
                    return Err(CliError::Format("tomo needs --channel or --counts".into()))
                }
            };
            commands::tomo(&ppovm, data, truth.as_deref(), &cfg)?
        }
        Command::Simulate { channel, ppovm } => commands::simulate(&channel, &ppovm, &cfg)?,
        Command::Discriminate { u, v, copies } => commands::discriminate(&u, &v, copies, &cfg)?,
        Command::Gen {
            what,
            d,
            p,
            target,
            phases,
            kraus,
            couples,
        } => {
            let kind = match what {
                Generate::PauliProbe => GenKind::PauliProbe,
                Generate::SixState => GenKind::SixState,
                Generate::IdentityVsContraction => GenKind::IdentityVsContraction,
                Generate::Identity => GenKind::Identity,
                Generate::Depolarizing => GenKind::Depolarizing,
                Generate::Contraction => GenKind::Contraction,
                Generate::Unitary => GenKind::Unitary,
                Generate::RandomUnitary => GenKind::RandomUnitary,
                Generate::RandomChannel => GenKind::RandomChannel,
            };
            let params = GenParams {
                d,
                p,
                target,
                phases,
                kraus,
                couples,
            };
            commands::generate(kind, &params, &cfg)?
        }
    };
    emit(&report, &cfg)?;
    Ok(report)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(report) if report.ok => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
