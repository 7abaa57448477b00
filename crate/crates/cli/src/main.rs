use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use irm_cli::commands::{self, BuildOptions, Context, MeasureOptions};
use irm_cli::report::OutputFormat;
use irm_cli::{parse_complex, CliError};
use irm_core::C64;

/// Measurement, reversible-measurement and mirror-unitary checks on
/// finite-dimensional operator files.
#[derive(Debug, Parser)]
#[command(name = "irm", version)]
struct Cli {
    /// Absolute residual tolerance, scaled by max(1, norm).
    #[arg(long, global = true, default_value_t = irm_core::DEFAULT_TOL)]
    tol: f64,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Human)]
    format: OutputFormat,

    /// Reject non-normalized states instead of normalizing them.
    #[arg(long, global = true)]
    strict: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check completeness (and projector or POVM conditions) of an operator file.
    Validate { file: PathBuf },
    /// Classify a complete set as PROJECTIVE, UNITARY_SINGLETON or GENERAL.
    Classify { file: PathBuf },
    /// Outcome probabilities, and optionally a chosen or sampled outcome.
    Measure {
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        shots: Option<u64>,
        /// Apply this outcome instead of sampling.
        #[arg(long)]
        outcome: Option<usize>,
    },
    /// Build or check mirror unitaries.
    Mirror {
        #[command(subcommand)]
        action: MirrorCommand,
    },
    /// Compute with U, uncompute with U^dagger, report the fidelity.
    Truth {
        #[arg(long)]
        unitary: PathBuf,
        #[arg(long)]
        state: PathBuf,
    },
    /// Compare external and internal measurement of a Bell state.
    Bell {
        /// 0 = Phi+, 1 = Phi-, 2 = Psi+, 3 = Psi-.
        #[arg(long)]
        index: usize,
        /// A two-qubit unitary that commutes with the computational projectors.
        #[arg(long)]
        mirror: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum MirrorCommand {
    /// Write a mirror unitary to an operator file.
    Build {
        /// Global phase angle of the qubit mirror.
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<f64>,
        /// Unit-modulus complex number, e.g. `0.6+0.8i`.
        #[arg(long, allow_hyphen_values = true, value_parser = complex_arg)]
        alpha: Option<C64>,
        /// Comma-separated unit-modulus phases, one per projector.
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',', value_parser = complex_arg)]
        phases: Option<Vec<C64>>,
        /// Comma-separated phase angles, one per projector.
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        angles: Option<Vec<f64>>,
        #[arg(long)]
        projectors: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check that a unitary commutes with every projector of a set.
    Check {
        #[arg(long)]
        unitary: PathBuf,
        #[arg(long)]
        projectors: PathBuf,
        #[arg(long)]
        state: Option<PathBuf>,
    },
}

fn complex_arg(s: &str) -> Result<C64, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<irm_cli::report::Report, CliError> {
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        return Err(CliError::Input(format!("--tol must be positive, got {}", cli.tol)));
    }
    let ctx = Context {
        tol: cli.tol,
        strict: cli.strict,
    };
    match cli.command {
        Command::Validate { file } => commands::validate(&file, &ctx),
        Command::Classify { file } => commands::classify(&file, &ctx),
        Command::Measure {
            set,
            state,
            seed,
            shots,
            outcome,
        } => commands::measure(&set, &state, &MeasureOptions { seed, shots, outcome }, &ctx),
        Command::Mirror { action } => match action {
            MirrorCommand::Build {
                theta,
                alpha,
                phases,
                angles,
                projectors,
                out,
            } => commands::mirror_build(
                &BuildOptions {
                    theta,
                    alpha,
                    phases,
                    angles,
                    projectors,
                    out,
                },
                &ctx,
            ),
            MirrorCommand::Check {
                unitary,
                projectors,
                state,
            } => commands::mirror_check(&unitary, &projectors, state.as_deref(), &ctx),
        },
        Command::Truth { unitary, state } => commands::truth(&unitary, &state, &ctx),
        Command::Bell { index, mirror } => commands::bell(index, mirror.as_deref(), &ctx),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let format = cli.format;
    match run(cli) {
        Ok(report) => {
            for line in report.details.iter().filter(|l| l.starts_with("warning:")) {
                eprintln!("{line}");
            }
            print!("{}", report.render(format));
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
