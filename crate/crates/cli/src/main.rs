//! `exactdiff`: evaluate exact and standard differences on closed-form
//! signals, reproduce the comparison tables and run the property suites.

mod diff;
mod growth;
mod output;
mod tables;
mod verify;

use std::io::{self, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use exactdiff_core::{Error, SummationSpec};

use output::{OutputFormat, RunReport};

/// Environment variable overriding the series term budget.
pub const MAX_TERMS_ENV: &str = "EXACTDIFF_MAX_TERMS";

pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_REFUSED: u8 = 2;
pub const EXIT_USAGE: u8 = 64;

#[derive(Debug, Parser)]
#[command(name = "exactdiff", version, about = "Exact finite differences on lattice-sampled signals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Apply a difference operator to a closed-form signal at one lattice point.
    Diff(diff::DiffArgs),
    /// Reproduce one of the comparison tables.
    Table(tables::TableArgs),
    /// Run an invariant suite.
    Verify(verify::VerifyArgs),
    /// Trajectories of the continuous, standard and exact discrete growth models.
    Growth(growth::GrowthArgs),
}

#[derive(Debug, Clone, Args)]
pub struct FormatArg {
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Markdown)]
    pub format: OutputFormat,
}

/// Why a command stopped short of printing a full report.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Engine(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_engine_refusal() {
            Failure::Engine(e)
        } else {
            Failure::Usage(format!("[{}] {e}", e.code()))
        }
    }
}

/// A report plus the exit code it implies.
pub struct Outcome {
    pub report: RunReport,
    pub exit: u8,
}

impl Outcome {
    pub fn ok(report: RunReport) -> Self {
        Self { report, exit: 0 }
    }
}

/// Summation settings shared by all commands, honouring [`MAX_TERMS_ENV`].
pub fn summation_spec() -> Result<SummationSpec, Failure> {
    let spec = SummationSpec::default();
    match std::env::var(MAX_TERMS_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(spec),
        Ok(raw) => match raw.trim().parse::<usize>() {
            Ok(n) if n >= 16 => Ok(spec.with_max_terms(n)),
            _ => Err(Failure::Usage(format!("{MAX_TERMS_ENV}={raw:?} is not an integer >= 16"))),
        },
        Err(e) => Err(Failure::Usage(format!("{MAX_TERMS_ENV}: {e}"))),
    }
}

/// The invocation without the program name, for the report header.
fn command_echo() -> String {
    std::env::args().skip(1).collect::<Vec<_>>().join(" ")
}

pub fn value_name<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };

    let started = Instant::now();
    let echo = command_echo();
    let (result, format) = match cli.command {
        Command::Diff(a) => (diff::run(&a, echo), a.format.format),
        Command::Table(a) => (tables::run(&a, echo), a.format.format),
        Command::Verify(a) => (verify::run(&a, echo), a.format.format),
        Command::Growth(a) => (growth::run(&a, echo), a.format.format),
    };

    let code = match result {
        Ok(outcome) => {
            let mut stdout = io::stdout().lock();
            if let Err(e) = outcome.report.render(format, &mut stdout).and_then(|_| stdout.flush()) {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::FAILURE;
            }
            outcome.exit
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Engine(e)) => {
            eprintln!("error: [{}] {e}", e.code());
            EXIT_REFUSED
        }
    };
    eprintln!("elapsed: {:.3} s", started.elapsed().as_secs_f64());
    ExitCode::from(code)
}
