mod commands;
mod error;
mod examples;
mod oracle;
mod report;
mod spec_file;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::CliError;
use crate::report::Report;
use crate::spec_file::SpecFile;

const DEFAULT_TOL: f64 = 1e-9;
const DEFAULT_MAX_M: u64 = 16384;
const DEFAULT_D: usize = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Periodic points of diagonal and permutation operators.
#[derive(Parser, Debug)]
#[command(name = "perop", version)]
struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Tolerance for numeric checks [default: 1e-9]
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Iteration horizon for period detection [default: 16384]
    #[arg(long, global = true)]
    max_m: Option<u64>,
    /// Truncation dimension [default: 128]
    #[arg(long, global = true)]
    d: Option<usize>,
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify the periodic-point subspace of an operator.
    Classify { spec: PathBuf },
    /// Periods of vectors given on the command line or in the spec file.
    Period {
        spec: PathBuf,
        /// Exact vector such as "e2+e3" or "1/2*e4 - i*e7".
        #[arg(long)]
        vector: Option<String>,
        /// Only test whether T^M x = x.
        #[arg(long)]
        power: Option<u64>,
    },
    /// Snap a diagonal operator to 2^n-th roots of unity.
    Approximate {
        spec: PathBuf,
        #[arg(long)]
        level: u32,
        /// Indices over which the error is measured [default: --d].
        #[arg(long)]
        probe: Option<u64>,
    },
    /// Cross-check the exact layer against finite truncations.
    Oracle { spec: PathBuf },
    /// Reports for the built-in worked examples.
    Examples {
        #[arg(long)]
        name: Option<String>,
    },
}

/// Resolved numeric settings: flag, then spec file, then default.
pub struct Settings {
    tol: Option<f64>,
    max_m: Option<u64>,
    d: Option<usize>,
    pub seed: u64,
}

impl Settings {
    fn config(file: &SpecFile) -> spec_file::OracleConfig {
        file.oracle.clone().unwrap_or_default()
    }

    pub fn tol(&self, file: &SpecFile) -> f64 {
        self.tol.or(Self::config(file).tol).unwrap_or(DEFAULT_TOL)
    }

    pub fn max_m(&self, file: &SpecFile) -> u64 {
        self.max_m.or(Self::config(file).max_m).unwrap_or(DEFAULT_MAX_M)
    }

    pub fn d(&self, file: &SpecFile) -> usize {
        self.d.or(Self::config(file).d).unwrap_or(DEFAULT_D)
    }
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let settings = Settings { tol: cli.tol, max_m: cli.max_m, d: cli.d, seed: cli.seed };
    match &cli.command {
        Command::Classify { spec } => commands::classify(&SpecFile::load(spec)?),
        Command::Period { spec, vector, power } => {
            commands::period(&SpecFile::load(spec)?, vector.as_deref(), *power, &settings)
        }
        Command::Approximate { spec, level, probe } => {
            commands::approximate_cmd(&SpecFile::load(spec)?, *level, *probe, &settings)
        }
        Command::Oracle { spec } => oracle::oracle(&SpecFile::load(spec)?, &settings),
        Command::Examples { name: Some(name) } => examples::run(name),
        Command::Examples { name: None } => {
            Ok(Report::new(serde_json::json!({ "examples": examples::NAMES }), examples::NAMES.join("\n")))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&report.json).expect("valid JSON")),
                Format::Text => println!("{}", report.text),
            }
            ExitCode::from(report.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
