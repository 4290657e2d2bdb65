//! `phinlab`: command-line front end.
//!
//! Exit codes: 0 when the check passes, 1 on a mathematical failure
//! (inadmissible, inconsistent, not generic, ...), 2 on bad input.

mod commands;
mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use phinlab::Rational;

use crate::commands::Report;
use crate::input::CliError;

#[derive(Parser)]
#[command(name = "phinlab", version, about = "Filtered (phi,N)-modules, Hecke eigenvalues and the interpolation map")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Decide weak admissibility of a module.
    CheckAdmissible {
        input: PathBuf,
        /// JSON list of stable subspaces to test instead of enumerating.
        #[arg(long)]
        candidates: Option<PathBuf>,
    },
    /// Weil–Deligne data and monodromy partition.
    Wd { input: PathBuf },
    /// Segments, genericity and the torus character.
    Segments { input: PathBuf },
    /// θ_r on an unramified principal series, two ways.
    Hecke {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        q: u64,
        /// Comma-separated values ψ_i(ϖ), e.g. `1,2,-1/3`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        psi: Vec<Rational>,
    },
    /// β(θ̃_r) for every r, with valuations and integrality.
    Beta {
        input: PathBuf,
        /// ξ weights as JSON, e.g. `{"k0":[0,-1]}`. Default: from the jumps.
        #[arg(long)]
        xi: Option<String>,
    },
    /// Compare the Hecke and Frobenius sides for every r.
    Consistency {
        input: PathBuf,
        #[arg(long)]
        xi: Option<String>,
    },
    /// Monodromy partition, kernel dimensions and stratum membership.
    Strata {
        input: PathBuf,
        /// One partition, e.g. `2,1`, used for every embedding. Default: all.
        #[arg(long)]
        partition: Option<String>,
    },
    /// Seeded batch of checks across all pipelines.
    Sweep {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Cases per kind.
        #[arg(long, default_value_t = 20)]
        cases: usize,
    },
}

fn run(command: Command) -> Result<Report, CliError> {
    match command {
        Command::CheckAdmissible { input, candidates } => commands::check_admissible(&input, candidates.as_deref()),
        Command::Wd { input } => commands::wd(&input),
        Command::Segments { input } => commands::segments(&input),
        Command::Hecke { n, r, q, psi } => commands::hecke(n, r, q, psi),
        Command::Beta { input, xi } => commands::beta(&input, xi.as_deref()),
        Command::Consistency { input, xi } => commands::consistency(&input, xi.as_deref()),
        Command::Strata { input, partition } => commands::strata(&input, partition.as_deref()),
        Command::Sweep { seed, cases } => commands::sweep(seed, cases),
    }
}

/// Write to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json_out = cli.format == Format::Json;
    match run(cli.command) {
        Ok(report) => {
            if json_out {
                emit(&format!("{}\n", serde_json::to_string_pretty(&report.json).expect("json value")));
            } else {
                emit(&report.text);
            }
            ExitCode::from(if report.pass { 0 } else { 1 })
        }
        Err(e) => {
            let (code, kind) = match e {
                CliError::Input(_) => (2, "input"),
                CliError::Math(_) => (1, "math"),
            };
            if json_out {
                let body = json!({"error": kind, "message": e.to_string()});
                emit(&format!("{}\n", serde_json::to_string_pretty(&body).expect("json value")));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(code)
        }
    }
}
