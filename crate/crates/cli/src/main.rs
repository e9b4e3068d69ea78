//! `ldp`: evaluate rate functions and CGFs on grids, regenerate the figure
//! grids, simulate paths and run the self-check suites.

mod commands;
mod config;
mod error;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ldp_core::figures::{figure, figure_name, FIGURE_IDS};
use ldp_core::table::Table;
use ldp_core::Exec;

use crate::commands::{CgfKind, Process, RateName};
use crate::config::{Common, Format};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "ldp", version, about = "Large-deviation rates for Gaussian AR(1) and MA(1) processes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a rate function on a grid (one axis, or two for J, JS, KS).
    Rate {
        #[arg(value_enum)]
        name: RateName,
    },
    /// Tag a λ-grid with its region; `--n` adds a positive-definiteness column.
    Domain,
    /// Evaluate a CGF on a λ-grid.
    Cgf {
        #[arg(value_enum)]
        kind: CgfKind,
    },
    /// Per-replicate statistics of simulated paths.
    Simulate {
        #[arg(value_enum)]
        process: Process,
    },
    /// Run a self-check suite; exits 1 if any check fails.
    Verify,
    /// Write the eight figure grids (or the listed ones) into `--out-dir`.
    Figures { ids: Vec<u8> },
}

fn emit(table: &Table, common: &Common) -> Result<(), CliError> {
    let body = match common.format() {
        Format::Csv => table.to_csv(),
        Format::Json => serde_json::to_string_pretty(table)? + "\n",
    };
    match &common.out {
        Some(path) => std::fs::write(path, body)?,
        None => std::io::stdout().lock().write_all(body.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let common = cli.common.resolve()?;
    match cli.command {
        Command::Rate { name } => emit(&commands::rate(name, &common)?, &common),
        Command::Domain => emit(&commands::domain(&common)?, &common),
        Command::Cgf { kind } => emit(&commands::cgf(kind, &common)?, &common),
        Command::Simulate { process } => emit(&commands::simulate_table(process, &common)?, &common),
        Command::Verify => {
            let suite = common.suite.ok_or_else(|| CliError::Usage("--suite is required".into()))?;
            let summary = verify::run(suite, &common)?;
            if common.format() == Format::Json {
                println!("{}", serde_json::to_string_pretty(&summary)?);
            } else {
                for c in &summary.checks {
                    println!("[{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
                }
            }
            if let Some(path) = &common.out {
                std::fs::write(path, serde_json::to_string_pretty(&summary)? + "\n")?;
            }
            let failed = summary.checks.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                return Err(CliError::VerificationFailed { failed, total: summary.checks.len() });
            }
            Ok(())
        }
        Command::Figures { ids } => {
            let ids = if ids.is_empty() { FIGURE_IDS.to_vec() } else { ids };
            let dir = common.out_dir.clone().unwrap_or_else(|| PathBuf::from("figures"));
            std::fs::create_dir_all(&dir)?;
            for id in ids {
                let name = figure_name(id).ok_or_else(|| CliError::Usage(format!("no figure {id}; expected 1..=8")))?;
                let table = figure(id, Exec::Parallel)?;
                let (ext, body) = match common.format() {
                    Format::Csv => ("csv", table.to_csv()),
                    Format::Json => ("json", serde_json::to_string_pretty(&table)? + "\n"),
                };
                let path = dir.join(format!("{name}.{ext}"));
                std::fs::write(&path, body)?;
                log::info!("wrote {}", path.display());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
