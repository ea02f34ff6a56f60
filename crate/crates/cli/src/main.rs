//! `cone-ab`: partial-wave scattering off a flux tube on a cone.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::Status;
use crate::config::{CommonArgs, SweepConfig};

const EXIT_VALIDATION: u8 = 1;
const EXIT_NOT_CONVERGED: u8 = 2;
const EXIT_VERIFY_FAILED: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "cone-ab",
    version,
    about = "Aharonov-Bohm scattering on a cone with self-adjoint extensions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Phase shifts per channel
    PhaseShifts(CommonArgs),
    /// S-matrix elements per channel
    Smatrix(CommonArgs),
    /// Regularized scattering amplitude and cross section per angle
    Amplitude(CommonArgs),
    /// Bound-state poles with radial-integration confirmation
    BoundStates(CommonArgs),
    /// Compare analytic phase shifts against radial integration
    Verify(CommonArgs),
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("CONE_AB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("CONE_AB_THREADS must be a positive integer, got `{raw}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_VALIDATION)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_VALIDATION);
    }

    let (args, run): (_, fn(&SweepConfig) -> _) = match &cli.command {
        Command::PhaseShifts(a) => (a, commands::phase_shifts),
        Command::Smatrix(a) => (a, commands::smatrix),
        Command::Amplitude(a) => (a, commands::amplitude),
        Command::BoundStates(a) => (a, commands::bound_states),
        Command::Verify(a) => (a, commands::verify),
    };
    let cfg = match SweepConfig::resolve(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_VALIDATION);
        }
    };

    let (report, status) = run(&cfg);

    let written = match &cfg.output {
        Some(path) => File::create(path).and_then(|f| {
            let mut w = BufWriter::new(f);
            report.write(&cfg, &mut w)?;
            w.flush()
        }),
        None => {
            let mut w = std::io::stdout().lock();
            report.write(&cfg, &mut w).and_then(|_| w.flush())
        }
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(EXIT_VALIDATION);
    }
    let _ = report.write_summary(&mut std::io::stderr().lock());

    match status {
        Status::Ok => ExitCode::SUCCESS,
        Status::NotConverged => ExitCode::from(EXIT_NOT_CONVERGED),
        Status::VerificationFailed => ExitCode::from(EXIT_VERIFY_FAILED),
    }
}
