//! `simulate` — scenario runner for the driven nonlinear resonator.
//!
//! Modes:
//!   hybrid    integrate the four hybrid ODEs, write a trajectory CSV
//!   lindblad  integrate the truncated-Fock master equation (oracle)
//!   compare   run both and write the hybrid trajectory with an
//!             infidelity column
//!   steady    closed-form steady-state branches and shapes
//!   sweep     steady-state analytics over a parameter grid
//!
//! Exit codes: 0 success, 2 config error, 3 numerical failure,
//! 4 truncation overflow.

mod config;
mod output;
mod run;

use clap::Parser;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "simulate", version, about = "Driven nonlinear resonator simulator")]
struct Cli {
    /// Run mode.
    #[arg(value_enum)]
    mode: config::Mode,
    /// JSON configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (created if missing).
    #[arg(long)]
    out: PathBuf,
    /// Use fixed-step RK4 with this step in seconds for the hybrid
    /// trajectory (bit-reproducible output).
    #[arg(long)]
    fixed_step: Option<f64>,
    /// Override the Fock truncation dimension (lindblad/compare modes).
    #[arg(long)]
    fock_dim: Option<usize>,
    /// Worker threads for parallel sections (default: logical cores).
    #[arg(long)]
    workers: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    #[cfg(feature = "parallel")]
    if let Some(k) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("simulate: could not size the worker pool: {e}");
        }
    }
    #[cfg(not(feature = "parallel"))]
    if cli.workers.is_some() {
        eprintln!("simulate: built without the `parallel` feature; --workers ignored");
    }

    let raw = match std::fs::read_to_string(&cli.config) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("simulate: cannot read {}: {e}", cli.config.display());
            return ExitCode::from(2);
        }
    };
    let spec = match config::validate_config(&raw, cli.mode) {
        Ok(s) => s,
        Err(diag) => {
            eprintln!("simulate: invalid config {}: {diag}", cli.config.display());
            return ExitCode::from(2);
        }
    };
    if let Some(dt) = cli.fixed_step {
        if !(dt > 0.0) {
            eprintln!("simulate: --fixed-step must be positive");
            return ExitCode::from(2);
        }
    }

    let opts = run::Options {
        fixed_step: cli.fixed_step,
        fock_dim: cli.fock_dim,
    };
    match run::run(&spec, &cli.out, &opts) {
        Ok(summary) => {
            println!(
                "{} run complete; outputs in {} ({})",
                cli.mode,
                cli.out.display(),
                summary_line(&summary)
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("simulate: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn summary_line(summary: &serde_json::Value) -> String {
    match summary["mode"].as_str() {
        Some("compare") => format!(
            "final 1-F = {:.3e}, speedup {:.1e}",
            summary["final_infidelity"].as_f64().unwrap_or(f64::NAN),
            summary["wall_clock_seconds"]["speedup"]
                .as_f64()
                .unwrap_or(f64::NAN)
        ),
        Some("steady") => format!(
            "{} branch(es), critical_point = {}",
            summary["branches"].as_array().map_or(0, |a| a.len()),
            summary["critical_point"]
        ),
        Some("sweep") => format!(
            "{} points, max squeeze {:.4}",
            summary["points"],
            summary["max_squeeze_factor"].as_f64().unwrap_or(f64::NAN)
        ),
        _ => format!(
            "peak squeeze {:.4}",
            summary["peak_squeeze_factor"].as_f64().unwrap_or(f64::NAN)
        ),
    }
}
