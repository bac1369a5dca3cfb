//! Command-line front end: argument parsing, input files and JSON reports.

pub mod commands;
pub mod error;
pub mod input;
pub mod report;

use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use commands::{IntegrateOptions, RackcheckOptions, StripOptions};
use error::CliError;
use report::Report;

#[derive(Debug, Parser)]
#[command(name = "rackforge", version, about = "Verify Leibniz algebras and integrate them to racks")]
pub struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print a human summary to stderr.
    #[arg(long, global = true)]
    pub summary: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the Leibniz identity, antisymmetry and augmentation axioms.
    Verify { path: PathBuf },
    /// Squares ideal, left center, Lie quotient and canonical augmentation.
    Analyze {
        path: PathBuf,
        #[arg(long, env = "RACKFORGE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Build the integrating rack and recover the bracket from it.
    Integrate {
        path: PathBuf,
        #[arg(long)]
        model: Option<String>,
        #[arg(long, default_value_t = PI / 2.0)]
        tau_prime: f64,
        #[arg(long, default_value_t = PI)]
        tau: f64,
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[arg(long, env = "RACKFORGE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 1e-4)]
        tangent_tol: f64,
    },
    /// Strip membership of matrices and adjoint maps of elements.
    Strip {
        path: PathBuf,
        #[arg(long, default_value_t = PI)]
        tau: f64,
        /// Defaults to min(pi/2, tau/2).
        #[arg(long)]
        tau_prime: Option<f64>,
        #[arg(long)]
        model: Option<String>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, env = "RACKFORGE_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Rack axioms and tangent bracket of a named construction.
    Rackcheck {
        path: PathBuf,
        #[arg(long, default_value = "kinyon")]
        construction: String,
        #[arg(long)]
        model: Option<String>,
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[arg(long, env = "RACKFORGE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 1e-4)]
        tangent_tol: f64,
    },
}

pub fn execute(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Verify { path } => commands::cmd_verify(path),
        Command::Analyze { path, seed, samples } => commands::cmd_analyze(path, *samples, *seed),
        Command::Integrate {
            path,
            model,
            tau_prime,
            tau,
            samples,
            seed,
            step,
            tol,
            tangent_tol,
        } => commands::cmd_integrate(
            path,
            &IntegrateOptions {
                model: model.clone(),
                tau_prime: *tau_prime,
                tau: *tau,
                samples: *samples,
                seed: *seed,
                step: *step,
                tol: *tol,
                tangent_tol: *tangent_tol,
            },
        ),
        Command::Strip {
            path,
            tau,
            tau_prime,
            model,
            samples,
            seed,
        } => commands::cmd_strip(
            path,
            &StripOptions {
                tau: *tau,
                tau_prime: *tau_prime,
                model: model.clone(),
                samples: *samples,
                seed: *seed,
            },
        ),
        Command::Rackcheck {
            path,
            construction,
            model,
            samples,
            seed,
            step,
            tol,
            tangent_tol,
        } => commands::cmd_rackcheck(
            path,
            &RackcheckOptions {
                construction: construction.clone(),
                model: model.clone(),
                samples: *samples,
                seed: *seed,
                step: *step,
                tol: *tol,
                tangent_tol: *tangent_tol,
            },
        ),
    }
}
