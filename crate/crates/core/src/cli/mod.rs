// SPDX-License-Identifier: Apache-2.0

//! Command-line scenario runner.

pub mod commands;
pub mod config;
pub mod output;
pub mod scenario;

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64 as C64;

pub use config::{Format, InitialState, ModelKind, ScenarioConfig, Sweep};
pub use scenario::{initial_trajectory, Model};

use crate::error::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical error: {0}")]
    Numerical(#[from] Error),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    /// 2 for configuration, 3 for numerical, 4 for I/O failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(e) if !e.is_numerical() => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "nhfloquet",
    version,
    about = "Driven non-Hermitian two-level systems: cyclic states, AA phases, hops"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// State components, b/a and eigenpath ratios over one period (CSV).
    Trajectory,
    /// AA phases of both cyclic states over a period sweep.
    AaSweep,
    /// Hop events and the first-hop timing (JSON).
    Hops {
        /// Report every net change of the nearest eigenpath, located at the switch.
        #[arg(long)]
        dominance: bool,
    },
    /// Bloch angles of the state and both eigenpaths.
    Bloch,
    /// The critical ratio of the BU model.
    Critical {
        #[arg(long, default_value_t = 1e-15)]
        tol: f64,
        /// Also print the residual of the defining equation.
        #[arg(long)]
        equation: bool,
        /// Also print Re of the Stokes exponent at theta = pi, rho/r = c.
        #[arg(long)]
        check_theta: bool,
    },
    /// Stokes exponent and exact vs asymptotic |R-| for the BU model.
    Stokes {
        #[arg(long, default_value_t = 256)]
        samples: usize,
    },
    /// Series vs uniform asymptotic Bessel values J(nu x).
    BesselCheck {
        #[arg(long, value_delimiter = ',', default_values_t = [2.5, 5.5, 10.5, 15.5, 20.5, 25.5, 29.5])]
        nu: Vec<f64>,
        /// |x|, below 1.
        #[arg(long, default_value_t = 0.5)]
        x: f64,
        /// arg x.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        arg: f64,
    },
}

/// Scenario flags shared by all subcommands; they override `--config`.
#[derive(Debug, Default, Args)]
pub struct CommonArgs {
    /// Key-value config file (`key = value` per line).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// h1, h2 or bu.
    #[arg(long, global = true)]
    pub model: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub epsilon_re: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub epsilon_im: Option<f64>,
    #[arg(long, global = true)]
    pub omega: Option<f64>,
    #[arg(long, global = true)]
    pub mu: Option<f64>,
    #[arg(long, global = true)]
    pub rho: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub r: Option<f64>,
    #[arg(long, global = true)]
    pub period: Option<f64>,
    #[arg(long, global = true)]
    pub t_min: Option<f64>,
    #[arg(long, global = true)]
    pub t_max: Option<f64>,
    #[arg(long, global = true)]
    pub t_step: Option<f64>,
    /// RK4 steps per period.
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    /// cyclic+, cyclic-, eig+, eig-, mix(w+,w-) or custom:ar,ai,br,bi.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub initial: Option<String>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// csv or json.
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

impl CommonArgs {
    fn flag_map(&self) -> BTreeMap<String, String> {
        let f = |x: Option<f64>| x.map(|v| v.to_string());
        let entries = [
            ("model", self.model.clone()),
            ("epsilon_re", f(self.epsilon_re)),
            ("epsilon_im", f(self.epsilon_im)),
            ("omega", f(self.omega)),
            ("mu", f(self.mu)),
            ("rho", f(self.rho)),
            ("r", f(self.r)),
            ("period", f(self.period)),
            ("t_min", f(self.t_min)),
            ("t_max", f(self.t_max)),
            ("t_step", f(self.t_step)),
            ("steps", self.steps.map(|v| v.to_string())),
            ("initial", self.initial.clone()),
            ("out", self.out.as_ref().map(|p| p.display().to_string())),
            ("format", self.format.clone()),
            ("jobs", self.jobs.map(|v| v.to_string())),
        ];
        entries
            .into_iter()
            .filter_map(|(k, v)| v.map(|v| (k.to_string(), v)))
            .collect()
    }

    /// File values first, then flags.
    pub fn scenario(&self) -> Result<ScenarioConfig, CliError> {
        let mut map = match &self.config {
            Some(p) => config::read_kv_file(p)?,
            None => BTreeMap::new(),
        };
        map.extend(self.flag_map());
        ScenarioConfig::from_map(&map)
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = cli.common.scenario()?;
    match &cli.command {
        Command::Trajectory => commands::trajectory(&cfg),
        Command::AaSweep => commands::aa_sweep(&cfg),
        Command::Hops { dominance } => commands::hops(&cfg, *dominance),
        Command::Bloch => commands::bloch(&cfg),
        Command::Critical {
            tol,
            equation,
            check_theta,
        } => commands::critical(&cfg, *tol, *equation, *check_theta),
        Command::Stokes { samples } => commands::stokes(&cfg, *samples),
        Command::BesselCheck { nu, x, arg } => {
            if !(*x > 0.0 && *x < 1.0) {
                return Err(CliError::Config(format!("--x must lie in (0, 1), got {x}")));
            }
            commands::bessel_check(&cfg, nu, C64::from_polar(*x, *arg))
        }
    }
}
