//! `deepwater`: linear deep-water wave kinematics from the command line.
//!
//! Exit codes: 0 on success, 1 on internal or validation failure, 2 on
//! usage errors, 3 when a well-formed request falls outside the model's
//! domain (for example a trajectory start above the separatrix).

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use deepwater_cli::commands::{self, GridSpec};
use deepwater_cli::config::{Overrides, RunConfig};
use deepwater_cli::error::{AppError, EXIT_FAILURE, EXIT_OK};

#[derive(Parser)]
#[command(
    name = "deepwater",
    version,
    about = "Linear deep-water waves: field sampling, phase portraits, \
             particle trajectories, and Stokes drift"
)]
struct Cli {
    #[command(flatten)]
    common: Common,

    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand; each falls back to the config file
/// and then to the built-in defaults.
#[derive(Args)]
struct Common {
    /// Wave amplitude in metres (default 0.1).
    #[arg(long, global = true, allow_negative_numbers = true)]
    epsilon: Option<f64>,

    /// Wavenumber in rad/m (default 1).
    #[arg(long, global = true, allow_negative_numbers = true)]
    k: Option<f64>,

    /// Gravitational acceleration in m/s^2 (default 9.81).
    #[arg(long, global = true, allow_negative_numbers = true)]
    g: Option<f64>,

    /// Integration tolerance in [1e-13, 1e-3] (default 1e-10).
    #[arg(long, global = true, allow_negative_numbers = true)]
    tol: Option<f64>,

    /// Output directory for artifacts (default '.').
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Artifact selection for portrait/trajectory: csv, svg, or both.
    #[arg(long, global = true)]
    format: Option<String>,

    /// RNG seed for the validation suite (default 0).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Flat `key = value` config file supplying any of the above.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the closed-form wave field on a grid at one instant.
    Field {
        /// Sampling grid as 'x0:x1:nx,y0:y1:ny' (metres, inclusive ends).
        #[arg(long, allow_hyphen_values = true)]
        grid: String,

        /// Sampling time in seconds.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t: f64,

        /// Reference pressure added to every pressure sample.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        p0: f64,
    },

    /// Sample Hamiltonian level curves of the particle motion.
    Portrait {
        /// Comma-separated levels; defaults to a spread around the
        /// critical level plus the separatrix.
        #[arg(long, allow_hyphen_values = true)]
        alphas: Option<String>,

        /// Samples per curve branch.
        #[arg(long, default_value_t = 200)]
        n_samples: usize,

        /// Top of the sampled window in the moving frame; defaults to
        /// three times the critical ordinate.
        #[arg(long, allow_negative_numbers = true)]
        y_max: Option<f64>,
    },

    /// Integrate one particle for a whole number of orbit periods.
    Trajectory {
        /// Release depth in metres (the mean surface is 0).
        #[arg(long, allow_negative_numbers = true)]
        y0: f64,

        /// Number of measured orbit periods to cover.
        #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
        periods: f64,
    },

    /// Tabulate orbit period and per-period drift against depth.
    Drift {
        /// Shallowest moving-frame depth (first row).
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        y_top: f64,

        /// Deepest moving-frame depth (last row).
        #[arg(long, default_value_t = -6.0, allow_negative_numbers = true)]
        y_bottom: f64,

        /// Number of rows.
        #[arg(long, default_value_t = 13)]
        n: usize,

        /// Also measure the true ODE period and drift per row (slower).
        #[arg(long)]
        include_ode: bool,
    },

    /// Run the built-in self-checks and write a JSON report.
    Validate,
}

fn main() {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, AppError> {
    let overrides = Overrides {
        epsilon: cli.common.epsilon,
        k: cli.common.k,
        g: cli.common.g,
        tol: cli.common.tol,
        out: cli.common.out.clone(),
        format: cli.common.format.clone(),
        seed: cli.common.seed,
    };
    let cfg = RunConfig::resolve(&overrides, cli.common.config.as_deref())?;

    let written = match cli.command {
        Command::Field { grid, t, p0 } => {
            let spec = GridSpec::parse(&grid)?;
            commands::cmd_field(&cfg, t, p0, &spec)?
        }
        Command::Portrait {
            alphas,
            n_samples,
            y_max,
        } => {
            let alphas = alphas.map(|list| parse_alpha_list(&list)).transpose()?;
            commands::cmd_portrait(&cfg, alphas, n_samples, y_max)?
        }
        Command::Trajectory { y0, periods } => commands::cmd_trajectory(&cfg, y0, periods)?,
        Command::Drift {
            y_top,
            y_bottom,
            n,
            include_ode,
        } => commands::cmd_drift(&cfg, y_top, y_bottom, n, include_ode)?,
        Command::Validate => {
            let (report, written) = commands::cmd_validate(&cfg)?;
            print!("{}", report.render_text());
            announce(&written);
            let code = if report.overall {
                EXIT_OK
            } else {
                EXIT_FAILURE
            };
            return Ok(code);
        }
    };
    announce(&written);
    Ok(EXIT_OK)
}

fn announce(paths: &[PathBuf]) {
    for path in paths {
        println!("wrote {}", path.display());
    }
}

fn parse_alpha_list(list: &str) -> Result<Vec<f64>, AppError> {
    list.split(',')
        .map(|item| {
            item.trim().parse::<f64>().map_err(|_| {
                AppError::Usage(format!(
                    "--alphas expects comma-separated numbers, got '{item}'"
                ))
            })
        })
        .collect()
}
