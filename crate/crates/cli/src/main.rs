//! `pdmosc`: data generation for the position-dependent-mass oscillator.
//!
//! Every subcommand reads one JSON config (`--config`), applies flag
//! overrides on top of it and writes CSV or JSON to `--out` or stdout.
//! Exit codes: 0 success, 2 invalid config, 3 classical solver failure,
//! 4 bound-state condition violated, 1 anything else.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use config::Overrides;
use error::CliError;

#[derive(Parser)]
#[command(
    name = "pdmosc",
    version,
    about = "Position-dependent-mass isochronous oscillator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output file; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long)]
    m0: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one trajectory: CSV t,x,xdot,p,H.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Measured period against energy: CSV E,T,T_omega_over_pi,status.
    PeriodSweep {
        #[command(flatten)]
        common: Common,
        /// Comma-separated energies.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        energies: Option<Vec<f64>>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Analytic and numerical spectra as a JSON report.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        levels: Option<usize>,
        #[arg(long)]
        n_points: Option<usize>,
    },
    /// One finite-difference eigensolve as a JSON report.
    Eigensolve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        levels: Option<usize>,
        /// `xi` or `x`.
        #[arg(long)]
        space: Option<String>,
        #[arg(long)]
        n_points: Option<usize>,
        #[arg(long)]
        refine: bool,
    },
    /// Eigenfunctions in both coordinates and V_eff: CSV.
    Wavefunction {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        levels: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// One period of each listed orbit: CSV orbit,E,t,x,xdot.
    PhasePortrait {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',')]
        energies: Option<Vec<f64>>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Linearization residual along a trajectory: CSV t,abs_X,residual, JSON
    /// summary on stderr.
    LinearizeCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        periods: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
    },
}

fn num(v: Option<f64>) -> Option<Value> {
    v.map(Value::from)
}

fn count(v: Option<usize>) -> Option<Value> {
    v.map(Value::from)
}

fn list(v: Option<Vec<f64>>) -> Option<Value> {
    v.map(Value::from)
}

fn common_overrides(c: &Common) -> Overrides {
    let mut o = Overrides::default();
    o.set(&["model", "omega"], num(c.omega));
    o.set(&["model", "a"], num(c.a));
    o.set(&["ambiguity", "alpha"], num(c.alpha));
    o.set(&["ambiguity", "beta"], num(c.beta));
    o.set(&["m0"], num(c.m0));
    o
}

type Runner = fn(&config::RunConfig, Option<&std::path::Path>) -> Result<(), CliError>;

fn prepare(cmd: Command) -> (Common, Overrides, Runner) {
    match cmd {
        Command::Simulate {
            common,
            t_end,
            tol,
            samples,
        } => {
            let mut o = common_overrides(&common);
            o.set(&["simulate", "t_end"], num(t_end));
            o.set(&["simulate", "tol"], num(tol));
            o.set(&["simulate", "samples"], count(samples));
            (common, o, commands::simulate)
        }
        Command::PeriodSweep {
            common,
            energies,
            tol,
        } => {
            let mut o = common_overrides(&common);
            o.set(&["period_sweep", "energies"], list(energies));
            o.set(&["period_sweep", "tol"], num(tol));
            (common, o, commands::period_sweep)
        }
        Command::Spectrum {
            common,
            levels,
            n_points,
        } => {
            let mut o = common_overrides(&common);
            o.set(&["spectrum", "levels"], count(levels));
            o.set(&["spectrum", "n_points"], count(n_points));
            // an ordering given on the command line replaces the configured list
            if common.alpha.is_some() || common.beta.is_some() {
                o.set(&["spectrum", "triples"], Some(Value::Array(Vec::new())));
            }
            (common, o, commands::spectrum)
        }
        Command::Eigensolve {
            common,
            levels,
            space,
            n_points,
            refine,
        } => {
            let mut o = common_overrides(&common);
            o.set(&["eigensolve", "levels"], count(levels));
            o.set(&["eigensolve", "space"], space.map(Value::from));
            o.set(&["eigensolve", "n_points"], count(n_points));
            if refine {
                o.set(&["eigensolve", "refine"], Some(Value::Bool(true)));
            }
            (common, o, commands::eigensolve_cmd)
        }
        Command::Wavefunction {
            common,
            levels,
            samples,
        } => {
            let mut o = common_overrides(&common);
            o.set(&["wavefunction", "levels"], count(levels));
            o.set(&["wavefunction", "samples"], count(samples));
            (common, o, commands::wavefunction)
        }
        Command::PhasePortrait {
            common,
            energies,
            samples,
        } => {
            let mut o = common_overrides(&common);
            o.set(&["phase_portrait", "energies"], list(energies));
            o.set(&["phase_portrait", "samples"], count(samples));
            (common, o, commands::phase_portrait)
        }
        Command::LinearizeCheck {
            common,
            periods,
            tol,
        } => {
            let mut o = common_overrides(&common);
            o.set(&["linearize_check", "periods"], num(periods));
            o.set(&["linearize_check", "tol"], num(tol));
            (common, o, commands::linearize_check)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (common, overrides, runner) = prepare(cli.command);
    let text = std::fs::read_to_string(&common.config).map_err(|e| CliError::Config {
        path: common.config.display().to_string(),
        message: e.to_string(),
    })?;
    let cfg = config::load(&text, &overrides)?;
    runner(&cfg, common.out.as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
