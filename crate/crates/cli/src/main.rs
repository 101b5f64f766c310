//! `koopman-rational`: classify, solve, verify and sample quadratic planar
//! systems with linear rational Koopman eigenfunctions.

/// `println!` that tolerates a closed stdout, e.g. when piped into `head`.
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

mod commands;
mod exit;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use koopman_rational::exact::rational::{self, ExactRational};
use koopman_rational::family::Family;

#[derive(Parser)]
#[command(name = "koopman-rational", version, about = "Exact Koopman eigenfunction solver for quadratic planar ODEs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test membership in the solvable families and print all 13 residuals.
    Classify {
        ode: PathBuf,
        /// Accept residuals with |r| < TOL instead of requiring exact zeros.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Build the closed-form solution and write a trajectory CSV.
    Solve {
        ode: PathBuf,
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        x0: ExactRational,
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        y0: ExactRational,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t0: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        t1: f64,
        #[arg(long, default_value_t = 101)]
        samples: usize,
        /// Trajectory CSV; eigenpairs go to `<out>.pairs.json`, the run manifest to `<out>.manifest.json`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Check eigenpairs exactly and the closed form against numerical integration.
    Verify {
        ode: PathBuf,
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        x0: ExactRational,
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        y0: ExactRational,
        #[arg(long, default_value_t = 1.0)]
        t1: f64,
        /// Verify these eigenpairs (a `solve` pairs file) instead of recomputing them.
        #[arg(long)]
        pairs: Option<PathBuf>,
        /// Bound on the cross-check and linearity errors.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Write seeded random members of a family as ODE files.
    Sample {
        #[arg(long, value_enum)]
        family: SampleFamily,
        /// Overridden by KOOPMAN_RATIONAL_SEED when set.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Run the built-in worked examples against their published values.
    Examples {
        /// Add a coefficient perturbation of this size before solving.
        #[arg(long, value_parser = parse_rational)]
        perturb: Option<ExactRational>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SampleFamily {
    #[value(name = "L")]
    L,
    #[value(name = "X")]
    X,
    /// Fully random coefficients.
    Generic,
}

impl SampleFamily {
    fn family(self) -> Option<Family> {
        match self {
            SampleFamily::L => Some(Family::L),
            SampleFamily::X => Some(Family::X),
            SampleFamily::Generic => None,
        }
    }
}

fn parse_rational(text: &str) -> Result<ExactRational, String> {
    rational::parse(text).map_err(|e| e.to_string())
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Classify { ode, tol } => commands::classify::run(&ode, tol),
        Command::Solve { ode, x0, y0, t0, t1, samples, out } => {
            commands::solve::run(&commands::solve::Args { ode, x0, y0, t0, t1, samples, out })
        }
        Command::Verify { ode, x0, y0, t1, pairs, tol, json } => {
            commands::verify::run(&commands::verify::Args { ode, x0, y0, t1, pairs, tol, json })
        }
        Command::Sample { family, seed, count, out_dir } => {
            commands::sample::run(family.family(), seed, count, &out_dir)
        }
        Command::Examples { perturb, json } => commands::examples::run(perturb.as_ref(), json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit::code_for(&err))
        }
    }
}
