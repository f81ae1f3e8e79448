//! `sonin`: evaluate Sonin kernel pairs, verify them, apply the operators
//! they generate and emit deterministic CSV / JSON tables.
//!
//! Exit status: 0 when every embedded check passes, 1 when a check fails,
//! 2 when the input is invalid (a JSON error object goes to stderr).

mod commands;
mod output;

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use sonin_core::{Error, SeriesEvalConfig};

use output::Format;

const DEFAULT_GRID: &str = "0.1:5:20:sqrt";

#[derive(Parser, Debug)]
#[command(name = "sonin", version, about = "Sonin kernel pairs and general fractional operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,

    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate κ(x) and k(x) on a grid.
    Eval {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Check |(κ * k)(x) − 1| on a grid.
    PairVerify {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        quad: QuadArgs,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Compare numeric Laplace transforms with the closed forms and check L[κ]L[k] = 1/p.
    LaplaceVerify {
        #[command(flatten)]
        pair: PairArgs,
        /// Comma-separated transform arguments.
        #[arg(long, value_delimiter = ',', default_value = "2,4,8")]
        p: Vec<f64>,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
    },
    /// General fractional integral (κ * f)(x).
    Gfi {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        op: OperatorArgs,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// General fractional derivative d/dx (k * f)(x).
    Gfd {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        op: OperatorArgs,
        #[command(flatten)]
        quad: QuadArgs,
        /// Use (k * f′)(x) instead.
        #[arg(long)]
        regularized: bool,
        /// Apply the derivative to κ * f, which should give back f.
        #[arg(long)]
        of_gfi: bool,
    },
    /// Solve the triangular system for a generator and verify the resulting pair.
    Construct {
        #[command(flatten)]
        args: ConstructArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Quadrature order of the Sonin check.
        #[arg(long, default_value_t = sonin_core::convolution::DEFAULT_ORDER)]
        quad_order: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Reduction identities between the special functions on random draws.
    Reductions {
        #[arg(long, default_value_t = 200)]
        draws: usize,
        #[arg(long, default_value_t = 20_240_611)]
        seed: u64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

#[derive(Args, Debug, Default)]
pub struct PairArgs {
    /// power, tempered, ml-sum, wright, prabhakar, kummer, phi3, xi2,
    /// series-exp, series-binomial, series-exp-binomial
    #[arg(long)]
    pub family: Option<String>,
    /// Pair as JSON ({"family": ..., "params": {...}}) or a path to such a file.
    #[arg(long)]
    pub spec: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Option<f64>,
    /// Truncation order of series-* families.
    #[arg(long)]
    pub terms: Option<usize>,
}

#[derive(Args, Debug)]
pub struct GridArgs {
    /// start:stop:count[:spacing], spacing one of linear, sqrt (default), log.
    #[arg(long, default_value = DEFAULT_GRID)]
    pub grid: String,
}

#[derive(Args, Debug)]
pub struct QuadArgs {
    /// Gauss–Jacobi quadrature order.
    #[arg(long, default_value_t = sonin_core::convolution::DEFAULT_ORDER)]
    pub order: usize,
}

#[derive(Args, Debug)]
pub struct OperatorArgs {
    /// one, linear, square, expneg, or a file of (x, f(x)) samples starting at x = 0.
    #[arg(long, default_value = "one")]
    pub f: String,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    /// exp, binomial or exp-binomial.
    #[arg(long)]
    pub generator: String,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
    /// Exponent of the binomial generators.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    /// Scale of the series argument λx^α in the constructed pair.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.5)]
    pub lambda: f64,
    /// Truncation order of the coefficient series (default 40).
    #[arg(long)]
    pub order: Option<usize>,
}

/// A failure with its exit status.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Core(e) => match e {
                Error::ZeroLeadingCoefficient => "zero_leading_coefficient",
                Error::ParameterDomain(_) => "parameter_domain",
                Error::Pole(_) => "pole",
                Error::NonConvergence { .. } => "non_convergence",
                Error::PrecisionLoss { .. } => "precision_loss",
                Error::RadiusExceeded { .. } => "radius_exceeded",
                Error::MissingDerivative => "missing_derivative",
                Error::GridTooCoarse { .. } => "grid_too_coarse",
                Error::CoefficientConditionViolated { .. } => "coefficient_condition_violated",
                Error::AbscissaViolation(_) => "abscissa_violation",
                Error::TailBoundExceeded { .. } => "tail_bound_exceeded",
                Error::SoninSpotCheck { .. } => "sonin_spot_check",
            },
        }
    }

    /// Bad input exits with 2; a numerical check that could not be met
    /// exits with 1.
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(
                Error::NonConvergence { .. }
                | Error::PrecisionLoss { .. }
                | Error::GridTooCoarse { .. }
                | Error::TailBoundExceeded { .. }
                | Error::SoninSpotCheck { .. },
            ) => 1,
            _ => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

fn fail(err: &CliError) -> ExitCode {
    let body = json!({ "error": { "kind": err.kind(), "message": err.message() } });
    eprintln!("{body}");
    ExitCode::from(err.exit_code())
}

fn run(cli: &Cli) -> Result<commands::Outcome, CliError> {
    let cfg = SeriesEvalConfig::from_env()?;
    match &cli.command {
        Command::Eval { pair, grid } => commands::eval(pair, grid, &cfg),
        Command::PairVerify { pair, grid, quad, tol } => commands::pair_verify(pair, grid, quad.order, *tol, &cfg),
        Command::LaplaceVerify { pair, p, tol } => commands::laplace_verify(pair, p, *tol, &cfg),
        Command::Gfi { pair, op, quad } => commands::gfi_command(pair, op, quad.order, &cfg),
        Command::Gfd { pair, op, quad, regularized, of_gfi } => {
            commands::gfd_command(pair, op, *regularized, *of_gfi, quad.order, &cfg)
        }
        Command::Construct { args, grid, quad_order, tol } => commands::construct(args, grid, *quad_order, *tol, &cfg),
        Command::Reductions { draws, seed, tol } => commands::reductions(*draws, *seed, *tol),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.render().to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ").to_string();
            return fail(&CliError::usage(first));
        }
    };
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => return fail(&e),
    };
    let text = outcome.artifact.render(cli.format);
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                return fail(&CliError::usage(format!("cannot write --out {path:?}: {e}")));
            }
        }
        None => print!("{text}"),
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
