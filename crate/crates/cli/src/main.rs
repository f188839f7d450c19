//! `ksdiff`: command-line front end for the Kilbas-Saigo calculus library.
//!
//! Exit codes: 0 success, 2 usage / flag validation, 3 numeric failure,
//! 4 verification failure.

mod commands;
mod config;
mod output;
mod verify;

use clap::{Parser, Subcommand};
use output::Format;
use std::path::PathBuf;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

pub type CliResult = Result<(), CliError>;

pub fn usage_err(msg: impl Into<String>) -> CliError {
    CliError {
        code: EXIT_USAGE,
        message: msg.into(),
    }
}

impl From<ksdiff_core::Error> for CliError {
    fn from(e: ksdiff_core::Error) -> Self {
        use ksdiff_core::Error;
        let code = match e {
            Error::InvalidParameter(_) | Error::Domain(_) => EXIT_USAGE,
            _ => EXIT_NUMERIC,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError {
            code: EXIT_NUMERIC,
            message: format!("i/o: {e}"),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "ksdiff",
    version,
    about = "Kilbas-Saigo functions, stretched fractional operators, Pearson diffusion solvers and Monte Carlo"
)]
pub struct Cli {
    /// key=value config file merged under explicit flags
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// output file; stdout when absent
    #[arg(long, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,

    /// output format (verify always emits JSON)
    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: Format,

    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Evaluate the Kilbas-Saigo function E_{a,m,l}(z) on points or a grid
    KsEval(commands::KsEvalArgs),
    /// Evaluate the double gamma function log G(z; tau)
    Dgamma(commands::DgammaArgs),
    /// Apply the L1-discretized stretched Caputo operator to a built-in function
    Caputo(commands::CaputoArgs),
    /// Solve stretched or hyperbolic Cauchy problems for a Pearson diffusion
    Solve(commands::SolveArgs),
    /// Monte Carlo simulation of the time change Z and time-changed diffusions
    Simulate(commands::SimulateArgs),
    /// Run a named verification suite; exit 0 iff all checks pass
    Verify(verify::VerifyArgs),
    /// Reproduce the bound-sandwich and asymptotic-ratio tables
    Tables(commands::TablesArgs),
}

/// Seed resolution order: explicit flag, then KSDIFF_SEED, then the default.
pub fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("KSDIFF_SEED") {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .map_err(|_| usage_err(format!("KSDIFF_SEED is not a valid u64: {v:?}"))),
        Err(_) => Ok(ksdiff_core::stochastic_sim::MCConfig::default().seed),
    }
}

fn run(cli: &Cli) -> CliResult {
    let out = cli.output.as_deref();
    match &cli.cmd {
        Cmd::KsEval(a) => commands::cmd_ks_eval(a, cli.format, out),
        Cmd::Dgamma(a) => commands::cmd_dgamma(a, cli.format, out),
        Cmd::Caputo(a) => commands::cmd_caputo(a, cli.format, out),
        Cmd::Solve(a) => commands::cmd_solve(a, cli.format, out),
        Cmd::Simulate(a) => commands::cmd_simulate(a, cli.format, out),
        Cmd::Verify(a) => verify::cmd_verify(a, out),
        Cmd::Tables(a) => commands::cmd_tables(a, cli.format, out),
    }
}

fn main() {
    let mut args: Vec<String> = std::env::args().collect();
    if let Some(path) = config::config_path(&args) {
        if let Err(msg) = config::merge_into_args(std::path::Path::new(&path), &mut args) {
            eprintln!("error: {msg}");
            std::process::exit(EXIT_USAGE);
        }
    }
    // clap exits with code 2 on parse failure, matching the usage contract
    let cli = Cli::parse_from(&args);
    if let Err(e) = run(&cli) {
        eprintln!("error: {}", e.message);
        std::process::exit(e.code);
    }
}
