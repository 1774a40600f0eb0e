//! `fgent`: exact entanglement-entropy moments, oracle verification,
//! identity sweeps, simulation and figure data.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or domain error.

mod commands;
mod figures;
mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fgent::{Case, EnsembleSpec};
use output::Output;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "fgent",
    version,
    about = "Entanglement entropy moments of fermionic Gaussian states"
)]
struct Cli {
    /// Output format.
    #[arg(long, short = 'o', value_enum, default_value = "table", global = true)]
    output: Output,

    /// Worker threads (default: all cores).
    #[arg(long, env = "FGENT_THREADS", global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CaseArg {
    A,
    B,
}

impl From<CaseArg> for Case {
    fn from(c: CaseArg) -> Case {
        match c {
            CaseArg::A => Case::A,
            CaseArg::B => Case::B,
        }
    }
}

#[derive(Args, Clone, Debug)]
struct SpecArgs {
    /// A: arbitrary particle number; B: fixed particle number p.
    #[arg(long, value_enum, ignore_case = true)]
    case: CaseArg,
    /// Subsystem modes.
    #[arg(short)]
    m: u32,
    /// Complement modes.
    #[arg(short)]
    n: u32,
    /// Particle number (case B only).
    #[arg(short)]
    p: Option<u32>,
}

impl SpecArgs {
    fn spec(&self) -> Result<EnsembleSpec, CliError> {
        match (self.case, self.p) {
            (CaseArg::A, Some(_)) => Err(CliError::usage("-p is only meaningful with --case B")),
            (CaseArg::B, None) => Err(CliError::usage("--case B requires -p")),
            _ => Ok(EnsembleSpec::new(self.case.into(), self.m, self.n, self.p)?),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SamplerArg {
    Mcmc,
    Matrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OrderArg {
    Leading,
    Corrected,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form mean and variance.
    Exact(SpecArgs),
    /// Compare closed forms with the summation and quadrature oracles over all
    /// specs with n <= max-n.
    Verify {
        /// Restrict to one case (default: both).
        #[arg(long, value_enum, ignore_case = true)]
        case: Option<CaseArg>,
        #[arg(long, default_value_t = 10)]
        max_n: u32,
        /// Quadrature order (default: size dependent).
        #[arg(long)]
        order: Option<usize>,
    },
    /// Numerically check the finite-sum identities.
    Identities {
        /// Comma-separated identity ids (default: all).
        #[arg(long, value_delimiter = ',')]
        ids: Vec<String>,
        #[arg(long, default_value_t = 25)]
        cases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Monte Carlo moments and Gaussian diagnostics.
    Simulate {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "mcmc")]
        sampler: SamplerArg,
        #[arg(long)]
        burn_in: Option<usize>,
        #[arg(long)]
        thinning: Option<usize>,
        /// Also write the batch as CSV with a JSON header line.
        #[arg(long)]
        batch_out: Option<PathBuf>,
    },
    /// Large-dimension variance at fixed ratios f1 = m/(m+n), f2 = p/(m+n).
    Asymptotic {
        #[arg(long, value_enum, ignore_case = true)]
        case: CaseArg,
        #[arg(long)]
        f1: f64,
        #[arg(long)]
        f2: Option<f64>,
        /// m + n, required by the corrected order.
        #[arg(long)]
        total_dim: Option<f64>,
        #[arg(long, value_enum, default_value = "leading")]
        order: OrderArg,
    },
    /// Figure data as CSV: 1 = variance versus m at fixed ratios;
    /// 2, 3 = histogram of the standardized entropy (case A, case B).
    Density(figures::DensityArgs),
}

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or out-of-domain input.
    Usage(String),
    /// A verification ran and failed.
    Failed(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

impl From<fgent::Error> for CliError {
    fn from(e: fgent::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(t) = cli.threads {
        // Only fails if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    let out = cli.output;
    match cli.command {
        Command::Exact(s) => commands::exact(&s.spec()?, out),
        Command::Verify { case, max_n, order } => {
            commands::verify(case.map(Into::into), max_n, order, out)
        }
        Command::Identities { ids, cases, seed } => commands::identities(&ids, cases, seed, out),
        Command::Simulate {
            spec,
            samples,
            seed,
            sampler,
            burn_in,
            thinning,
            batch_out,
        } => commands::simulate(
            &spec.spec()?,
            samples,
            seed,
            sampler == SamplerArg::Matrix,
            burn_in,
            thinning,
            batch_out,
            out,
        ),
        Command::Asymptotic {
            case,
            f1,
            f2,
            total_dim,
            order,
        } => commands::asymptotic(
            case.into(),
            f1,
            f2,
            total_dim,
            order == OrderArg::Corrected,
            out,
        ),
        Command::Density(args) => figures::density(&args, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Failed(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
