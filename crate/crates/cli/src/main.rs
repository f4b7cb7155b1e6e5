//! `sumsets`: command-line access to sumset sizes, coefficient lattices,
//! closed-form verification, h-types and the sampling experiments.
//!
//! Exit status is 0 on success, 2 for usage errors and 1 when a computation
//! fails (overflowed limits, truncated searches and the like).

mod commands;
mod input;
mod report;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sumset_core::experiments::WORKERS_ENV;

use input::SetInput;
use report::Format;

#[derive(Parser, Debug)]
#[command(name = "sumsets", version, about = "Exact h-fold sumset computations and experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// h-fold sumsets and their size profiles.
    #[command(subcommand)]
    Sumset(SumsetCmd),
    /// The coefficient lattice and its successive L1 minima.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Closed-form sizes, their verification, and constructions.
    #[command(subcommand)]
    Theory(TheoryCmd),
    /// h-types of sum and product tables and the maps between them.
    #[command(subcommand)]
    Types(TypesCmd),
    /// Seeded sampling and exhaustive scans over subsets of [n].
    #[command(subcommand)]
    Experiment(ExperimentCmd),
}

#[derive(Subcommand, Debug)]
enum SumsetCmd {
    /// The elements of hA.
    Compute {
        #[command(flatten)]
        input: SetInput,
        #[arg(long)]
        h: u32,
    },
    /// |hA|, the deficit and its first differences for h = 1..=horizon.
    Profile {
        #[command(flatten)]
        input: SetInput,
        #[arg(long, default_value_t = 12)]
        horizon: u32,
    },
}

#[derive(Subcommand, Debug)]
enum LatticeCmd {
    /// A Hermite-normal-form basis of the coefficient lattice.
    Basis {
        #[command(flatten)]
        input: SetInput,
    },
    /// Successive L1 minima with minimizers.
    Minima {
        #[command(flatten)]
        input: SetInput,
        /// Number of minima (at most k - 2).
        #[arg(long, default_value_t = 2)]
        count: usize,
        /// Largest L1 norm searched.
        #[arg(long, default_value_t = 1000)]
        cap: u64,
    },
}

#[derive(Subcommand, Debug)]
enum TheoryCmd {
    /// C(h+k-1, k-1) - C(h-h1+k-1, k-1), valid for h < h2.
    Predict {
        #[arg(long)]
        h: u64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        h1: u64,
    },
    /// Compare the closed form with brute-force sumsets for every h < h2.
    Verify {
        #[command(flatten)]
        input: SetInput,
        /// Minima are searched up to L1 norm 2 * horizon + 2.
        #[arg(long, default_value_t = sumset_core::theory::DEFAULT_VERIFY_HORIZON)]
        horizon: u64,
    },
    /// A k-element set with lattice minima 2a and 2b.
    ConstructLemma {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        k: usize,
    },
    /// {0, 1, 3b+1, 3b+4}, with |hA| = 2(h^2+1) for h <= b.
    ConstructCute {
        #[arg(long)]
        b: u64,
    },
    /// Smallest and largest |hA| and witnesses for the sizes in between.
    Extremes {
        #[arg(long)]
        h: u64,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Subcommand, Debug)]
enum TypesCmd {
    /// The h-type of an integer or rational set (or of its product table).
    Type {
        #[command(flatten)]
        input: SetInput,
        #[arg(long)]
        h: u32,
        /// Partition by h-fold products instead of sums.
        #[arg(long)]
        product: bool,
    },
    /// Smallest gap between distinct h-fold sums.
    Separation {
        #[command(flatten)]
        input: SetInput,
        #[arg(long)]
        h: u32,
    },
    /// Nonnegative integers with the same h-type as a rational set.
    Embed {
        #[command(flatten)]
        input: SetInput,
        #[arg(long)]
        h: u32,
    },
    /// {2^s : s in S}, whose product type is the sum type of S.
    ToProduct {
        #[command(flatten)]
        input: SetInput,
    },
    /// Integers whose h-type is the product type of a set of positive integers.
    ToSum {
        #[command(flatten)]
        input: SetInput,
        #[arg(long)]
        h: u32,
    },
}

#[derive(Args, Debug)]
struct Parallel {
    /// Worker threads; results do not depend on this.
    #[arg(long, env = WORKERS_ENV, default_value_t = default_workers())]
    workers: usize,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Subcommand, Debug)]
enum ExperimentCmd {
    /// Histogram of |hA| over uniform random k-subsets of [n].
    Random {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        h: u32,
        /// Number of samples; 0 scans every subset.
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        parallel: Parallel,
    },
    /// Exact histogram of |hA| over every k-subset of [n].
    Scan {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        h: u32,
        #[command(flatten)]
        parallel: Parallel,
    },
    /// Distribution of the first two lattice minima of random k-subsets of [n].
    MinimaStats {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 2000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Even L1 norm bound for each minima search.
        #[arg(long, default_value_t = 400)]
        cap: u64,
        #[command(flatten)]
        parallel: Parallel,
    },
    /// Distinct h-types among all k-subsets of [n].
    TypeCensus {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        h: u32,
        #[command(flatten)]
        parallel: Parallel,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(sumset_core::Error),
    Output(String),
}

impl From<sumset_core::Error> for CliError {
    fn from(e: sumset_core::Error) -> Self {
        match e {
            // bad arguments that only the library can detect are still usage errors
            sumset_core::Error::InvalidInput(msg) => CliError::Usage(msg),
            other => CliError::Compute(other),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = commands::run(&cli.command)
        .and_then(|reports| report::render(reports, cli.format))
        .and_then(|text| emit(&text, cli.output.as_ref()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(CliError::Output(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn emit(text: &str, path: Option<&PathBuf>) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Output(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Output(e.to_string())),
    }
}
