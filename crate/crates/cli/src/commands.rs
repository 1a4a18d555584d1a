//! Argument definitions and dispatch for every subcommand.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use simroots::{parse_poly, simultaneous_spectrum, IntPolynomial};

use crate::error::{CliError, CliResult};
use crate::reports::{self, ExpSumRequest, DEFAULT_ARTIN_BOUND};
use crate::spectrum_io::{plot_data, write_csv, write_json, Format, TableStyle};
use crate::sweep::{run_sweep, SweepOutcome, SweepParams, DEFAULT_CHECKPOINT_EVERY};
use crate::verify::verify_paper;

#[derive(Debug, Parser)]
#[command(
    name = "simroots",
    version,
    about = "Primitive roots and simultaneous primitive-root tuples"
)]
pub struct Cli {
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, env = "SIMROOTS_WORKERS", default_value_t = 0)]
    pub workers: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate z -> f(z) over the primitive roots z of a prime.
    Spectrum(SpectrumArgs),
    /// Count primes p <= x for which z and f(z) are both primitive roots.
    Sweep(SweepArgs),
    /// Empirical densities of (phi(p-1)/(p-1))^k over primes.
    Density(DensityArgs),
    /// Re-run the four worked examples and report per-check results.
    VerifyPaper,
    /// Primitive-root statistics for one prime.
    Stats(StatsArgs),
    /// Exponential sums over primitive roots.
    Expsum(ExpsumArgs),
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub prime: u64,
    /// Polynomial in t; repeat for tuples.
    #[arg(long = "poly", required = true)]
    pub polys: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, value_enum, default_value_t = TableStyle::Full)]
    pub table_style: TableStyle,
    /// Output file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Plot data file; defaults to the output path with a `.dat` extension.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub z: i64,
    #[arg(long)]
    pub poly: String,
    #[arg(long)]
    pub x_max: u64,
    /// JSONL output file (stdout when absent; resuming needs a file).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    #[arg(long, requires = "checkpoint")]
    pub resume: bool,
    #[arg(long, default_value_t = DEFAULT_CHECKPOINT_EVERY)]
    pub checkpoint_every: u64,
    #[arg(long, hide = true)]
    pub halt_after: Option<u64>,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[arg(long)]
    pub x: u64,
    #[arg(long)]
    pub k: u32,
    #[arg(long, default_value_t = DEFAULT_ARTIN_BOUND)]
    pub artin_bound: u64,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub prime: u64,
    #[arg(long)]
    pub poly: Option<String>,
    /// Also sum over primitive roots n <= LIMIT only.
    #[arg(long)]
    pub limit: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ExpsumArgs {
    #[arg(long)]
    pub prime: u64,
    #[arg(long, conflicts_with_all = ["scan", "decompose"])]
    pub u: Option<u64>,
    #[arg(long, conflicts_with = "decompose")]
    pub scan: bool,
    #[arg(long, requires = "poly")]
    pub decompose: bool,
    #[arg(long)]
    pub poly: Option<String>,
}

fn poly(text: &str) -> CliResult<IntPolynomial> {
    parse_poly(text).map_err(|e| CliError::Parse(format!("{e} in {text:?}")))
}

fn print_json<T: Serialize>(value: &T) -> CliResult<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> CliResult<u8> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers)
        .build()
        .map_err(|e| CliError::Failure(format!("thread pool: {e}")))?;
    pool.install(|| dispatch(&cli.command))
}

fn dispatch(command: &Command) -> CliResult<u8> {
    match command {
        Command::Spectrum(a) => spectrum(a),
        Command::Sweep(a) => sweep(a),
        Command::Density(a) => {
            print_json(&reports::density(a.x, a.k, a.artin_bound)?)?;
            Ok(0)
        }
        Command::VerifyPaper => {
            let report = verify_paper()?;
            print!("{}", report.render());
            Ok(if report.all_passed() { 0 } else { 1 })
        }
        Command::Stats(a) => {
            let f = a.poly.as_deref().map(poly).transpose()?;
            print_json(&reports::stats(a.prime, f.as_ref(), a.limit)?)?;
            Ok(0)
        }
        Command::Expsum(a) => {
            let request = if a.decompose {
                ExpSumRequest::Decompose(poly(a.poly.as_deref().unwrap_or_default())?)
            } else if a.scan {
                ExpSumRequest::Scan
            } else if let Some(u) = a.u {
                ExpSumRequest::Single(u)
            } else {
                return Err(CliError::Failure(
                    "give one of --u, --scan or --decompose".into(),
                ));
            };
            print_json(&reports::expsum(a.prime, &request)?)?;
            Ok(0)
        }
    }
}

fn spectrum(a: &SpectrumArgs) -> CliResult<u8> {
    let polys = a
        .polys
        .iter()
        .map(|s| poly(s))
        .collect::<CliResult<Vec<_>>>()?;
    let spec = simultaneous_spectrum(a.prime, &polys)?;
    let write = |out: &mut dyn Write| -> CliResult<()> {
        match a.format {
            Format::Csv => write_csv(&spec, a.table_style, out),
            Format::Json => write_json(&spec, out),
        }
    };
    match &a.out {
        Some(path) => {
            let mut f = BufWriter::new(File::create(path)?);
            write(&mut f)?;
            f.flush()?;
        }
        None => write(&mut io::stdout().lock())?,
    }
    let plot = a
        .plot
        .clone()
        .or_else(|| a.out.as_ref().map(|o| o.with_extension("dat")));
    if let Some(path) = plot {
        fs::write(path, plot_data(&spec))?;
    }
    Ok(0)
}

fn sweep(a: &SweepArgs) -> CliResult<u8> {
    let f = poly(&a.poly)?;
    // Without --out the records go to a scratch file that is streamed to stdout.
    let (out, scratch) = match &a.out {
        Some(p) => (p.clone(), None),
        None => {
            if a.resume {
                return Err(CliError::Failure("--resume needs --out".into()));
            }
            let path =
                std::env::temp_dir().join(format!("simroots-sweep-{}.jsonl", std::process::id()));
            (path.clone(), Some(path))
        }
    };
    let params = SweepParams {
        z: a.z,
        poly: f,
        x_max: a.x_max,
        out,
        checkpoint: a.checkpoint.clone(),
        resume: a.resume,
        checkpoint_every: a.checkpoint_every,
        halt_after: a.halt_after,
    };
    let outcome = run_sweep(&params);
    if let Some(path) = scratch {
        if outcome.is_ok() {
            io::copy(&mut File::open(&path)?, &mut io::stdout().lock())?;
        }
        let _ = fs::remove_file(path);
    }
    match outcome? {
        SweepOutcome::Complete(_) => Ok(0),
        SweepOutcome::Halted { last_prime, .. } => {
            eprintln!("halted after p = {last_prime}");
            Ok(0)
        }
    }
}
