//! Argument parsing and command dispatch.

use crate::bench::{self, BenchConfig};
use crate::compare::CompareReport;
use crate::error::CliError;
use crate::generator::{generate, GeneratorSpec};
use crate::io::{format_result, read_values, write_values, Format};
use clap::{Args, Parser, Subcommand};
use exactsum::{ExactMethod, SumMethod, DEFAULT_LARGE_THRESHOLD};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

/// Exit status when an exact method disagrees with the reference.
pub const MISMATCH_EXIT: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "exactsum",
    version,
    about = "Exact, correctly rounded sums of doubles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write mirrored benchmark data (exact sum zero)
    Gen {
        #[command(flatten)]
        spec: GenArgs,
        /// Output file (stdout if omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Bin)]
        format: Format,
    },
    /// Sum the input values
    Sum(ReduceArgs),
    /// Exact sum divided by the element count
    Mean(ReduceArgs),
    /// Sum of squares of the input values
    Sqnorm(ReduceArgs),
    /// Dot product of two equally long inputs
    Dot {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Bin)]
        format: Format,
        #[command(flatten)]
        method: MethodArgs,
    },
    /// Time every method and write ns/term rows as CSV
    Bench(BenchArgs),
    /// Run all methods and the reference; exit 2 if an exact method disagrees
    Compare {
        #[command(flatten)]
        input: InputArgs,
    },
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Number of values, must be even
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Shuffle after mirroring
    #[arg(long)]
    pub permute: bool,
}

/// A value file, or generator parameters when no file is given.
#[derive(Debug, Args)]
pub struct InputArgs {
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Bin)]
    pub format: Format,
    /// Generate this many values instead of reading a file
    #[arg(long, conflicts_with = "input")]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub permute: bool,
}

impl InputArgs {
    pub fn load(&self) -> Result<Vec<f64>, CliError> {
        match (&self.input, self.n) {
            (Some(path), _) => read_values(path, self.format),
            (None, Some(n)) => generate(&GeneratorSpec::new(n, self.seed, self.permute)),
            (None, None) => Err(CliError::InvalidArgument(
                "need an input file or --n".into(),
            )),
        }
    }
}

#[derive(Debug, Args)]
pub struct MethodArgs {
    /// Summation method; exact small or large by input length if omitted
    #[arg(long)]
    pub method: Option<SumMethod>,
    /// Inputs longer than this use the large accumulator by default
    #[arg(long, default_value_t = DEFAULT_LARGE_THRESHOLD)]
    pub large_threshold: usize,
}

impl MethodArgs {
    pub fn resolve(&self, len: usize) -> SumMethod {
        self.method
            .unwrap_or_else(|| ExactMethod::auto(len, self.large_threshold).into())
    }
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub method: MethodArgs,
    /// Split into this many segments and merge (exact sum only)
    #[arg(long)]
    pub parts: Option<usize>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = bench::DEFAULT_SIZES)]
    pub sizes: Vec<usize>,
    /// Methods to time (comma separated, default all)
    #[arg(long = "method", value_delimiter = ',')]
    pub methods: Vec<SumMethod>,
    /// Terms summed per (method, size)
    #[arg(long, default_value_t = bench::DEFAULT_TOTAL)]
    pub total: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub permute: bool,
    /// Also time the split-merge sum over this many parts
    #[arg(long)]
    pub parts: Option<usize>,
    /// CSV path; a gnuplot .dat file is written next to it
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_LARGE_THRESHOLD)]
    pub large_threshold: usize,
}

#[derive(Clone, Copy)]
enum Reduce {
    Sum,
    Mean,
    Sqnorm,
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<ExitCode, CliError> {
    let io_err = |e| CliError::io("<stdout>", e);
    match cli.command {
        Command::Gen { spec, out, format } => {
            let values = generate(&GeneratorSpec::new(spec.n, spec.seed, spec.permute))?;
            match out {
                Some(path) => {
                    let file = File::create(&path).map_err(|e| CliError::io(&path, e))?;
                    let mut w = BufWriter::new(file);
                    write_values(&mut w, &values, format)
                        .and_then(|_| w.flush())
                        .map_err(|e| CliError::io(&path, e))?;
                }
                None => write_values(stdout, &values, format).map_err(io_err)?,
            }
        }
        Command::Sum(args) => reduce(&args, Reduce::Sum, stdout)?,
        Command::Mean(args) => reduce(&args, Reduce::Mean, stdout)?,
        Command::Sqnorm(args) => reduce(&args, Reduce::Sqnorm, stdout)?,
        Command::Dot {
            left,
            right,
            format,
            method,
        } => {
            let a = read_values(&left, format)?;
            let b = read_values(&right, format)?;
            let v = exactsum::dot(&a, &b, method.resolve(a.len()))?;
            writeln!(stdout, "{}", format_result(v)).map_err(io_err)?;
        }
        Command::Bench(args) => {
            let config = BenchConfig {
                sizes: args.sizes,
                methods: if args.methods.is_empty() {
                    SumMethod::ALL.to_vec()
                } else {
                    args.methods
                },
                total: args.total,
                seed: args.seed,
                permute: args.permute,
                parts: args.parts,
                large_threshold: args.large_threshold,
            };
            let records = bench::run_bench(&config)?;
            match args.out {
                Some(path) => {
                    let file = File::create(&path).map_err(|e| CliError::io(&path, e))?;
                    bench::write_csv(BufWriter::new(file), &records)?;
                    let dat = bench::dat_path(&path);
                    let file = File::create(&dat).map_err(|e| CliError::io(&dat, e))?;
                    let mut w = BufWriter::new(file);
                    bench::write_dat(&mut w, &records)
                        .and_then(|_| w.flush())
                        .map_err(|e| CliError::io(&dat, e))?;
                }
                None => bench::write_csv(stdout, &records)?,
            }
        }
        Command::Compare { input } => {
            let report = CompareReport::new(&input.load()?);
            write!(stdout, "{report}").map_err(io_err)?;
            if !report.passed() {
                return Ok(ExitCode::from(MISMATCH_EXIT));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn reduce(args: &ReduceArgs, op: Reduce, stdout: &mut dyn Write) -> Result<(), CliError> {
    let values = args.input.load()?;
    let method = args.method.resolve(values.len());
    let v = match (op, args.parts) {
        (Reduce::Sum, Some(parts)) => {
            if !method.is_exact() {
                return Err(CliError::InvalidArgument(format!(
                    "--parts needs an exact method, not {method}"
                )));
            }
            exactsum::parallel_exact_sum_with(&values, parts, args.method.large_threshold)?
        }
        (_, Some(_)) => {
            return Err(CliError::InvalidArgument(
                "--parts applies to sum only".into(),
            ))
        }
        (Reduce::Sum, None) => exactsum::sum(&values, method),
        (Reduce::Mean, None) => exactsum::mean(&values, method)?,
        (Reduce::Sqnorm, None) => exactsum::sqnorm(&values, method),
    };
    writeln!(stdout, "{}", format_result(v)).map_err(|e| CliError::io("<stdout>", e))
}
