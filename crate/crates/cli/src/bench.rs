//! Timing harness: R = max(1, T/N) summations of one generated array per size.

use crate::error::CliError;
use crate::generator::{generate, GeneratorSpec};
use exactsum::{
    parallel_exact_sum_with, sum_kahan, sum_ordered, sum_unordered, LargeAccumulator,
    SmallAccumulator, SumMethod,
};
use std::fmt;
use std::hint::black_box;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const DEFAULT_TOTAL: u64 = 100_000_000;
pub const DEFAULT_SIZES: [usize; 6] = [10, 100, 1_000, 10_000, 100_000, 1_000_000];
pub const CSV_HEADER: [&str; 5] = ["method", "n", "repetitions", "ns_per_term", "result_bits"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BenchMethod {
    Serial(SumMethod),
    /// Split-merge exact sum over this many parts.
    Split(usize),
}

impl fmt::Display for BenchMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BenchMethod::Serial(m) => f.write_str(m.name()),
            BenchMethod::Split(p) => write!(f, "parallel-{p}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub methods: Vec<SumMethod>,
    pub total: u64,
    pub seed: u64,
    pub permute: bool,
    pub parts: Option<usize>,
    pub large_threshold: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: DEFAULT_SIZES.to_vec(),
            methods: SumMethod::ALL.to_vec(),
            total: DEFAULT_TOTAL,
            seed: 1,
            permute: false,
            parts: None,
            large_threshold: exactsum::DEFAULT_LARGE_THRESHOLD,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub method: BenchMethod,
    pub n: usize,
    pub repetitions: u64,
    pub ns_per_term: f64,
    pub result_bits: u64,
}

pub fn repetitions(total: u64, n: usize) -> u64 {
    (total / n as u64).max(1)
}

pub fn run_bench(config: &BenchConfig) -> Result<Vec<BenchRecord>, CliError> {
    let max = config.sizes.iter().copied().max().unwrap_or(0);
    if config.sizes.contains(&0) {
        return Err(CliError::InvalidArgument("sizes must be at least 1".into()));
    }
    if config.total < max as u64 {
        return Err(CliError::InvalidArgument(format!(
            "total {} is smaller than the largest size {max}",
            config.total
        )));
    }
    if config.parts == Some(0) {
        return Err(exactsum::Error::ZeroParts.into());
    }
    let mut methods: Vec<BenchMethod> = config
        .methods
        .iter()
        .map(|&m| BenchMethod::Serial(m))
        .collect();
    methods.extend(config.parts.map(BenchMethod::Split));

    let mut large = LargeAccumulator::new();
    let mut records = Vec::new();
    for &n in &config.sizes {
        // odd sizes get one extra generated term dropped
        let mut data = generate(&GeneratorSpec::new(n + n % 2, config.seed, config.permute))?;
        data.truncate(n);
        let reps = repetitions(config.total, n);
        for &method in &methods {
            let start = Instant::now();
            let mut result = 0.0;
            for _ in 0..reps {
                result = run_once(black_box(&data), method, config.large_threshold, &mut large)?;
            }
            let elapsed = start.elapsed();
            black_box(result);
            records.push(BenchRecord {
                method,
                n,
                repetitions: reps,
                ns_per_term: elapsed.as_nanos() as f64 / (reps as f64 * n as f64),
                result_bits: result.to_bits(),
            });
        }
    }
    Ok(records)
}

fn run_once(
    data: &[f64],
    method: BenchMethod,
    threshold: usize,
    large: &mut LargeAccumulator,
) -> Result<f64, CliError> {
    Ok(match method {
        BenchMethod::Serial(SumMethod::Small) => {
            let mut acc = SmallAccumulator::new();
            acc.add_slice(data);
            acc.round()
        }
        BenchMethod::Serial(SumMethod::Large) => {
            large.clear();
            large.add_slice(data);
            large.round()
        }
        BenchMethod::Serial(SumMethod::Ordered) => sum_ordered(data.iter().copied()),
        BenchMethod::Serial(SumMethod::Unordered) => sum_unordered(data.iter().copied()),
        BenchMethod::Serial(SumMethod::Kahan) => sum_kahan(data.iter().copied()),
        BenchMethod::Split(parts) => parallel_exact_sum_with(data, parts, threshold)?,
    })
}

pub fn write_csv(out: impl Write, records: &[BenchRecord]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.method.to_string(),
            r.n.to_string(),
            r.repetitions.to_string(),
            format!("{:.4}", r.ns_per_term),
            format!("0x{:016X}", r.result_bits),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// gnuplot data: one `index` block per method, rows `method n ns_per_term`.
pub fn write_dat(mut out: impl Write, records: &[BenchRecord]) -> std::io::Result<()> {
    let mut order: Vec<BenchMethod> = Vec::new();
    for r in records {
        if !order.contains(&r.method) {
            order.push(r.method);
        }
    }
    for (i, method) in order.iter().enumerate() {
        if i > 0 {
            writeln!(out, "\n")?;
        }
        writeln!(out, "# method n ns_per_term")?;
        for r in records.iter().filter(|r| r.method == *method) {
            writeln!(out, "{} {} {:.4}", r.method, r.n, r.ns_per_term)?;
        }
    }
    Ok(())
}

/// `results.csv` -> `results.dat`.
pub fn dat_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("dat")
}
