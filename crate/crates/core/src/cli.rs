//! Command-line front end.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde::Serialize;
use serde_json::json;

use crate::dna::{estimate_probs, frequent_pattern_report, read_fasta_path, AlphabetMap, LiteralMode};
use crate::error::{Error, Result};
use crate::exactdist::{pmf, pmf_recursive, PmfRow, PmfTable};
use crate::oracle::{simulate, simulate_waiting};
use crate::pattern::{parse_bounds, RunPattern, Upper};
use crate::polyalg::{exact_string, parse_rational, parse_rational_list, Rational};
use crate::transfer::chained_double_gf;
use crate::verify::{self, Grid};
use crate::waiting::psi;

pub const SCHEMA: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "runlaw", version, about = "Exact laws of multi-state run patterns in i.i.d. trials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Distribution of the occurrence count in n trials.
    Dist(DistArgs),
    /// Waiting time until the r-th occurrence.
    Wait(WaitArgs),
    /// Seeded Monte Carlo estimate of the count or waiting-time law.
    Simulate(SimulateArgs),
    /// Run the cross-module identity suite.
    Verify(VerifyArgs),
    /// Frequent-pattern probabilities for a nucleotide literal.
    Dna(DnaArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Args, Debug)]
pub struct PatternArgs {
    /// Run bounds, e.g. "1:1..1,2:2..2,3:1..inf".
    #[arg(long)]
    pub pattern: String,
    /// Symbol probabilities as fractions or decimals, e.g. 1/10,0.3,1/5,2/5.
    #[arg(long)]
    pub probs: String,
}

impl PatternArgs {
    pub fn build(&self) -> Result<RunPattern> {
        let bounds = parse_bounds(&self.pattern)?;
        let probs = parse_rational_list(&self.probs)?;
        RunPattern::new(bounds, probs)
    }
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Significant digits of decimal output.
    #[arg(long, default_value_t = 6)]
    pub digits: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Coefficient extraction from the reduced double generating function.
    Series,
    /// Linear recursion over all coefficients of the denominator.
    Recursive,
    /// Coefficient extraction from the block-system solution.
    Transfer,
}

#[derive(Args, Debug)]
pub struct DistArgs {
    #[command(flatten)]
    pub pattern: PatternArgs,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = Method::Series)]
    pub method: Method,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct WaitArgs {
    #[command(flatten)]
    pub pattern: PatternArgs,
    #[arg(long, default_value_t = 1)]
    pub r: u32,
    /// Last trial index to tabulate; defaults to where the mass reaches 1 − tolerance.
    #[arg(long)]
    pub horizon: Option<usize>,
    #[arg(long, default_value = "1e-12")]
    pub tolerance: String,
    #[arg(long, default_value_t = 100_000)]
    pub max_horizon: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub pattern: PatternArgs,
    /// Sequence length (count mode).
    #[arg(long, required_unless_present = "r")]
    pub n: Option<usize>,
    /// Occurrence index (waiting-time mode).
    #[arg(long, conflicts_with = "n")]
    pub r: Option<u32>,
    /// Cap on trials per sample in waiting-time mode.
    #[arg(long, default_value_t = 10_000)]
    pub max_len: usize,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, default_value = "small", value_parser = ["small", "full"])]
    pub grid: String,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct DnaArgs {
    /// FASTA file to estimate letter frequencies from.
    #[arg(long, conflicts_with = "probs", required_unless_present = "probs")]
    pub fasta: Option<PathBuf>,
    /// Letter probabilities in alphabet order.
    #[arg(long)]
    pub probs: Option<String>,
    /// Pattern literal such as ACCGT.
    #[arg(long)]
    pub pattern: String,
    /// exactly, at-least or at-most.
    #[arg(long, default_value = "exactly")]
    pub mode: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub min_support: usize,
    /// Letter order defining symbols 1, 2, ….
    #[arg(long, default_value = "ACGT")]
    pub alphabet: String,
    /// Skip letters outside the alphabet instead of failing.
    #[arg(long)]
    pub lenient: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn write_csv<T: Serialize>(out: &mut dyn Write, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| Error::Cli(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

fn write_table(out: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect::<Vec<_>>().join("  ").trim_end().to_string()
    };
    writeln!(out, "{}", line(header.to_vec()))?;
    for row in rows {
        writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
    }
    Ok(())
}

fn write_json(out: &mut dyn Write, value: &serde_json::Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| Error::Cli(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn exact_list(probs: &[Rational]) -> Vec<String> {
    probs.iter().map(exact_string).collect()
}

fn pmf_rows_table(rows: &[PmfRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| vec![r.n.to_string(), r.s.to_string(), r.probability.clone(), r.probability_exact.clone()])
        .collect()
}

fn transfer_pmf(pat: &RunPattern, n: usize) -> Result<PmfTable> {
    let phi = chained_double_gf(pat)?;
    let c = phi.series(n)?;
    let s_max = n / pat.min_len();
    Ok(PmfTable::from_probs(n, (0..=s_max).map(|s| c[n].coeff(s)).collect()))
}

fn run_dist(args: &DistArgs, out: &mut dyn Write) -> Result<()> {
    let pat = args.pattern.build()?;
    let table = match args.method {
        Method::Series => pmf(&pat, args.n),
        Method::Recursive => pmf_recursive(&pat, args.n),
        Method::Transfer => transfer_pmf(&pat, args.n)?,
    };
    let rows = table.rows(args.output.digits);
    match args.output.format {
        Format::Json => write_json(
            out,
            &json!({
                "schema": SCHEMA,
                "command": "dist",
                "pattern": pat.to_string(),
                "probs": exact_list(pat.probs()),
                "n": args.n,
                "method": format!("{:?}", args.method).to_lowercase(),
                "rows": rows,
            }),
        ),
        Format::Csv => write_csv(out, &rows),
        Format::Table => write_table(out, &["n", "s", "probability", "exact"], &pmf_rows_table(&rows)),
    }
}

fn run_wait(args: &WaitArgs, out: &mut dyn Write) -> Result<()> {
    let pat = args.pattern.build()?;
    let w = psi(&pat, args.r)?;
    let tolerance = parse_rational(&args.tolerance)?;
    if tolerance <= Rational::zero() {
        return Err(Error::Cli("--tolerance must be positive".into()));
    }
    let horizon = match args.horizon {
        Some(h) => h,
        None => w.horizon_for(&tolerance, args.max_horizon)?,
    };
    let table = w.table(horizon, args.output.digits);
    match args.output.format {
        Format::Json => write_json(
            out,
            &json!({
                "schema": SCHEMA,
                "command": "wait",
                "pattern": pat.to_string(),
                "probs": exact_list(pat.probs()),
                "pgf": w.pgf().to_string(),
                "table": table,
            }),
        ),
        Format::Csv => write_csv(out, &table.rows),
        Format::Table => {
            writeln!(out, "r = {}, horizon = {}, mass = {}", table.r, table.horizon, table.mass)?;
            writeln!(out, "mean = {} ({})", table.mean, table.mean_exact)?;
            writeln!(out, "variance = {} ({})", table.variance, table.variance_exact)?;
            let rows: Vec<Vec<String>> = table
                .rows
                .iter()
                .map(|r| {
                    vec![r.s.to_string(), r.probability.clone(), r.cumulative.clone(), r.probability_exact.clone()]
                })
                .collect();
            write_table(out, &["s", "probability", "cumulative", "exact"], &rows)
        }
    }
}

#[derive(Serialize)]
struct SimRow {
    value: usize,
    count: u64,
    estimate: f64,
    standard_error: Option<f64>,
}

fn run_simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<()> {
    let pat = args.pattern.build()?;
    let (value, rows, label) = match (args.n, args.r) {
        (_, Some(r)) => {
            if pat.bounds()[pat.m() - 1].upper != Upper::Unbounded {
                log::warn!("last run is bounded: the count is not monotone, so the first-passage time simulated here need not follow the exact waiting-time law");
            }
            let rep = simulate_waiting(&pat, r, args.samples, args.seed, args.max_len)?;
            let rows: Vec<SimRow> = rep
                .counts
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(t, &c)| SimRow { value: t, count: c, estimate: rep.pmf[t], standard_error: None })
                .collect();
            (serde_json::to_value(&rep).map_err(|e| Error::Cli(e.to_string()))?, rows, "t")
        }
        (Some(n), None) => {
            let rep = simulate(&pat, n, args.samples, args.seed)?;
            let rows: Vec<SimRow> = rep
                .counts
                .iter()
                .enumerate()
                .map(|(s, &c)| SimRow {
                    value: s,
                    count: c,
                    estimate: rep.pmf[s],
                    standard_error: Some(rep.standard_errors[s]),
                })
                .collect();
            (serde_json::to_value(&rep).map_err(|e| Error::Cli(e.to_string()))?, rows, "s")
        }
        (None, None) => return Err(Error::Cli("simulate needs --n or --r".into())),
    };
    match args.output.format {
        Format::Json => write_json(
            out,
            &json!({
                "schema": SCHEMA,
                "command": "simulate",
                "pattern": pat.to_string(),
                "probs": exact_list(pat.probs()),
                "report": value,
            }),
        ),
        Format::Csv => write_csv(out, &rows),
        Format::Table => {
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.value.to_string(),
                        r.count.to_string(),
                        format!("{:.6e}", r.estimate),
                        r.standard_error.map_or_else(String::new, |e| format!("{e:.2e}")),
                    ]
                })
                .collect();
            write_table(out, &[label, "count", "estimate", "std_error"], &table)
        }
    }
}

fn run_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<()> {
    let grid: Grid = args.grid.parse()?;
    let report = verify::run(grid);
    match args.format {
        Format::Json => write_json(out, &json!({ "schema": SCHEMA, "command": "verify", "report": report }))?,
        Format::Csv => {
            #[derive(Serialize)]
            struct Row<'a> {
                check: &'a str,
                cases: usize,
                failed: usize,
            }
            let rows: Vec<Row> = report
                .checks
                .iter()
                .map(|c| Row { check: &c.name, cases: c.cases, failed: c.failures.len() })
                .collect();
            write_csv(out, &rows)?;
        }
        Format::Table => {
            for c in &report.checks {
                writeln!(out, "{c}")?;
            }
        }
    }
    match report.failed() {
        0 => Ok(()),
        k => Err(Error::VerifyFailed(k)),
    }
}

fn run_dna(args: &DnaArgs, out: &mut dyn Write) -> Result<()> {
    let alphabet = AlphabetMap::new(&args.alphabet)?;
    let mode: LiteralMode = args.mode.parse()?;
    let probs = match (&args.fasta, &args.probs) {
        (Some(path), _) => {
            let records = read_fasta_path(path, &alphabet, !args.lenient)?;
            log::info!("read {} FASTA record(s) from {}", records.len(), path.display());
            let seqs: Vec<&str> = records.iter().map(|r| r.sequence.as_str()).collect();
            estimate_probs(&seqs, &alphabet)?
        }
        (None, Some(list)) => parse_rational_list(list)?,
        (None, None) => return Err(Error::Cli("dna needs --fasta or --probs".into())),
    };
    let report = frequent_pattern_report(probs, &args.pattern, mode, &alphabet, args.n, args.min_support)?;
    let view = report.view(args.output.digits);
    match args.output.format {
        Format::Json => write_json(
            out,
            &json!({
                "schema": SCHEMA,
                "command": "dna",
                "alphabet": alphabet.letters().iter().collect::<String>(),
                "probs": exact_list(report.pattern.probs()),
                "report": view,
            }),
        ),
        Format::Csv => write_csv(out, &view.rows),
        Format::Table => {
            writeln!(out, "pattern {} ({}), n = {}", view.literal, view.pattern, view.n)?;
            writeln!(out, "P(X >= {}) = {} ({})", view.min_support, view.tail, view.tail_exact)?;
            write_table(out, &["n", "s", "probability", "exact"], &pmf_rows_table(&view.rows))
        }
    }
}

/// Caps internal parallelism from `RUNLAW_THREADS`.
pub fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("RUNLAW_THREADS") {
        let threads: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&t| t > 0)
            .ok_or_else(|| Error::Cli(format!("RUNLAW_THREADS must be a positive integer, got {v:?}")))?;
        crate::par::set_threads(threads);
    }
    Ok(())
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Dist(a) => run_dist(a, out),
        Command::Wait(a) => run_wait(a, out),
        Command::Simulate(a) => run_simulate(a, out),
        Command::Verify(a) => run_verify(a, out),
        Command::Dna(a) => run_dna(a, out),
    }
}

/// Parses `argv`, runs the job against `out`, and returns the exit code.
pub fn main_with_args<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let result = configure_threads().and_then(|()| run(&cli, out));
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
