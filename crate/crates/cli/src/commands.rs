use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use tsgraph::analysis::checks::{
    berry_esseen_check, run_verify, second_order_residuals, wright_convergence_report, JRule, Suite, VerifyConfig,
};
use tsgraph::analysis::{rate_report, RateReport};
use tsgraph::counting::{class_size_bounds, lambda_approx, mu, TypeClassTable};
use tsgraph::graphs::{canonicalize, pair_count, parse_graph6, write_graph6};
use tsgraph::tscode::cache::{load_or_build, CacheStatus};
use tsgraph::tscode::{structure_probability, Codebook, Codeword};

use crate::config::Config;
use crate::error::{CliError, CliResult};
use crate::plot;

pub const RATES_SCHEMA: &str = "tsgraph.rates/v1";
pub const COUNT_SCHEMA: &str = "tsgraph.count/v1";

fn read_input(path: Option<&Path>) -> CliResult<Vec<u8>> {
    let mut buf = Vec::new();
    match path {
        Some(p) => buf = fs::read(p)?,
        None => {
            io::stdin().read_to_end(&mut buf)?;
        }
    }
    Ok(buf)
}

fn read_text(path: Option<&Path>) -> CliResult<String> {
    String::from_utf8(read_input(path)?).map_err(|e| CliError::Parse {
        line: 0,
        message: format!("input is not UTF-8: {e}"),
    })
}

fn write_output(path: Option<&Path>, data: &[u8]) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, data)?,
        None => {
            let mut out = io::stdout().lock();
            out.write_all(data)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> CliResult<Vec<u8>> {
    let mut text = serde_json::to_vec_pretty(value)?;
    text.push(b'\n');
    Ok(text)
}

fn load_codebook(n: usize, config: &Config) -> CliResult<Codebook> {
    if n > config.n_max_exact {
        return Err(CliError::Capacity(format!(
            "no exact codebook for n = {n} (limit {}); raise --n-max-exact, or use `count` and \
             `rate --mode bracket|bound` for length-only analysis",
            config.n_max_exact
        )));
    }
    let (cb, status) = load_or_build(&config.cache_dir()?, n, config.n_max_exact)?;
    if let CacheStatus::Rebuilt(reason) = status {
        eprintln!("notice: rebuilt stale codebook cache for n = {n} ({reason})");
    }
    Ok(cb)
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    /// Number of vertices.
    #[arg(long)]
    n: usize,
    /// graph6 input, one graph per line (default: stdin).
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Append each structure's log₂ probability under this edge probability.
    #[arg(long)]
    p: Option<f64>,
    /// Write length-prefixed binary codewords instead of text records.
    #[arg(long, conflicts_with = "p")]
    packed: bool,
}

pub fn encode(args: &EncodeArgs, config: &Config) -> CliResult<ExitCode> {
    let text = read_text(args.input.as_deref())?;
    let cb = load_codebook(args.n, config)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let g = parse_graph6(line.trim()).map_err(|e| CliError::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        if g.n() != args.n {
            return Err(CliError::Parse {
                line: line_no,
                message: format!("graph has {} vertices, expected {}", g.n(), args.n),
            });
        }
        let code = cb.encode(&g)?;
        if args.packed {
            code.write_packed(&mut out);
            continue;
        }
        out.extend_from_slice(code.to_record().as_bytes());
        if let Some(p) = args.p {
            let prob = structure_probability(&canonicalize(&g), p)?;
            out.extend_from_slice(format!("\t{}", prob.log2()).as_bytes());
        }
        out.push(b'\n');
    }
    write_output(args.out.as_deref(), &out)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    /// Number of vertices.
    #[arg(long)]
    n: usize,
    /// Codeword records, one per line; text after a tab is ignored (default: stdin).
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Read length-prefixed binary codewords.
    #[arg(long)]
    packed: bool,
}

pub fn decode(args: &DecodeArgs, config: &Config) -> CliResult<ExitCode> {
    let mut codes: Vec<(usize, Codeword)> = Vec::new();
    if args.packed {
        let data = read_input(args.input.as_deref())?;
        let mut pos = 0;
        while pos < data.len() {
            let record = codes.len() + 1;
            let (code, used) = Codeword::read_packed(&data[pos..]).map_err(|e| CliError::Parse {
                line: record,
                message: format!("packed record at byte {pos}: {e}"),
            })?;
            codes.push((record, code));
            pos += used;
        }
    } else {
        let text = read_text(args.input.as_deref())?;
        for (i, line) in text.lines().enumerate() {
            let record = line.split('\t').next().unwrap_or("").trim();
            if record.is_empty() {
                continue;
            }
            let code = Codeword::from_record(record).map_err(|e| CliError::Parse {
                line: i + 1,
                message: e.to_string(),
            })?;
            codes.push((i + 1, code));
        }
    }
    let cb = load_codebook(args.n, config)?;
    let mut out = String::new();
    for (line, code) in codes {
        let s = cb.decode(&code).map_err(|e| CliError::InvalidCodeword {
            line,
            message: e.to_string(),
        })?;
        out.push_str(&write_graph6(s.canon()));
        out.push('\n');
    }
    write_output(args.out.as_deref(), out.as_bytes())?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMode {
    Exact,
    Wright,
    Bounds,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    /// Number of vertices.
    #[arg(long)]
    n: usize,
    /// A single edge count (default: every j from 0 to m).
    #[arg(long)]
    j: Option<usize>,
    #[arg(long, value_enum, default_value_t = CountMode::Exact)]
    mode: CountMode,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A table with a fixed column order, rendered as CSV or JSON.
struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    fn csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|v| match v {
                    Value::String(s) => s.clone(),
                    Value::Null => String::new(),
                    other => other.to_string(),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn json_rows(&self) -> Vec<Value> {
        self.rows
            .iter()
            .map(|row| {
                let map = self.columns.iter().map(|c| c.to_string()).zip(row.iter().cloned()).collect();
                Value::Object(map)
            })
            .collect()
    }
}

pub fn count(args: &CountArgs, config: &Config) -> CliResult<ExitCode> {
    let n = args.n;
    let m = pair_count(n);
    if n == 0 {
        return Err(tsgraph::Error::VertexCount { n, max: tsgraph::graphs::MAX_VERTICES }.into());
    }
    let js: Vec<usize> = match args.j {
        Some(j) if j > m => return Err(tsgraph::Error::EdgeCount { n, j, m }.into()),
        Some(j) => vec![j],
        None => (0..=m).collect(),
    };
    let table = match args.mode {
        CountMode::Exact => {
            let counts = TypeClassTable::cached(n)?;
            Table {
                columns: vec!["n", "j", "count"],
                rows: js
                    .iter()
                    .map(|&j| Ok(vec![json!(n), json!(j), json!(counts.count(j)?.to_string())]))
                    .collect::<CliResult<_>>()?,
            }
        }
        CountMode::Wright => {
            let counts = TypeClassTable::cached(n)?;
            let mut rows = Vec::new();
            for &j in &js {
                let exact = counts.log2_count(j)?;
                let lambda = lambda_approx(n, j)?.log2;
                let mu = mu(n, j);
                rows.push(vec![
                    json!(n),
                    json!(j),
                    json!(counts.count(j)?.to_string()),
                    json!(exact),
                    json!(lambda),
                    json!((exact - lambda).exp2()),
                    json!(mu),
                    json!(mu >= config.mu_min),
                ]);
            }
            Table {
                columns: vec!["n", "j", "count", "log2_exact", "log2_lambda", "ratio", "mu", "regime"],
                rows,
            }
        }
        CountMode::Bounds => {
            if let [j] = js[..] {
                if j == 0 || j == m {
                    return Err(CliError::Config(format!(
                        "refusing bounds for the degenerate class j = {j} (need 0 < j < m = {m}); \
                         the class holds a single structure"
                    )));
                }
            }
            let mut rows = Vec::new();
            for &j in js.iter().filter(|&&j| j > 0 && j < m) {
                let b = class_size_bounds(n, j, &config.bounds())?;
                rows.push(vec![
                    json!(n),
                    json!(j),
                    json!(b.lower),
                    json!(b.upper),
                    json!(b.exact),
                    json!(b.mu),
                    json!(b.wright_regime),
                    json!(b.contains_exact()),
                ]);
            }
            Table {
                columns: vec!["n", "j", "lower_bits", "upper_bits", "exact_bits", "mu", "regime", "within"],
                rows,
            }
        }
    };
    let out = match args.format {
        Format::Csv => table.csv().into_bytes(),
        Format::Json => to_json(&json!({
            "schema": COUNT_SCHEMA,
            "n": n,
            "mode": args.mode,
            "rows": table.json_rows(),
        }))?,
    };
    write_output(args.out.as_deref(), &out)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RateMode {
    Exact,
    Bracket,
    Bound,
}

#[derive(Debug, Args)]
pub struct RateArgs {
    /// Number of vertices; a comma-separated list gives a series.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    /// Edge probability.
    #[arg(long)]
    p: f64,
    /// Overflow probability ε.
    #[arg(long)]
    eps: f64,
    #[arg(long, value_enum, default_value_t = RateMode::Bound)]
    mode: RateMode,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct RateSeries {
    schema: &'static str,
    mode: RateMode,
    reports: Vec<RateReport>,
}

pub fn rate(args: &RateArgs, config: &Config) -> CliResult<ExitCode> {
    let mut reports = Vec::new();
    for &n in &args.n {
        let report = match args.mode {
            RateMode::Exact => rate_report(n, args.p, args.eps, Some(&load_codebook(n, config)?), None)?,
            RateMode::Bracket => rate_report(n, args.p, args.eps, None, Some(&*TypeClassTable::cached(n)?))?,
            RateMode::Bound => rate_report(n, args.p, args.eps, None, None)?,
        };
        reports.push(report);
    }
    let out = if let [single] = &reports[..] {
        to_json(single)?
    } else {
        to_json(&RateSeries {
            schema: RATES_SCHEMA,
            mode: args.mode,
            reports,
        })?
    };
    write_output(args.out.as_deref(), &out)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Chernoff,
    Stirling,
    Berry,
    Wright,
    #[value(name = "theorem1")]
    Budget,
    Gamma,
    Residual,
    All,
}

impl SuiteArg {
    fn suites(self) -> Vec<Suite> {
        match self {
            SuiteArg::Chernoff => vec![Suite::Chernoff],
            SuiteArg::Stirling => vec![Suite::Stirling],
            SuiteArg::Berry => vec![Suite::Berry],
            SuiteArg::Wright => vec![Suite::Wright],
            SuiteArg::Budget => vec![Suite::Budget],
            SuiteArg::Gamma => vec![Suite::Gamma],
            SuiteArg::Residual => vec![Suite::Residual],
            SuiteArg::All => Suite::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    suite: SuiteArg,
    /// Monte Carlo trials per check.
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    /// For berry, wright and residual: emit the full per-row report instead
    /// of the verdict summary.
    #[arg(long)]
    detail: bool,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn verdict_code(pass: bool) -> ExitCode {
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

pub fn verify(args: &VerifyArgs, config: &Config) -> CliResult<ExitCode> {
    eprintln!("seed {}", config.seed);
    let vc = VerifyConfig {
        seed: config.seed,
        trials: args.trials,
        berry_a: config.berry_a,
        bounds: config.bounds(),
        max_exact: config.n_max_exact,
    };
    if args.detail {
        let (out, pass) = match args.suite {
            SuiteArg::Berry => {
                let r = berry_esseen_check(&[100, 400, 1600, 6400], 0.2, args.trials, config.seed, config.berry_a)?;
                (to_json(&r)?, r.verdict.passed())
            }
            SuiteArg::Wright => {
                let r = wright_convergence_report(&[10, 20, 30], JRule::Half)?;
                let pass = r.summary().verdict.passed();
                (to_json(&r)?, pass)
            }
            SuiteArg::Residual => {
                let r = second_order_residuals(&[4, 5, 6, 7], &[0.2, 0.3], &[0.1, 0.25], config.n_max_exact)?;
                (to_json(&r)?, r.verdict().passed())
            }
            other => {
                return Err(CliError::Config(format!(
                    "--detail is available for berry, wright and residual, not {other:?}"
                )))
            }
        };
        write_output(args.out.as_deref(), &out)?;
        return Ok(verdict_code(pass));
    }
    let report = run_verify(&args.suite.suites(), &vc)?;
    for check in &report.checks {
        eprintln!(
            "{} {}: observed {} vs bound {} (+{})",
            if check.verdict.passed() { "PASS" } else { "FAIL" },
            check.check,
            check.observed,
            check.bound,
            check.tolerance
        );
        for note in &check.notes {
            eprintln!("    note: {note}");
        }
    }
    write_output(args.out.as_deref(), &to_json(&report)?)?;
    Ok(verdict_code(report.all_pass))
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// JSON report produced by `rate`, `verify --detail` or `count --format json`.
    #[arg(long)]
    report: PathBuf,
    /// Output SVG (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn plot(args: &PlotArgs) -> CliResult<ExitCode> {
    let text = fs::read_to_string(&args.report)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::Parse {
        line: e.line(),
        message: format!("report is not valid JSON: {e}"),
    })?;
    let svg = plot::render_report(&value)?;
    write_output(args.out.as_deref(), svg.as_bytes())?;
    Ok(ExitCode::SUCCESS)
}
