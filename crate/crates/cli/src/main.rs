//! `subrank`: batch front end for scans, single-instance subrank queries,
//! inequality suites and CW bounds.
//!
//! Exit codes: 0 verified, 1 counterexample or violation, 2 inconclusive
//! (undecided comparison or exhausted search budget), 64 usage or I/O error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use subrank_core::certified::{default_precision, MAX_PRECISION, PRECISION_ENV};
use subrank_core::cw::{alpha_for_type_graph, conjectured_value, cw3_lower_bound, recognize_type_graph};
use subrank_core::exact_bounds::{scan_conjecture, ScanCache, ScanOptions, VerifyPolicy};
use subrank_core::hypergraph::{kronecker_power, subrank, AlphaMaps, KGraph, DEFAULT_BUDGET};
use subrank_core::report::code_version;
use subrank_core::suites::{run_suite_with_jobs, Suite, SuiteOptions};

const EXIT_USAGE: u8 = 64;

/// `writeln!` into a `String` buffer; the buffer is printed once at the end
/// so a closed stdout does not abort a long run.
macro_rules! outln {
    ($out:expr, $($arg:tt)*) => {{
        use std::fmt::Write as _;
        let _ = writeln!($out, $($arg)*);
    }};
}

#[derive(Parser, Debug)]
#[command(name = "subrank", version, about = "Exact and certified subrank computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certify the rank inequality for every even k up to --k-max.
    Verify(VerifyArgs),
    /// Exact subrank of a k-graph (or of a Kronecker power of it).
    Subrank(SubrankArgs),
    /// Run an identity or inequality suite.
    Suites(SuitesArgs),
    /// CW lower bound for a tight 3-graph.
    Cw3(Cw3Args),
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    k_max: u32,
    #[arg(long, default_value_t = 4)]
    k_min: u32,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// JSON-lines resume cache.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Fall back to exact big-integer powers when intervals overlap.
    #[arg(long, num_args = 0..=1, default_value_t = true, default_missing_value = "true")]
    exact_fallback: bool,
    /// Record for every cell whether the s-scan bound alone certifies it.
    #[arg(long)]
    audit_s_scan: bool,
    /// Zero all timing fields so identical runs give identical reports.
    #[arg(long)]
    no_timing: bool,
    /// Directory for report.json and report.csv.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SubrankArgs {
    /// Edge-list or JSON file.
    #[arg(long)]
    edges: PathBuf,
    #[arg(long, default_value_t = 1)]
    power: u32,
    /// Branch-and-bound node budget.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SuitesArgs {
    #[arg(long, value_parser = parse_suite)]
    suite: Suite,
    #[arg(long)]
    n_max: Option<u32>,
    #[arg(long)]
    k_max: Option<u32>,
    #[arg(long)]
    samples: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    no_timing: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Cw3Args {
    #[arg(long)]
    edges: PathBuf,
    /// Alpha-map file; defaults to the standard maps when the graph is a
    /// type graph.
    #[arg(long)]
    alpha: Option<PathBuf>,
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse().map_err(|e: subrank_core::Error| e.to_string())
}

#[derive(Serialize)]
struct RunConfig {
    command: &'static str,
    code_version: &'static str,
    precision_bits: u32,
    max_precision_bits: u32,
    precision_env: &'static str,
    #[serde(flatten)]
    params: Value,
}

impl RunConfig {
    fn new(command: &'static str, params: Value) -> Self {
        Self {
            command,
            code_version: code_version(),
            precision_bits: default_precision(),
            max_precision_bits: MAX_PRECISION,
            precision_env: PRECISION_ENV,
            params,
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Writes `report.json` (`{config, rows, summary}`) and `report.csv` into `dir`.
fn write_reports(
    dir: &Path,
    config: &RunConfig,
    rows: Vec<Value>,
    summary: Value,
    csv: impl FnOnce(fs::File) -> subrank_core::Result<()>,
) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let report = json!({ "config": config, "rows": rows, "summary": summary });
    let json_path = dir.join("report.json");
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    fs::write(&json_path, text).with_context(|| format!("writing {}", json_path.display()))?;
    let csv_path = dir.join("report.csv");
    let file = fs::File::create(&csv_path).with_context(|| format!("writing {}", csv_path.display()))?;
    csv(file).with_context(|| format!("writing {}", csv_path.display()))?;
    Ok(())
}

/// Serializes `rows`, tagging each with the code version.
fn tagged_rows<T: Serialize>(rows: &[T]) -> Result<Vec<Value>> {
    rows.iter()
        .map(|r| {
            let mut v = serde_json::to_value(r)?;
            if let Value::Object(m) = &mut v {
                m.insert("code_version".into(), code_version().into());
            }
            Ok(v)
        })
        .collect()
}

fn cmd_verify(out: &mut String, a: VerifyArgs) -> Result<u8> {
    if a.k_max < 4 || a.k_max % 2 != 0 {
        bail!("--k-max must be even and >= 4");
    }
    let opts = ScanOptions {
        k_min: a.k_min,
        k_max: a.k_max,
        jobs: a.jobs,
        policy: VerifyPolicy {
            exact_fallback: a.exact_fallback,
            ..VerifyPolicy::default()
        },
        record_timing: !a.no_timing,
        audit_s_scan: a.audit_s_scan,
    };
    let cache = a.cache.as_ref().map(ScanCache::open).transpose()?;
    let report = scan_conjecture(&opts, cache.as_ref())?;
    let s = &report.summary;
    outln!(
        out,
        "k in [{}, {}]: {}/{} k certified; {} cells, {} verified, {} counterexamples, {} inconclusive",
        report.k_min,
        report.k_max,
        s.k_certified,
        s.k_total,
        s.cells,
        s.verified,
        s.counterexamples,
        s.inconclusive
    );
    outln!(out, "methods: {:?}", s.by_method);
    outln!(out, "decisions: {:?}", s.by_decision);
    for (k, r) in report.failures.iter().take(20) {
        outln!(out, "not verified: k = {k}, r = {r}");
    }
    if let Some(dir) = &a.out {
        let config = RunConfig::new(
            "verify",
            json!({
                "k_min": opts.k_min,
                "k_max": opts.k_max,
                "jobs": opts.jobs,
                "policy": opts.policy.signature(),
                "cache": a.cache,
                "record_timing": opts.record_timing,
                "audit_s_scan": opts.audit_s_scan,
            }),
        );
        let summary = json!({
            "scan": report.summary,
            "main_bound": report.main_bound,
            "failures": report.failures,
            "elapsed_ms": report.elapsed_ms,
        });
        write_reports(dir, &config, tagged_rows(&report.rows)?, summary, |f| {
            report.write_csv(f, &[("code_version", code_version().to_string())])
        })?;
    }
    Ok(if report.has_counterexample() {
        1
    } else if report.all_verified() {
        0
    } else {
        2
    })
}

fn cmd_subrank(out: &mut String, a: SubrankArgs) -> Result<u8> {
    let phi = KGraph::parse(&read(&a.edges)?).with_context(|| format!("parsing {}", a.edges.display()))?;
    if a.power == 0 {
        bail!("--power must be >= 1");
    }
    let graph = kronecker_power(&phi, a.power)?;
    let start = Instant::now();
    let res = subrank(&graph, a.budget);
    outln!(out, "Q = {}", res.value);
    outln!(out, "exact: {}", res.exact);
    if !res.exact {
        outln!(out, "budget of {} nodes exhausted; Q is a lower bound", a.budget);
    }
    if a.power > 1 {
        outln!(
            out,
            "power: {} ({} edges), Q^(1/n) = {:.6}",
            a.power,
            graph.len(),
            (res.value as f64).powf(1.0 / f64::from(a.power))
        );
    }
    outln!(out, "nodes: {}", res.nodes);
    outln!(out, "witness:");
    for e in &res.witness {
        let row: Vec<String> = e.iter().map(|v| v.to_string()).collect();
        outln!(out, "  {}", row.join(" "));
    }
    if let Some(dir) = &a.out {
        let config = RunConfig::new(
            "subrank",
            json!({ "edges": a.edges, "power": a.power, "budget": a.budget }),
        );
        let row = json!({
            "q": res.value,
            "exact": res.exact,
            "nodes": res.nodes,
            "witness": res.witness,
            "elapsed_ms": start.elapsed().as_millis() as u64,
            "code_version": code_version(),
        });
        let summary = json!({ "q": res.value, "exact": res.exact });
        write_reports(dir, &config, vec![row], summary, |f| {
            let mut w = csv::Writer::from_writer(f);
            w.write_record(["q", "exact", "nodes", "power", "code_version"])?;
            w.write_record([
                res.value.to_string(),
                res.exact.to_string(),
                res.nodes.to_string(),
                a.power.to_string(),
                code_version().to_string(),
            ])?;
            w.flush()?;
            Ok(())
        })?;
    }
    Ok(if res.exact { 0 } else { 2 })
}

fn cmd_suites(out: &mut String, a: SuitesArgs) -> Result<u8> {
    let opts = SuiteOptions {
        suite: a.suite,
        n_max: a.n_max,
        k_max: a.k_max,
        samples: a.samples,
        seed: a.seed,
    };
    let start = Instant::now();
    let report = run_suite_with_jobs(&opts, a.jobs)?;
    let elapsed_ms = if a.no_timing {
        0
    } else {
        start.elapsed().as_millis() as u64
    };
    let s = &report.summary;
    let (range, samples) = opts.resolved();
    outln!(
        out,
        "suite {}: range {range}, samples {samples}, seed {}; {} rows: {} hold, {} violated, {} undecided",
        a.suite,
        a.seed,
        s.rows - s.informational,
        s.holds,
        s.violated,
        s.undecided
    );
    if s.informational > 0 {
        outln!(
            out,
            "informational rows: {} ({} not holding)",
            s.informational,
            s.informational_violations
        );
    }
    for r in report
        .rows
        .iter()
        .filter(|r| !r.informational && !r.verdict.holds())
        .take(20)
    {
        outln!(out, "{} {} {}: {} vs {}", r.verdict, r.check, r.instance, r.lhs, r.rhs);
    }
    if let Some(dir) = &a.out {
        let config = RunConfig::new(
            "suites",
            json!({
                "suite": a.suite,
                "range": range,
                "samples": samples,
                "seed": a.seed,
                "jobs": a.jobs,
            }),
        );
        let summary = json!({ "counts": report.summary, "elapsed_ms": elapsed_ms });
        write_reports(dir, &config, tagged_rows(&report.rows)?, summary, |f| {
            report.write_csv(f, &[("code_version", code_version().to_string())])
        })?;
    }
    Ok(report.exit_code() as u8)
}

fn cmd_cw3(out: &mut String, a: Cw3Args) -> Result<u8> {
    let phi = KGraph::parse(&read(&a.edges)?).with_context(|| format!("parsing {}", a.edges.display()))?;
    let lambda = recognize_type_graph(&phi);
    let alpha = match (&a.alpha, &lambda) {
        (Some(p), _) => AlphaMaps::parse_text(&read(p)?).with_context(|| format!("parsing {}", p.display()))?,
        (None, Some(l)) => alpha_for_type_graph(l),
        (None, None) => bail!("--alpha is required for graphs that are not type graphs"),
    };
    let b = cw3_lower_bound(&phi, &alpha)?;
    outln!(
        out,
        "lower bound: {:.6} bits (asymptotic subrank >= {:.6})",
        b.value.bits,
        b.value.bits.exp2()
    );
    outln!(out, "grid: 1/{}", b.grid);
    outln!(out, "distribution:");
    for (e, p) in phi.edges().iter().zip(&b.distribution) {
        let row: Vec<String> = e.iter().map(|v| v.to_string()).collect();
        outln!(out, "  {}  {:.6}", row.join(" "), p);
    }
    if let Some(l) = lambda {
        outln!(
            out,
            "type graph {l}: conjectured value {:.6} bits",
            conjectured_value(&l).bits
        );
    }
    Ok(0)
}

fn run(cli: Cli, out: &mut String) -> Result<u8> {
    match cli.command {
        Command::Verify(a) => cmd_verify(out, a),
        Command::Subrank(a) => cmd_subrank(out, a),
        Command::Suites(a) => cmd_suites(out, a),
        Command::Cw3(a) => cmd_cw3(out, a),
    }
}

fn flush_stdout(text: &str) {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut out = String::new();
    let result = run(cli, &mut out);
    flush_stdout(&out);
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
