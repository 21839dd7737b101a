//! Batch front end: reproducible interference campaigns, the three-slit
//! simulator, and the fixed-seed verification suites.
//!
//! Exit codes are a stable contract for CI: 0 on success with the
//! expected verdict, 1 on usage or input errors, 2 when a campaign's
//! verdict (or a verification suite) contradicts the expectation.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use chrono::{SecondsFormat, Utc};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use sorkin::classical::ClassicalTheory;
use sorkin::interference::{
    classify_theory, AlbertSampler, ClassicalSampler, InterferenceReport, QuantumSampler,
    SyntheticSampler, Thresholds, Verdict,
};
use sorkin::quantum::QuantumTheory;
use sorkin::slits::{export_pattern, pattern_table, DetectorResponse, PatternTable, SlitsConfig};
use sorkin::suites::run_suites;
use sorkin::synthetic::SyntheticTheory;
use sorkin::albert::AlbertTheory;

/// Sample-space size used for classical campaigns; the classical verdict
/// is size-independent, so one representative size keeps the flag set
/// small (the test suites sweep sizes 3–12).
const CLASSICAL_SIZE: usize = 6;

/// Environment variable overriding the campaign thread count.
const THREADS_VAR: &str = "SORKIN_THREADS";

#[derive(Parser)]
#[command(name = "sorkin", version, about = "Interference hierarchy laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a seeded interference campaign and emit a JSON report.
    Campaign(CampaignArgs),
    /// Simulate a three-slit pattern and emit the residual CSV.
    Slits(SlitsArgs),
    /// Run the fixed-seed verification suites.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct CampaignArgs {
    /// Probability theory to classify.
    #[arg(long, value_enum)]
    theory: Theory,
    /// Hilbert-space dimension (quantum only, 3..=16).
    #[arg(long)]
    dim: Option<usize>,
    /// Number of Monte Carlo trials.
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    /// Base seed; trial i draws from stream (seed, i).
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// |I| values at or below this count as exact zeros.
    #[arg(long, default_value_t = 1e-8)]
    zero_threshold: f64,
    /// |I| values above this count as genuine interference.
    #[arg(long, default_value_t = 1e-2)]
    significance_threshold: f64,
    /// Report destination (standard output when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SlitsArgs {
    /// TOML geometry/response config (built-in default when omitted).
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV destination; also writes `<out>.manifest.json`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run only suites whose name contains this substring.
    #[arg(long, default_value = "")]
    filter: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Theory {
    Classical,
    Quantum,
    Albert,
    Synthetic,
}

impl Theory {
    fn expected_verdict(self) -> Verdict {
        match self {
            Theory::Classical => Verdict::NoInterference,
            Theory::Quantum | Theory::Albert => Verdict::SecondOrderOnly,
            Theory::Synthetic => Verdict::ThirdOrder,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Theory::Classical => "classical",
            Theory::Quantum => "quantum",
            Theory::Albert => "albert",
            Theory::Synthetic => "synthetic",
        }
    }
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };

    if let Err(e) = apply_thread_override() {
        eprintln!("error: {e:#}");
        return 1;
    }

    let result = match cli.command {
        Command::Campaign(args) => cmd_campaign(args),
        Command::Slits(args) => cmd_slits(args),
        Command::Verify(args) => Ok(cmd_verify(&args)),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

/// Honors `SORKIN_THREADS` before any campaign spins up the default pool.
fn apply_thread_override() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = raw
        .parse()
        .with_context(|| format!("{THREADS_VAR} must be a positive integer, got {raw:?}"))?;
    if threads == 0 {
        bail!("{THREADS_VAR} must be a positive integer, got 0");
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .context("thread pool already initialized")
}

fn cmd_campaign(args: CampaignArgs) -> Result<i32> {
    if args.dim.is_some() && args.theory != Theory::Quantum {
        bail!("--dim only applies to --theory quantum");
    }
    let dim = args.dim.unwrap_or(3);
    if args.theory == Theory::Quantum && !(3..=16).contains(&dim) {
        bail!("--dim must lie in 3..=16, got {dim}");
    }
    if args.trials == 0 {
        bail!("--trials must be at least 1");
    }
    let thresholds = Thresholds {
        zero: args.zero_threshold,
        significance: args.significance_threshold,
    };

    let started_at = Utc::now();
    let start = Instant::now();
    let report = match args.theory {
        Theory::Classical => classify_theory::<f64, _, _>(
            &ClassicalTheory::new(CLASSICAL_SIZE)?,
            &ClassicalSampler,
            args.trials,
            args.seed,
            thresholds,
        )?,
        Theory::Quantum => classify_theory::<f64, _, _>(
            &QuantumTheory::new(dim)?,
            &QuantumSampler,
            args.trials,
            args.seed,
            thresholds,
        )?,
        Theory::Albert => classify_theory::<f64, _, _>(
            &AlbertTheory::new(),
            &AlbertSampler,
            args.trials,
            args.seed,
            thresholds,
        )?,
        Theory::Synthetic => classify_theory::<f64, _, _>(
            &SyntheticTheory::new(),
            &SyntheticSampler,
            args.trials,
            args.seed,
            thresholds,
        )?,
    };

    let config = json!({
        "theory": args.theory.label(),
        "dimension": if args.theory == Theory::Quantum { json!(dim) } else { Value::Null },
        "trials": args.trials,
        "seed": args.seed,
        "thresholds": { "zero": thresholds.zero, "significance": thresholds.significance },
        "output": args.out.as_ref().map(|p| p.display().to_string()),
    });
    let mut document = report.to_json_value();
    document.as_object_mut().expect("report is an object").insert(
        "manifest".into(),
        manifest(config, started_at, start, Some(args.seed), &[]),
    );
    emit_json(&document, args.out.as_deref())?;

    let expected = args.theory.expected_verdict();
    report_verdict_line(&report, expected);
    Ok(if report.verdict == expected { 0 } else { 2 })
}

fn report_verdict_line(report: &InterferenceReport, expected: Verdict) {
    eprintln!(
        "{}: verdict {} (expected {}), max|I2| = {:.3e}, max|I3| = {:.3e}",
        report.theory, report.verdict, expected, report.max_abs_i2, report.max_abs_i3
    );
}

fn cmd_slits(args: SlitsArgs) -> Result<i32> {
    let started_at = Utc::now();
    let start = Instant::now();
    let (config, digests) = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read config {}", path.display()))?;
            let config = SlitsConfig::from_toml_str(&text)
                .with_context(|| format!("invalid config {}", path.display()))?;
            (config, vec![(path.display().to_string(), sha256_hex(text.as_bytes()))])
        }
        None => (SlitsConfig::default_three_slit(), Vec::new()),
    };
    let geometry = config.geometry::<f64>()?;
    let response: DetectorResponse<f64> = config.response()?;
    let table: PatternTable<f64> = pattern_table(&geometry, &response)?;
    let residual = table.max_relative_residual();

    if let Some(out) = &args.out {
        let file = std::fs::File::create(out)
            .with_context(|| format!("cannot write {}", out.display()))?;
        export_pattern(&table, std::io::BufWriter::new(file))?;
        let manifest_path = manifest_sibling(out);
        let document = manifest(
            serde_json::to_value(&config)?,
            started_at,
            start,
            None,
            &digests,
        );
        emit_json(&document, Some(&manifest_path))?;
    }

    println!("max relative residual = {residual:e}");
    Ok(0)
}

fn manifest_sibling(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}

fn cmd_verify(args: &VerifyArgs) -> i32 {
    let reports = run_suites(&args.filter);
    if reports.is_empty() {
        eprintln!("no suite matches filter {:?}", args.filter);
        return 1;
    }
    let mut all_passed = true;
    for report in &reports {
        println!("{}", report.summary());
        for detail in &report.details {
            println!("    {detail}");
        }
        all_passed &= report.passed;
    }
    if all_passed {
        0
    } else {
        2
    }
}

/// Assembles the run manifest; the only place timestamps ever appear.
fn manifest(
    config: Value,
    started_at: chrono::DateTime<Utc>,
    start: Instant,
    seed: Option<u64>,
    input_digests: &[(String, String)],
) -> Value {
    let digests: serde_json::Map<String, Value> = input_digests
        .iter()
        .map(|(name, digest)| (name.clone(), Value::String(digest.clone())))
        .collect();
    json!({
        "tool_version": env!("CARGO_PKG_VERSION"),
        "config": config,
        "seed": seed,
        "started_at": started_at.to_rfc3339_opts(SecondsFormat::Micros, true),
        "finished_at": Utc::now().to_rfc3339_opts(SecondsFormat::Micros, true),
        "duration_ms": start.elapsed().as_millis() as u64,
        "input_digests": digests,
    })
}

fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    format!("sha256:{:x}", hasher.finalize())
}

/// Pretty JSON with sorted keys (the serde_json map is ordered) and a
/// trailing newline, to a file or standard output.
fn emit_json(document: &Value, out: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(document)?;
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}
