//! Command-line front end: `run` a prequential pass, `explain` one recorded
//! prediction, `convert` a PHEME directory into the event schema, or
//! `bench` a metrics-only pass reporting seconds per sample.

mod convert;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use veristream_core::eval::{majority_baseline, run_stream, write_artifacts};
use veristream_core::explain::{emit_report, format_report, Explanation, ReportFormat};
use veristream_core::ingest::read_stream;
use veristream_core::RunConfig;

/// Environment override for the output directory.
const OUTPUT_DIR_ENV: &str = "VERISTREAM_OUTPUT_DIR";

#[derive(Parser)]
#[command(
    name = "veristream",
    about = "Online, explainable fake-news classification over chronological post streams",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full prequential pass: predict, train, and write run artifacts.
    Run(RunArgs),
    /// Re-render the explanation recorded for one tweet id.
    Explain(ExplainArgs),
    /// Convert a PHEME-style directory into the event schema.
    Convert(ConvertArgs),
    /// Metrics-only pass reporting seconds per sample.
    Bench(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Labeled event file (line-delimited records).
    input: PathBuf,
    /// Flat key = value configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for run artifacts.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Classifier family: gnb | htc | hatc | arfc.
    #[arg(long)]
    classifier: Option<String>,
    /// Feature set: A | B | C.
    #[arg(long)]
    feature_set: Option<String>,
    /// Metric window holds the full stream.
    #[arg(long, conflicts_with_all = ["window_fraction", "window_count"])]
    window_full: bool,
    /// Metric window holds this fraction of the stream.
    #[arg(long, conflicts_with = "window_count")]
    window_fraction: Option<f64>,
    /// Metric window holds this many samples.
    #[arg(long)]
    window_count: Option<usize>,
    #[arg(long)]
    clusters: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Record an explanation every N events (0 disables).
    #[arg(long)]
    explain_every: Option<usize>,
    /// File with one tweet id per line to explain.
    #[arg(long)]
    explain_ids: Option<PathBuf>,
    /// Generic `key=value` override; may repeat.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Args)]
struct ExplainArgs {
    /// Tweet id to explain.
    tweet_id: String,
    /// Run directory holding the recorded explanations.
    #[arg(long, default_value = "veristream-out")]
    run_dir: PathBuf,
    /// Output format: text | structured | html.
    #[arg(long, default_value = "text")]
    format: String,
}

#[derive(Args)]
struct ConvertArgs {
    /// Root of the PHEME-style directory tree.
    pheme_dir: PathBuf,
    /// Output event file.
    #[arg(long, default_value = "events.jsonl")]
    out: PathBuf,
}

fn resolve_config(args: &RunArgs) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &args.config {
        cfg.apply_file(path)
            .with_context(|| format!("loading {}", path.display()))?;
    }
    for kv in &args.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| anyhow!("--set expects KEY=VALUE, got {kv:?}"))?;
        cfg.set(k, v).map_err(|e| anyhow!("{e}"))?;
    }
    cfg.input = Some(args.input.clone());
    if let Some(out) = &args.out {
        cfg.output_dir = out.clone();
    }
    if let Some(c) = &args.classifier {
        cfg.set("classifier", c).map_err(|e| anyhow!("{e}"))?;
    }
    if let Some(fs) = &args.feature_set {
        cfg.set("feature_set", fs).map_err(|e| anyhow!("{e}"))?;
    }
    if args.window_full {
        cfg.set("window", "full").map_err(|e| anyhow!("{e}"))?;
    }
    if let Some(f) = args.window_fraction {
        cfg.set("window", &format!("fraction:{f}"))
            .map_err(|e| anyhow!("{e}"))?;
    }
    if let Some(n) = args.window_count {
        cfg.set("window", &format!("count:{n}"))
            .map_err(|e| anyhow!("{e}"))?;
    }
    if let Some(k) = args.clusters {
        cfg.clusters = k;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(n) = args.explain_every {
        cfg.explain_every = n;
    }
    if let Some(path) = &args.explain_ids {
        let ids = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        cfg.explain_ids = ids
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(String::from)
            .collect();
    }
    if let Ok(dir) = std::env::var(OUTPUT_DIR_ENV) {
        if !dir.is_empty() {
            cfg.output_dir = PathBuf::from(dir);
        }
    }
    cfg.validate().map_err(|e| anyhow!("{e}"))?;
    Ok(cfg)
}

fn load_events(path: &Path) -> Result<veristream_core::ingest::StreamLoad> {
    if !path.exists() {
        bail!("input file not found: {}", path.display());
    }
    let load = read_stream(path).map_err(|e| anyhow!("{e}"))?;
    if !load.errors.is_empty() {
        eprintln!(
            "warning: {} of {} input lines rejected (first: line {}: {})",
            load.errors.len(),
            load.report.input_lines,
            load.errors[0].line,
            load.errors[0].reason
        );
    }
    if load.events.is_empty() {
        bail!("no valid events in {}", path.display());
    }
    Ok(load)
}

fn cmd_run(args: &RunArgs, metrics_only: bool) -> Result<()> {
    let cfg = resolve_config(args)?;
    let load = load_events(&args.input)?;

    let (outcome, engine) = run_stream(&cfg, &load.events).map_err(|e| anyhow!("{e}"))?;

    if metrics_only {
        std::fs::create_dir_all(&cfg.output_dir)?;
        std::fs::write(
            cfg.output_dir.join("report.json"),
            serde_json::to_string_pretty(&outcome.report)? + "\n",
        )?;
        std::fs::write(
            cfg.output_dir.join("timing.json"),
            serde_json::to_string_pretty(&outcome.timing)? + "\n",
        )?;
    } else {
        write_artifacts(&cfg.output_dir, &outcome, &engine, Some(&load.report))
            .map_err(|e| anyhow!("{e}"))?;
    }

    let r = &outcome.report;
    println!(
        "{} / set {} / window {} — {} samples",
        r.classifier, r.feature_set, r.window, r.samples
    );
    println!(
        "accuracy {:.2}%  macro F {:.2}%  non-fake F {:.2}%  fake F {:.2}%",
        r.accuracy * 100.0,
        r.macro_f * 100.0,
        r.f_non_fake * 100.0,
        r.f_fake * 100.0
    );
    if let Some((majority, m)) = majority_baseline(
        &load
            .events
            .iter()
            .filter_map(|e| e.label)
            .collect::<Vec<_>>(),
    ) {
        println!(
            "majority baseline ({}): {:.2}%",
            majority.as_str(),
            m.accuracy * 100.0
        );
    }
    println!(
        "throughput: {:.4} s/sample ({:.1} s total)",
        outcome.timing.seconds_per_sample, outcome.timing.total_seconds
    );
    println!("artifacts: {}", cfg.output_dir.display());
    Ok(())
}

fn cmd_explain(args: &ExplainArgs) -> Result<()> {
    let format = ReportFormat::parse(&args.format).map_err(|e| anyhow!("{e}"))?;
    let expl_dir = args.run_dir.join("explanations");
    let record = expl_dir.join(format!("{}.json", args.tweet_id));
    if !record.exists() {
        // Distinguish an id the run never saw from one without a recording.
        let preds = args.run_dir.join("predictions.csv");
        if preds.exists() {
            let content = std::fs::read_to_string(&preds)?;
            let known = content
                .lines()
                .skip(1)
                .any(|l| l.split(',').next() == Some(args.tweet_id.as_str()));
            if known {
                bail!(
                    "tweet id {} was processed but no explanation was recorded; \
                     re-run with --explain-ids or --explain-every",
                    args.tweet_id
                );
            }
        }
        bail!("unknown tweet id: {}", args.tweet_id);
    }
    let explanation: Explanation = serde_json::from_str(&std::fs::read_to_string(&record)?)?;
    let path = emit_report(&expl_dir, &explanation, format).map_err(|e| anyhow!("{e}"))?;
    print!("{}", format_report(&explanation, ReportFormat::Text).map_err(|e| anyhow!("{e}"))?);
    println!("report written: {}", path.display());
    Ok(())
}

fn cmd_convert(args: &ConvertArgs) -> Result<()> {
    let events = convert::convert_pheme(&args.pheme_dir, &args.out)?;
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    let mut users: std::collections::BTreeSet<&str> = std::collections::BTreeSet::new();
    for e in &events {
        if let Some(l) = e.label {
            *counts.entry(l.as_str()).or_insert(0) += 1;
        }
        users.insert(&e.user_id);
    }
    // Canonical load report derived by replaying the written file.
    let load = read_stream(&args.out).map_err(|e| anyhow!("{e}"))?;
    let report_path = args.out.with_extension("load_report.json");
    load.report
        .write_json(&report_path)
        .map_err(|e| anyhow!("{e}"))?;

    println!(
        "{} events from {} distinct users -> {}",
        events.len(),
        users.len(),
        args.out.display()
    );
    for (class, n) in &counts {
        println!("  {class}: {n}");
    }
    println!("load report: {}", report_path.display());
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Run(args) => cmd_run(args, false),
        Command::Bench(args) => cmd_run(args, true),
        Command::Explain(args) => cmd_explain(args),
        Command::Convert(args) => cmd_convert(args),
    }
}
