//! Command-line front end: configuration, experiment runners, output files
//! and the acceptance suite.

pub mod config;
pub mod experiments;
pub mod output;
pub mod schema;
pub mod verify;

use crate::config::{parse_config_with, Experiment, Format, Overrides};
use crate::experiments::run_experiment;
use crate::output::{flag, num, OutputWriter, RunStatus, Table};
use crate::verify::{run_suite, Suite};
use clap::{Args, Parser, Subcommand};
use heatcorr_exec::Execution;
use serde_json::json;
use std::path::PathBuf;
use std::time::Instant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "heatcorr", version, about = "Heat-kernel phase, cluster expansion and correlation experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Experiment configuration (JSON).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory; overrides `output.directory`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed for every sampled quantity.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Dense dimension budget; overrides `budget.dense`.
    #[arg(long)]
    pub budget: Option<usize>,
    /// Run sequentially even when built with the parallel feature.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Phase extraction and the gradient bound.
    Kernel(CommonArgs),
    /// Box decomposition of the doubled phase.
    Decompose(CommonArgs),
    /// Mayer factors, reconstruction, cancellation and polymer bounds.
    Mayer(CommonArgs),
    /// Covariance decay along a chain.
    Correlate(CommonArgs),
    /// Growing-volume sweep and cut interpolation.
    Thermo(CommonArgs),
    /// Acceptance checks.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
    },
}

impl Command {
    fn parts(&self) -> (Experiment, &CommonArgs) {
        match self {
            Command::Kernel(c) => (Experiment::Kernel, c),
            Command::Decompose(c) => (Experiment::Decompose, c),
            Command::Mayer(c) => (Experiment::Mayer, c),
            Command::Correlate(c) => (Experiment::Correlate, c),
            Command::Thermo(c) => (Experiment::Thermo, c),
            Command::Verify { common, .. } => (Experiment::Verify, common),
        }
    }
}

/// Run a parsed command line and return the process exit code.
pub fn run(cli: Cli) -> i32 {
    let (exp, args) = cli.command.parts();
    let exec = if args.sequential { Execution::Sequential } else { Execution::Auto };
    if let Command::Verify { suite, .. } = &cli.command {
        return verify(*suite, args);
    }
    let Some(path) = &args.config else {
        eprintln!("error: --config is required for {}", exp.name());
        return EXIT_CONFIG;
    };
    let overrides = Overrides { experiment: Some(exp), dense_budget: args.budget };
    let cfg = match parse_config_with(path, &overrides) {
        Ok(c) => c,
        Err(e) => {
            eprint!("{e}");
            return EXIT_CONFIG;
        }
    };
    let dir = args
        .out
        .clone()
        .or_else(|| cfg.output.directory.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out").join(exp.name()));
    let mut writer = match OutputWriter::create(&dir, &cfg.output.formats) {
        Ok(w) => w,
        Err(e) => {
            eprintln!("error: cannot create {}: {e}", dir.display());
            return EXIT_VIOLATION;
        }
    };
    let start = Instant::now();
    let result = run_experiment(&cfg, exp, args.seed, &mut writer, exec);
    let elapsed = start.elapsed().as_secs_f64();
    let (status, violations, error, summary) = match result {
        Ok(r) if r.violations.is_empty() => (RunStatus::Success, r.violations, None, r.summary),
        Ok(r) => (RunStatus::ContractViolation, r.violations, None, r.summary),
        Err(f) => (RunStatus::Failure, Vec::new(), Some(f.0), serde_json::Value::Null),
    };
    let sidecar = json!({
        "experiment": exp.name(),
        "version": env!("CARGO_PKG_VERSION"),
        "seed": args.seed,
        "config": cfg,
        "elapsedSeconds": elapsed,
        "status": status,
        "violations": violations,
        "error": error,
        "summary": summary,
    });
    let written = writer
        .write_json(&format!("{}.json", exp.name()), &sidecar)
        .and_then(|_| writer.write_bytes("SCHEMA.md", schema::schema_markdown().as_bytes()))
        .and_then(|_| writer.finish(exp.name(), status, args.seed, &violations, error.as_deref()));
    if let Err(e) = written {
        eprintln!("error: writing outputs: {e}");
        return EXIT_VIOLATION;
    }
    for v in &violations {
        eprintln!("violation: {v}");
    }
    if let Some(e) = &error {
        eprintln!("failure: {e}");
    }
    println!("{} -> {} ({:?})", exp.name(), dir.display(), status);
    if status == RunStatus::Success {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    }
}

fn verify(suite: Suite, args: &CommonArgs) -> i32 {
    let dir = args.out.clone().unwrap_or_else(|| PathBuf::from("out").join("verify"));
    let results = run_suite(suite, args.seed);
    let mut table = Table::new("verify.csv");
    for r in &results {
        println!("{}", r.line());
        table.push(vec![r.id.to_string(), r.name.clone(), num(r.measured), num(r.threshold), flag(r.passed)]);
    }
    let failed: Vec<String> = results.iter().filter(|r| !r.passed).map(|r| format!("[{}] {}: {}", r.id, r.name, r.detail)).collect();
    let status = if failed.is_empty() { RunStatus::Success } else { RunStatus::ContractViolation };
    let written = OutputWriter::create(&dir, &[Format::Csv]).and_then(|mut w| {
        w.write_table(&table)?;
        w.write_json("verify.json", &json!({
            "suite": suite,
            "version": env!("CARGO_PKG_VERSION"),
            "seed": args.seed,
            "results": results,
        }))?;
        w.finish("verify", status, args.seed, &failed, None)
    });
    if let Err(e) = written {
        eprintln!("error: writing outputs: {e}");
        return EXIT_VIOLATION;
    }
    if failed.is_empty() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    }
}
