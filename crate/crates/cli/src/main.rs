//! Batch verification front end: selects catalog objects and suites, runs
//! seeded sampling, and emits human- and machine-readable reports.
//!
//! Exit codes: 0 when every check passed, 1 when any check failed,
//! 2 on configuration or runtime errors.

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use kenstat::suite::{
    emit_report, list_catalog, run_suite, ReportFormat, SuiteConfig, SuiteKind,
};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

/// Environment variable naming a JSON file of default tolerance tiers.
const TOL_TIERS_ENV: &str = "KENSTAT_TOL_TIERS";

#[derive(Parser)]
#[command(
    name = "kenstat",
    about = "Numerical verification suites for dual-connection geometry on warped-product contact manifolds",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and print or write the report.
    Run(RunArgs),
    /// List catalog manifolds and immersions.
    List,
}

#[derive(Args)]
#[command(
    after_help = "Environment:\n  KENSTAT_TOL_TIERS  JSON file of default tolerance tiers (overridden by --tol-tier)"
)]
struct RunArgs {
    /// Suite to run: axioms | curvature | submanifold | chen_ricci | all.
    #[arg(long, default_value = "all")]
    suite: String,

    /// Catalog manifold target, e.g. `example_3_4(1,1)`. Default: the full roster.
    #[arg(long)]
    manifold: Option<String>,

    /// Immersion target, e.g. `tilted_plane(0.6)` or `custom` (with a config file).
    #[arg(long)]
    immersion: Option<String>,

    /// Sample points per manifold for the axiom checks.
    #[arg(long)]
    points: Option<usize>,

    /// Seed for every sampled quantity; identical seeds give identical reports.
    #[arg(long)]
    seed: Option<u64>,

    /// Override a tolerance tier, e.g. `--tol-tier fd1=1e-7`. Repeatable.
    #[arg(long = "tol-tier", value_name = "TIER=VALUE")]
    tol_tier: Vec<String>,

    /// Output format: text | json.
    #[arg(long, default_value = "text")]
    format: String,

    /// Write the report to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,

    /// JSON config file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn parse_tier_overrides(specs: &[String]) -> anyhow::Result<BTreeMap<String, f64>> {
    let mut map = BTreeMap::new();
    for spec in specs {
        let (key, value) = spec
            .split_once('=')
            .ok_or_else(|| anyhow!("--tol-tier `{spec}`: expected TIER=VALUE"))?;
        let v: f64 = value
            .parse()
            .map_err(|_| anyhow!("--tol-tier `{spec}`: `{value}` is not a number"))?;
        map.insert(key.trim().to_string(), v);
    }
    Ok(map)
}

fn load_config(args: &RunArgs) -> anyhow::Result<SuiteConfig> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config file {}", path.display()))?;
            serde_json::from_str::<SuiteConfig>(&text).map_err(|e| {
                anyhow!(
                    "config file {}: parse error at line {}, column {}: {e}",
                    path.display(),
                    e.line(),
                    e.column()
                )
            })?
        }
        None => SuiteConfig::default(),
    };

    // Tier defaults from the environment file, below config and flags.
    if let Ok(path) = std::env::var(TOL_TIERS_ENV) {
        let text = std::fs::read_to_string(&path)
            .with_context(|| format!("reading {TOL_TIERS_ENV} file {path}"))?;
        let tiers: BTreeMap<String, f64> = serde_json::from_str(&text).map_err(|e| {
            anyhow!(
                "{TOL_TIERS_ENV} file {path}: parse error at line {}, column {}: {e}",
                e.line(),
                e.column()
            )
        })?;
        for (k, v) in tiers {
            cfg.tolerances.entry(k).or_insert(v);
        }
    }

    cfg.suite = args.suite.parse::<SuiteKind>()?;
    if let Some(m) = &args.manifold {
        cfg.manifold = Some(m.clone());
    }
    if let Some(i) = &args.immersion {
        cfg.immersion = Some(i.clone());
    }
    if let Some(p) = args.points {
        cfg.points = p;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    for (k, v) in parse_tier_overrides(&args.tol_tier)? {
        cfg.tolerances.insert(k, v);
    }
    Ok(cfg)
}

fn run(args: &RunArgs) -> anyhow::Result<bool> {
    let cfg = load_config(args)?;
    let format = args.format.parse::<ReportFormat>()?;
    let report = run_suite(&cfg)?;
    let bytes = emit_report(&report, format)?;
    match &args.out {
        Some(path) => std::fs::write(path, &bytes)
            .with_context(|| format!("writing report to {}", path.display()))?,
        None => std::io::stdout()
            .write_all(&bytes)
            .context("writing report to stdout")?,
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            print!("{}", list_catalog());
            ExitCode::SUCCESS
        }
        Command::Run(args) => match run(&args) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(1),
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(2)
            }
        },
    }
}
