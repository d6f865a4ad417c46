use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use zebra::schedule::parse_overrides;
use zebra_harness::audit::audit;
use zebra_harness::config::DEFAULT_BUDGET;
use zebra_harness::output::{render_text, write_records, write_summary};
use zebra_harness::{run, summarize, Experiment, ExperimentConfig, Format};

#[derive(Parser)]
#[command(name = "zebra", version, about = "Seeded Hamilton-cycle experiments on random graph processes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Degree and Hamilton-through-M0 hitting times, exact oracle.
    HittingCoincidence(RunArgs),
    /// Two-color cover and alternating Hamilton hitting times, exact oracle.
    ZebraicCoincidence(RunArgs),
    /// Alternating connectivity of a random 2-coloring at minimum degree one.
    ZebraicConnect(RunArgs),
    /// Bad and poor vertex counts and the r-periodic pipeline over a density grid.
    RzebraicSweep(RunArgs),
    /// Disjointness and cycle structure of two random perfect matchings.
    MatchingStats(RunArgs),
    /// The three-phase Hamilton-through-M0 pipeline with desk-scale overrides.
    PipelineDemo(RunArgs),
    /// Re-verify every success certificate referenced by a records file.
    Audit(AuditArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct RunArgs {
    /// Vertex counts, comma separated or repeated.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    r: usize,
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    /// Master seed; trial seeds are derived from it and the trial index.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Oracle node expansions per query.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, env = "ZEBRA_WORKERS", default_value_t = 0)]
    workers: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Records file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Schedule field override, KEY=VALUE; repeatable.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Density multipliers for the r-zebraic sweep.
    #[arg(long, value_delimiter = ',', default_values_t = [0.6, 0.8, 1.0, 1.2, 1.5, 2.0])]
    c: Vec<f64>,
    /// Sample the sweep graphs as one base layer plus two sparse layers.
    #[arg(long)]
    layered: bool,
    /// Count bad and poor vertices only.
    #[arg(long)]
    no_pipeline: bool,
    /// Record wall time per trial; makes outputs differ between runs.
    #[arg(long)]
    timing: bool,
    /// Directory for certificate dumps; defaults to `<out>.certs` when --out is given.
    #[arg(long)]
    certs: Option<PathBuf>,
    /// Also write the summary table here, in --format.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct AuditArgs {
    /// Records file written by an experiment.
    records: PathBuf,
    /// Certificate directory; defaults to `<records>.certs`.
    #[arg(long)]
    certs: Option<PathBuf>,
}

fn default_certs(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".certs");
    PathBuf::from(s)
}

fn config(experiment: Experiment, a: &RunArgs) -> anyhow::Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::new(experiment, a.n.clone());
    cfg.r = a.r;
    cfg.eps = a.eps;
    cfg.trials = a.trials;
    cfg.master_seed = a.seed;
    cfg.budget = a.budget;
    cfg.workers = a.workers;
    cfg.format = match a.format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    };
    cfg.overrides = parse_overrides(&a.overrides)?;
    cfg.c_grid = a.c.clone();
    cfg.layered = a.layered;
    cfg.pipeline = !a.no_pipeline;
    cfg.timing = a.timing;
    cfg.validate()?;
    Ok(cfg)
}

fn execute(cfg: &ExperimentConfig, a: &RunArgs) -> anyhow::Result<()> {
    let out = run(cfg)?;
    let records = write_records(&out.records, cfg.experiment, cfg.format)?;
    match &a.out {
        Some(path) => fs::write(path, &records).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(records.as_bytes())?,
    }
    let certs = a.certs.clone().or_else(|| a.out.as_deref().map(default_certs));
    if let Some(dir) = certs.filter(|_| !out.certificates.is_empty()) {
        fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        for (hash, text) in &out.certificates {
            fs::write(dir.join(format!("{hash}.cert")), text)?;
        }
    }
    let rows = summarize(&out.records)?;
    eprint!("{}", render_text(&rows, cfg.experiment)?);
    if let Some(path) = &a.summary {
        fs::write(path, write_summary(&rows, cfg.experiment, cfg.format)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (experiment, args) = match &cli.command {
        Command::HittingCoincidence(a) => (Experiment::HittingCoincidence, a),
        Command::ZebraicCoincidence(a) => (Experiment::ZebraicCoincidence, a),
        Command::ZebraicConnect(a) => (Experiment::ZebraicConnect, a),
        Command::RzebraicSweep(a) => (Experiment::RzebraicSweep, a),
        Command::MatchingStats(a) => (Experiment::MatchingStats, a),
        Command::PipelineDemo(a) => (Experiment::PipelineDemo, a),
        Command::Audit(a) => return run_audit(a),
    };
    let cfg = match config(experiment, args) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match execute(&cfg, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run_audit(a: &AuditArgs) -> ExitCode {
    let certs = a.certs.clone().unwrap_or_else(|| default_certs(&a.records));
    let report = fs::read_to_string(&a.records)
        .with_context(|| format!("reading {}", a.records.display()))
        .and_then(|text| audit(&text, &certs));
    match report {
        Ok(r) => {
            for p in &r.problems {
                eprintln!("{p}");
            }
            println!("{} records, {} successes, {} certificates verified", r.records, r.successes, r.verified);
            if r.clean() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
