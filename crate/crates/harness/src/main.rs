use clap::Parser;
use fht_harness::config::RunConfig;
use fht_harness::experiments::{self, RunOptions};
use fht_harness::record::{write_sweep, Format};
use fht_harness::HarnessError;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

/// Runs Fisher–Hartwig determinant experiments and writes one record per
/// grid point.
#[derive(Debug, Parser)]
#[command(name = "fht", version)]
struct Cli {
    /// Experiment: detn, uniformity, chi-ladder, cue, selberg or boson.
    /// May also be given as `experiment = ...` in the config file.
    experiment: Option<String>,

    /// `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output format.
    #[arg(long, value_parser = ["csv", "jsonl"])]
    format: Option<String>,

    /// Worker threads (grid points run in parallel; output order is fixed).
    #[arg(long, env = "FHT_WORKERS")]
    workers: Option<usize>,

    /// Seed for Monte Carlo experiments.
    #[arg(long)]
    seed: Option<u64>,

    /// Cross-check Levinson against a dense factorization.
    #[arg(long)]
    verify: bool,

    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Write zero wall times so repeated runs are byte-identical.
    #[arg(long)]
    no_timing: bool,

    /// `KEY=VALUE` overrides applied after the config file.
    #[arg(value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::parse(&std::fs::read_to_string(path)?)?,
        None => RunConfig::default(),
    };
    let mut experiment = cli.experiment.clone();
    let mut overrides = cli.overrides.clone();
    // A lone positional containing `=` is an override, not an experiment.
    if let Some(e) = &experiment {
        if e.contains('=') {
            overrides.insert(0, e.clone());
            experiment = None;
        }
    }
    for kv in &overrides {
        cfg.apply_override(kv)?;
    }
    if let Some(s) = cli.seed {
        cfg.set("seed", &s.to_string())?;
    }
    let experiment = match experiment.or_else(|| cfg.get("experiment").map(str::to_string)) {
        Some(e) => e,
        None => return Err(HarnessError::Config("no experiment given".into())),
    };
    let format: Format = match &cli.format {
        Some(f) => f.parse()?,
        None => cfg.str_or("format", "csv").parse()?,
    };
    let workers = match cli.workers {
        Some(w) => w,
        None => cfg.uint_or("workers", default_workers() as u64)? as usize,
    };
    if workers == 0 {
        return Err(HarnessError::Config("workers must be at least 1".into()));
    }
    let opts = RunOptions {
        workers,
        verify: cli.verify,
        timing: !cli.no_timing,
    };
    let sweep = experiments::run(&experiment, &cfg, &opts)?;
    let out = cli.out.clone().or_else(|| cfg.get("out").map(PathBuf::from));
    match out {
        Some(path) => write_sweep(&sweep, format, BufWriter::new(File::create(path)?)),
        None => write_sweep(&sweep, format, BufWriter::new(std::io::stdout().lock())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let mut err = std::io::stderr().lock();
            let _ = writeln!(err, "{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
