use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use fflab::{execute_to, Format, RunConfig, Status, TASKS};

/// Run one fflab task from a configuration file.
#[derive(Debug, Parser)]
#[command(name = "fflab", version)]
struct Cli {
    /// one of the task names listed in the README
    task: String,
    #[arg(long)]
    config: PathBuf,
    /// worker threads (overrides FFLAB_WORKERS and the config)
    #[arg(long)]
    workers: Option<usize>,
    /// output directory (overrides FFLAB_OUT and the config)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<Format>,
}

fn env_override<T: std::str::FromStr>(name: &str) -> Result<Option<T>, String> {
    match std::env::var(name) {
        Ok(v) => v.parse().map(Some).map_err(|_| format!("{name}={v:?} is not valid")),
        Err(_) => Ok(None),
    }
}

fn config_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("fflab: {msg}");
    ExitCode::from(Status::ConfigError as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if !TASKS.contains(&cli.task.as_str()) {
        return config_error(format!("unknown task `{}`; expected one of {}", cli.task, TASKS.join(", ")));
    }
    let mut cfg = match RunConfig::load(&cli.config) {
        Ok(c) => c,
        Err(e) => return config_error(e),
    };
    if let Some(t) = &cfg.task {
        if t != &cli.task {
            return config_error(format!("{}: config is for task `{t}`, not `{}`", cli.config.display(), cli.task));
        }
    }
    let workers = match env_override::<usize>("FFLAB_WORKERS") {
        Ok(env) => cli.workers.or(env).unwrap_or(cfg.workers),
        Err(m) => return config_error(m),
    };
    if workers == 0 {
        return config_error("worker count must be positive");
    }
    let out = match env_override::<PathBuf>("FFLAB_OUT") {
        Ok(env) => cli.out.clone().or(env).unwrap_or_else(|| cfg.out.clone()),
        Err(m) => return config_error(m),
    };
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(workers).build_global() {
        return config_error(format!("cannot start workers: {e}"));
    }

    let start = Instant::now();
    let (outcome, path) = match execute_to(&cli.task, &cfg, &out) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("fflab: cannot write report: {e}");
            return ExitCode::from(Status::ConfigError as u8);
        }
    };
    // timing goes to stderr only, so report files stay byte-identical across runs
    eprintln!("fflab: {} records in {:.2?} -> {}", outcome.records.len(), start.elapsed(), path.display());
    if let Some(e) = &outcome.error {
        eprintln!("fflab: {e}");
    }
    let verdict = match outcome.status {
        Status::Pass => "pass",
        Status::AssertionFailed => "FAIL",
        Status::ConfigError => "config error",
        Status::BudgetExhausted => "budget exhausted",
    };
    println!("{}: {verdict}", cli.task);
    ExitCode::from(outcome.status as u8)
}
