//! Batch harness: load a run configuration, dispatch a task, emit records.

pub mod config;
pub mod report;
pub mod tasks;

use std::path::{Path, PathBuf};

pub use config::{ConfigError, RunConfig, TASKS};
pub use report::{emit_report, read_records, write_records, Format, Report, ReportRecord};
pub use tasks::{run_task, TaskError};

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass = 0,
    AssertionFailed = 1,
    ConfigError = 2,
    BudgetExhausted = 3,
}

#[derive(Debug)]
pub struct Outcome {
    pub status: Status,
    pub records: Vec<ReportRecord>,
    pub error: Option<TaskError>,
}

/// Run a task to completion. A task that stops early keeps its records and
/// gains a final `incomplete` record naming the reason.
pub fn execute(task: &str, cfg: &RunConfig) -> Outcome {
    let mut report = Report::new(task);
    let result = run_task(task, cfg, &mut report);
    let status = match &result {
        Ok(()) if report.failures == 0 => Status::Pass,
        Ok(()) => Status::AssertionFailed,
        Err(TaskError::Budget(_)) => Status::BudgetExhausted,
        Err(_) => Status::ConfigError,
    };
    if let Err(e) = &result {
        report.push("incomplete", vec![("reason", e.to_string())]);
    }
    Outcome { status, records: report.records, error: result.err() }
}

/// Execute and write `<out>/<task>.<ext>`.
pub fn execute_to(task: &str, cfg: &RunConfig, out: &Path) -> std::io::Result<(Outcome, PathBuf)> {
    let outcome = execute(task, cfg);
    let path = emit_report(&outcome.records, task, cfg.format, out)?;
    Ok((outcome, path))
}
