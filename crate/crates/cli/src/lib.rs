//! Front end for the `beltrami` binary: load a JSON run config, sample fields and
//! transforms onto points as CSV, or run check suites into a JSON report.

pub mod checks;
pub mod config;
pub mod sample;

use std::path::PathBuf;

use thiserror::Error;

pub use checks::{CheckEntry, CheckReport, Summary};
pub use config::{Command, RunConfig, Suite};

/// Exit status for configuration and input errors.
pub const EXIT_CONFIG: i32 = 2;
/// Exit status when a check fails.
pub const EXIT_CHECK_FAILED: i32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error at {location}: {reason}")]
    Config { location: String, reason: String },
    #[error("evaluation failed for {context}: {source}")]
    Compute {
        context: String,
        #[source]
        source: beltrami::Error,
    },
    #[error("cannot access {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub(crate) fn config(location: &str, reason: impl Into<String>) -> Self {
        CliError::Config { location: location.to_string(), reason: reason.into() }
    }

    pub(crate) fn compute(context: impl Into<String>, source: beltrami::Error) -> Self {
        CliError::Compute { context: context.into(), source }
    }
}

/// Rendered output of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    /// False when a check suite reported a failure.
    pub passed: bool,
}

/// Executes `cfg` and renders its CSV or JSON output.
pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cfg.command {
        Command::Check(suite) => {
            let report = checks::run_suite(suite, cfg)?;
            let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
            text.push('\n');
            Ok(Outcome { text, passed: report.summary.failed == 0 })
        }
        _ => Ok(Outcome { text: sample::run_sample(cfg)?, passed: true }),
    }
}

/// Caps the global thread pool from `BELTRAMI_THREADS`, when set.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("BELTRAMI_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| CliError::config("BELTRAMI_THREADS", format!("expected a positive integer, got `{raw}`")))?;
    // a second call in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}
