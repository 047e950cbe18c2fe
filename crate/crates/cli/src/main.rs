use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use beltrami_cli::{configure_threads, run, CliError, RunConfig, EXIT_CHECK_FAILED, EXIT_CONFIG};
use clap::Parser;

/// Sample curl eigenfields and their transforms, or run check suites.
///
/// The command (`field sample`, `xray`, `check all`, ...) is the `command` entry
/// of the JSON config. Output is CSV for sampling commands and a JSON report for
/// checks. Exit status: 0 on success, 1 if a check fails, 2 on config errors.
#[derive(Debug, Parser)]
#[command(name = "beltrami", version)]
struct Args {
    /// JSON run configuration.
    config: PathBuf,
    /// Override a config entry, e.g. `--set field.nu=1.5` or `--set "command=check eigen"`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Write output here instead of the config's `output` (or stdout).
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn execute(args: &Args) -> Result<bool, CliError> {
    configure_threads()?;
    let text = std::fs::read_to_string(&args.config).map_err(|source| CliError::Io { path: args.config.clone(), source })?;
    let cfg = RunConfig::load(&text, &args.set)?;
    let outcome = run(&cfg)?;
    match args.output.as_ref().or(cfg.output.as_ref()) {
        Some(path) => std::fs::write(path, &outcome.text).map_err(|source| CliError::Io { path: path.clone(), source })?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(outcome.text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })?;
        }
    }
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("beltrami: one or more checks failed");
            ExitCode::from(EXIT_CHECK_FAILED as u8)
        }
        Err(e) => {
            eprintln!("beltrami: {e}");
            ExitCode::from(EXIT_CONFIG as u8)
        }
    }
}
