//! Front end of the `ccr` binary: verification suites, convergence sweeps and
//! the symbolic evaluator. Everything except argument plumbing lives here so
//! integration tests can drive the commands without spawning a process.

pub mod args;
pub mod config;
pub mod eval;
pub mod report;
pub mod sweep;
pub mod verify;

use std::ffi::OsString;
use std::io::{IsTerminal, Write};
use std::time::Instant;

use clap::Parser;
use thiserror::Error;

use args::{Cli, Command};
use report::{ReportEnvelope, Summary};

/// Exit status when every check passed.
pub const EXIT_PASS: i32 = 0;
/// Exit status when at least one check failed.
pub const EXIT_FAIL: i32 = 1;
/// Exit status for invalid configuration or input.
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] ccr_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// ANSI colors unless `CCR_NO_COLOR` is set or stderr is not a terminal.
pub fn use_color() -> bool {
    std::env::var_os("CCR_NO_COLOR").is_none() && std::io::stderr().is_terminal()
}

fn paint(text: &str, code: &str) -> String {
    if use_color() {
        format!("\x1b[{code}m{text}\x1b[0m")
    } else {
        text.to_string()
    }
}

fn print_summary(command: &str, summary: &Summary, env: &ReportEnvelope, elapsed: f64) {
    let mut err = std::io::stderr().lock();
    for r in env.records.iter().filter(|r| r.pass == Some(false)) {
        let residual = r.residual.map_or_else(|| "n/a".to_string(), |x| format!("{x:e}"));
        let _ = writeln!(
            err,
            "{} {} {} residual={} tolerance={:e}{}",
            paint("FAIL", "31"),
            r.check_id,
            serde_json::Value::Object(r.parameters.clone()),
            residual,
            r.tolerance,
            r.reason.as_deref().map(|m| format!(" ({m})")).unwrap_or_default()
        );
    }
    let verdict = if summary.failed == 0 { paint("ok", "32") } else { paint("FAILED", "31") };
    let _ = writeln!(
        err,
        "ccr {command}: {verdict}. {} passed, {} failed, {} skipped ({elapsed:.2} s)",
        summary.passed, summary.failed, summary.skipped
    );
}

fn execute(cli: Cli) -> CliResult<i32> {
    match cli.command {
        Command::Eval(a) => {
            let out = eval::run(&a)?;
            if let Some(note) = out.note {
                eprintln!("{note}");
            }
            println!("{}", out.stdout);
            Ok(EXIT_PASS)
        }
        Command::Verify(a) => {
            let config = config::RunConfig::from_verify(&a)?;
            let started = Instant::now();
            let env = verify::run(&config)?;
            finish("verify", &config, &env, started)
        }
        Command::Sweep(a) => {
            let config = config::RunConfig::from_sweep(&a)?;
            let started = Instant::now();
            let env = sweep::run(&config)?;
            finish("sweep", &config, &env, started)
        }
    }
}

fn finish(
    command: &str,
    config: &config::RunConfig,
    env: &ReportEnvelope,
    started: Instant,
) -> CliResult<i32> {
    let text = match config.format {
        config::Format::Json => report::to_json(env)?,
        config::Format::Csv if command == "sweep" => sweep::to_csv(env)?,
        config::Format::Csv => report::to_csv(env)?,
    };
    match &config.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    let summary = env.summary.clone();
    print_summary(command, &summary, env, started.elapsed().as_secs_f64());
    Ok(if summary.failed == 0 { EXIT_PASS } else { EXIT_FAIL })
}

/// Runs the CLI on `argv` and returns the process exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    EXIT_PASS
                }
                _ => EXIT_CONFIG,
            };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}: {e}", paint("error", "31"));
            EXIT_CONFIG
        }
    }
}
