//! `refspline`: exact refinability checks, masks, certificates and numerics
//! for box splines.
//!
//! Exit codes: 0 success, 1 refuted or failed check, 2 usage error,
//! 3 internal consistency error.

mod args;
mod commands;
mod encode;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use refspline_core::Error;
use serde_json::{json, Value};

use args::{Cli, Command, Format};
use commands::{Outcome, Status};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot access {path}: {message}")]
    Io { path: String, message: String },
}

impl CliError {
    fn reason(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.reason(),
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_internal() => 3,
            CliError::Core(
                Error::Divergence { .. } | Error::ProbeExhaustion { .. } | Error::RootIsolationFailure(_),
            ) => 1,
            _ => 2,
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Check { instance, verify_mask } => commands::check(&commands::load_instance(instance)?, *verify_mask),
        Command::Mask { instance } => commands::mask(&commands::load_instance(instance)?),
        Command::Lawton { p, d, m } => commands::lawton(p, *d, *m),
        Command::Erdos { field, lambda, targets, depth, c, extra } => {
            commands::erdos(field.as_deref(), lambda, targets, *depth, c.as_deref(), *extra)
        }
        Command::Cascade { instance, grid, iters } => {
            commands::check_grid(*grid)?;
            commands::cascade(&commands::load_instance(instance)?, *grid, *iters)
        }
        Command::Ftprobe { instance, jmax, points, range, tol } => {
            commands::ftprobe(&commands::load_instance(instance)?, *jmax, *points, *range, *tol, cli.prec, cli.seed)
        }
        Command::Decay { instance, jmax } => commands::decay(&commands::load_instance(instance)?, *jmax),
        Command::Mvcheck { instance } => commands::mvcheck(&commands::load_instance(instance)?),
        Command::Counterexample => commands::counterexample(),
        Command::FactorizeCheck { instance, grid, iters, tol } => {
            commands::check_grid(*grid)?;
            commands::factorize_check(&commands::load_instance(instance)?, *grid, *iters, *tol)
        }
    }
}

fn config(cli: &Cli) -> Value {
    let mut v = serde_json::to_value(cli).expect("configuration serializes");
    v["subcommand"] = json!(cli.command.name());
    v
}

/// Merge the command's report under the shared envelope keys.
fn envelope(cli: &Cli, outcome: &Outcome) -> Value {
    let mut v = json!({
        "command": cli.command.name(),
        "config": config(cli),
        "status": match outcome.status { Status::Ok => "ok", Status::Refuted => "refuted" },
    });
    if let Value::Object(fields) = &outcome.report {
        for (k, val) in fields {
            v[k] = val.clone();
        }
    }
    v
}

fn render(cli: &Cli, outcome: &Outcome) -> Result<String, CliError> {
    match cli.format {
        Format::Json => Ok(pretty(&envelope(cli, outcome))),
        Format::Text => Ok(format!("command: {}\n{}", cli.command.name(), outcome.text)),
        Format::Csv => match &outcome.csv {
            Some(csv) => Ok(format!("# {}\n{csv}", serde_json::to_string(&config(cli)).expect("json"))),
            None => Err(CliError::Usage(format!("`{}` has no CSV output", cli.command.name()))),
        },
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn emit(cli: &Cli, body: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())
                .and_then(|()| out.flush())
                .map_err(|e| CliError::Io { path: "stdout".into(), message: e.to_string() })
        }
    }
}

fn report_error(cli: Option<&Cli>, err: &CliError) -> ExitCode {
    let code = err.exit_code();
    let body = json!({
        "command": cli.map(|c| c.command.name()),
        "config": cli.map(config),
        "status": "error",
        "error": { "reason": err.reason(), "message": err.to_string() },
        "exit_code": code,
    });
    match cli.map(|c| c.format) {
        Some(Format::Text) | Some(Format::Csv) => eprintln!("error [{}]: {}", err.reason(), err),
        _ => eprint!("{}", pretty(&body)),
    }
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return report_error(None, &CliError::Usage(e.kind().to_string()));
        }
    };
    let result = run(&cli).and_then(|o| {
        let body = render(&cli, &o)?;
        emit(&cli, &body)?;
        Ok(o.status)
    });
    match result {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Refuted) => ExitCode::from(1),
        Err(e) => report_error(Some(&cli), &e),
    }
}
