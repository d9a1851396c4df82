//! Command-line front end.
//!
//! Every setting can come from a flag or from a `--config` file holding
//! `key = value` lines under `[common]` and `[<command>]` sections. Flags
//! override the file and unknown keys are rejected. Exit codes: 0 ok,
//! 1 verification failure, 2 configuration error, 3 numerical failure.

pub mod commands;
pub mod config;
pub mod output;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Arg, ArgAction};
use thiserror::Error;

pub use config::{Command, JobConfig};
pub use output::{Format, Report};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

/// How a completed job ended.
#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Ok,
    /// Names of failed identities.
    Failed(Vec<String>),
    /// Messages describing the numerical breakdown.
    Numerical(Vec<String>),
}

impl Status {
    pub fn exit_code(&self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Failed(_) => 1,
            Status::Numerical(_) => 3,
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

fn build() -> clap::Command {
    let shared: &[(&str, &str)] = &[
        ("f", "function of x"),
        ("psi", "admissible psi (default x)"),
        ("omega", "positive weight (default 1)"),
        ("tol-abs", "absolute quadrature tolerance"),
        ("tol-rel", "relative quadrature tolerance"),
        ("out", "output file (default stdout)"),
        ("format", "csv | json"),
    ];
    let mut app = clap::Command::new("psi-mellin")
        .about("Weighted Mellin transform with respect to a function")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for cmd in Command::ALL {
        let mut sub = clap::Command::new(cmd.name()).about(cmd.about()).arg(
            Arg::new("config").long("config").value_name("PATH").help("key = value file with [common] and command sections"),
        );
        for (key, help) in shared.iter().chain(cmd.keys()) {
            let arg = Arg::new(*key).long(*key).help(*help);
            let arg = if config::SWITCHES.contains(key) {
                arg.action(ArgAction::SetTrue)
            } else if matches!(*key, "p" | "x") {
                arg.action(ArgAction::Append).allow_hyphen_values(true)
            } else {
                arg.allow_hyphen_values(true)
            };
            sub = sub.arg(arg);
        }
        app = app.subcommand(sub);
    }
    app
}

/// Parses the arguments into a job, reading the config file if given.
pub fn parse_job<I, T>(args: I) -> Result<JobConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = build().try_get_matches_from(args).map_err(|e| CliError::Config(e.to_string()))?;
    let (name, sub) = matches.subcommand().expect("a subcommand is required");
    let command = Command::from_name(name).expect("subcommands come from Command::ALL");
    let mut flags = BTreeMap::new();
    for id in sub.ids() {
        let key = id.as_str();
        if key == "config" {
            continue;
        }
        if config::SWITCHES.contains(&key) {
            if sub.get_flag(key) {
                flags.insert(key.to_string(), "true".to_string());
            }
            continue;
        }
        if let Some(values) = sub.get_many::<String>(key) {
            let sep = if key == "p" { ";" } else { "," };
            flags.insert(key.to_string(), values.cloned().collect::<Vec<_>>().join(sep));
        }
    }
    let file = sub.get_one::<String>("config").map(PathBuf::from);
    JobConfig::merge(command, file.as_deref(), flags)
}

/// Runs a parsed job and writes its output.
pub fn execute(job: &JobConfig) -> Result<Status, CliError> {
    let default = if job.command == Command::Verify { "json" } else { "csv" };
    let format = Format::parse(job.get("format").unwrap_or(default))?;
    let out = job.get("out").map(PathBuf::from);
    let (report, status) = commands::run(job)?;
    output::emit(&report.render(format, job), out.as_deref())?;
    Ok(status)
}

/// Entry point of the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<T> = args.into_iter().collect();
    let job = match parse_job(args.clone()) {
        Ok(job) => job,
        Err(CliError::Config(msg)) if is_help(&args) => {
            print!("{msg}");
            return 0;
        }
        Err(e) => {
            eprintln!("{e}");
            return e.exit_code();
        }
    };
    match execute(&job) {
        Ok(status) => {
            match &status {
                Status::Ok => {}
                Status::Failed(names) => eprintln!("verification failed: {}", names.join(", ")),
                Status::Numerical(msgs) => {
                    for m in msgs {
                        eprintln!("numerical failure: {m}");
                    }
                }
            }
            status.exit_code()
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

fn is_help<T: Into<OsString> + Clone>(args: &[T]) -> bool {
    args.iter().skip(1).any(|a| {
        let s: OsString = a.clone().into();
        s == "--help" || s == "-h" || s == "help"
    }) || args.len() <= 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_become_keys() {
        let job = parse_job(["psi-mellin", "transform", "--f", "exp(-x)", "--p", "2.5", "--p", "1.5,2"]).unwrap();
        assert_eq!(job.command, Command::Transform);
        assert_eq!(job.get("p"), Some("2.5;1.5,2"));
        let job = parse_job(["psi-mellin", "solve-fde", "--preset", "case3", "--residual", "--x", "-1"]).unwrap();
        assert_eq!(job.get("residual"), Some("true"));
        assert_eq!(job.get("x"), Some("-1"));
        assert!(matches!(parse_job(["psi-mellin", "transform", "--alpha", "1"]), Err(CliError::Config(_))));
    }
}
