//! Command-line front end for `hoytlab`.
//!
//! Exit codes: 0 on success, 1 when a check fails (`selftest`, `mc`), 2 on
//! usage or parameter errors.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod format;
pub mod interferer;
pub mod selftest;
pub mod sweep;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};

use clap::{CommandFactory, FromArgMatches};
use hoytlab::QuadratureSpec;

use args::{Cli, Command};
use error::CliError;
use format::Table;

fn quadrature(cli: &Cli) -> Result<QuadratureSpec, CliError> {
    let g = &cli.global;
    Ok(QuadratureSpec::new(g.nodes, g.nodes.max(4096), g.rel_tol)?)
}

fn emit(
    cli: &Cli,
    stdout: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> Result<(), CliError>,
) -> Result<(), CliError> {
    match &cli.global.output {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            body(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => body(stdout),
    }
}

fn write_table(cli: &Cli, stdout: &mut dyn Write, t: &Table) -> Result<(), CliError> {
    emit(cli, stdout, |w| t.write_to(w))
}

fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let quad = quadrature(cli)?;
    match &cli.command {
        Command::Capacity(a) => write_table(cli, stdout, &commands::capacity(a, &quad)?),
        Command::Secrecy(a) => write_table(cli, stdout, &commands::secrecy(a, &quad)?),
        Command::Outage(a) => write_table(cli, stdout, &commands::outage(a, &quad)?),
        Command::IeTable(a) => write_table(cli, stdout, &commands::ie_table(a, &quad)?),
        Command::Mc(a) => {
            let out = commands::mc(a, &quad, cli.global.samples, cli.global.seed)?;
            write_table(cli, stdout, &out.table)?;
            if out.agrees {
                Ok(())
            } else {
                Err(CliError::Check(format!(
                    "Monte Carlo estimate {} ± {} disagrees with analytic {} by more than 3 standard errors",
                    out.estimate.value, out.estimate.std_error, out.analytic
                )))
            }
        }
        Command::Selftest(a) => {
            let checks = selftest::checks(
                a.level,
                quad,
                cli.global.samples,
                cli.global.seed,
                a.inject_failure,
            );
            let (report, ok) = selftest::run(&checks);
            emit(cli, stdout, |w| Ok(w.write_all(report.as_bytes())?))?;
            if ok {
                Ok(())
            } else {
                let _ = writeln!(stderr, "selftest: failures detected");
                Err(CliError::Check("selftest failed".into()))
            }
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match config::expand(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return e.exit_code();
        }
    };
    let matches = match Cli::command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return code;
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return 2;
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests;
