//! Command-line front end for `ionnet-core`.
//!
//! [`run`] is the whole program minus process exit, so tests can drive it
//! in-process with captured output.

pub mod args;
pub mod commands;
pub mod config_file;
pub mod table;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::Parser;

use crate::args::{Cli, Command, CommonArgs};
use crate::table::{emit_csv, Table};

/// Environment variable that relative `--output` paths resolve against.
pub const OUTPUT_DIR_ENV: &str = "IONNET_OUTPUT_DIR";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] ionnet_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("row columns do not match the table header: {0}")]
    Schema(String),
    #[error("max deviation {max_deviation:e} exceeds threshold {threshold:e}")]
    Threshold { max_deviation: f64, threshold: f64 },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Threshold { .. } => 3,
            CliError::Core(_) | CliError::Io(_) | CliError::Csv(_) | CliError::Schema(_) => 1,
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let expanded = match config_file::expand_args(args) {
        Ok(a) => a,
        Err(e) => return report(e, stderr),
    };
    let cli = match Cli::try_parse_from(expanded) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                2
            } else {
                let _ = write!(stdout, "{e}");
                0
            };
            return code;
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => report(e, stderr),
    }
}

fn report(err: CliError, stderr: &mut dyn Write) -> i32 {
    let _ = writeln!(stderr, "error: {err}");
    err.exit_code()
}

fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::VerifyGate(a) => {
            let v = commands::verify_gate(a, stderr)?;
            write_table(&v.table, &a.common, stdout)?;
            if v.max_deviation > v.threshold {
                return Err(CliError::Threshold {
                    max_deviation: v.max_deviation,
                    threshold: v.threshold,
                });
            }
            Ok(())
        }
        Command::Entangle(a) => write_table(&commands::entangle(a, stderr)?, &a.common, stdout),
        Command::Repeater(a) => write_table(&commands::repeater(a, stderr)?, &a.common, stdout),
        Command::Sweep(a) => write_table(&commands::sweep(a, stderr)?, &a.common, stdout),
    }
}

/// Resolves `--output` against [`OUTPUT_DIR_ENV`] when relative.
pub fn output_path(path: &Path) -> PathBuf {
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn write_table(table: &Table, common: &CommonArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &common.output {
        Some(path) => {
            let mut file = BufWriter::new(File::create(output_path(path))?);
            emit_csv(table, &mut file)?;
            file.flush()?;
        }
        None => emit_csv(table, stdout)?,
    }
    Ok(())
}
