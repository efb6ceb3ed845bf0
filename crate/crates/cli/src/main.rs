//! `solenoid`: validate wrapping rules and compute the homology of the
//! solenoids they present.
//!
//! Exit codes: 0 when every input passes, 1 when some input fails a check,
//! 2 for usage, I/O and parse errors.

mod commands;
mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::thread;

use clap::{Parser, Subcommand, ValueEnum};

use crate::commands::{run_file, Outcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "solenoid", version, about = "Homology of one-dimensional solenoids given by wrapping rules")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Analyze the n-th power of each rule instead of the rule itself.
    #[arg(long, value_name = "N", global = true, value_parser = clap::value_parser!(u32).range(1..=64))]
    pub power: Option<u32>,

    /// Print nothing; report through the exit code only.
    #[arg(long, short, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the pre-solenoid axioms.
    Validate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Normalize, decide orientability and compute all groups.
    Analyze {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Run the property suite against each rule.
    Selfcheck {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// JSON document with a recorded `w` (for example `analyze` output)
        /// to replay against the first input.
        #[arg(long, value_name = "JSON")]
        replay: Option<PathBuf>,
    },
    /// Čech cohomology and its comparison with H^u_0.
    Cech {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Dimension groups of the covering shift.
    Dimgroup {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

impl Command {
    pub fn files(&self) -> &[PathBuf] {
        match self {
            Command::Validate { files }
            | Command::Analyze { files }
            | Command::Selfcheck { files, .. }
            | Command::Cech { files }
            | Command::Dimgroup { files } => files,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let files = cli.command.files();
    // each input is analyzed on its own thread; output is buffered per file
    let outcomes: Vec<Outcome> = thread::scope(|s| {
        let handles: Vec<_> = files.iter().map(|p| s.spawn(|| run_file(&cli, p))).collect();
        handles.into_iter().map(|h| h.join().expect("analysis thread panicked")).collect()
    });

    let code = outcomes.iter().map(|o| o.code).max().unwrap_or(0);
    let mut stderr = std::io::stderr().lock();
    for o in &outcomes {
        let _ = stderr.write_all(o.stderr.as_bytes());
    }
    if !cli.quiet {
        let stdout = match cli.format {
            Format::Json => render::json_document(files, &outcomes),
            Format::Text => render::text_document(files, &outcomes),
        };
        let mut out = std::io::stdout().lock();
        let _ = out.write_all(stdout.as_bytes());
    }
    ExitCode::from(code)
}
