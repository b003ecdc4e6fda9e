//! Command-line front end. [`run`] parses arguments, dispatches one command
//! and returns the exit code with everything that would be printed.

mod commands;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub use commands::Report;

#[derive(Debug, Parser)]
#[command(name = "gaussci", version, about = "Gaussian CI implication on DAG models with one added statement")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Graph file: a line `n <count>`, then one `a -> b` per edge.
    #[arg(long, value_name = "FILE")]
    pub graph: Option<PathBuf>,
    /// Machine-readable output.
    #[arg(long)]
    pub json: bool,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct Triple {
    pub i: usize,
    pub j: usize,
    pub l: usize,
    /// Conditioning set, e.g. `{2,3}` or `2`.
    #[arg(long, default_value = "{}")]
    pub given: String,
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    Equivalence,
    TrekRule,
    Soundness,
    Approx,
    MiGap,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide a d-separation statement.
    Dsep {
        #[command(flatten)]
        common: Common,
        statement: String,
    },
    /// Print one covariance entry as a polynomial in the parameters.
    Phi {
        #[command(flatten)]
        common: Common,
        i: usize,
        j: usize,
    },
    /// The minor of an elementary statement, raw and saturated.
    Minor {
        #[command(flatten)]
        common: Common,
        statement: String,
    },
    /// Whether the added statement implies the query on the model.
    Implies {
        #[command(flatten)]
        common: Common,
        extra: String,
        query: String,
        /// Draws per component when looking for a refuting model.
        #[arg(long, default_value_t = 200)]
        budget: usize,
    },
    /// Split the model cut out by one statement into graphical pieces.
    Decompose {
        #[command(flatten)]
        common: Common,
        statement: String,
        /// Decompose the saturated generator instead of the raw minor.
        #[arg(long)]
        saturated: bool,
        /// Write each component graph into this directory.
        #[arg(long, value_name = "DIR")]
        emit_graphs: Option<PathBuf>,
    },
    /// Apply several statements one after the other.
    Iterate {
        #[command(flatten)]
        common: Common,
        #[arg(required = true)]
        statements: Vec<String>,
    },
    /// Axiom closure of the graph's separation statements plus extras.
    GaussoidClose {
        #[command(flatten)]
        common: Common,
        statements: Vec<String>,
    },
    /// Compare algebraic implication with the axiom closure on every
    /// four-node graph, or only on `--graph`.
    VerifyN4 {
        #[command(flatten)]
        common: Common,
    },
    /// Decide the approximate implication of `i _||_ l | K` from `i _||_ j | K`.
    ApproxImplies {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        triple: Triple,
    },
    /// Search for a model where the approximate implication fails.
    Witness {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        triple: Triple,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
    },
    /// Run a verification sweep over all graphs up to `--max-n` nodes, or
    /// over `--graph` alone.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(value_enum)]
        kind: SweepKind,
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        /// Random models per case or per graph.
        #[arg(long, default_value_t = 200)]
        draws: usize,
        /// Restart budget for witness searches.
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
    },
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Dsep { common, .. }
            | Command::Phi { common, .. }
            | Command::Minor { common, .. }
            | Command::Implies { common, .. }
            | Command::Decompose { common, .. }
            | Command::Iterate { common, .. }
            | Command::GaussoidClose { common, .. }
            | Command::VerifyN4 { common }
            | Command::ApproxImplies { common, .. }
            | Command::Witness { common, .. }
            | Command::Sweep { common, .. } => common,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Guard(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Guard(_) => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let json = cli.command.common().json;
    match commands::dispatch(&cli.command) {
        Ok(report) => {
            let stdout = if json {
                let mut s = serde_json::to_string_pretty(&report.json).expect("json values serialize");
                s.push('\n');
                s
            } else {
                report.text
            };
            Outcome { code: 0, stdout, stderr: String::new() }
        }
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}
