//! `walkmat`: walk matrices, their spectral data, reconstruction and
//! isomorphism certificates from the command line.
//!
//! Exit codes: 0 success, 1 negative verdict, 2 usage error, 3 data error,
//! 4 inconclusive or undetermined.

mod commands;
mod input;
mod render;

use std::fmt;
use std::io::{self, LineWriter, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use input::Format;

#[derive(Debug, Parser)]
#[command(name = "walkmat", version, about = "Walk matrices of graphs: spectra, reconstruction, isomorphism")]
pub struct Cli {
    /// Output style.
    #[arg(long, value_enum, default_value_t = Output::Json, global = true)]
    pub output: Output,
    /// Input format of graph and walk-matrix files.
    #[arg(long, value_enum, default_value_t = Format::Auto, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Table,
}

/// One input file (`-` for stdin) and its vertex set.
#[derive(Debug, Args)]
pub struct Single {
    pub input: String,
    /// `V`, a comma list of 1-based vertices such as `1,3,4`, or `@file`. Defaults to `V`.
    #[arg(long)]
    pub set: Option<String>,
}

#[derive(Debug, Args)]
pub struct Pair {
    pub first: String,
    pub second: String,
    /// Vertex set of the first input. Defaults to `V`.
    #[arg(long)]
    pub set: Option<String>,
    /// Vertex set of the second input. Defaults to `V`.
    #[arg(long)]
    pub set2: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the walk matrix W^S.
    Walk(Single),
    /// Print the main polynomial and the rank of W^S.
    Mainpoly(Single),
    /// Print the spectral summary.
    Spectral {
        #[command(flatten)]
        input: Single,
        /// Add the numeric main eigenvalues.
        #[arg(long)]
        numeric: bool,
    },
    /// Print the W-restriction A_W.
    Restrict {
        #[command(flatten)]
        input: Single,
        /// Also print the projector onto the kernel of W^T.
        #[arg(long)]
        projector: bool,
    },
    /// Recover the adjacency matrix from a walk matrix.
    Reconstruct {
        #[command(flatten)]
        input: Single,
        /// Number of edges; required at rank n-2 unless S = V.
        #[arg(long)]
        edges: Option<usize>,
        /// Use the floating-point route at rank n-2.
        #[arg(long)]
        numeric: bool,
    },
    /// Print the lex form of W^S and the reordering permutation.
    Canon {
        #[command(flatten)]
        input: Single,
        /// Append the vertex-label column (vertex lex form).
        #[arg(long)]
        labels: bool,
    },
    /// Certify whether two graphs are isomorphic via their walk matrices.
    Iso(Pair),
    /// Decide walk equivalence of two (graph, set) pairs.
    Equiv(Pair),
    /// Rank distribution of walk matrices of random graphs.
    Stats {
        /// Number of vertices; repeat for several orders.
        #[arg(long = "n", required = true, value_parser = positive)]
        n: Vec<usize>,
        #[arg(long, default_value_t = 1000, value_parser = positive)]
        trials: usize,
        /// Decimal or 0x-prefixed hex.
        #[arg(long, env = "WALKMAT_SEED", value_parser = parse_seed)]
        seed: Option<u64>,
        /// Worker threads (default: all cores).
        #[arg(long, value_parser = positive)]
        jobs: Option<usize>,
        /// Draw a random non-empty S per trial instead of S = V.
        #[arg(long)]
        random_set: bool,
    },
    /// Reconstruct every isomorphism class on n vertices from W^V.
    Roundtrip {
        #[arg(long = "n", value_parser = positive)]
        n: usize,
        #[arg(long, value_parser = positive)]
        jobs: Option<usize>,
    },
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let s = s.trim();
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(&hex.replace('_', ""), 16),
        None => s.replace('_', "").parse(),
    }
    .map_err(|e| e.to_string())
}

/// Every failure that is not a usage error; reported with exit code 3.
#[derive(Debug)]
pub struct CliError {
    pub message: String,
    broken_pipe: bool,
}

impl CliError {
    pub fn data(message: impl Into<String>) -> Self {
        CliError { message: message.into(), broken_pipe: false }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError { broken_pipe: e.kind() == io::ErrorKind::BrokenPipe, message: e.to_string() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Negative,
    Inconclusive,
}

impl Outcome {
    fn code(self) -> u8 {
        match self {
            Outcome::Success => 0,
            Outcome::Negative => 1,
            Outcome::Inconclusive => 4,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = LineWriter::new(stdout.lock());
    let result = commands::run(&cli, &mut out).and_then(|o| {
        out.flush()?;
        Ok(o)
    });
    match result {
        Ok(outcome) => ExitCode::from(outcome.code()),
        Err(e) if e.broken_pipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("walkmat: {e}");
            ExitCode::from(3)
        }
    }
}
