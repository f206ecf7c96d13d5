//! `mfl`: generate recursive graphs, measure them, and search for
//! low-distortion maps between them. Every report is a JSON document that
//! echoes the run configuration; growth tables and geometry profiles can
//! also be written as CSV.

mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{CliError, Format};

#[derive(Debug, Parser)]
#[command(
    name = "mfl",
    version,
    about = "Diamond and Laakso graphs, their metrics, and embeddings between them"
)]
struct Cli {
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Output format; csv is only offered for tabular reports.
    #[arg(long, value_enum, default_value_t = Format::Document, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

/// A graph as `--graph family:level[:weighted]`, a graph document path,
/// or `--family` with `--level`.
#[derive(Debug, Args)]
struct GraphArgs {
    #[arg(long, short, conflicts_with_all = ["family", "level"])]
    graph: Option<String>,
    #[arg(long, requires = "level")]
    family: Option<String>,
    #[arg(long, requires = "family")]
    level: Option<u32>,
    /// Normalize edge lengths so the graph has diameter 1.
    #[arg(long, requires = "family")]
    weighted: bool,
}

#[derive(Debug, Args)]
struct PairArgs {
    /// Source graph, `family:level[:weighted]` or a document path.
    #[arg(long)]
    source: String,
    /// Target graph, same syntax.
    #[arg(long)]
    target: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a graph document.
    Gen(GraphArgs),
    /// Distance between two vertices (ids or addresses).
    Dist {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
    },
    /// Diameter.
    Diam(GraphArgs),
    /// Vertices within a radius of a center.
    Ball {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        center: String,
        /// Exact radius such as `1` or `1/4`.
        #[arg(long)]
        radius: String,
    },
    /// Lower and upper bounds on the doubling constant.
    Doubling {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum, default_value_t = commands::StrategyArg::Witness)]
        strategy: commands::StrategyArg,
        /// Largest number of balls the scan may examine.
        #[arg(long, default_value_t = mfl_core::metric::DEFAULT_SCAN_LIMIT)]
        limit: u64,
    },
    /// Largest ball cardinality for each radius.
    Profile {
        #[command(flatten)]
        graph: GraphArgs,
        /// Comma-separated exact radii.
        #[arg(long, default_value = "0,1,2")]
        radii: String,
    },
    #[command(subcommand)]
    Cycles(CyclesCommand),
    #[command(subcommand)]
    Embed(EmbedCommand),
}

#[derive(Debug, Subcommand)]
enum CyclesCommand {
    /// All simple cycles, shortest first.
    Enumerate {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = mfl_core::cycles::DEFAULT_CYCLE_CAP)]
        cap: usize,
    },
    /// Enumerate the cycles of a diamond graph and name the subdiamond of each.
    ClassifyAll {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = mfl_core::cycles::DEFAULT_CYCLE_CAP)]
        cap: usize,
    },
    /// Nested family of central cycles in a Laakso graph.
    Family {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        t: u32,
        /// Label path of the root piece, comma separated.
        #[arg(long)]
        root: Option<String>,
        #[arg(long)]
        weighted: bool,
    },
    /// Replace subdiamonds of a diamond graph by paths.
    Collapse {
        #[command(flatten)]
        graph: GraphArgs,
        /// Collapse every subdiamond of this height.
        #[arg(long, conflicts_with = "paths", required_unless_present = "paths")]
        height: Option<u64>,
        /// Comma-separated edge label paths such as `03,1`.
        #[arg(long)]
        paths: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
enum EmbedCommand {
    /// Distortion of an explicit map.
    Eval {
        #[command(flatten)]
        pair: PairArgs,
        /// Image of each source vertex, comma separated.
        #[arg(long)]
        assignment: String,
    },
    /// Minimum distortion by branch and bound.
    Exact {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = mfl_core::embed::DEFAULT_NODE_BUDGET)]
        budget: u64,
        /// Explore root subtrees in parallel; the output is the same.
        #[arg(long)]
        parallel: bool,
        #[arg(long)]
        no_symmetry: bool,
        /// A known map to seed the bound with, comma separated.
        #[arg(long)]
        preload: Option<String>,
    },
    /// Seeded local search for a low-distortion map.
    Heuristic {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = mfl_core::embed::DEFAULT_ITERATIONS)]
        iterations: u64,
    },
    /// Lower bound from exact optima of small source subsets.
    LowerBound {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 4)]
        subset_size: usize,
        #[arg(long, default_value_t = 32)]
        samples: usize,
        #[arg(long, default_value_t = 100_000_000)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Isometric map of M_n into D_{3n}.
    ConstructM {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        weighted: bool,
    },
    /// Isometric map of L_1 into D_2.
    ConstructL1 {
        #[arg(long)]
        weighted: bool,
    },
    /// Table of upper and lower bounds for L_n into several D_m.
    Growth {
        #[arg(long, default_value_t = 2)]
        n_max: u32,
        /// Comma-separated diamond levels.
        #[arg(long, default_value = "1,2,3")]
        targets: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20_000)]
        iterations: u64,
        #[arg(long, default_value_t = 3)]
        subset_size: usize,
        #[arg(long, default_value_t = 16)]
        samples: usize,
        /// Work allowance of the lower bound.
        #[arg(long, default_value_t = 100_000_000)]
        budget: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(text) => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("mfl: {e}");
            if e.exit_code() == 64 {
                eprintln!("run `mfl --help` for usage");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(format!("serialization failed: {e}"))
    }
}
