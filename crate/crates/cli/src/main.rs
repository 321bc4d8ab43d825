//! `shortcut`: generate instances, construct and audit shortcuts, run MST.
//!
//! Exit status: 0 on success, 2 when an algorithm gave up or an audit found a
//! mismatch, 1 on bad input.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "shortcut", version, about = "Low-congestion shortcut experiments on a CONGEST simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an instance and write the graph and partition files.
    Generate(GenerateArgs),
    /// Build a shortcut and report its measured quality.
    Construct(ConstructArgs),
    /// Measure a shortcut file against an instance.
    VerifyQuality(VerifyArgs),
    /// Boruvka MST over shortcuts.
    Mst(MstArgs),
    /// Cross-check the distributed algorithms against the centralized oracles.
    Audit(AuditArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FamilyArg {
    Path,
    Star,
    Grid,
    Torus,
    RandomPlanarTriangulation,
    RandomTreePlusChords,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SchemeArg {
    Singletons,
    Rows,
    BfsBalls,
    RandomConnected,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum WeightsArg {
    Unit,
    UniformDistinct,
}

/// Where the instance comes from: files, a JSON spec, or generator flags.
#[derive(Debug, Args)]
pub struct InstanceArgs {
    /// Graph file (`n m` header, then `u v [w]` lines).
    #[arg(long, conflicts_with_all = ["spec", "family"])]
    pub instance: Option<PathBuf>,
    /// Partition file, one part per line; defaults to singletons.
    #[arg(long, requires = "instance")]
    pub partition: Option<PathBuf>,
    /// Root of the BFS tree; defaults to the spec's root or node 0.
    #[arg(long)]
    pub root: Option<usize>,
    /// Generator spec as a JSON file.
    #[arg(long, conflicts_with = "family")]
    pub spec: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    /// Node count for path, triangulation and tree families.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub cols: Option<usize>,
    #[arg(long)]
    pub leaves: Option<usize>,
    #[arg(long)]
    pub chords: Option<usize>,
    #[arg(long, value_enum, default_value = "singletons")]
    pub scheme: SchemeArg,
    /// Part count for bfs-balls and random-connected.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum, default_value = "unit")]
    pub weights: WeightsArg,
    /// Generator seed.
    #[arg(long, default_value_t = 0)]
    pub spec_seed: u64,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub source: InstanceArgs,
    /// Graph file to write; stdout gets graph and partition when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, requires = "out")]
    pub partition_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EngineArgs {
    /// Message budget multiplier.
    #[arg(long, default_value_t = shortcut_core::congest::DEFAULT_KAPPA)]
    pub kappa: u32,
    /// Write one `round sender receiver bits` line per message.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Step nodes on the rayon pool.
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[command(flatten)]
    pub source: InstanceArgs,
    #[arg(long, default_value = "find")]
    pub mode: String,
    #[arg(long, default_value_t = 1)]
    pub c: u32,
    #[arg(long, default_value_t = 1)]
    pub b: u32,
    #[arg(long, default_value_t = shortcut_core::construction::DEFAULT_GAMMA)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[command(flatten)]
    pub engine: EngineArgs,
    /// JSON result; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Shortcut file: per part, a line of graph edge IDs.
    #[arg(long)]
    pub shortcut_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: InstanceArgs,
    #[arg(long)]
    pub shortcut: PathBuf,
    /// Also run distributed verification with this block limit.
    #[arg(long)]
    pub b_limit: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MstArgs {
    #[command(flatten)]
    pub source: InstanceArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = shortcut_core::construction::DEFAULT_GAMMA)]
    pub gamma: f64,
    /// Break weight ties by endpoint IDs.
    #[arg(long)]
    pub perturb: bool,
    #[arg(long)]
    pub max_phases: Option<usize>,
    #[command(flatten)]
    pub engine: EngineArgs,
    /// Per-phase CSV: phase, parts, c, b, rounds.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[command(flatten)]
    pub source: InstanceArgs,
    #[arg(long, default_value_t = 1)]
    pub c: u32,
    #[arg(long, default_value_t = 3)]
    pub b_limit: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(commands::Status::Ok) => ExitCode::SUCCESS,
        Ok(commands::Status::AlgorithmFailed(why)) => {
            eprintln!("shortcut: {why}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("shortcut: {e:#}");
            ExitCode::from(1)
        }
    }
}
