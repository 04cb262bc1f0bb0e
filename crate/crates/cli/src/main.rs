//! `shotgun`: sample graphs, extract decks, audit, diagnose, reconstruct,
//! compute entropy profiles and run parameter sweeps.

mod commands;
mod report;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use shotgun_core::reconstruct::DEFAULT_BUDGET;
use shotgun_core::shotgun::DeckMode;

#[derive(Parser, Debug)]
#[command(name = "shotgun", version, about = "Graph reconstruction from 1-neighborhood decks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample G(n, p) and write it as an edge list.
    Sample(SampleArgs),
    /// Extract the deck of 1-neighborhoods of a graph.
    Deck(DeckArgs),
    /// Audit a graph against the typicality events (JSON report).
    Audit(AuditArgs),
    /// Step diagnostics for a pair of graphs with matching rooted decks.
    Diagnose(DiagnoseArgs),
    /// Assemble, enumerate, fingerprint, or search for counterexamples.
    Reconstruct(ReconstructArgs),
    /// Entropy profile at (n, p), or the ratio crossover for n.
    Entropy(EntropyArgs),
    /// Run a TOML-configured grid and write a CSV matrix.
    Sweep(SweepArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct SampleArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct DeckArgs {
    pub graph: PathBuf,
    #[arg(long, default_value = "unlabeled")]
    pub mode: DeckMode,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct AuditArgs {
    pub graph: PathBuf,
    #[arg(long)]
    pub p: f64,
    /// Random sets per vertex (or per event) for the sampled events.
    #[arg(long, default_value_t = 16)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Multiplies every allowed deviation.
    #[arg(long, default_value_t = 1.0)]
    pub slack_scale: f64,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct DiagnoseArgs {
    pub gamma: PathBuf,
    pub gamma_tilde: PathBuf,
    /// Lines `center source target`, 1-based.
    #[arg(long)]
    pub hints: Option<PathBuf>,
    /// The second graph is the first relabeled by this permutation (1-based
    /// images); the family is induced by it.
    #[arg(long, conflicts_with = "hints")]
    pub sigma: Option<PathBuf>,
    /// Edge probability; the edge density of the first graph when omitted.
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.1")]
    pub epsilon: Vec<f64>,
    /// 1-based vertices whose bootstrap sets are reported.
    #[arg(long, value_delimiter = ',')]
    pub bootstrap: Vec<usize>,
    /// Vertex whose focus multigraph is reported (1-based).
    #[arg(long)]
    pub focus_vertex: Option<usize>,
    /// Minimum `|M_z(i)|` for membership in `J_z`.
    #[arg(long, default_value_t = 0.0)]
    pub jz_threshold: f64,
    #[arg(long)]
    pub include_pi: bool,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Assembly,
    Enumeration,
    Fingerprint,
    Search,
}

#[derive(Args, Debug, Serialize)]
pub struct ReconstructArgs {
    /// Edge-list input.
    #[arg(required_unless_present_any = ["deck", "n"])]
    pub graph: Option<PathBuf>,
    /// Deck file input instead of a graph.
    #[arg(long, conflicts_with = "graph")]
    pub deck: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "assembly")]
    pub method: Method,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Fingerprint: classify one pair `i,j` (1-based).
    #[arg(long, value_delimiter = ',')]
    pub pair: Option<Vec<usize>>,
    /// Search: sample size, probability, trials and seed.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Directory for solution or counterexample edge lists.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct EntropyArgs {
    #[arg(long)]
    pub n: u64,
    /// Omit to locate the crossover instead.
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct SweepArgs {
    pub config: PathBuf,
    /// CSV output; overrides `output` in the config.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// Exit with status 3 when any cell ran out of budget.
    #[arg(long)]
    pub strict: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Sample(a) => commands::sample(a),
        Command::Deck(a) => commands::deck(a),
        Command::Audit(a) => commands::audit(a),
        Command::Diagnose(a) => commands::diagnose(a),
        Command::Reconstruct(a) => commands::reconstruct(a),
        Command::Entropy(a) => commands::entropy(a),
        Command::Sweep(a) => sweep::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error());
            ExitCode::from(f.code())
        }
    }
}
