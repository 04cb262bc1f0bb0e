//! Grid sweeps: one CSV row per (n, p) cell.

use std::path::PathBuf;

use anyhow::{anyhow, Context};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use shotgun_core::entropy::EntropyProfile;
use shotgun_core::reconstruct::{
    self, FingerprintIndex, OracleMode, ASSEMBLY_ORACLE_MAX_N, DEFAULT_BUDGET, MAX_ENUMERATION_N,
};
use shotgun_core::rng::splitmix64_mix;
use shotgun_core::typicality::{self, AuditParams};
use shotgun_core::{extract_deck, DeckMode, Error, Graph, RngSeed};

use crate::report::{core, emit, read, CmdResult, Failure, VERSION};
use crate::SweepArgs;

const EVENTS: [&str; 7] = [
    "degree",
    "pair_codegree",
    "triple_codegree",
    "subgraph_edges",
    "expansion",
    "local_bijection",
    "cut_edges",
];

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub grid: Grid,
    #[serde(default)]
    pub run: Run,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub n: Vec<usize>,
    pub p: Vec<f64>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct Run {
    pub seeds: Vec<u64>,
    /// Graphs sampled per seed and cell.
    pub trials: u64,
    pub budget: u64,
    /// Random sets per vertex for the sampled audit events; 0 skips auditing.
    pub audit_trials: usize,
    pub output: Option<PathBuf>,
}

impl Default for Run {
    fn default() -> Self {
        Run {
            seeds: vec![0],
            trials: 8,
            budget: DEFAULT_BUDGET,
            audit_trials: 4,
            output: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum CellMethod {
    Enumeration,
    Assembly,
    Fingerprint,
}

impl CellMethod {
    fn for_n(n: usize) -> Self {
        if n <= MAX_ENUMERATION_N {
            CellMethod::Enumeration
        } else if n <= ASSEMBLY_ORACLE_MAX_N {
            CellMethod::Assembly
        } else {
            CellMethod::Fingerprint
        }
    }

    fn name(self) -> &'static str {
        match self {
            CellMethod::Enumeration => "enumeration",
            CellMethod::Assembly => "assembly",
            CellMethod::Fingerprint => "fingerprint",
        }
    }
}

#[derive(Debug, Serialize)]
struct Row {
    n: usize,
    p: f64,
    samples: u64,
    method: &'static str,
    /// Empty for fingerprint cells, which do not decide reconstructability.
    reconstructable_fraction: Option<f64>,
    incomplete: u64,
    /// Mean fraction of pairs the fingerprint rules decide.
    fingerprint_decided: f64,
    audit_degree: Option<f64>,
    audit_pair_codegree: Option<f64>,
    audit_triple_codegree: Option<f64>,
    audit_subgraph_edges: Option<f64>,
    audit_expansion: Option<f64>,
    audit_local_bijection: Option<f64>,
    audit_cut_edges: Option<f64>,
    entropy_ratio: f64,
    h_card_upper: f64,
    h_graph_unlabeled: f64,
}

pub fn load(path: &std::path::Path) -> CmdResult<Config> {
    let text = read(std::fs::read_to_string(path).map_err(Error::from), path)?;
    let cfg: Config = toml::from_str(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(Failure::Input)?;
    validate(&cfg)?;
    Ok(cfg)
}

fn validate(cfg: &Config) -> CmdResult {
    if cfg.grid.n.is_empty() || cfg.grid.p.is_empty() {
        return Err(Failure::usage("grid.n and grid.p must be non-empty"));
    }
    if let Some(&n) = cfg.grid.n.iter().find(|&&n| n < 2) {
        return Err(Failure::usage(format!("grid.n entry {n} is below 2")));
    }
    if let Some(p) = cfg.grid.p.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Failure::usage(format!("grid.p entry {p} is outside [0, 1]")));
    }
    if cfg.run.seeds.is_empty() || cfg.run.trials == 0 || cfg.run.budget == 0 {
        return Err(Failure::usage("run.seeds must be non-empty and run.trials, run.budget positive"));
    }
    Ok(())
}

/// Seed of sample `k` in cell (n, p); independent of the grid order.
fn sample_seed(base: u64, n: usize, p: f64, k: u64) -> RngSeed {
    let mut z = splitmix64_mix(base ^ 0x5357_4545_5000_0000);
    for x in [n as u64, p.to_bits(), k] {
        z = splitmix64_mix(z ^ x);
    }
    RngSeed(z)
}

fn cell(n: usize, p: f64, run: &Run) -> Result<Row, Error> {
    let method = CellMethod::for_n(n);
    let mut reconstructable = 0u64;
    let mut incomplete = 0u64;
    let mut decided = 0f64;
    let mut audit_pass = [0u64; 7];
    let draws = run.seeds.iter().flat_map(|&s| (0..run.trials).map(move |k| (s, k)));
    for (base, k) in draws {
        let seed = sample_seed(base, n, p, k);
        let g = Graph::sample_gnp(n, p, seed)?;
        match method {
            CellMethod::Enumeration => {
                reconstructable +=
                    u64::from(reconstruct::is_reconstructable_bruteforce(&g, OracleMode::Enumeration, 1)?);
            }
            CellMethod::Assembly => {
                match reconstruct::is_reconstructable_bruteforce(&g, OracleMode::Assembly, run.budget) {
                    Ok(ok) => reconstructable += u64::from(ok),
                    Err(Error::BudgetExhausted { .. }) => incomplete += 1,
                    Err(e) => return Err(e),
                }
            }
            CellMethod::Fingerprint => {}
        }
        let deck = extract_deck(&g, DeckMode::RootedLabeled)?;
        let score = reconstruct::score_against(&FingerprintIndex::new(&deck)?, &g);
        decided += 1.0 - score.undecided_rate;
        if run.audit_trials > 0 {
            let report = typicality::audit_all(&g, &AuditParams::new(p, run.audit_trials, seed));
            for (slot, name) in audit_pass.iter_mut().zip(EVENTS) {
                *slot += u64::from(report.event(name).is_some_and(|e| e.holds));
            }
        }
    }
    let total = run.seeds.len() as u64 * run.trials;
    let samples = total as f64;
    let audit = |i: usize| (run.audit_trials > 0).then(|| audit_pass[i] as f64 / samples);
    let complete = total - incomplete;
    let profile = EntropyProfile::new(n as u64, p)?;
    Ok(Row {
        n,
        p,
        samples: total,
        method: method.name(),
        reconstructable_fraction: (method != CellMethod::Fingerprint && complete > 0)
            .then(|| reconstructable as f64 / complete as f64),
        incomplete,
        fingerprint_decided: decided / samples,
        audit_degree: audit(0),
        audit_pair_codegree: audit(1),
        audit_triple_codegree: audit(2),
        audit_subgraph_edges: audit(3),
        audit_expansion: audit(4),
        audit_local_bijection: audit(5),
        audit_cut_edges: audit(6),
        entropy_ratio: profile.ratio,
        h_card_upper: profile.h_card_upper,
        h_graph_unlabeled: profile.h_graph_unlabeled,
    })
}

fn render(cfg: &Config, rows: &[Row]) -> CmdResult<String> {
    let mut out = format!("# shotgun {VERSION}\n");
    let config = serde_json::to_string(cfg).context("serializing config")?;
    out.push_str(&format!("# config: {config}\n"));
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).context("writing csv row")?;
    }
    let body = w.into_inner().map_err(|e| anyhow!("flushing csv: {e}"))?;
    out.push_str(std::str::from_utf8(&body).context("csv output is utf-8")?);
    Ok(out)
}

pub fn run(a: &SweepArgs) -> CmdResult {
    let cfg = load(&a.config)?;
    let cells: Vec<(usize, f64)> = cfg
        .grid
        .n
        .iter()
        .flat_map(|&n| cfg.grid.p.iter().map(move |&p| (n, p)))
        .collect();
    // Collected in grid order, so the file does not depend on scheduling.
    let rows = cells
        .par_iter()
        .map(|&(n, p)| cell(n, p, &cfg.run))
        .collect::<Result<Vec<_>, _>>();
    let rows = core(rows)?;
    let out = a.out.as_deref().or(cfg.run.output.as_deref());
    emit(out, &render(&cfg, &rows)?)?;
    let incomplete: u64 = rows.iter().map(|r| r.incomplete).sum();
    if a.strict && incomplete > 0 {
        return Err(Failure::Budget(anyhow!(
            "{incomplete} sample(s) ran out of assembly budget"
        )));
    }
    Ok(())
}
