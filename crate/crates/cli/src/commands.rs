use std::path::Path;

use anyhow::Context;
use serde::Serialize;
use shotgun_core::diagnostics::{self, DiagnosticsOptions, DiagnosticsReport, FocusMultigraph, IsoFamily};
use shotgun_core::entropy::{self, EntropyProfile};
use shotgun_core::io::{self, format_edge_list};
use shotgun_core::reconstruct::{self, enumeration, AdjacencyVerdict, FingerprintIndex, OracleMode};
use shotgun_core::typicality::{self, AuditParams};
use shotgun_core::{
    canonical_code, extract_deck, CanonicalCode, Deck, DeckMode, Graph, RngSeed,
};

use crate::report::{core, emit, envelope, read, CmdResult, Failure};
use crate::{AuditArgs, DeckArgs, DiagnoseArgs, EntropyArgs, Method, ReconstructArgs, SampleArgs};

pub fn read_graph(path: &Path) -> CmdResult<Graph> {
    read(io::read_edge_list(path), path)
}

fn read_text(path: &Path) -> CmdResult<String> {
    read(std::fs::read_to_string(path).map_err(Into::into), path)
}

fn write_graph(path: &Path, g: &Graph) -> CmdResult {
    io::write_edge_list(path, g)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(Failure::Other)
}

pub fn sample(a: &SampleArgs) -> CmdResult {
    let g = core(Graph::sample_gnp(a.n, a.p, RngSeed(a.seed)))?;
    emit(a.out.as_deref(), &format_edge_list(&g))
}

pub fn deck(a: &DeckArgs) -> CmdResult {
    let g = read_graph(&a.graph)?;
    let d = core(extract_deck(&g, a.mode))?;
    emit(a.out.as_deref(), &d.to_text())
}

pub fn audit(a: &AuditArgs) -> CmdResult {
    let g = read_graph(&a.graph)?;
    if !(0.0..=1.0).contains(&a.p) {
        return Err(Failure::usage(format!("p = {} is outside [0, 1]", a.p)));
    }
    let params = AuditParams {
        p: a.p,
        trials: a.trials,
        seed: RngSeed(a.seed),
        slack_scale: a.slack_scale,
    };
    let report = typicality::audit_all(&g, &params);
    emit(a.out.as_deref(), &envelope("audit", a, &report)?)
}

#[derive(Serialize)]
struct EpsilonEntry {
    report: DiagnosticsReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    focus_multigraph: Option<FocusMultigraph>,
}

#[derive(Serialize)]
struct SigmaRecovery {
    /// Vertices where the voted permutation equals the relabeling.
    agree: usize,
    /// Vertices with a strict-majority vote.
    majority: usize,
    /// Strict-majority vertices where they agree.
    majority_agree: usize,
}

#[derive(Serialize)]
struct DiagnoseResult {
    n: usize,
    p: f64,
    p_estimated: bool,
    family_verified: bool,
    entries: Vec<EpsilonEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sigma_recovery: Option<SigmaRecovery>,
}

fn one_based(v: usize, n: usize, what: &str) -> CmdResult<usize> {
    if v == 0 || v > n {
        return Err(Failure::usage(format!("{what} {v} is outside 1..={n}")));
    }
    Ok(v - 1)
}

pub fn diagnose(a: &DiagnoseArgs) -> CmdResult {
    let g = read_graph(&a.gamma)?;
    let h = read_graph(&a.gamma_tilde)?;
    let n = g.n();
    if h.n() != n {
        return Err(Failure::Other(anyhow::anyhow!(
            "graphs have different vertex counts ({n} vs {})",
            h.n()
        )));
    }
    let sigma = match &a.sigma {
        Some(path) => Some(read(io::parse_permutation(&read_text(path)?, n), path)?),
        None => None,
    };
    let family = match &sigma {
        Some(s) => core(IsoFamily::from_relabeling(&g, s))?,
        None => {
            let hints = match &a.hints {
                Some(path) => Some(read(io::read_hints(path, n), path)?),
                None => None,
            };
            core(IsoFamily::build(&g, &h, hints.as_ref()))?
        }
    };
    let family_verified = family.verify(&g, &h);
    if !family_verified {
        return Err(Failure::Other(anyhow::anyhow!(
            "the relabeling does not carry the first graph onto the second"
        )));
    }
    let (p, p_estimated) = match a.p {
        Some(p) => (p, false),
        None if n < 2 => (0.0, true),
        None => (2.0 * g.edge_count() as f64 / (n * (n - 1)) as f64, true),
    };
    let opts = DiagnosticsOptions {
        bootstrap_for: a
            .bootstrap
            .iter()
            .map(|&v| one_based(v, n, "bootstrap vertex"))
            .collect::<CmdResult<_>>()?,
        include_pi: a.include_pi,
    };
    let z = a
        .focus_vertex
        .map(|v| one_based(v, n, "focus vertex"))
        .transpose()?;
    for &e in &a.epsilon {
        if !(e > 0.0 && e <= 1.0) {
            return Err(Failure::usage(format!("epsilon {e} is outside (0, 1]")));
        }
    }
    let entries = a
        .epsilon
        .iter()
        .map(|&eps| EpsilonEntry {
            report: diagnostics::run(&g, &family, p, eps, &opts),
            focus_multigraph: z.map(|z| {
                let mut m = diagnostics::focus_multigraph(&g, &family, p, eps, z, a.jz_threshold);
                m.z += 1;
                m.j_z.iter_mut().for_each(|x| *x += 1);
                m
            }),
        })
        .collect();
    let sigma_recovery = sigma.map(|s| {
        let vote = diagnostics::vote_permutation(&g, &family);
        let majority: Vec<usize> = (0..n).filter(|&z| vote.votes[z].share() > 0.5).collect();
        SigmaRecovery {
            agree: (0..n).filter(|&z| vote.pi[z] == s[z]).count(),
            majority: majority.len(),
            majority_agree: majority.iter().filter(|&&z| vote.pi[z] == s[z]).count(),
        }
    });
    let result = DiagnoseResult {
        n,
        p,
        p_estimated,
        family_verified,
        entries,
        sigma_recovery,
    };
    emit(a.out.as_deref(), &envelope("diagnose", a, &result)?)
}

#[derive(Serialize)]
struct AssemblyOut {
    n: usize,
    exhausted: bool,
    nodes_explored: u64,
    solutions: Vec<CanonicalCode>,
    /// Graph input only: whether every solution is isomorphic to it.
    #[serde(skip_serializing_if = "Option::is_none")]
    reconstructable: Option<bool>,
}

#[derive(Serialize)]
struct EnumerationOut {
    n: usize,
    reconstructable: bool,
    /// Classes sharing the graph's deck, the graph's own included.
    classes: Vec<CanonicalCode>,
}

#[derive(Serialize)]
struct FingerprintOut {
    n: usize,
    adjacent: u64,
    non_adjacent: u64,
    undecided: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pair: Option<AdjacencyVerdict>,
    /// Graph input only.
    #[serde(skip_serializing_if = "Option::is_none")]
    score: Option<reconstruct::ClassifierScore>,
}

fn input_deck(a: &ReconstructArgs, mode: DeckMode) -> CmdResult<(Deck, Option<Graph>)> {
    if let Some(path) = &a.deck {
        let d = read(Deck::read(path), path)?;
        return Ok((d, None));
    }
    let path = a
        .graph
        .as_ref()
        .ok_or_else(|| Failure::usage("a graph or --deck is required"))?;
    let g = read_graph(path)?;
    Ok((core(extract_deck(&g, mode))?, Some(g)))
}

pub fn reconstruct(a: &ReconstructArgs) -> CmdResult {
    let text = match a.method {
        Method::Assembly => {
            let (deck, g) = input_deck(a, DeckMode::Unlabeled)?;
            let r = core(reconstruct::exact_assembly(&deck, a.budget))?;
            if let Some(dir) = &a.out_dir {
                std::fs::create_dir_all(dir).context("creating output directory")?;
                for (k, s) in r.solutions.iter().enumerate() {
                    write_graph(&dir.join(format!("solution_{}.txt", k + 1)), s)?;
                }
            }
            let reconstructable = match &g {
                Some(g) => Some(r.exhausted && r.codes == [core(canonical_code(g))?]),
                None => None,
            };
            let out = AssemblyOut {
                n: deck.n(),
                exhausted: r.exhausted,
                nodes_explored: r.nodes_explored,
                solutions: r.codes,
                reconstructable,
            };
            envelope("reconstruct", a, &out)?
        }
        Method::Enumeration => {
            let path = a
                .graph
                .as_ref()
                .ok_or_else(|| Failure::usage("enumeration needs a graph file"))?;
            let g = read_graph(path)?;
            let ok = core(reconstruct::is_reconstructable_bruteforce(&g, OracleMode::Enumeration, 1))?;
            let deck = core(extract_deck(&g, DeckMode::Unlabeled))?;
            let out = EnumerationOut {
                n: g.n(),
                reconstructable: ok,
                classes: enumeration(g.n()).by_deck[&deck].clone(),
            };
            envelope("reconstruct", a, &out)?
        }
        Method::Fingerprint => {
            let (deck, g) = input_deck(a, DeckMode::RootedLabeled)?;
            let index = core(FingerprintIndex::new(&deck))?;
            let n = index.n();
            let mut out = FingerprintOut {
                n,
                adjacent: 0,
                non_adjacent: 0,
                undecided: 0,
                pair: None,
                score: g.as_ref().map(|g| reconstruct::score_against(&index, g)),
            };
            for i in 0..n {
                for j in i + 1..n {
                    match index.classify(i, j).verdict {
                        reconstruct::Verdict::Adjacent => out.adjacent += 1,
                        reconstruct::Verdict::NonAdjacent => out.non_adjacent += 1,
                        reconstruct::Verdict::Undecided => out.undecided += 1,
                    }
                }
            }
            if let Some(pair) = &a.pair {
                if pair.len() != 2 {
                    return Err(Failure::usage("--pair takes exactly two vertices, as i,j"));
                }
                let (i, j) = (one_based(pair[0], n, "vertex")?, one_based(pair[1], n, "vertex")?);
                let mut v = index.classify(i, j);
                v.pair = (v.pair.0 + 1, v.pair.1 + 1);
                out.pair = Some(v);
            }
            envelope("reconstruct", a, &out)?
        }
        Method::Search => {
            let report = match &a.graph {
                Some(path) => {
                    let g = read_graph(path)?;
                    let (hit, exhausted) = core(reconstruct::counterexample_for(&g, a.budget))?;
                    reconstruct::SearchReport {
                        n: g.n(),
                        p: f64::NAN,
                        trials: 1,
                        seed: RngSeed(a.seed),
                        budget: a.budget,
                        incomplete: u64::from(!exhausted),
                        hits: hit.into_iter().collect(),
                    }
                }
                None => {
                    let (n, p) = match (a.n, a.p) {
                        (Some(n), Some(p)) => (n, p),
                        _ => return Err(Failure::usage("search needs a graph or both --n and --p")),
                    };
                    if a.trials == 0 {
                        return Err(Failure::usage("--trials must be at least 1"));
                    }
                    core(reconstruct::counterexample_search(n, p, a.trials, RngSeed(a.seed), a.budget))?
                }
            };
            if let Some(dir) = &a.out_dir {
                std::fs::create_dir_all(dir).context("creating output directory")?;
                for (k, h) in report.hits.iter().enumerate() {
                    write_graph(&dir.join(format!("pair_{}_a.txt", k + 1)), &h.graph)?;
                    write_graph(&dir.join(format!("pair_{}_b.txt", k + 1)), &h.other)?;
                }
            }
            envelope("reconstruct", a, &report)?
        }
    };
    emit(a.out.as_deref(), &text)
}

#[derive(Serialize)]
struct EntropyOut {
    #[serde(skip_serializing_if = "Option::is_none")]
    crossover_p: Option<f64>,
    profile: EntropyProfile,
    caveat: &'static str,
}

const CARD_CAVEAT: &str = "card entropy is an upper bound, so the crossover is an upper-envelope estimate";

pub fn entropy(a: &EntropyArgs) -> CmdResult {
    let (crossover_p, p) = match a.p {
        Some(p) => (None, p),
        None => {
            let c = core(entropy::crossover_p(a.n))?;
            (Some(c), c)
        }
    };
    let out = EntropyOut {
        crossover_p,
        profile: core(EntropyProfile::new(a.n, p))?,
        caveat: CARD_CAVEAT,
    };
    emit(a.out.as_deref(), &envelope("entropy", a, &out)?)
}
