//! Search for pairs of non-isomorphic graphs with the same unlabeled deck.

use rand::RngCore;
use rayon::prelude::*;
use serde::Serialize;

use super::assembly::exact_assembly;
use crate::canon::CanonicalCode;
use crate::error::Result;
use crate::graph::Graph;
use crate::rng::{stream_rng, RngSeed};
use crate::shotgun::{extract_deck, DeckMode};

const TAG_TRIAL: u64 = 8;

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    /// Trial index; `None` for an injected graph.
    pub trial: Option<u64>,
    pub graph_seed: Option<u64>,
    #[serde(skip)]
    pub graph: Graph,
    /// A non-isomorphic graph with the same deck.
    #[serde(skip)]
    pub other: Graph,
    pub code: CanonicalCode,
    pub other_code: CanonicalCode,
    /// Isomorphism classes sharing the deck.
    pub classes: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub n: usize,
    pub p: f64,
    pub trials: u64,
    pub seed: RngSeed,
    pub budget: u64,
    /// Trials whose assembly ran out of budget.
    pub incomplete: u64,
    pub hits: Vec<Counterexample>,
}

/// Assemble `g`'s deck; if another class shares it, return the pair.
pub fn counterexample_for(g: &Graph, budget: u64) -> Result<(Option<Counterexample>, bool)> {
    let deck = extract_deck(g, DeckMode::Unlabeled)?;
    let r = exact_assembly(&deck, budget)?;
    let own = crate::canon::canonical_code(g)?;
    let hit = r
        .codes
        .iter()
        .zip(&r.solutions)
        .find(|(c, _)| **c != own)
        .map(|(c, h)| Counterexample {
            trial: None,
            graph_seed: None,
            graph: g.clone(),
            other: h.clone(),
            code: own.clone(),
            other_code: c.clone(),
            classes: r.codes.len(),
        });
    Ok((hit, r.exhausted))
}

pub fn counterexample_search(
    n: usize,
    p: f64,
    trials: u64,
    seed: RngSeed,
    budget: u64,
) -> Result<SearchReport> {
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|t| {
            let gs = stream_rng(seed, TAG_TRIAL, t).next_u64();
            let g = Graph::sample_gnp(n, p, RngSeed(gs))?;
            let (hit, exhausted) = counterexample_for(&g, budget)?;
            Ok((
                hit.map(|mut h| {
                    h.trial = Some(t);
                    h.graph_seed = Some(gs);
                    h
                }),
                exhausted,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = SearchReport {
        n,
        p,
        trials,
        seed,
        budget,
        incomplete: 0,
        hits: Vec::new(),
    };
    for (hit, exhausted) in outcomes {
        report.incomplete += u64::from(!exhausted);
        report.hits.extend(hit);
    }
    Ok(report)
}
