//! Adjacency from fingerprints: the induced graph on the common neighbors of
//! an edge's endpoints shows up in both endpoints' cards.
//!
//! For a code `f`, let `H_f` be the graph of edges whose fingerprint is `f`.
//! The deck tells, for every card `i`, how many neighbors `m_i(f)` carry
//! fingerprint `f`, i.e. the degree of `i` in `H_f`. Two rules follow and
//! both are sound:
//!
//! * cards sharing no fingerprint are not adjacent;
//! * if `m_i(f)` equals the number of other cards carrying `f`, then `i` is
//!   adjacent to each of them.
//!
//! Anything else is undecided.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::canon::{canonical_code, CanonicalCode};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::shotgun::{Deck, DeckMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Adjacent,
    NonAdjacent,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjacencyVerdict {
    pub pair: (usize, usize),
    pub verdict: Verdict,
    /// The fingerprint that settled an adjacent verdict.
    pub evidence: Option<CanonicalCode>,
}

pub struct FingerprintIndex {
    codes: Vec<CanonicalCode>,
    /// Per card: `(code id, multiplicity)`, sorted by id.
    cards: Vec<Vec<(u32, u32)>>,
    /// Per code id: number of cards carrying it.
    carriers: Vec<u32>,
}

/// Fingerprints of the non-root vertices of one card (root at vertex 0).
pub fn card_fingerprints(card: &Graph) -> Vec<CanonicalCode> {
    (1..card.n())
        .map(|x| {
            let common: Vec<usize> = card.neighbors(x).filter(|&y| y != 0).collect();
            canonical_code(&card.induced(&common)).expect("card within size limit")
        })
        .collect()
}

impl FingerprintIndex {
    pub fn new(deck: &Deck) -> Result<FingerprintIndex> {
        if deck.mode() != DeckMode::RootedLabeled {
            return Err(Error::DeckModeMismatch {
                left: deck.mode().as_str(),
                right: DeckMode::RootedLabeled.as_str(),
            });
        }
        let per_card: Vec<Vec<CanonicalCode>> = deck
            .cards()
            .par_iter()
            .map(|c| card_fingerprints(&c.graph()))
            .collect();
        let mut ids: HashMap<CanonicalCode, u32> = HashMap::new();
        let mut codes = Vec::new();
        let mut carriers: Vec<u32> = Vec::new();
        let mut cards = Vec::with_capacity(per_card.len());
        for fps in per_card {
            let mut local: Vec<u32> = fps
                .into_iter()
                .map(|f| {
                    *ids.entry(f.clone()).or_insert_with(|| {
                        codes.push(f);
                        carriers.push(0);
                        (codes.len() - 1) as u32
                    })
                })
                .collect();
            local.sort_unstable();
            let mut counted: Vec<(u32, u32)> = Vec::new();
            for id in local {
                match counted.last_mut() {
                    Some((last, c)) if *last == id => *c += 1,
                    _ => counted.push((id, 1)),
                }
            }
            for &(id, _) in &counted {
                carriers[id as usize] += 1;
            }
            cards.push(counted);
        }
        Ok(FingerprintIndex {
            codes,
            cards,
            carriers,
        })
    }

    pub fn n(&self) -> usize {
        self.cards.len()
    }

    pub fn classify(&self, i: usize, j: usize) -> AdjacencyVerdict {
        let pair = (i.min(j), i.max(j));
        let verdict = |verdict, evidence| AdjacencyVerdict {
            pair,
            verdict,
            evidence,
        };
        if i == j {
            return verdict(Verdict::Undecided, None);
        }
        let (a, b) = (&self.cards[i], &self.cards[j]);
        let (mut x, mut y) = (0, 0);
        let mut shared = false;
        while x < a.len() && y < b.len() {
            match a[x].0.cmp(&b[y].0) {
                std::cmp::Ordering::Less => x += 1,
                std::cmp::Ordering::Greater => y += 1,
                std::cmp::Ordering::Equal => {
                    shared = true;
                    let others = self.carriers[a[x].0 as usize] - 1;
                    if a[x].1 == others || b[y].1 == others {
                        return verdict(
                            Verdict::Adjacent,
                            Some(self.codes[a[x].0 as usize].clone()),
                        );
                    }
                    x += 1;
                    y += 1;
                }
            }
        }
        if shared {
            verdict(Verdict::Undecided, None)
        } else {
            verdict(Verdict::NonAdjacent, None)
        }
    }
}

pub fn fingerprint_classify(deck: &Deck, i: usize, j: usize) -> Result<AdjacencyVerdict> {
    for v in [i, j] {
        if v >= deck.n() {
            return Err(Error::VertexOutOfRange {
                vertex: v + 1,
                n: deck.n(),
            });
        }
    }
    Ok(FingerprintIndex::new(deck)?.classify(i, j))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct ClassifierScore {
    pub pairs: u64,
    pub decided: u64,
    pub correct: u64,
    /// Correct over decided; 1 when nothing was decided.
    pub accuracy: f64,
    pub undecided_rate: f64,
}

/// Classify every pair and score against a known graph. The classifier
/// itself only sees the index.
pub fn score_against(index: &FingerprintIndex, truth: &Graph) -> ClassifierScore {
    let n = index.n();
    let (decided, correct) = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut d = 0u64;
            let mut c = 0u64;
            for j in i + 1..n {
                let v = index.classify(i, j).verdict;
                if v != Verdict::Undecided {
                    d += 1;
                    if (v == Verdict::Adjacent) == truth.has_edge(i, j) {
                        c += 1;
                    }
                }
            }
            (d, c)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let pairs = (n * n.saturating_sub(1) / 2) as u64;
    ClassifierScore {
        pairs,
        decided,
        correct,
        accuracy: if decided == 0 {
            1.0
        } else {
            correct as f64 / decided as f64
        },
        undecided_rate: if pairs == 0 {
            0.0
        } else {
            (pairs - decided) as f64 / pairs as f64
        },
    }
}
