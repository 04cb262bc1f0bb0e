//! Every labeled graph on up to seven vertices, grouped into isomorphism
//! classes and then into classes sharing an unlabeled deck.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::canon::{canonical_code, CanonicalCode};
use crate::graph::Graph;
use crate::shotgun::{extract_deck, Deck, DeckMode};

pub const MAX_ENUMERATION_N: usize = 7;

/// Graph whose edge `k` (row-major over `u < v`) is present iff bit `k` of
/// `mask` is set.
pub fn graph_from_mask(n: usize, mask: u32) -> Graph {
    let mut g = Graph::empty(n);
    let mut k = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> k & 1 == 1 {
                g.add_edge(u, v);
            }
            k += 1;
        }
    }
    g
}

pub struct Enumeration {
    pub n: usize,
    /// Isomorphism classes, sorted.
    pub classes: Vec<CanonicalCode>,
    /// Unlabeled deck to the classes that produce it.
    pub by_deck: BTreeMap<Deck, Vec<CanonicalCode>>,
}

impl Enumeration {
    fn build(n: usize) -> Enumeration {
        let pairs = n * n.saturating_sub(1) / 2;
        let mut classes: Vec<CanonicalCode> = (0..1u32 << pairs)
            .into_par_iter()
            .map(|m| canonical_code(&graph_from_mask(n, m)).expect("small graph"))
            .collect();
        classes.par_sort_unstable();
        classes.dedup();
        let decks: Vec<Deck> = classes
            .par_iter()
            .map(|c| extract_deck(&c.to_graph(), DeckMode::Unlabeled).expect("small graph"))
            .collect();
        let mut by_deck: BTreeMap<Deck, Vec<CanonicalCode>> = BTreeMap::new();
        for (d, c) in decks.into_iter().zip(&classes) {
            by_deck.entry(d).or_default().push(c.clone());
        }
        Enumeration {
            n,
            classes,
            by_deck,
        }
    }

    /// Groups of two or more non-isomorphic graphs with one deck.
    pub fn collisions(&self) -> impl Iterator<Item = &[CanonicalCode]> {
        self.by_deck.values().filter(|v| v.len() > 1).map(Vec::as_slice)
    }
}

/// Cached per `n`; `n` must be in `1..=7`.
pub fn enumeration(n: usize) -> &'static Enumeration {
    static CACHE: [OnceLock<Enumeration>; MAX_ENUMERATION_N + 1] =
        [const { OnceLock::new() }; MAX_ENUMERATION_N + 1];
    assert!((1..=MAX_ENUMERATION_N).contains(&n), "enumeration needs 1 <= n <= 7");
    CACHE[n].get_or_init(|| Enumeration::build(n))
}
