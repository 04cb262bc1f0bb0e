//! Cards, decks and deck comparison.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{rooted_code, CanonicalCode};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Rooted code of one vertex's 1-neighborhood.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Card {
    pub code: CanonicalCode,
    pub size: usize,
}

impl Card {
    pub fn of_vertex(g: &Graph, v: usize) -> Result<Card> {
        let nb = g.neighborhood(v, 1)?;
        Ok(Card {
            code: rooted_code(&nb.graph, nb.root)?,
            size: nb.graph.n(),
        })
    }

    pub fn from_code(code: CanonicalCode) -> Card {
        let size = code.n();
        Card { code, size }
    }

    /// Canonical representative, root at vertex 0.
    pub fn graph(&self) -> Graph {
        self.code.to_graph()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeckMode {
    /// Multiset of cards; center identities forgotten.
    Unlabeled,
    /// Card `i` is the neighborhood of vertex `i`.
    RootedLabeled,
}

impl DeckMode {
    pub fn as_str(self) -> &'static str {
        match self {
            DeckMode::Unlabeled => "unlabeled",
            DeckMode::RootedLabeled => "rooted-labeled",
        }
    }
}

impl fmt::Display for DeckMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DeckMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unlabeled" => Ok(DeckMode::Unlabeled),
            "rooted-labeled" => Ok(DeckMode::RootedLabeled),
            other => Err(Error::InvalidParameter(format!(
                "unknown deck mode {other:?} (expected unlabeled or rooted-labeled)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Deck {
    mode: DeckMode,
    cards: Vec<Card>,
}

impl Deck {
    /// Unlabeled decks are kept sorted so that equality is plain equality.
    pub fn new(mode: DeckMode, mut cards: Vec<Card>) -> Deck {
        if mode == DeckMode::Unlabeled {
            cards.sort();
        }
        Deck { mode, cards }
    }

    pub fn mode(&self) -> DeckMode {
        self.mode
    }

    pub fn cards(&self) -> &[Card] {
        &self.cards
    }

    pub fn n(&self) -> usize {
        self.cards.len()
    }

    pub fn to_unlabeled(&self) -> Deck {
        Deck::new(DeckMode::Unlabeled, self.cards.clone())
    }

    /// `n mode` line, then one hex code per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n(), self.mode);
        for c in &self.cards {
            s.push_str(&c.code.to_hex());
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Deck> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing \"n mode\" header".into(),
        })?;
        let mut parts = header.split_whitespace();
        let bad_header = || Error::Parse {
            line: hl,
            msg: format!("bad deck header {header:?}"),
        };
        let n: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(bad_header)?;
        let mode: DeckMode = parts
            .next()
            .ok_or_else(bad_header)?
            .parse()
            .map_err(|_| bad_header())?;
        let cards = lines
            .map(|(k, l)| {
                l.parse::<CanonicalCode>()
                    .map(Card::from_code)
                    .map_err(|e| Error::Parse {
                        line: k,
                        msg: e.to_string(),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        if cards.len() != n {
            return Err(Error::Parse {
                line: hl,
                msg: format!("header announces {n} cards, found {}", cards.len()),
            });
        }
        if let Some(c) = cards.iter().find(|c| c.size == 0) {
            return Err(Error::Parse {
                line: hl,
                msg: format!("empty card {}", c.code),
            });
        }
        Ok(Deck::new(mode, cards))
    }

    pub fn read(path: &Path) -> Result<Deck> {
        Deck::from_text(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

pub fn extract_deck(g: &Graph, mode: DeckMode) -> Result<Deck> {
    let cards = (0..g.n())
        .into_par_iter()
        .map(|v| Card::of_vertex(g, v))
        .collect::<Result<Vec<_>>>()?;
    Ok(Deck::new(mode, cards))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeckComparison {
    pub equal: bool,
    /// First position where the (sorted, for unlabeled decks) card lists
    /// differ. For rooted-labeled decks this is the 0-based center.
    pub first_mismatch: Option<usize>,
}

pub fn decks_equal(a: &Deck, b: &Deck) -> Result<DeckComparison> {
    if a.mode != b.mode {
        return Err(Error::DeckModeMismatch {
            left: a.mode.as_str(),
            right: b.mode.as_str(),
        });
    }
    if a.n() != b.n() {
        return Err(Error::SizeMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    let first_mismatch = a.cards.iter().zip(&b.cards).position(|(x, y)| x != y);
    Ok(DeckComparison {
        equal: first_mismatch.is_none(),
        first_mismatch,
    })
}

/// First edge `(i, j)`, scanning `i` then `j` ascending, such that every
/// vertex of `N(i)` other than `i` and `j` is adjacent to `j`; `None` when
/// there is no such edge. When `None`, each card's root is its only vertex
/// adjacent to all others.
pub fn center_identifiable(g: &Graph) -> Option<(usize, usize)> {
    for i in 0..g.n() {
        for j in g.neighbors(i) {
            let mut rest = g.neighbor_set(i);
            rest.remove(j);
            let spare = rest.len() - rest.intersection_len(&g.neighbor_set(j));
            if spare == 0 {
                return Some((i, j));
            }
        }
    }
    None
}

/// Vertex adjacent to every other vertex, if there is exactly one. On a card
/// with its root forgotten this recovers the root whenever the graph passes
/// [`center_identifiable`].
pub fn unique_universal_vertex(card: &Graph) -> Option<usize> {
    let n = card.n();
    let mut found = None;
    for v in 0..n {
        if card.degree(v) + 1 == n {
            if found.is_some() {
                return None;
            }
            found = Some(v);
        }
    }
    found
}
