//! Exact search for every graph whose unlabeled deck equals a given deck.
//!
//! Vertices are numbered by descending degree and their rows are filled one
//! at a time. A vertex's card is checked against the remaining multiset as
//! soon as every edge inside its closed neighborhood is decided. Vertices
//! that are still interchangeable (same degree, same adjacency to the rows
//! already filled) are always used lowest index first.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::canon::{canonical_code, rooted_code, CanonicalCode};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::shotgun::{decks_equal, extract_deck, Deck, DeckMode};

/// Rows are single words.
pub const MAX_ASSEMBLY_N: usize = 64;

#[derive(Clone, Debug, Serialize)]
pub struct AssemblyResult {
    /// One graph per isomorphism class, ordered by canonical code.
    #[serde(skip)]
    pub solutions: Vec<Graph>,
    pub codes: Vec<CanonicalCode>,
    /// The search finished; `false` means the budget ran out first.
    pub exhausted: bool,
    pub nodes_explored: u64,
}

struct Search {
    n: usize,
    deg: Vec<usize>,
    adj: Vec<u64>,
    remaining: BTreeMap<CanonicalCode, usize>,
    checked: Vec<bool>,
    found: BTreeMap<CanonicalCode, Graph>,
    nodes: u64,
    budget: u64,
}

impl Search {
    fn graph(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for u in 0..self.n {
            let mut row = self.adj[u] >> (u + 1);
            let mut v = u + 1;
            while row != 0 {
                let s = row.trailing_zeros() as usize;
                v += s;
                g.add_edge(u, v);
                row >>= s;
                row >>= 1;
                v += 1;
            }
        }
        g
    }

    fn card_code(&self, v: usize) -> CanonicalCode {
        let closed = self.adj[v] | (1 << v);
        let members: Vec<usize> = (0..self.n).filter(|&x| closed >> x & 1 == 1).collect();
        let mut edges = Vec::new();
        for (a, &x) in members.iter().enumerate() {
            for (b, &y) in members.iter().enumerate().skip(a + 1) {
                if self.adj[x] >> y & 1 == 1 {
                    edges.push((a, b));
                }
            }
        }
        let local = Graph::from_edges(members.len(), &edges).expect("local indices");
        let root = members.iter().position(|&x| x == v).expect("v in its own card");
        rooted_code(&local, root).expect("card within size limit")
    }

    /// Take the cards of the vertices whose closed neighborhood became fully
    /// decided once row `k` was filled. Returns the taken codes, or `None`
    /// (with nothing taken) if one is not available.
    fn take_cards(&mut self, k: usize) -> Option<Vec<(usize, CanonicalCode)>> {
        let mut taken: Vec<(usize, CanonicalCode)> = Vec::new();
        let above = if k + 1 >= 64 { 0 } else { !0u64 << (k + 1) };
        for v in 0..=k {
            if self.checked[v] || (self.adj[v] & above).count_ones() > 1 {
                continue;
            }
            let code = self.card_code(v);
            match self.remaining.get_mut(&code) {
                Some(c) if *c > 0 => {
                    *c -= 1;
                    self.checked[v] = true;
                    taken.push((v, code));
                }
                _ => {
                    self.give_back(taken);
                    return None;
                }
            }
        }
        Some(taken)
    }

    fn give_back(&mut self, taken: Vec<(usize, CanonicalCode)>) {
        for (v, code) in taken {
            *self.remaining.get_mut(&code).expect("taken from here") += 1;
            self.checked[v] = false;
        }
    }

    fn row(&mut self, k: usize) -> bool {
        if self.nodes >= self.budget {
            return false;
        }
        self.nodes += 1;
        if k == self.n {
            let g = self.graph();
            let code = canonical_code(&g).expect("within size limit");
            self.found.entry(code).or_insert(g);
            return true;
        }
        let lower = (1u64 << k) - 1;
        let have = (self.adj[k] & lower).count_ones() as usize;
        let Some(need) = self.deg[k].checked_sub(have) else {
            return true;
        };
        // Interchangeable classes among the later vertices with spare degree.
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut keys: Vec<(usize, u64)> = Vec::new();
        for j in k + 1..self.n {
            let used = (self.adj[j] & lower).count_ones() as usize;
            if used >= self.deg[j] {
                continue;
            }
            let key = (self.deg[j], self.adj[j] & lower);
            match keys.iter().position(|x| *x == key) {
                Some(c) => classes[c].push(j),
                None => {
                    keys.push(key);
                    classes.push(vec![j]);
                }
            }
        }
        let available: usize = classes.iter().map(Vec::len).sum();
        if need > available {
            return true;
        }
        let mut counts = vec![0usize; classes.len()];
        self.choose(k, need, 0, &classes, &mut counts)
    }

    /// Split `left` more neighbors of `k` over classes `c..`.
    fn choose(
        &mut self,
        k: usize,
        left: usize,
        c: usize,
        classes: &[Vec<usize>],
        counts: &mut Vec<usize>,
    ) -> bool {
        if c == classes.len() {
            if left > 0 {
                return true;
            }
            return self.commit(k, classes, counts);
        }
        let rest: usize = classes[c + 1..].iter().map(Vec::len).sum();
        let lo = left.saturating_sub(rest);
        let hi = left.min(classes[c].len());
        for take in (lo..=hi).rev() {
            counts[c] = take;
            if !self.choose(k, left - take, c + 1, classes, counts) {
                return false;
            }
        }
        counts[c] = 0;
        true
    }

    fn commit(&mut self, k: usize, classes: &[Vec<usize>], counts: &[usize]) -> bool {
        let chosen: Vec<usize> = classes
            .iter()
            .zip(counts)
            .flat_map(|(cl, &t)| cl[..t].iter().copied())
            .collect();
        for &j in &chosen {
            self.adj[k] |= 1 << j;
            self.adj[j] |= 1 << k;
        }
        let ok = match self.take_cards(k) {
            Some(taken) => {
                let go_on = self.row(k + 1);
                self.give_back(taken);
                go_on
            }
            None => true,
        };
        for &j in &chosen {
            self.adj[k] &= !(1 << j);
            self.adj[j] &= !(1 << k);
        }
        ok
    }
}

pub fn exact_assembly(deck: &Deck, budget: u64) -> Result<AssemblyResult> {
    let deck = deck.to_unlabeled();
    let n = deck.n();
    if n == 0 {
        return Err(Error::NoVertices);
    }
    if n > MAX_ASSEMBLY_N {
        return Err(Error::TooManyVertices {
            n,
            max: MAX_ASSEMBLY_N,
        });
    }
    if budget == 0 {
        return Err(Error::InvalidParameter("budget must be positive".into()));
    }
    let mut deg: Vec<usize> = deck.cards().iter().map(|c| c.size - 1).collect();
    deg.sort_unstable_by(|a, b| b.cmp(a));
    let mut remaining = BTreeMap::new();
    for c in deck.cards() {
        *remaining.entry(c.code.clone()).or_insert(0) += 1;
    }
    let mut s = Search {
        n,
        deg,
        adj: vec![0; n],
        remaining,
        checked: vec![false; n],
        found: BTreeMap::new(),
        nodes: 0,
        budget,
    };
    let exhausted = s.row(0);
    let (codes, solutions): (Vec<_>, Vec<_>) = s.found.into_iter().unzip();
    for g in &solutions {
        let again = extract_deck(g, DeckMode::Unlabeled)?;
        assert!(
            decks_equal(&again, &deck)?.equal,
            "assembled graph does not re-deck to the input"
        );
    }
    Ok(AssemblyResult {
        solutions,
        codes,
        exhausted,
        nodes_explored: s.nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn assemble(g: &Graph) -> AssemblyResult {
        exact_assembly(&extract_deck(g, DeckMode::Unlabeled).unwrap(), 10_000_000).unwrap()
    }

    #[test]
    fn triangle_and_edgeless_are_unique() {
        for g in [Graph::complete(3), Graph::empty(6), Graph::complete(1)] {
            let r = assemble(&g);
            assert!(r.exhausted);
            assert_eq!(r.codes, vec![canonical_code(&g).unwrap()]);
        }
    }

    #[test]
    fn hexagon_and_two_triangles_share_nothing() {
        let c6 = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        assert_eq!(assemble(&c6).codes.len(), 1);
    }

    #[test]
    fn twin_pair_deck_has_both_graphs() {
        let r = assemble(&fixtures::gamma());
        assert!(r.exhausted);
        let a = canonical_code(&fixtures::gamma()).unwrap();
        let b = canonical_code(&fixtures::gamma_tilde()).unwrap();
        assert!(r.codes.contains(&a) && r.codes.contains(&b));
    }

    #[test]
    fn budget_stops_the_search() {
        let r = exact_assembly(&extract_deck(&fixtures::gamma(), DeckMode::Unlabeled).unwrap(), 3)
            .unwrap();
        assert!(!r.exhausted);
        assert_eq!(r.nodes_explored, 3);
    }
}
