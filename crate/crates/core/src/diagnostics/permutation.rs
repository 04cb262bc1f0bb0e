//! Plurality-vote permutation, the matched-incidence count and the
//! mismatch set `W`.

use rayon::prelude::*;
use serde::Serialize;

use super::family::IsoFamily;
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Vote {
    /// Plurality image `π'(z)`; `None` for isolated vertices.
    pub plurality: Option<usize>,
    /// Votes for the plurality image.
    pub votes: usize,
    /// Voters, i.e. `deg(z)`.
    pub voters: usize,
}

impl Vote {
    pub fn share(&self) -> f64 {
        if self.voters == 0 {
            0.0
        } else {
            self.votes as f64 / self.voters as f64
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VoteResult {
    /// The completed permutation, 0-based.
    pub pi: Vec<usize>,
    pub votes: Vec<Vote>,
    /// Vertices whose vote was kept (the maximal injective set).
    pub injective: Vec<usize>,
}

impl VoteResult {
    pub fn is_identity(&self) -> bool {
        self.pi.iter().enumerate().all(|(z, &x)| x == z)
    }

    pub fn moved(&self) -> usize {
        self.pi.iter().enumerate().filter(|&(z, &x)| x != z).count()
    }
}

/// `π'(z)` is the most common `f_i(z)` over neighbors `i` of `z`, ties to
/// the smallest label. Keeping votes greedily in ascending `z` gives a
/// maximal injective set; the remaining sources take the remaining targets
/// in ascending order.
pub fn vote_permutation(gamma: &Graph, family: &IsoFamily) -> VoteResult {
    let n = gamma.n();
    let votes: Vec<Vote> = (0..n)
        .into_par_iter()
        .map(|z| {
            let mut images: Vec<usize> = gamma
                .neighbors(z)
                .filter_map(|i| family.apply(i, z))
                .collect();
            images.sort_unstable();
            let mut best: Option<(usize, usize)> = None;
            for run in images.chunk_by(|a, b| a == b) {
                if best.is_none_or(|(_, c)| run.len() > c) {
                    best = Some((run[0], run.len()));
                }
            }
            Vote {
                plurality: best.map(|b| b.0),
                votes: best.map_or(0, |b| b.1),
                voters: gamma.degree(z),
            }
        })
        .collect();

    let mut pi = vec![usize::MAX; n];
    let mut taken = vec![false; n];
    let mut injective = Vec::new();
    for (z, v) in votes.iter().enumerate() {
        if let Some(t) = v.plurality {
            if !taken[t] {
                taken[t] = true;
                pi[z] = t;
                injective.push(z);
            }
        }
    }
    let mut free = (0..n).filter(|&t| !taken[t]);
    for slot in pi.iter_mut().filter(|s| **s == usize::MAX) {
        *slot = free.next().expect("as many free targets as free sources");
    }
    VoteResult {
        pi,
        votes,
        injective,
    }
}

/// Number of `z` with `|{i ~ z : f_i(z) = π(z)}| >= (1-ε) np`.
pub fn e2_supported(gamma: &Graph, family: &IsoFamily, pi: &[usize], p: f64, epsilon: f64) -> usize {
    let need = (1.0 - epsilon) * gamma.n() as f64 * p;
    (0..gamma.n())
        .into_par_iter()
        .filter(|&z| {
            let hits = gamma
                .neighbors(z)
                .filter(|&i| family.apply(i, z) == Some(pi[z]))
                .count();
            hits as f64 >= need
        })
        .count()
}

/// The second event, evaluated at one given `π` (a witness, so `true` is
/// conclusive and `false` is not).
pub fn e2_holds(gamma: &Graph, family: &IsoFamily, pi: &[usize], p: f64, epsilon: f64) -> bool {
    e2_supported(gamma, family, pi, p, epsilon) as f64 >= (1.0 - epsilon) * gamma.n() as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct E3 {
    /// `Σ_i |{z ~ i : f_i(z) = z}|`.
    pub matched: u64,
    pub n: usize,
    pub p: f64,
}

impl E3 {
    pub fn holds(&self, epsilon: f64) -> bool {
        self.matched as f64 >= (1.0 - epsilon) * (self.n as f64).powi(2) * self.p
    }
}

pub fn e3_margin(gamma: &Graph, family: &IsoFamily, p: f64) -> E3 {
    let matched = (0..gamma.n())
        .into_par_iter()
        .map(|i| {
            gamma
                .neighbors(i)
                .filter(|&z| family.apply(i, z) == Some(z))
                .count() as u64
        })
        .sum();
    E3 {
        matched,
        n: gamma.n(),
        p,
    }
}

/// Ordered edges `(v, w)` with `f_v(w) = π(w) != w`, sorted.
pub fn mismatch_w(gamma: &Graph, family: &IsoFamily, pi: &[usize]) -> Vec<(usize, usize)> {
    (0..gamma.n())
        .into_par_iter()
        .flat_map_iter(|v| {
            gamma
                .neighbors(v)
                .filter(move |&w| pi[w] != w && family.apply(v, w) == Some(pi[w]))
                .map(move |w| (v, w))
        })
        .collect()
}
