//! Matched ordered edges `𝓜`, the well-supported set `𝓥`, the split
//! `J_𝓜`, and the per-vertex bootstrap sets `I_v`, `E_v`.

use rayon::prelude::*;
use serde::Serialize;

use super::family::IsoFamily;
use crate::graph::Graph;
use crate::vertex_set::{and_count, VertexSet};

/// Violations kept verbatim in a partition; the count is always exact.
pub const MAX_LISTED_VIOLATIONS: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatchPartition {
    /// `|𝓟|`, the number of ordered edges.
    pub p_size: u64,
    pub m_size: u64,
    pub v_size: u64,
    /// `|𝓥 ∩ 𝓜^c|`.
    pub v_unmatched: u64,
    pub j_m: Vec<usize>,
    pub j_m_complement: Vec<usize>,
    /// `(v, w)` in `𝓥 ∩ 𝓜^c` whose partner `(f_v(w), f⁻¹_{f_v(w)}(v))` is
    /// also in `𝓥`.
    pub why_v_violations: u64,
    pub why_v_examples: Vec<((usize, usize), (usize, usize))>,
    #[serde(skip)]
    rows: Vec<VertexSet>,
    #[serde(skip)]
    v_threshold: f64,
}

impl MatchPartition {
    /// `{w : (v, w) ∈ 𝓜}`.
    pub fn m_row(&self, v: usize) -> &VertexSet {
        &self.rows[v]
    }

    pub fn in_m(&self, v: usize, w: usize) -> bool {
        self.rows[v].contains(w)
    }

    /// `|𝓥(v, w)| = |Mrow(v) ∩ N(w)|`.
    pub fn v_support(&self, gamma: &Graph, v: usize, w: usize) -> usize {
        and_count(self.rows[v].words(), gamma.row(w))
    }

    pub fn in_v(&self, gamma: &Graph, v: usize, w: usize) -> bool {
        gamma.has_edge(v, w) && self.v_support(gamma, v, w) as f64 >= self.v_threshold
    }

    /// `𝓜` as a sorted list of ordered pairs.
    pub fn m_pairs(&self) -> Vec<(usize, usize)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(v, r)| r.iter().map(move |w| (v, w)))
            .collect()
    }
}

pub fn match_partition(gamma: &Graph, family: &IsoFamily, p: f64) -> MatchPartition {
    let n = gamma.n();
    let np = n as f64 * p;
    let v_threshold = 0.6 * np * p;
    let rows: Vec<VertexSet> = (0..n)
        .into_par_iter()
        .map(|v| {
            VertexSet::from_iter_in(
                n,
                gamma.neighbors(v).filter(|&w| family.apply(v, w) == Some(w)),
            )
        })
        .collect();
    let mut part = MatchPartition {
        p_size: 2 * gamma.edge_count() as u64,
        m_size: rows.iter().map(|r| r.len() as u64).sum(),
        v_size: 0,
        v_unmatched: 0,
        j_m: Vec::new(),
        j_m_complement: Vec::new(),
        why_v_violations: 0,
        why_v_examples: Vec::new(),
        rows,
        v_threshold,
    };
    for v in 0..n {
        if (gamma.degree(v) - part.rows[v].len()) as f64 <= np / 10.0 {
            part.j_m.push(v);
        } else {
            part.j_m_complement.push(v);
        }
    }

    let per_v: Vec<(u64, u64, Vec<_>)> = (0..n)
        .into_par_iter()
        .map(|v| {
            let (mut good, mut unmatched) = (0u64, 0u64);
            let mut bad = Vec::new();
            for w in gamma.neighbors(v) {
                if !part.in_v(gamma, v, w) {
                    continue;
                }
                good += 1;
                if part.in_m(v, w) {
                    continue;
                }
                unmatched += 1;
                let Some(wt) = family.apply(v, w) else { continue };
                let Some(u) = family.map(wt).inverse().get(v) else { continue };
                if part.in_v(gamma, wt, u) {
                    bad.push(((v, w), (wt, u)));
                }
            }
            (good, unmatched, bad)
        })
        .collect();
    for (good, unmatched, bad) in per_v {
        part.v_size += good;
        part.v_unmatched += unmatched;
        part.why_v_violations += bad.len() as u64;
        let room = MAX_LISTED_VIOLATIONS - part.why_v_examples.len();
        part.why_v_examples.extend(bad.into_iter().take(room));
    }
    part
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bootstrap {
    pub v: usize,
    /// `w ~ v` with `f_v(w) != w` and `f_v(w) ∈ J_𝓜`.
    pub i_v: Vec<usize>,
    /// Edges of `Γ[I_v]` whose image under `f_v` is an edge of `Γ`.
    pub e_v: Vec<(usize, usize)>,
    /// `|E_v ∪ f_v(E_v)|`.
    pub union_size: usize,
    /// `|E_v ∪ f_v(E_v)| >= 3/2 |E_v|`; `None` when `E_v` is empty.
    pub growth_holds: Option<bool>,
}

pub fn bootstrap(gamma: &Graph, family: &IsoFamily, part: &MatchPartition, v: usize) -> Bootstrap {
    let n = gamma.n();
    let in_j = VertexSet::from_iter_in(n, part.j_m.iter().copied());
    let i_v: Vec<usize> = gamma
        .neighbors(v)
        .filter(|&w| match family.apply(v, w) {
            Some(t) => t != w && in_j.contains(t),
            None => false,
        })
        .collect();
    let mut e_v = Vec::new();
    let mut images = Vec::new();
    for (a, &w) in i_v.iter().enumerate() {
        for &x in &i_v[a + 1..] {
            if !gamma.has_edge(w, x) {
                continue;
            }
            let (Some(fw), Some(fx)) = (family.apply(v, w), family.apply(v, x)) else {
                continue;
            };
            if gamma.has_edge(fw, fx) {
                e_v.push((w, x));
                images.push((fw.min(fx), fw.max(fx)));
            }
        }
    }
    let mut union: Vec<(usize, usize)> = e_v.iter().copied().chain(images).collect();
    union.sort_unstable();
    union.dedup();
    let growth_holds = (!e_v.is_empty()).then(|| 2 * union.len() >= 3 * e_v.len());
    Bootstrap {
        v,
        i_v,
        union_size: union.len(),
        e_v,
        growth_holds,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn twin_pair_matched_edges() {
        let (a, b) = (fixtures::gamma(), fixtures::gamma_tilde());
        let f = IsoFamily::build(&a, &b, Some(&fixtures::hints())).unwrap();
        let part = match_partition(&a, &f, 0.3);
        assert_eq!((part.m_size, part.p_size), (12, 26));
        let one_based: Vec<_> = part.m_pairs().iter().map(|&(x, y)| (x + 1, y + 1)).collect();
        assert_eq!(
            one_based,
            vec![
                (2, 4), (2, 5), (4, 2), (4, 5), (5, 2), (5, 4),
                (6, 7), (6, 9), (7, 6), (7, 9), (9, 6), (9, 7)
            ]
        );
    }

    #[test]
    fn identity_partition() {
        let g = Graph::sample_gnp(60, 0.3, crate::RngSeed(4)).unwrap();
        let f = IsoFamily::identity(&g);
        let part = match_partition(&g, &f, 0.3);
        assert_eq!(part.m_size, part.p_size);
        assert!(part.j_m_complement.is_empty());
        assert_eq!(part.why_v_violations, 0);
        for v in 0..60 {
            let b = bootstrap(&g, &f, &part, v);
            assert!(b.i_v.is_empty() && b.growth_holds.is_none());
        }
    }

    #[test]
    fn bootstrap_recount_on_relabeling() {
        let g = Graph::sample_gnp(30, 0.5, crate::RngSeed(8)).unwrap();
        let sigma: Vec<usize> = (0..30).map(|v| if v < 10 { (v + 1) % 10 } else { v }).collect();
        let f = IsoFamily::from_relabeling(&g, &sigma).unwrap();
        let part = match_partition(&g, &f, 0.5);
        for v in 0..30 {
            let b = bootstrap(&g, &f, &part, v);
            for &w in &b.i_v {
                assert!(g.has_edge(v, w) && sigma[w] != w);
                assert!(part.j_m.contains(&sigma[w]));
            }
            for &(x, y) in &b.e_v {
                assert!(g.has_edge(x, y) && g.has_edge(sigma[x], sigma[y]));
            }
            assert!(b.union_size >= b.e_v.len());
        }
    }
}
