//! Simple undirected graphs on `0..n` with bitset adjacency rows.
//!
//! Vertices are 0-based everywhere inside the crate. The 1-based labels
//! `1..=n` only appear at the boundary: [`Graph::from_edge_list`], the
//! edge-list text format in [`crate::io`], and serialized reports.

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::pair_uniform;
pub use crate::rng::RngSeed;
use crate::vertex_set::{and_count, bits, words_for, Members, VertexSet};

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 1 << 20;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    stride: usize,
    rows: Vec<u64>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_VERTICES, "{n} vertices exceeds {MAX_VERTICES}");
        let stride = words_for(n);
        Graph {
            n,
            stride,
            rows: vec![0; n * stride],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// Build from 0-based pairs. Duplicates collapse.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices { n, max: MAX_VERTICES });
        }
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x + 1, n });
                }
            }
            if u == v {
                return Err(Error::Loop(u + 1));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Build from 1-based pairs with endpoints in `1..=n`.
    pub fn from_edge_list(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoVertices);
        }
        for &(u, v) in edges {
            for x in [u, v] {
                if x == 0 || x > n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
        }
        let zero: Vec<_> = edges.iter().map(|&(u, v)| (u - 1, v - 1)).collect();
        Self::from_edges(n, &zero)
    }

    /// Sample G(n, p). Pair `k` in row-major order over `u < v` is an edge iff
    /// the `k`-th SplitMix64 output for `seed` maps below `p`; see [`crate::rng`].
    pub fn sample_gnp(n: usize, p: f64, seed: RngSeed) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) || p.is_nan() {
            return Err(Error::InvalidProbability(p));
        }
        if n == 0 {
            return Err(Error::NoVertices);
        }
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices { n, max: MAX_VERTICES });
        }
        let stride = words_for(n);
        // Row u owns pairs (u, v > u); offset of the first pair in row u.
        let upper: Vec<Vec<u64>> = (0..n)
            .into_par_iter()
            .map(|u| {
                let mut row = vec![0u64; stride];
                let base = (u as u64) * (n as u64) - (u as u64) * (u as u64 + 1) / 2;
                for v in u + 1..n {
                    let k = base + (v - u - 1) as u64;
                    if pair_uniform(seed, k) < p {
                        row[v / 64] |= 1 << (v % 64);
                    }
                }
                row
            })
            .collect();
        let mut g = Self::empty(n);
        for (u, row) in upper.iter().enumerate() {
            for v in bits(row) {
                g.add_edge(u, v);
            }
        }
        Ok(g)
    }

    #[inline]
    pub(crate) fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.rows[u * self.stride + v / 64] |= 1 << (v % 64);
        self.rows[v * self.stride + u / 64] |= 1 << (u % 64);
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.stride..(v + 1) * self.stride]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.stride + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn neighbors(&self, v: usize) -> Members<'_> {
        bits(self.row(v))
    }

    pub fn neighbor_set(&self, v: usize) -> VertexSet {
        VertexSet::from_words(self.n, self.row(v).to_vec())
    }

    pub fn edge_count(&self) -> usize {
        let total: usize = self.rows.iter().map(|w| w.count_ones() as usize).sum();
        total / 2
    }

    /// Edges as `(u, v)` with `u < v`, in row-major order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            out.extend(self.neighbors(u).filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    pub fn sorted_degree_sequence(&self) -> Vec<usize> {
        let mut d = self.degrees();
        d.sort_unstable();
        d
    }

    /// `|N(u) ∩ N(v)|`.
    #[inline]
    pub fn codegree(&self, u: usize, v: usize) -> usize {
        and_count(self.row(u), self.row(v))
    }

    /// Vertices adjacent to every member of `s`, excluding `s` itself.
    pub fn common_neighbors(&self, s: &VertexSet) -> VertexSet {
        let mut out = VertexSet::full(self.n);
        for v in s.iter() {
            out.intersect_with(self.row(v));
        }
        out.difference_with(s);
        out
    }

    /// Number of edges with exactly one endpoint in `j`.
    pub fn edges_between(&self, j: &VertexSet) -> usize {
        let comp = j.complement();
        j.iter().map(|v| and_count(self.row(v), comp.words())).sum()
    }

    /// Number of edges with both endpoints in `j`.
    pub fn edges_within(&self, j: &VertexSet) -> usize {
        let twice: usize = j.iter().map(|v| and_count(self.row(v), j.words())).sum();
        twice / 2
    }

    /// Induced subgraph on `vertices` (in the given order; local index i is
    /// `vertices[i]`).
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut g = Graph::empty(vertices.len());
        for (a, &u) in vertices.iter().enumerate() {
            for (b, &v) in vertices.iter().enumerate().skip(a + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }

    /// Graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut g = Graph::empty(self.n);
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }

    /// Radius-`r` neighborhood of `v` with `v` as root.
    pub fn neighborhood(&self, v: usize, r: usize) -> Result<RootedGraph> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange {
                vertex: v + 1,
                n: self.n,
            });
        }
        if r == 0 {
            return Err(Error::InvalidParameter("radius must be at least 1".into()));
        }
        let labels: Vec<usize> = if r == 1 {
            let mut members = self.neighbor_set(v);
            members.insert(v);
            members.to_vec()
        } else {
            let mut dist = vec![usize::MAX; self.n];
            dist[v] = 0;
            let mut queue = VecDeque::from([v]);
            while let Some(u) = queue.pop_front() {
                if dist[u] == r {
                    continue;
                }
                for w in self.neighbors(u) {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                }
            }
            (0..self.n).filter(|&u| dist[u] != usize::MAX).collect()
        };
        let root = labels.binary_search(&v).expect("center belongs to its neighborhood");
        Ok(RootedGraph {
            graph: self.induced(&labels),
            root,
            labels,
        })
    }

    /// Check the structural invariants: symmetric rows, no loops, padding bits clear.
    pub fn check_invariants(&self) -> bool {
        for u in 0..self.n {
            if self.has_edge(u, u) {
                return false;
            }
            let rem = self.n % 64;
            if rem != 0 && self.row(u)[self.stride - 1] >> rem != 0 {
                return false;
            }
            for v in self.neighbors(u) {
                if !self.has_edge(v, u) {
                    return false;
                }
            }
        }
        true
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// A subgraph with a distinguished root. `labels[i]` is the vertex of the
/// parent graph that local vertex `i` came from (ascending).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedGraph {
    pub graph: Graph,
    pub root: usize,
    pub labels: Vec<usize>,
}

impl RootedGraph {
    /// Root label in the parent graph.
    pub fn center(&self) -> usize {
        self.labels[self.root]
    }

    pub fn local_index(&self, label: usize) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }

    /// Edges in terms of parent labels, `(a, b)` with `a < b`.
    pub fn labeled_edges(&self) -> Vec<(usize, usize)> {
        self.graph
            .edges()
            .into_iter()
            .map(|(a, b)| (self.labels[a], self.labels[b]))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn sample_extremes() {
        let g = Graph::sample_gnp(10, 0.0, RngSeed(3)).unwrap();
        assert_eq!(g.edge_count(), 0);
        let g = Graph::sample_gnp(10, 1.0, RngSeed(3)).unwrap();
        assert_eq!(g.edge_count(), 45);
        assert!(g.check_invariants());
    }

    #[test]
    fn sample_rejects_bad_input() {
        assert!(matches!(
            Graph::sample_gnp(10, 1.5, RngSeed(0)),
            Err(Error::InvalidProbability(_))
        ));
        assert!(matches!(
            Graph::sample_gnp(10, -0.1, RngSeed(0)),
            Err(Error::InvalidProbability(_))
        ));
        assert!(matches!(Graph::sample_gnp(0, 0.5, RngSeed(0)), Err(Error::NoVertices)));
    }

    #[test]
    fn sample_golden_64() {
        let g = Graph::sample_gnp(64, 0.5, RngSeed(1)).unwrap();
        let m = g.edge_count();
        assert!((696..=1096).contains(&m));
        assert_eq!(m, GOLDEN_EDGES_64_HALF_SEED1);
        assert_eq!(g, Graph::sample_gnp(64, 0.5, RngSeed(1)).unwrap());
    }

    // Frozen from the first run of the sampler.
    const GOLDEN_EDGES_64_HALF_SEED1: usize = 1023;

    #[test]
    fn edge_list_errors() {
        assert!(matches!(
            Graph::from_edge_list(3, &[(1, 4)]),
            Err(Error::VertexOutOfRange { vertex: 4, n: 3 })
        ));
        assert!(matches!(Graph::from_edge_list(3, &[(2, 2)]), Err(Error::Loop(2))));
        assert!(matches!(
            Graph::from_edge_list(3, &[(0, 1)]),
            Err(Error::VertexOutOfRange { vertex: 0, .. })
        ));
    }

    #[test]
    fn single_edge_and_duplicates() {
        let g = Graph::from_edge_list(2, &[(1, 2), (2, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.degrees(), vec![1, 1]);
    }

    #[test]
    fn twin_pair_degree_sequences() {
        let expected = vec![1, 1, 2, 2, 2, 3, 3, 4, 4, 4];
        assert_eq!(fixtures::gamma().sorted_degree_sequence(), expected);
        assert_eq!(fixtures::gamma_tilde().sorted_degree_sequence(), expected);
        assert_eq!(fixtures::gamma().edge_count(), 13);
        assert_eq!(fixtures::gamma_tilde().edge_count(), 13);
    }

    #[test]
    fn neighborhoods_of_twin_pair() {
        let g = fixtures::gamma();
        let n2 = g.neighborhood(1, 1).unwrap();
        assert_eq!(n2.labels, vec![0, 1, 2, 3, 4]);
        assert_eq!(n2.center(), 1);
        assert_eq!(
            n2.labeled_edges(),
            vec![(0, 1), (1, 2), (1, 3), (1, 4), (2, 3), (3, 4)]
        );
        let n10 = g.neighborhood(9, 1).unwrap();
        assert_eq!(n10.labels, vec![8, 9]);
        assert_eq!(n10.graph.edge_count(), 1);
        assert!(g.neighborhood(10, 1).is_err());
    }

    #[test]
    fn isolated_vertex_neighborhood() {
        let g = Graph::empty(4);
        let nb = g.neighborhood(2, 1).unwrap();
        assert_eq!(nb.graph.n(), 1);
        assert_eq!(nb.root, 0);
    }

    #[test]
    fn radius_two() {
        let path = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let nb = path.neighborhood(0, 2).unwrap();
        assert_eq!(nb.labels, vec![0, 1, 2]);
        assert_eq!(nb.graph.edge_count(), 2);
    }

    #[test]
    fn common_neighbors_examples() {
        let g = fixtures::gamma();
        let s = VertexSet::from_iter_in(10, [1, 3]);
        assert_eq!(g.common_neighbors(&s).to_vec(), vec![2, 4]);
        let k5 = Graph::complete(5);
        assert_eq!(
            k5.common_neighbors(&VertexSet::from_iter_in(5, [0, 1])).to_vec(),
            vec![2, 3, 4]
        );
        let e = Graph::empty(6);
        assert!(e.common_neighbors(&VertexSet::from_iter_in(6, [0, 4])).is_empty());
    }

    #[test]
    fn edges_between_examples() {
        let g = fixtures::gamma();
        assert_eq!(g.edges_between(&VertexSet::new(10)), 0);
        assert_eq!(g.edges_between(&VertexSet::full(10)), 0);
        assert_eq!(g.edges_between(&VertexSet::from_iter_in(10, 0..5)), 1);
        let k4 = Graph::complete(4);
        assert_eq!(k4.edges_between(&VertexSet::from_iter_in(4, [0, 1])), 4);
    }
}
