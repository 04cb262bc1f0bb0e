//! Canonical codes by colour refinement plus individualisation search.
//!
//! The search tree is the usual one: refine to an equitable ordered
//! partition, individualise each vertex of the first non-singleton cell in
//! turn, recurse. Every leaf is a discrete partition, i.e. an ordering of the
//! vertices, and the code of a leaf is the adjacency matrix read in that order.
//! The canonical code is the least leaf code. Leaves with equal codes yield
//! automorphisms, which are used for orbit pruning and for jumping back out of
//! subtrees that are images of subtrees already explored.
//!
//! Code layout: 4-byte big-endian vertex count, then the strict upper triangle
//! of the relabelled adjacency matrix in row-major order, one bit per pair,
//! most significant bit first, zero-padded to a whole byte.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{Graph, RootedGraph};

/// Largest graph accepted by the canonical labeller.
pub const MAX_CANON_VERTICES: usize = 4096;

/// Node budget of the direct fixed-point search before it falls back to
/// composing canonical labellings.
const FIXED_POINT_BUDGET: u64 = 200_000;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    pub fn from_bytes(bytes: Vec<u8>) -> Result<Self> {
        if bytes.len() < 4 {
            return Err(Error::InvalidParameter("code shorter than its header".into()));
        }
        let n = u32::from_be_bytes(bytes[..4].try_into().unwrap()) as usize;
        if bytes.len() != 4 + pair_bytes(n) {
            return Err(Error::InvalidParameter(format!(
                "code for {n} vertices must be {} bytes, got {}",
                4 + pair_bytes(n),
                bytes.len()
            )));
        }
        Ok(CanonicalCode(bytes))
    }

    /// Vertex count encoded in the header.
    pub fn n(&self) -> usize {
        u32::from_be_bytes(self.0[..4].try_into().unwrap()) as usize
    }

    /// The canonical representative. For rooted codes the root is vertex 0.
    pub fn to_graph(&self) -> Graph {
        let n = self.n();
        let body = &self.0[4..];
        let mut g = Graph::empty(n);
        let mut k = 0;
        for a in 0..n {
            for b in a + 1..n {
                if body[k / 8] >> (7 - k % 8) & 1 == 1 {
                    g.add_edge(a, b);
                }
                k += 1;
            }
        }
        g
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalCode({})", self.to_hex())
    }
}

impl FromStr for CanonicalCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bytes = hex::decode(s.trim())
            .map_err(|e| Error::InvalidParameter(format!("bad hex code: {e}")))?;
        CanonicalCode::from_bytes(bytes)
    }
}

impl Serialize for CanonicalCode {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for CanonicalCode {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn pair_bytes(n: usize) -> usize {
    (n * n.saturating_sub(1) / 2).div_ceil(8)
}

fn encode(g: &Graph, order: &[usize]) -> Vec<u8> {
    let n = order.len();
    let mut out = Vec::with_capacity(4 + pair_bytes(n));
    out.extend_from_slice(&(n as u32).to_be_bytes());
    let mut byte = 0u8;
    let mut k = 0usize;
    for a in 0..n {
        let row = g.row(order[a]);
        for &vb in &order[a + 1..] {
            byte = byte << 1 | (row[vb / 64] >> (vb % 64) & 1) as u8;
            k += 1;
            if k % 8 == 0 {
                out.push(byte);
                byte = 0;
            }
        }
    }
    if k % 8 != 0 {
        out.push(byte << (8 - k % 8));
    }
    out
}

/// Canonical code plus the ordering that produced it: `order[k]` is the vertex
/// placed at canonical position `k`.
#[derive(Clone, Debug)]
pub struct Labeling {
    pub code: CanonicalCode,
    pub order: Vec<usize>,
}

/// Refine `colors` to the coarsest equitable partition finer than it. Colours
/// come back dense (`0..cells`) and the relative order of old cells is kept.
/// Returns the number of cells.
pub(crate) fn refine(g: &Graph, colors: &mut [u32]) -> usize {
    let n = colors.len();
    if n == 0 {
        return 0;
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_unstable_by_key(|&v| colors[v]);
    let (ranks, mut cells) = dense_rank(&idx, |a, b| colors[a] == colors[b]);
    colors.copy_from_slice(&ranks);
    let mut sigs: Vec<Vec<u32>> = vec![Vec::new(); n];
    loop {
        if cells == n {
            return cells;
        }
        for v in 0..n {
            let s = &mut sigs[v];
            s.clear();
            s.extend(g.neighbors(v).map(|w| colors[w]));
            s.sort_unstable();
        }
        idx.sort_unstable_by(|&a, &b| colors[a].cmp(&colors[b]).then_with(|| sigs[a].cmp(&sigs[b])));
        let (ranks, next) = dense_rank(&idx, |a, b| colors[a] == colors[b] && sigs[a] == sigs[b]);
        colors.copy_from_slice(&ranks);
        if next == cells {
            return cells;
        }
        cells = next;
    }
}

fn dense_rank(idx: &[usize], same: impl Fn(usize, usize) -> bool) -> (Vec<u32>, usize) {
    let mut ranks = vec![0u32; idx.len()];
    let mut r = 0u32;
    for k in 0..idx.len() {
        if k > 0 && !same(idx[k - 1], idx[k]) {
            r += 1;
        }
        ranks[idx[k]] = r;
    }
    (ranks, r as usize + 1)
}

fn individualize(colors: &[u32], v: usize) -> Vec<u32> {
    let mut out: Vec<u32> = colors.iter().map(|&c| 2 * c + 1).collect();
    out[v] = 2 * colors[v];
    out
}

struct Leaf {
    code: Vec<u8>,
    order: Vec<usize>,
    path: Vec<usize>,
}

struct Search<'a> {
    g: &'a Graph,
    first: Option<Leaf>,
    best: Option<Leaf>,
    autos: Vec<Vec<usize>>,
    path: Vec<usize>,
}

impl Search<'_> {
    /// Returns `Some(d)` to unwind to the node at depth `d`.
    fn dfs(&mut self, colors: Vec<u32>) -> Option<usize> {
        let n = colors.len();
        let depth = self.path.len();
        let mut sizes = vec![0usize; n];
        for &c in &colors {
            sizes[c as usize] += 1;
        }
        let Some(target) = sizes.iter().position(|&s| s > 1) else {
            return self.leaf(&colors);
        };
        let mut cell: Vec<usize> = (0..n).filter(|&v| colors[v] as usize == target).collect();
        cell.sort_unstable();
        let mut explored: Vec<usize> = Vec::new();
        for &w in &cell {
            if !explored.is_empty() && self.same_orbit(w, &explored) {
                continue;
            }
            let mut child = individualize(&colors, w);
            refine(self.g, &mut child);
            self.path.push(w);
            let jump = self.dfs(child);
            self.path.pop();
            explored.push(w);
            if let Some(d) = jump {
                if d < depth {
                    return Some(d);
                }
            }
        }
        None
    }

    fn leaf(&mut self, colors: &[u32]) -> Option<usize> {
        let mut order = vec![0usize; colors.len()];
        for (v, &c) in colors.iter().enumerate() {
            order[c as usize] = v;
        }
        let code = encode(self.g, &order);
        let leaf = Leaf {
            code,
            order,
            path: self.path.clone(),
        };
        let Some(first) = &self.first else {
            self.best = Some(Leaf {
                code: leaf.code.clone(),
                order: leaf.order.clone(),
                path: leaf.path.clone(),
            });
            self.first = Some(leaf);
            return None;
        };
        if leaf.code == first.code {
            let d = common_prefix(&leaf.path, &first.path);
            self.record_auto(&first.order.clone(), &leaf.order);
            return Some(d);
        }
        let best = self.best.as_ref().unwrap();
        match leaf.code.cmp(&best.code) {
            Ordering::Less => {
                self.best = Some(leaf);
                None
            }
            Ordering::Equal => {
                let d = common_prefix(&leaf.path, &best.path);
                self.record_auto(&best.order.clone(), &leaf.order);
                Some(d)
            }
            Ordering::Greater => None,
        }
    }

    fn record_auto(&mut self, from: &[usize], to: &[usize]) {
        let mut gamma = vec![0usize; from.len()];
        for (&a, &b) in from.iter().zip(to) {
            gamma[a] = b;
        }
        if gamma.iter().enumerate().any(|(v, &w)| v != w) {
            self.autos.push(gamma);
        }
    }

    /// Is `w` in the orbit of an explored vertex under the stored
    /// automorphisms that fix the current path pointwise?
    fn same_orbit(&self, w: usize, explored: &[usize]) -> bool {
        let n = self.g.n();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut any = false;
        for gamma in &self.autos {
            if self.path.iter().any(|&v| gamma[v] != v) {
                continue;
            }
            any = true;
            for (v, &u) in gamma.iter().enumerate() {
                let (a, b) = (find(&mut parent, v), find(&mut parent, u));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        if !any {
            return false;
        }
        let rw = find(&mut parent, w);
        explored.iter().any(|&x| find(&mut parent, x) == rw)
    }
}

fn common_prefix(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Canonical labelling of `g` under the initial vertex colouring `colors`
/// (lower colour = earlier canonical position). Colourings that are equal up
/// to relabelling give equal codes.
pub fn canonical_labeling(g: &Graph, colors: &[u32]) -> Result<Labeling> {
    let n = g.n();
    if n > MAX_CANON_VERTICES {
        return Err(Error::TooManyVertices {
            n,
            max: MAX_CANON_VERTICES,
        });
    }
    assert_eq!(colors.len(), n);
    let mut start = colors.to_vec();
    refine(g, &mut start);
    let mut search = Search {
        g,
        first: None,
        best: None,
        autos: Vec::new(),
        path: Vec::new(),
    };
    if n > 0 {
        search.dfs(start);
    }
    let best = search.best.unwrap_or(Leaf {
        code: encode(g, &[]),
        order: Vec::new(),
        path: Vec::new(),
    });
    Ok(Labeling {
        code: CanonicalCode(best.code),
        order: best.order,
    })
}

pub fn canonical_code(g: &Graph) -> Result<CanonicalCode> {
    Ok(canonical_labeling(g, &vec![0; g.n()])?.code)
}

/// Code invariant under root-preserving relabelling. The root always sits at
/// canonical position 0.
pub fn rooted_code(g: &Graph, root: usize) -> Result<CanonicalCode> {
    Ok(rooted_labeling(g, root)?.code)
}

pub fn rooted_labeling(g: &Graph, root: usize) -> Result<Labeling> {
    if root >= g.n() {
        return Err(Error::VertexOutOfRange {
            vertex: root + 1,
            n: g.n(),
        });
    }
    let mut colors = vec![1u32; g.n()];
    colors[root] = 0;
    canonical_labeling(g, &colors)
}

pub fn are_isomorphic(g: &Graph, h: &Graph) -> Result<bool> {
    if g.n() != h.n() || g.edge_count() != h.edge_count() {
        return Ok(false);
    }
    if g.sorted_degree_sequence() != h.sorted_degree_sequence() {
        return Ok(false);
    }
    Ok(canonical_code(g)? == canonical_code(h)?)
}

/// Injective vertex map, stored as `(source, target)` pairs sorted by source.
/// Vertices are 0-based; serialization shifts both sides to 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexMapping {
    pairs: Vec<(usize, usize)>,
}

impl VertexMapping {
    pub fn new(mut pairs: Vec<(usize, usize)>) -> Result<Self> {
        pairs.sort_unstable();
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidParameter(format!(
                    "vertex {} mapped twice",
                    w[0].0 + 1
                )));
            }
        }
        let mut targets: Vec<usize> = pairs.iter().map(|p| p.1).collect();
        targets.sort_unstable();
        if targets.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter("mapping is not injective".into()));
        }
        Ok(VertexMapping { pairs })
    }

    pub fn identity<I: IntoIterator<Item = usize>>(vertices: I) -> Self {
        let mut pairs: Vec<_> = vertices.into_iter().map(|v| (v, v)).collect();
        pairs.sort_unstable();
        pairs.dedup();
        VertexMapping { pairs }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn get(&self, v: usize) -> Option<usize> {
        self.pairs
            .binary_search_by_key(&v, |p| p.0)
            .ok()
            .map(|k| self.pairs[k].1)
    }

    pub fn inverse(&self) -> VertexMapping {
        let mut pairs: Vec<_> = self.pairs.iter().map(|&(a, b)| (b, a)).collect();
        pairs.sort_unstable();
        VertexMapping { pairs }
    }

    pub fn is_identity(&self) -> bool {
        self.pairs.iter().all(|&(a, b)| a == b)
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.pairs.iter().map(|p| p.0)
    }

    /// Is this an isomorphism from `g` onto `h` that sends the root of `g` to
    /// the root of `h`? Both sides are read in parent labels.
    pub fn is_rooted_isomorphism(&self, g: &RootedGraph, h: &RootedGraph) -> bool {
        if self.pairs.len() != g.labels.len() || g.labels.len() != h.labels.len() {
            return false;
        }
        let mut local = vec![usize::MAX; g.labels.len()];
        for &(a, b) in &self.pairs {
            match (g.local_index(a), h.local_index(b)) {
                (Some(x), Some(y)) => local[x] = y,
                _ => return false,
            }
        }
        local[g.root] == h.root && is_isomorphism(&g.graph, &h.graph, &local)
    }
}

impl Serialize for VertexMapping {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let shifted: Vec<[usize; 2]> = self.pairs.iter().map(|&(a, b)| [a + 1, b + 1]).collect();
        shifted.serialize(s)
    }
}

impl fmt::Display for VertexMapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, (a, b)) in self.pairs.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}->{}", a + 1, b + 1)?;
        }
        f.write_str("}")
    }
}

/// `phi` (local indices) is a bijection that preserves adjacency and
/// non-adjacency.
pub fn is_isomorphism(g: &Graph, h: &Graph, phi: &[usize]) -> bool {
    let n = g.n();
    if h.n() != n || phi.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &y in phi {
        if y >= n || seen[y] {
            return false;
        }
        seen[y] = true;
    }
    for a in 0..n {
        for b in a + 1..n {
            if g.has_edge(a, b) != h.has_edge(phi[a], phi[b]) {
                return false;
            }
        }
    }
    true
}

/// Isomorphism between two rooted graphs sending root to root, or `None` if
/// none exists. Both graphs must share the same center label.
///
/// The search prefers keeping labels: vertices whose label occurs on both
/// sides are placed first, and each is tried against its own label before
/// the other candidates in ascending label order. If that search runs out of
/// budget the witness is taken from the two canonical labellings instead.
pub fn find_fixed_point_isomorphism(g: &RootedGraph, h: &RootedGraph) -> Option<VertexMapping> {
    if g.center() != h.center() {
        return None;
    }
    let phi = rooted_isomorphism_local(g, h)?;
    let pairs = phi
        .iter()
        .enumerate()
        .map(|(a, &b)| (g.labels[a], h.labels[b]))
        .collect();
    let m = VertexMapping::new(pairs).expect("verified bijection");
    debug_assert!(m.is_rooted_isomorphism(g, h));
    Some(m)
}

fn rooted_isomorphism_local(g: &RootedGraph, h: &RootedGraph) -> Option<Vec<usize>> {
    let n = g.graph.n();
    if h.graph.n() != n || g.graph.edge_count() != h.graph.edge_count() {
        return None;
    }
    let lg = rooted_labeling(&g.graph, g.root).ok()?;
    let lh = rooted_labeling(&h.graph, h.root).ok()?;
    if lg.code != lh.code {
        return None;
    }

    // Joint refinement on the disjoint union, roots individualised.
    let mut union = Graph::empty(2 * n);
    for (a, b) in g.graph.edges() {
        union.add_edge(a, b);
    }
    for (a, b) in h.graph.edges() {
        union.add_edge(n + a, n + b);
    }
    let mut colors = vec![1u32; 2 * n];
    colors[g.root] = 0;
    colors[n + h.root] = 0;
    refine(&union, &mut colors);
    let (cg, ch) = colors.split_at(n);

    let mut domain: Vec<usize> = (0..n).filter(|&a| a != g.root).collect();
    domain.sort_by_key(|&a| (h.local_index(g.labels[a]).is_none(), g.labels[a]));
    domain.insert(0, g.root);

    let candidates: Vec<Vec<usize>> = domain
        .iter()
        .map(|&a| {
            let mut c: Vec<usize> = (0..n).filter(|&b| ch[b] == cg[a]).collect();
            c.sort_by_key(|&b| (h.labels[b] != g.labels[a], h.labels[b]));
            c
        })
        .collect();

    let mut phi = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut nodes = 0u64;
    let found = assign(
        &g.graph,
        &h.graph,
        &domain,
        &candidates,
        0,
        &mut phi,
        &mut used,
        &mut nodes,
    );
    let phi = if found {
        phi
    } else {
        // Exhausted the budget (or, impossibly, the space): compose labellings.
        let mut phi = vec![0usize; n];
        for (&a, &b) in lg.order.iter().zip(&lh.order) {
            phi[a] = b;
        }
        phi
    };
    (phi[g.root] == h.root && is_isomorphism(&g.graph, &h.graph, &phi)).then_some(phi)
}

#[allow(clippy::too_many_arguments)]
fn assign(
    g: &Graph,
    h: &Graph,
    domain: &[usize],
    candidates: &[Vec<usize>],
    k: usize,
    phi: &mut [usize],
    used: &mut [bool],
    nodes: &mut u64,
) -> bool {
    if k == domain.len() {
        return true;
    }
    let a = domain[k];
    for &b in &candidates[k] {
        if used[b] {
            continue;
        }
        *nodes += 1;
        if *nodes > FIXED_POINT_BUDGET {
            return false;
        }
        let consistent = domain[..k]
            .iter()
            .all(|&x| g.has_edge(a, x) == h.has_edge(b, phi[x]));
        if !consistent {
            continue;
        }
        phi[a] = b;
        used[b] = true;
        if assign(g, h, domain, candidates, k + 1, phi, used, nodes) {
            return true;
        }
        used[b] = false;
        phi[a] = usize::MAX;
        if *nodes > FIXED_POINT_BUDGET {
            return false;
        }
    }
    false
}
