//! Focused pairs, the collision sets `A`, `A₁`, `S_A1`, the per-vertex
//! focus multigraph, and the intersection-sum inequality.

use std::sync::atomic::{AtomicU32, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use super::family::IsoFamily;
use crate::graph::Graph;
use crate::vertex_set::{and_count, bits, VertexSet};

/// `(image pair, number of containers mapping the pair there)`, sorted by
/// image.
pub type Buckets = Vec<((usize, usize), usize)>;

/// Containers of `{v, w}` are the common neighbors `i`; bucket them by
/// `f_i({v, w})`.
pub fn pair_buckets(gamma: &Graph, family: &IsoFamily, v: usize, w: usize) -> Buckets {
    let mut images: Vec<(usize, usize)> = bits(gamma.row(v))
        .filter(|&i| gamma.has_edge(i, w))
        .filter_map(|i| family.apply_pair(i, v, w))
        .collect();
    images.sort_unstable();
    let mut out: Buckets = Vec::new();
    for img in images {
        match out.last_mut() {
            Some((last, c)) if *last == img => *c += 1,
            _ => out.push((img, 1)),
        }
    }
    out
}

/// Largest bucket; ties go to the smallest image.
pub fn largest_bucket(b: &Buckets) -> Option<((usize, usize), usize)> {
    b.iter()
        .copied()
        .fold(None, |best: Option<((usize, usize), usize)>, x| match best {
            Some(bb) if bb.1 >= x.1 => Some(bb),
            _ => Some(x),
        })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FocusedPair {
    pub pair: (usize, usize),
    pub focus: (usize, usize),
    pub support: usize,
    pub containers: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FocusReport {
    pub epsilon: f64,
    /// `max((1-ε) np², 1)`.
    pub threshold: f64,
    /// `(1-ε) np² < 1`, so the requirement was floored at one container.
    pub sub_threshold: bool,
    pub pairs_total: u64,
    pub focused_count: u64,
    pub focused_fraction: f64,
    /// At least `(1-ε) C(n,2)` focused pairs.
    pub e1_holds: bool,
    pub a_size: u64,
    pub a1_size: u64,
    pub s_a1_size: u64,
    /// Focused pairs (0-based), only when requested.
    #[serde(skip)]
    pub focused: Option<Vec<FocusedPair>>,
}

#[inline]
fn pair_index(n: usize, x: usize, y: usize) -> usize {
    debug_assert!(x < y);
    x * n - x * (x + 1) / 2 + (y - x - 1)
}

pub fn focused_pairs(
    gamma: &Graph,
    family: &IsoFamily,
    p: f64,
    epsilon: f64,
    keep_pairs: bool,
) -> FocusReport {
    let n = gamma.n();
    let np2 = n as f64 * p * p;
    let raw_threshold = (1.0 - epsilon) * np2;
    let threshold = raw_threshold.max(1.0);
    let a1_limit = 0.5 * epsilon * epsilon * np2;
    let sa1_limit = 0.25 * epsilon * epsilon * np2;
    let pairs_total = (n * n.saturating_sub(1) / 2) as u64;

    // Pass 1: how many (i, pair) elements land on each image pair.
    let totals: Vec<AtomicU32> = (0..pairs_total as usize).map(|_| AtomicU32::new(0)).collect();
    (0..n).into_par_iter().for_each(|v| {
        for w in v + 1..n {
            for (img, c) in pair_buckets(gamma, family, v, w) {
                if img.0 != img.1 && img.1 < n {
                    totals[pair_index(n, img.0, img.1)].fetch_add(c as u32, Ordering::Relaxed);
                }
            }
        }
    });

    // Pass 2: per pair, focus and A₁ membership of its elements.
    #[derive(Default)]
    struct Part {
        focused: u64,
        a: u64,
        a1: u64,
        s_a1: u64,
        kept: Vec<FocusedPair>,
    }
    let parts: Vec<Part> = (0..n)
        .into_par_iter()
        .map(|v| {
            let mut part = Part::default();
            for w in v + 1..n {
                let b = pair_buckets(gamma, family, v, w);
                let containers: usize = b.iter().map(|x| x.1).sum();
                part.a += containers as u64;
                let mut in_a1 = 0usize;
                for &(img, c) in &b {
                    let total = totals[pair_index(n, img.0, img.1)].load(Ordering::Relaxed) as usize;
                    if (total - c) as f64 >= a1_limit {
                        in_a1 += c;
                    }
                }
                part.a1 += in_a1 as u64;
                if containers > 0 && in_a1 as f64 >= sa1_limit {
                    part.s_a1 += 1;
                }
                if let Some((focus, support)) = largest_bucket(&b) {
                    if support as f64 >= threshold {
                        part.focused += 1;
                        if keep_pairs {
                            part.kept.push(FocusedPair {
                                pair: (v, w),
                                focus,
                                support,
                                containers,
                            });
                        }
                    }
                }
            }
            part
        })
        .collect();

    let mut rep = FocusReport {
        epsilon,
        threshold,
        sub_threshold: raw_threshold < 1.0,
        pairs_total,
        focused_count: 0,
        focused_fraction: 0.0,
        e1_holds: false,
        a_size: 0,
        a1_size: 0,
        s_a1_size: 0,
        focused: keep_pairs.then(Vec::new),
    };
    for part in parts {
        rep.focused_count += part.focused;
        rep.a_size += part.a;
        rep.a1_size += part.a1;
        rep.s_a1_size += part.s_a1;
        if let Some(k) = rep.focused.as_mut() {
            k.extend(part.kept);
        }
    }
    if pairs_total > 0 {
        rep.focused_fraction = rep.focused_count as f64 / pairs_total as f64;
    }
    rep.e1_holds = rep.focused_count as f64 >= (1.0 - epsilon) * pairs_total as f64;
    rep
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FocusMultigraph {
    pub z: usize,
    /// 0-based members of `J_z`.
    pub j_z: Vec<usize>,
    /// `Σ_{i1 < i2 in J_z} |M_z(i1) ∩ M_z(i2)|`.
    pub total_multiplicity: u64,
    /// Pairs `i1 < i2` in `J_z` with `f_{i1}(z) != f_{i2}(z)`.
    pub q: u64,
}

/// `M_z(i)` collects the `v` in `N(i) \ {i, z}` whose pair `{v, z}` is
/// focused and sent to its focus by `f_i`. `J_z` keeps the neighbors `i` of
/// `z` with `|M_z(i)| >= jz_threshold`.
pub fn focus_multigraph(
    gamma: &Graph,
    family: &IsoFamily,
    p: f64,
    epsilon: f64,
    z: usize,
    jz_threshold: f64,
) -> FocusMultigraph {
    let n = gamma.n();
    let threshold = ((1.0 - epsilon) * n as f64 * p * p).max(1.0);
    let focus: Vec<Option<(usize, usize)>> = (0..n)
        .into_par_iter()
        .map(|v| {
            if v == z {
                return None;
            }
            largest_bucket(&pair_buckets(gamma, family, v.min(z), v.max(z)))
                .filter(|&(_, s)| s as f64 >= threshold)
                .map(|(f, _)| f)
        })
        .collect();
    let mut j_z = Vec::new();
    let mut m_sets = Vec::new();
    for i in gamma.neighbors(z) {
        let mut m = VertexSet::new(n);
        for v in gamma.neighbors(i) {
            if v == z {
                continue;
            }
            if let Some(f) = focus[v] {
                if family.apply_pair(i, v, z) == Some(f) {
                    m.insert(v);
                }
            }
        }
        if m.len() as f64 >= jz_threshold {
            j_z.push(i);
            m_sets.push(m);
        }
    }
    let mut total = 0u64;
    let mut q = 0u64;
    for a in 0..j_z.len() {
        for b in a + 1..j_z.len() {
            total += m_sets[a].intersection_len(&m_sets[b]) as u64;
            if family.apply(j_z[a], z) != family.apply(j_z[b], z) {
                q += 1;
            }
        }
    }
    FocusMultigraph {
        z,
        j_z,
        total_multiplicity: total,
        q,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct JensenBound {
    /// `Σ_{i,j} |U_i ∩ U_j|` over ordered pairs, diagonal included.
    pub lhs: u128,
    pub sum_sizes: u128,
    pub m: u128,
}

impl JensenBound {
    pub fn rhs(&self) -> f64 {
        (self.sum_sizes * self.sum_sizes) as f64 / self.m as f64
    }

    /// `lhs >= (Σ|U_i|)² / m`, compared exactly.
    pub fn holds(&self) -> bool {
        self.lhs * self.m >= self.sum_sizes * self.sum_sizes
    }
}

pub fn jensen_intersection_bound(sets: &[VertexSet], m: usize) -> JensenBound {
    let mut lhs = 0u128;
    for (a, u) in sets.iter().enumerate() {
        lhs += u.len() as u128;
        for v in &sets[a + 1..] {
            lhs += 2 * and_count(u.words(), v.words()) as u128;
        }
    }
    JensenBound {
        lhs,
        sum_sizes: sets.iter().map(|u| u.len() as u128).sum(),
        m: m as u128,
    }
}
