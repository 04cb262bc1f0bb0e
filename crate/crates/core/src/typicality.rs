//! Audits of a concrete graph against the typicality events for G(n, p).
//!
//! Each event is checked item by item (a vertex, a pair, a triple, a sampled
//! subset). For every item the margin is `allowed - observed deviation`, so
//! an event holds iff its smallest margin is non-negative. Events quantified
//! over all subsets or all bijections are sampled, and flagged as such.
//!
//! `log` is the natural logarithm throughout.

use rand::seq::{index, SliceRandom};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::graph::Graph;
use crate::rng::{stream_rng, RngSeed};
use crate::vertex_set::{and_count, VertexSet};

/// The exponent constant in the pair-codegree window.
pub const C_CONST: f64 = 0.01;

/// Full triple scan up to this many vertices; sampling above.
pub const TRIPLE_FULL_SCAN_MAX_N: usize = 1500;
pub const TRIPLE_SAMPLES: u64 = 1_000_000;
const TRIPLE_CHUNKS: u64 = 64;

/// Vertices visited by the local-bijection audit when `n` is larger.
const BIJECTION_MAX_CENTERS: usize = 512;

pub const MAX_WITNESSES: usize = 8;

const TAG_TRIPLE: u64 = 3;
const TAG_SUBGRAPH: u64 = 4;
const TAG_EXPANSION: u64 = 5;
const TAG_BIJECTION: u64 = 6;
const TAG_CUT: u64 = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AuditMode {
    Full,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    /// 1-based. For subset audits, the center vertex only.
    pub vertices: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub set_size: Option<usize>,
    pub observed: f64,
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EventRecord {
    pub event: &'static str,
    pub holds: bool,
    /// Smallest margin over checked items; `None` when nothing was checked.
    pub margin: Option<f64>,
    pub mode: AuditMode,
    pub checked: u64,
    pub violations: u64,
    pub witnesses: Vec<Witness>,
    /// Degree event only: margin with the raw degree in place of the
    /// neighborhood size.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub raw_degree_margin: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AuditParams {
    pub p: f64,
    pub trials: usize,
    pub seed: RngSeed,
    /// Multiplies every allowed deviation; 1 is the event as stated.
    pub slack_scale: f64,
}

impl AuditParams {
    pub fn new(p: f64, trials: usize, seed: RngSeed) -> Self {
        AuditParams {
            p,
            trials,
            seed,
            slack_scale: 1.0,
        }
    }
}

#[derive(Clone, Debug, Default)]
struct Acc {
    checked: u64,
    violations: u64,
    min_margin: Option<f64>,
    witnesses: Vec<Witness>,
}

impl Acc {
    fn push(&mut self, margin: f64, witness: impl FnOnce() -> Witness) {
        self.checked += 1;
        self.min_margin = Some(self.min_margin.map_or(margin, |m| m.min(margin)));
        if margin < 0.0 {
            self.violations += 1;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(witness());
            }
        }
    }

    fn merge(mut self, other: Acc) -> Acc {
        self.checked += other.checked;
        self.violations += other.violations;
        self.min_margin = match (self.min_margin, other.min_margin) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let room = MAX_WITNESSES - self.witnesses.len();
        self.witnesses.extend(other.witnesses.into_iter().take(room));
        self
    }

    fn record(self, event: &'static str, mode: AuditMode) -> EventRecord {
        EventRecord {
            event,
            holds: self.violations == 0,
            margin: self.min_margin,
            mode,
            checked: self.checked,
            violations: self.violations,
            witnesses: self.witnesses,
            raw_degree_margin: None,
        }
    }
}

/// Merge per-item accumulators in index order so the result does not depend
/// on scheduling.
fn ordered<F>(len: usize, f: F) -> Acc
where
    F: Fn(usize) -> Acc + Sync + Send,
{
    let parts: Vec<Acc> = (0..len).into_par_iter().map(f).collect();
    parts.into_iter().fold(Acc::default(), Acc::merge)
}

fn w(vertices: &[usize], set_size: Option<usize>, observed: f64, margin: f64) -> Witness {
    Witness {
        vertices: vertices.iter().map(|v| v + 1).collect(),
        set_size,
        observed,
        margin,
    }
}

fn nf(g: &Graph) -> f64 {
    g.n() as f64
}

/// `| |V(N(i))| - np | <= (log n / sqrt(np)) np` for every vertex.
pub fn audit_degrees(g: &Graph, a: &AuditParams) -> EventRecord {
    let np = nf(g) * a.p;
    let slack = a.slack_scale * nf(g).ln() / np.sqrt() * np;
    let acc = ordered(g.n(), |v| {
        let mut acc = Acc::default();
        let size = (g.degree(v) + 1) as f64;
        let m = slack - (size - np).abs();
        acc.push(m, || w(&[v], None, size, m));
        acc
    });
    let raw = (0..g.n())
        .map(|v| slack - (g.degree(v) as f64 - np).abs())
        .fold(None, |acc: Option<f64>, m| Some(acc.map_or(m, |x| x.min(m))));
    let mut rec = acc.record("degree", AuditMode::Full);
    rec.raw_degree_margin = raw;
    rec
}

/// Pair codegree within `[(1 - log^-C n) np², (1 + log^-C n) np²]`.
pub fn audit_pair_codegree(g: &Graph, a: &AuditParams) -> EventRecord {
    let n = g.n();
    let np2 = nf(g) * a.p * a.p;
    let slack = a.slack_scale * nf(g).ln().powf(-C_CONST) * np2;
    let acc = ordered(n, |v| {
        let mut acc = Acc::default();
        for u in v + 1..n {
            let c = g.codegree(v, u) as f64;
            let m = slack - (c - np2).abs();
            acc.push(m, || w(&[v, u], None, c, m));
        }
        acc
    });
    acc.record("pair_codegree", AuditMode::Full)
}

/// Triple codegree at most `np²/10`. Full scan for small `n`, otherwise
/// uniform random triples.
pub fn audit_triple_codegree(g: &Graph, a: &AuditParams) -> EventRecord {
    let n = g.n();
    let bound = a.slack_scale * nf(g) * a.p * a.p / 10.0;
    if n < 3 {
        return Acc::default().record("triple_codegree", AuditMode::Full);
    }
    if n <= TRIPLE_FULL_SCAN_MAX_N {
        let acc = ordered(n, |v| {
            let mut acc = Acc::default();
            let mut vw = vec![0u64; g.row(v).len()];
            let mut local_max = 0usize;
            for x in v + 1..n {
                for (o, (a, b)) in vw.iter_mut().zip(g.row(v).iter().zip(g.row(x))) {
                    *o = a & b;
                }
                let cod: usize = vw.iter().map(|t| t.count_ones() as usize).sum();
                // No triple through this pair can beat the running maximum
                // or break the bound: count it without scanning.
                if x + 1 == n {
                    break;
                }
                if (cod as f64) <= bound && cod <= local_max {
                    acc.checked += (n - x - 1) as u64;
                    let m = bound - local_max as f64;
                    acc.min_margin = Some(acc.min_margin.map_or(m, |mm| mm.min(m)));
                    continue;
                }
                for y in x + 1..n {
                    let c = and_count(&vw, g.row(y));
                    local_max = local_max.max(c);
                    let m = bound - c as f64;
                    acc.push(m, || w(&[v, x, y], None, c as f64, m));
                }
            }
            acc
        });
        acc.record("triple_codegree", AuditMode::Full)
    } else {
        let per = TRIPLE_SAMPLES / TRIPLE_CHUNKS;
        let acc = ordered(TRIPLE_CHUNKS as usize, |chunk| {
            let mut rng = stream_rng(a.seed, TAG_TRIPLE, chunk as u64);
            let mut acc = Acc::default();
            for _ in 0..per {
                let t = index::sample(&mut rng, n, 3);
                let (x, y, z) = (t.index(0), t.index(1), t.index(2));
                let c = g
                    .row(x)
                    .iter()
                    .zip(g.row(y))
                    .zip(g.row(z))
                    .map(|((p, q), r)| (p & q & r).count_ones() as usize)
                    .sum::<usize>();
                let m = bound - c as f64;
                let mut tri = [x, y, z];
                tri.sort_unstable();
                acc.push(m, || w(&tri, None, c as f64, m));
            }
            acc
        });
        acc.record("triple_codegree", AuditMode::Sampled)
    }
}

fn random_subset<R: Rng>(rng: &mut R, pool: &[usize], size: usize) -> Vec<usize> {
    let mut s: Vec<usize> = index::sample(rng, pool.len(), size)
        .into_iter()
        .map(|k| pool[k])
        .collect();
    s.sort_unstable();
    s
}

/// `| |E(Γ_J)| - p C(|J|,2) | <= 8 n^{3/2} p²` for `J` inside a neighborhood:
/// the empty set, the whole neighborhood, and `trials` random subsets.
pub fn audit_subgraph_edges(g: &Graph, a: &AuditParams) -> EventRecord {
    let n = g.n();
    let slack = a.slack_scale * 8.0 * nf(g).powf(1.5) * a.p * a.p;
    let acc = ordered(n, |v| {
        let mut acc = Acc::default();
        let nb: Vec<usize> = g.neighbors(v).collect();
        let mut rng = stream_rng(a.seed, TAG_SUBGRAPH, v as u64);
        let mut sets = vec![Vec::new(), nb.clone()];
        for _ in 0..a.trials {
            let size = rng.random_range(0..=nb.len());
            sets.push(random_subset(&mut rng, &nb, size));
        }
        for j in sets {
            let js = VertexSet::from_iter_in(n, j.iter().copied());
            let e = g.edges_within(&js) as f64;
            let k = j.len() as f64;
            let m = slack - (e - a.p * k * (k - 1.0) / 2.0).abs();
            acc.push(m, || w(&[v], Some(j.len()), e, m));
        }
        acc
    });
    acc.record("subgraph_edges", AuditMode::Sampled)
}

/// For `J` inside `N(v)` with `|J| <= np/3`: the number of neighbors `w` of
/// `v` with at most `0.999 (np - |J|) p` neighbors in `N(v) \ J` is at most
/// `(log² n / np²) |J|`.
pub fn audit_expansion(g: &Graph, a: &AuditParams) -> EventRecord {
    let n = g.n();
    let np = nf(g) * a.p;
    let coef = a.slack_scale * nf(g).ln().powi(2) / (np * a.p);
    let cap = (np / 3.0).floor().max(0.0) as usize;
    let acc = ordered(n, |v| {
        let mut acc = Acc::default();
        let nb: Vec<usize> = g.neighbors(v).collect();
        let mut rng = stream_rng(a.seed, TAG_EXPANSION, v as u64);
        let top = cap.min(nb.len());
        for _ in 0..a.trials {
            let size = rng.random_range(0..=top);
            let j = random_subset(&mut rng, &nb, size);
            let mut rest = g.neighbor_set(v);
            for &x in &j {
                rest.remove(x);
            }
            let limit = 0.999 * (np - size as f64) * a.p;
            let weak = nb
                .iter()
                .filter(|&&x| (and_count(g.row(x), rest.words()) as f64) <= limit)
                .count() as f64;
            let m = coef * size as f64 - weak;
            acc.push(m, || w(&[v], Some(size), weak, m));
        }
        acc
    });
    acc.record("expansion", AuditMode::Sampled)
}

/// Pairs `{x, y}` inside `I` with both `{x, y}` and `{g(x), g(y)}` edges.
pub fn local_bijection_count(g: &Graph, pairs: &[(usize, usize)]) -> usize {
    let mut c = 0;
    for (k, &(x, gx)) in pairs.iter().enumerate() {
        for &(y, gy) in &pairs[k + 1..] {
            if g.has_edge(x, y) && g.has_edge(gx, gy) {
                c += 1;
            }
        }
    }
    c
}

/// Margin of one bijection `g: I -> J` (given as pairs) against
/// `0.001 |I|² p / 2`.
pub fn local_bijection_margin(g: &Graph, p: f64, pairs: &[(usize, usize)]) -> f64 {
    let k = pairs.len() as f64;
    0.001 * k * k / 2.0 * p - local_bijection_count(g, pairs) as f64
}

/// Random disjoint `I, J` inside a neighborhood with `|I| = |J| >= np/log n`
/// and a random bijection between them.
pub fn audit_local_bijection(g: &Graph, a: &AuditParams) -> EventRecord {
    let n = g.n();
    let np = nf(g) * a.p;
    let min_size = (np / nf(g).ln()).ceil().max(1.0) as usize;
    let centers: Vec<usize> = if n <= BIJECTION_MAX_CENTERS {
        (0..n).collect()
    } else {
        let mut rng = stream_rng(a.seed, TAG_BIJECTION, u64::MAX);
        let mut c = index::sample(&mut rng, n, BIJECTION_MAX_CENTERS).into_vec();
        c.sort_unstable();
        c
    };
    let acc = ordered(centers.len(), |ci| {
        let u = centers[ci];
        let mut acc = Acc::default();
        let nb: Vec<usize> = g.neighbors(u).collect();
        let max_size = nb.len() / 2;
        if max_size < min_size {
            return acc;
        }
        let mut rng = stream_rng(a.seed, TAG_BIJECTION, u as u64);
        for _ in 0..a.trials {
            let s = rng.random_range(min_size..=max_size);
            let mut pick = random_subset(&mut rng, &nb, 2 * s);
            pick.shuffle(&mut rng);
            let (i, j) = pick.split_at(s);
            let pairs: Vec<(usize, usize)> = i.iter().copied().zip(j.iter().copied()).collect();
            let c = local_bijection_count(g, &pairs) as f64;
            let allowed = a.slack_scale * 0.001 * (s * s) as f64 / 2.0 * a.p;
            let m = allowed - c;
            acc.push(m, || w(&[u], Some(s), c, m));
        }
        acc
    });
    acc.record("local_bijection", AuditMode::Sampled)
}

/// Margin of one cut: `(log n / sqrt(np)) |J| np - | e(J, J^c) - |J|(n-|J|)p |`.
pub fn cut_margin(g: &Graph, p: f64, j: &VertexSet, slack_scale: f64) -> (f64, f64) {
    let n = nf(g);
    let np = n * p;
    let k = j.len() as f64;
    let e = g.edges_between(j) as f64;
    let slack = slack_scale * n.ln() / np.sqrt() * k * np;
    (e, slack - (e - k * (n - k) * p).abs())
}

/// Cut sizes for `J = ∅`, `J = [n]`, and `trials` random `J`.
pub fn audit_cut_edges(g: &Graph, a: &AuditParams) -> EventRecord {
    let n = g.n();
    let acc = ordered(a.trials + 2, |t| {
        let mut acc = Acc::default();
        let j = match t {
            0 => VertexSet::new(n),
            1 => VertexSet::full(n),
            _ => {
                let mut rng = stream_rng(a.seed, TAG_CUT, t as u64);
                let size = rng.random_range(1..=n.max(1));
                let all: Vec<usize> = (0..n).collect();
                VertexSet::from_iter_in(n, random_subset(&mut rng, &all, size))
            }
        };
        let (e, m) = cut_margin(g, a.p, &j, a.slack_scale);
        acc.push(m, || w(&[], Some(j.len()), e, m));
        acc
    });
    acc.record("cut_edges", AuditMode::Sampled)
}

/// Bernstein tail bound `2 exp(-(t²/2) / (mq + t))`.
pub fn bernstein_tail(m: u64, q: f64, t: f64) -> f64 {
    2.0 * (-(t * t / 2.0) / (m as f64 * q + t)).exp()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TypicalityReport {
    pub n: usize,
    pub p: f64,
    pub c_const: f64,
    pub trials: usize,
    pub seed: u64,
    pub holds: bool,
    pub events: Vec<EventRecord>,
}

impl TypicalityReport {
    pub fn event(&self, name: &str) -> Option<&EventRecord> {
        self.events.iter().find(|e| e.event == name)
    }
}

pub fn audit_all(g: &Graph, a: &AuditParams) -> TypicalityReport {
    let events = vec![
        audit_degrees(g, a),
        audit_pair_codegree(g, a),
        audit_triple_codegree(g, a),
        audit_subgraph_edges(g, a),
        audit_expansion(g, a),
        audit_local_bijection(g, a),
        audit_cut_edges(g, a),
    ];
    TypicalityReport {
        n: g.n(),
        p: a.p,
        c_const: C_CONST,
        trials: a.trials,
        seed: a.seed.0,
        holds: events.iter().all(|e| e.holds),
        events,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: f64, trials: usize) -> AuditParams {
        AuditParams::new(p, trials, RngSeed(5))
    }

    #[test]
    fn degrees_edgeless_and_complete() {
        let r = audit_degrees(&Graph::empty(100), &params(0.5, 1));
        assert!(!r.holds);
        assert_eq!(r.violations, 100);
        // |100 - 99| = 1 against slack ln(100) sqrt(99).
        let r = audit_degrees(&Graph::complete(100), &params(0.99, 1));
        assert!(r.holds);
        let slack = 100f64.ln() * 99f64.sqrt();
        assert!((r.margin.unwrap() - (slack - 1.0)).abs() < 1e-9);
        assert!((r.raw_degree_margin.unwrap() - slack).abs() < 1e-9);
    }

    #[test]
    fn pair_codegree_small_cases() {
        let r = audit_pair_codegree(&Graph::empty(100), &params(0.2, 1));
        assert!(!r.holds);
        // K20, p = 0.95: codegree 18 vs np² = 18.05, slack ln(20)^-0.01 * 18.05.
        let r = audit_pair_codegree(&Graph::complete(20), &params(0.95, 1));
        let np2 = 20.0 * 0.95 * 0.95;
        let slack = 20f64.ln().powf(-C_CONST) * np2;
        assert!(r.holds);
        assert!((r.margin.unwrap() - (slack - (np2 - 18.0f64).abs())).abs() < 1e-9);
    }

    #[test]
    fn triple_small_cases() {
        // K6: any three vertices have 3 common neighbors; bound 6 * 0.01 / 10.
        let r = audit_triple_codegree(&Graph::complete(6), &params(0.1, 1));
        assert!(!r.holds);
        assert_eq!(r.checked, 20);
        assert_eq!(r.violations, 20);
        assert_eq!(r.witnesses[0].observed, 3.0);
        assert!((r.margin.unwrap() - (0.006 - 3.0)).abs() < 1e-12);
        let r = audit_triple_codegree(&Graph::empty(30), &params(0.1, 1));
        assert!(r.holds);
        assert_eq!(r.checked, 4060);
    }

    #[test]
    fn triple_pruning_matches_plain_scan() {
        let g = Graph::sample_gnp(60, 0.3, RngSeed(9)).unwrap();
        let a = params(0.3, 1);
        let r = audit_triple_codegree(&g, &a);
        let bound = 60.0 * 0.09 / 10.0;
        let (mut worst, mut bad) = (usize::MIN, 0u64);
        for x in 0..60 {
            for y in x + 1..60 {
                for z in y + 1..60 {
                    let c = (0..60)
                        .filter(|&i| g.has_edge(i, x) && g.has_edge(i, y) && g.has_edge(i, z))
                        .count();
                    worst = worst.max(c);
                    bad += (c as f64 > bound) as u64;
                }
            }
        }
        assert_eq!(r.checked, 34220);
        assert_eq!(r.violations, bad);
        assert!((r.margin.unwrap() - (bound - worst as f64)).abs() < 1e-12);
    }

    #[test]
    fn subgraph_edges_trivial_sets() {
        let r = audit_subgraph_edges(&Graph::complete(20), &params(1.0, 3));
        assert!(r.holds);
        assert!((r.margin.unwrap() - 8.0 * 20f64.powf(1.5)).abs() < 1e-9);
        assert_eq!(r.checked, 20 * 5);
    }

    #[test]
    fn expansion_edgeless_is_vacuous() {
        let r = audit_expansion(&Graph::empty(50), &params(0.5, 4));
        assert!(r.holds);
        assert_eq!(r.margin, Some(0.0));
    }

    #[test]
    fn expansion_single_vertex_in_k50() {
        // p = 0.9: np/3 = 15, every w keeps >= 47 neighbors in N(v) \ J while
        // the limit is 0.999 (45 - |J|) 0.9 < 41: nobody is weak.
        let r = audit_expansion(&Graph::complete(50), &params(0.9, 8));
        assert!(r.holds);
        assert_eq!(r.violations, 0);
    }

    #[test]
    fn local_bijection_extremes() {
        let r = audit_local_bijection(&Graph::empty(40), &params(0.5, 4));
        assert!(r.holds);
        assert_eq!(r.checked, 0);
        let r = audit_local_bijection(&Graph::complete(30), &params(0.1, 4));
        assert!(!r.holds);
    }

    #[test]
    fn cut_trivial_sets() {
        let g = Graph::complete(100);
        let (e, m) = cut_margin(&g, 0.99, &VertexSet::new(100), 1.0);
        assert_eq!((e, m), (0.0, 0.0));
        let (e, m) = cut_margin(&g, 0.99, &VertexSet::from_iter_in(100, [3]), 1.0);
        assert_eq!(e, 99.0);
        let slack = 100f64.ln() / 99f64.sqrt() * 99.0;
        assert!((m - (slack - (99.0 - 99.0 * 0.99f64).abs())).abs() < 1e-9);
        assert!(audit_cut_edges(&g, &params(0.99, 16)).holds);
    }

    #[test]
    fn bernstein_values() {
        assert!((bernstein_tail(100, 0.5, 10.0) - 2.0 * (-5.0f64 / 6.0).exp()).abs() < 1e-15);
        assert!(bernstein_tail(10, 0.5, 1e6) < 1e-300);
        let mut last = f64::INFINITY;
        for t in 1..200 {
            let b = bernstein_tail(50, 0.3, t as f64);
            assert!(b < last);
            last = b;
        }
    }

    #[test]
    fn audits_are_deterministic() {
        let g = Graph::sample_gnp(200, 0.2, RngSeed(1)).unwrap();
        let a = params(0.2, 6);
        assert_eq!(audit_all(&g, &a), audit_all(&g, &a));
    }
}
