//! Per-instance diagnostics for a pair of graphs with equal rooted decks and
//! a family of center-fixing card isomorphisms.
//!
//! Everything here is 0-based; [`DiagnosticsReport`] is the 1-based view.

pub mod family;
pub mod focus;
pub mod matching;
pub mod permutation;

use serde::Serialize;

pub use family::{FamilyKind, IsoFamily, MapSource};
pub use focus::{
    focus_multigraph, focused_pairs, jensen_intersection_bound, pair_buckets, FocusMultigraph,
    FocusReport, JensenBound,
};
pub use matching::{bootstrap, match_partition, Bootstrap, MatchPartition};
pub use permutation::{e2_holds, e3_margin, mismatch_w, vote_permutation, VoteResult, E3};

use crate::graph::Graph;

pub const DEFAULT_EPSILON: f64 = 0.1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VoteSummary {
    pub moved: usize,
    pub injective: usize,
    pub isolated: usize,
    pub mean_share: f64,
    pub majority: usize,
    /// Voted permutation, 1-based; only when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pi: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatchSummary {
    pub p_size: u64,
    pub m_size: u64,
    pub v_size: u64,
    pub v_unmatched: u64,
    pub j_m_size: usize,
    pub j_m_complement: Vec<usize>,
    pub why_v_violations: u64,
    pub why_v_examples: Vec<[[usize; 2]; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BootstrapSummary {
    pub v: usize,
    pub i_v_size: usize,
    pub e_v_size: usize,
    pub union_size: usize,
    pub growth_holds: Option<bool>,
    pub i_v: Vec<usize>,
    pub e_v: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagnosticsReport {
    pub n: usize,
    pub p: f64,
    pub epsilon: f64,
    pub family: FamilyKind,
    pub hints_used: usize,
    pub focus: FocusReport,
    pub e1: bool,
    pub vote: VoteSummary,
    pub e2_supported: usize,
    pub e2: bool,
    pub e3_matched: u64,
    pub e3: bool,
    pub w_size: usize,
    pub matching: MatchSummary,
    pub bootstrap: Vec<BootstrapSummary>,
}

#[derive(Clone, Debug, Default)]
pub struct DiagnosticsOptions {
    /// 0-based centers for which `I_v`, `E_v` are reported.
    pub bootstrap_for: Vec<usize>,
    pub include_pi: bool,
}

pub fn run(
    gamma: &Graph,
    family: &IsoFamily,
    p: f64,
    epsilon: f64,
    opts: &DiagnosticsOptions,
) -> DiagnosticsReport {
    let focus = focused_pairs(gamma, family, p, epsilon, false);
    let vote = vote_permutation(gamma, family);
    let e2_supported = permutation::e2_supported(gamma, family, &vote.pi, p, epsilon);
    let e3 = e3_margin(gamma, family, p);
    let w = mismatch_w(gamma, family, &vote.pi);
    let part = match_partition(gamma, family, p);
    let n = gamma.n();

    let voters: Vec<_> = vote.votes.iter().filter(|v| v.voters > 0).collect();
    let vote_summary = VoteSummary {
        moved: vote.moved(),
        injective: vote.injective.len(),
        isolated: n - voters.len(),
        mean_share: if voters.is_empty() {
            0.0
        } else {
            voters.iter().map(|v| v.share()).sum::<f64>() / voters.len() as f64
        },
        majority: voters.iter().filter(|v| v.share() > 0.5).count(),
        pi: opts
            .include_pi
            .then(|| vote.pi.iter().map(|x| x + 1).collect()),
    };
    let matching = MatchSummary {
        p_size: part.p_size,
        m_size: part.m_size,
        v_size: part.v_size,
        v_unmatched: part.v_unmatched,
        j_m_size: part.j_m.len(),
        j_m_complement: part.j_m_complement.iter().map(|x| x + 1).collect(),
        why_v_violations: part.why_v_violations,
        why_v_examples: part
            .why_v_examples
            .iter()
            .map(|&((a, b), (c, d))| [[a + 1, b + 1], [c + 1, d + 1]])
            .collect(),
    };
    let boots = opts
        .bootstrap_for
        .iter()
        .map(|&v| {
            let b = bootstrap(gamma, family, &part, v);
            BootstrapSummary {
                v: v + 1,
                i_v_size: b.i_v.len(),
                e_v_size: b.e_v.len(),
                union_size: b.union_size,
                growth_holds: b.growth_holds,
                i_v: b.i_v.iter().map(|x| x + 1).collect(),
                e_v: b.e_v.iter().map(|&(x, y)| [x + 1, y + 1]).collect(),
            }
        })
        .collect();

    DiagnosticsReport {
        n,
        p,
        epsilon,
        family: family.kind(),
        hints_used: family
            .sources()
            .iter()
            .filter(|s| **s == MapSource::Hint)
            .count(),
        e1: focus.e1_holds,
        focus,
        vote: vote_summary,
        e2: e2_supported as f64 >= (1.0 - epsilon) * n as f64,
        e2_supported,
        e3_matched: e3.matched,
        e3: e3.holds(epsilon),
        w_size: w.len(),
        matching,
        bootstrap: boots,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn twin_pair_report() {
        let (a, b) = (fixtures::gamma(), fixtures::gamma_tilde());
        let f = IsoFamily::build(&a, &b, Some(&fixtures::hints())).unwrap();
        let opts = DiagnosticsOptions {
            bootstrap_for: vec![0, 1],
            include_pi: true,
        };
        let r = run(&a, &f, 0.3, DEFAULT_EPSILON, &opts);
        assert_eq!(r.hints_used, 10);
        assert_eq!((r.matching.m_size, r.matching.p_size), (12, 26));
        assert_eq!(r.e3_matched, 12);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"m_size\":12"));
    }
}
