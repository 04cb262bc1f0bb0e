//! Library results checked against slow, independent recomputations.

mod common;

use std::collections::BTreeMap;

use common::*;
use shotgun_core::diagnostics::{self, IsoFamily};
use shotgun_core::entropy;
use shotgun_core::reconstruct::enumerate;
use shotgun_core::*;

#[test]
fn canonical_codes_match_permutation_search_up_to_eight() {
    // Random pairs at 7 and 8 vertices, with and without a shared class.
    for s in 0..200u64 {
        let n = 7 + (s % 2) as usize;
        let g = Graph::sample_gnp(n, 0.4, RngSeed(s)).unwrap();
        let perm: Vec<usize> = (0..n).map(|v| (v * 3 + s as usize) % n).collect();
        let h = if s % 3 == 0 {
            g.relabel(&perm)
        } else {
            Graph::sample_gnp(n, 0.4, RngSeed(10_000 + s)).unwrap()
        };
        assert_eq!(are_isomorphic(&g, &h).unwrap(), brute_isomorphic(&g, &h), "seed {s}");
    }
}

#[test]
fn twin_pair_full_permutation_scan() {
    // Every one of the 10! relabelings of the second graph differs from the first.
    let (a, b) = (fixtures::gamma(), fixtures::gamma_tilde());
    let mut perm: Vec<usize> = (0..10).collect();
    let mut count = 0u64;
    loop {
        count += 1;
        let hit = (0..10).all(|u| (u + 1..10).all(|v| a.has_edge(u, v) == b.has_edge(perm[u], perm[v])));
        assert!(!hit);
        if !next_permutation(&mut perm) {
            break;
        }
    }
    assert_eq!(count, 3_628_800);
}

#[test]
fn focus_buckets_match_full_scan() {
    // Relabeling instance: swap two non-adjacent vertices with different
    // neighborhoods.
    let g = Graph::sample_gnp(30, 0.4, RngSeed(77)).unwrap();
    let (x, y) = (0..30)
        .flat_map(|x| (x + 1..30).map(move |y| (x, y)))
        .find(|&(x, y)| !g.has_edge(x, y) && g.neighbor_set(x) != g.neighbor_set(y))
        .unwrap();
    let mut sigma: Vec<usize> = (0..30).collect();
    sigma.swap(x, y);
    let fam = IsoFamily::from_relabeling(&g, &sigma).unwrap();
    assert!(fam.verify(&g, &g.relabel(&sigma)));
    let rep = diagnostics::focused_pairs(&g, &fam, 0.4, 0.5, true);

    let mut focused = 0u64;
    let mut a = 0u64;
    for v in 0..30 {
        for w in v + 1..30 {
            let mut buckets: BTreeMap<(usize, usize), usize> = BTreeMap::new();
            for i in 0..30 {
                if g.has_edge(i, v) && g.has_edge(i, w) {
                    let (s, t) = (sigma[v], sigma[w]);
                    *buckets.entry((s.min(t), s.max(t))).or_default() += 1;
                    a += 1;
                }
            }
            assert_eq!(
                diagnostics::pair_buckets(&g, &fam, v, w),
                buckets.clone().into_iter().collect::<Vec<_>>()
            );
            if buckets.values().max().is_some_and(|&m| m as f64 >= rep.threshold) {
                focused += 1;
            }
        }
    }
    assert_eq!(rep.focused_count, focused);
    assert_eq!(rep.a_size, a);
}

#[test]
fn focus_multigraph_recount() {
    let (g, h) = (fixtures::gamma(), fixtures::gamma_tilde());
    let fam = IsoFamily::build(&g, &h, Some(&fixtures::hints())).unwrap();
    let hints = fixtures::hints();
    // With every neighbor of 2 in J_2, Q counts pairs of neighbors whose
    // hinted images of 2 differ.
    let nb: Vec<usize> = g.neighbors(1).collect();
    let image = |i: usize| hints[&i].get(1);
    let mut q = 0;
    for (k, &i) in nb.iter().enumerate() {
        for &j in &nb[k + 1..] {
            q += u64::from(image(i) != image(j));
        }
    }
    let m = diagnostics::focus_multigraph(&g, &fam, 0.3, 1.0, 1, 0.0);
    assert_eq!(m.q, q);
    assert_eq!(q, 5);
}

#[test]
fn binomial_entropy_direct_sum() {
    // Eleven terms with exact binomial coefficients.
    let p: f64 = 0.5;
    let mut c = 1f64;
    let mut h = 0f64;
    for k in 0..=10u32 {
        let pk = c * p.powi(k as i32) * (1.0 - p).powi(10 - k as i32);
        h -= pk * pk.log2();
        c = c * (10 - k) as f64 / (k + 1) as f64;
    }
    assert!((entropy::h2_binomial(10, 0.5) - h).abs() < 1e-12);
}

#[test]
fn card_entropy_bound_dominates_three_vertex_cards() {
    // G(3, 1/2): the card of vertex 0 is determined by its degree and, at
    // degree 2, whether the other edge is present.
    let mut dist: BTreeMap<(u32, bool), f64> = BTreeMap::new();
    for mask in 0..8u32 {
        let g = enumerate::graph_from_mask(3, mask);
        let key = (g.degree(0) as u32, g.degree(0) == 2 && g.has_edge(1, 2));
        // Up to isomorphism the degree-1 cards coincide.
        *dist.entry(key).or_default() += 1.0 / 8.0;
    }
    let h: f64 = dist.values().map(|q| -q * q.log2()).sum();
    assert!(h <= entropy::h2_card_upper(3, 0.5) + 1e-12);
}
