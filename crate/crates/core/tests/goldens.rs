//! Values produced by the implementation itself and frozen; a change here
//! means behavior changed.

use shotgun_core::reconstruct::{self, enumeration};
use shotgun_core::*;

#[test]
fn deck_collisions_up_to_seven() {
    for n in 1..=5 {
        assert_eq!(enumeration(n).collisions().count(), 0, "n = {n}");
    }
    let six: Vec<usize> = enumeration(6).collisions().map(<[_]>::len).collect();
    assert_eq!(six, vec![2; 6]);
    let e7 = enumeration(7);
    assert_eq!(e7.classes.len(), 1044);
    assert_eq!(e7.by_deck.len(), 958);
    assert_eq!(e7.collisions().count(), 66);
    assert_eq!(e7.collisions().map(<[_]>::len).sum::<usize>(), 152);
}

#[test]
fn smallest_collision_is_hexagon_and_two_triangles() {
    let c6 = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
    let tt = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
    let (a, b) = (canonical_code(&c6).unwrap(), canonical_code(&tt).unwrap());
    // Their decks differ: C6 cards are paths, the triangles' cards triangles.
    assert!(!enumeration(6).collisions().any(|c| c.contains(&a) && c.contains(&b)));
}

#[test]
fn sparse_counterexample_count() {
    let r = reconstruct::counterexample_search(9, 0.25, 200, RngSeed(1), reconstruct::DEFAULT_BUDGET)
        .unwrap();
    assert_eq!(r.incomplete, 0);
    assert_eq!(r.hits.len(), 169);
    for h in &r.hits {
        let da = extract_deck(&h.graph, DeckMode::Unlabeled).unwrap();
        let db = extract_deck(&h.other, DeckMode::Unlabeled).unwrap();
        assert!(decks_equal(&da, &db).unwrap().equal);
        assert!(!are_isomorphic(&h.graph, &h.other).unwrap());
    }
}

#[test]
fn dense_complete_graph_has_no_counterexample() {
    let r = reconstruct::counterexample_search(5, 1.0, 10, RngSeed(3), 1_000).unwrap();
    assert!(r.hits.is_empty());
}
