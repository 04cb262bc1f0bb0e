//! The 10-vertex pair of non-isomorphic graphs whose 1-neighborhoods agree
//! center by center, with hand-checked per-center isomorphisms.

use std::collections::BTreeMap;

use crate::canon::VertexMapping;
use crate::graph::Graph;
use crate::io::{parse_edge_list, parse_hints};

pub const GAMMA: &str = include_str!("../../../data/twin_gamma.txt");
pub const GAMMA_TILDE: &str = include_str!("../../../data/twin_gamma_tilde.txt");
pub const HINTS: &str = include_str!("../../../data/twin_hints.txt");

pub fn gamma() -> Graph {
    parse_edge_list(GAMMA).expect("bundled edge list")
}

pub fn gamma_tilde() -> Graph {
    parse_edge_list(GAMMA_TILDE).expect("bundled edge list")
}

pub fn hints() -> BTreeMap<usize, VertexMapping> {
    parse_hints(HINTS, 10).expect("bundled hints")
}
