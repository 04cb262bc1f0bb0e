//! Reconstruction of graphs from their vertex 1-neighborhoods.

pub mod canon;
pub mod diagnostics;
pub mod entropy;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod io;
pub mod reconstruct;
pub mod rng;
pub mod shotgun;
pub mod typicality;
pub mod vertex_set;

pub use canon::{
    are_isomorphic, canonical_code, find_fixed_point_isomorphism, rooted_code, CanonicalCode,
    VertexMapping,
};
pub use error::{Error, Result};
pub use graph::{Graph, RootedGraph};
pub use rng::RngSeed;
pub use vertex_set::VertexSet;
pub use shotgun::{center_identifiable, decks_equal, extract_deck, Card, Deck, DeckMode};
