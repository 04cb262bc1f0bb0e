//! Deterministic inputs for the kernel benchmarks.

use shotgun_core::diagnostics::IsoFamily;
use shotgun_core::{Graph, RngSeed};

pub const SEED: RngSeed = RngSeed(0xbe7c);

pub fn gnp(n: usize, p: f64) -> Graph {
    Graph::sample_gnp(n, p, SEED).expect("valid benchmark parameters")
}

/// A graph, its image under a fixed rotation of the labels, and the family
/// induced by that rotation.
pub fn relabeled(n: usize, p: f64) -> (Graph, Graph, IsoFamily) {
    let g = gnp(n, p);
    let sigma: Vec<usize> = (0..n).map(|v| (v + 1) % n).collect();
    let fam = IsoFamily::from_relabeling(&g, &sigma).expect("permutation of the right length");
    let h = g.relabel(&sigma);
    (g, h, fam)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabeled_family_verifies() {
        let (g, h, fam) = relabeled(30, 0.3);
        assert!(fam.verify(&g, &h));
    }
}
