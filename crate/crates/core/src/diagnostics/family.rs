//! Per-vertex neighborhood isomorphisms `f_i`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::canon::{find_fixed_point_isomorphism, VertexMapping};
use crate::error::{Error, Result};
use crate::graph::{Graph, RootedGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    /// `f_i` maps `N_Γ(i)` onto `N_Γ̃(i)` and fixes `i`.
    FixedPoint,
    /// `Γ̃ = σ(Γ)` and `f_i = σ` restricted to `N_Γ(i)`, onto `N_Γ̃(σ(i))`.
    Relabeling,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapSource {
    Hint,
    Search,
    Relabeling,
}

#[derive(Clone, Debug)]
pub struct IsoFamily {
    kind: FamilyKind,
    maps: Vec<VertexMapping>,
    sources: Vec<MapSource>,
}

impl IsoFamily {
    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.maps.len()
    }

    pub fn map(&self, i: usize) -> &VertexMapping {
        &self.maps[i]
    }

    pub fn sources(&self) -> &[MapSource] {
        &self.sources
    }

    /// `f_i(z)`, or `None` when `z` is not in `N_Γ(i)`.
    #[inline]
    pub fn apply(&self, i: usize, z: usize) -> Option<usize> {
        self.maps[i].get(z)
    }

    /// Image of an unordered pair, sorted.
    #[inline]
    pub fn apply_pair(&self, i: usize, v: usize, w: usize) -> Option<(usize, usize)> {
        let (a, b) = (self.apply(i, v)?, self.apply(i, w)?);
        Some((a.min(b), a.max(b)))
    }

    /// Build a family for `(Γ, Γ̃)`. For each center a hint is used when it is
    /// a valid fixed-point isomorphism (the center is added if missing);
    /// otherwise one is searched for.
    pub fn build(
        gamma: &Graph,
        gamma_tilde: &Graph,
        hints: Option<&BTreeMap<usize, VertexMapping>>,
    ) -> Result<IsoFamily> {
        if gamma.n() != gamma_tilde.n() {
            return Err(Error::SizeMismatch {
                left: gamma.n(),
                right: gamma_tilde.n(),
            });
        }
        let built: Vec<Result<(VertexMapping, MapSource)>> = (0..gamma.n())
            .into_par_iter()
            .map(|i| {
                let a = gamma.neighborhood(i, 1)?;
                let b = gamma_tilde.neighborhood(i, 1)?;
                if let Some(h) = hints.and_then(|h| h.get(&i)).and_then(|h| complete_hint(h, i)) {
                    if h.is_rooted_isomorphism(&a, &b) {
                        return Ok((h, MapSource::Hint));
                    }
                }
                find_fixed_point_isomorphism(&a, &b)
                    .map(|m| (m, MapSource::Search))
                    .ok_or(Error::NoFixedPointIsomorphism { vertex: i + 1 })
            })
            .collect();
        let mut maps = Vec::with_capacity(built.len());
        let mut sources = Vec::with_capacity(built.len());
        for r in built {
            let (m, s) = r?;
            maps.push(m);
            sources.push(s);
        }
        Ok(IsoFamily {
            kind: FamilyKind::FixedPoint,
            maps,
            sources,
        })
    }

    /// `f_i` = identity on `N_Γ[i]`; valid for `(Γ, Γ)`.
    pub fn identity(gamma: &Graph) -> IsoFamily {
        let maps = (0..gamma.n())
            .map(|i| VertexMapping::identity(std::iter::once(i).chain(gamma.neighbors(i))))
            .collect();
        IsoFamily {
            kind: FamilyKind::FixedPoint,
            maps,
            sources: vec![MapSource::Hint; gamma.n()],
        }
    }

    /// Family induced by a relabeling: `Γ̃ = σ(Γ)`, `f_i = σ|N_Γ(i)`.
    pub fn from_relabeling(gamma: &Graph, sigma: &[usize]) -> Result<IsoFamily> {
        if sigma.len() != gamma.n() {
            return Err(Error::SizeMismatch {
                left: gamma.n(),
                right: sigma.len(),
            });
        }
        let mut seen = vec![false; sigma.len()];
        for &s in sigma {
            if s >= sigma.len() || std::mem::replace(&mut seen[s], true) {
                return Err(Error::InvalidParameter("sigma is not a permutation".into()));
            }
        }
        let maps = (0..gamma.n())
            .map(|i| {
                let mut pairs = vec![(i, sigma[i])];
                pairs.extend(gamma.neighbors(i).map(|z| (z, sigma[z])));
                VertexMapping::new(pairs).expect("permutation restricted to a set")
            })
            .collect();
        Ok(IsoFamily {
            kind: FamilyKind::Relabeling,
            maps,
            sources: vec![MapSource::Relabeling; gamma.n()],
        })
    }

    /// Every `f_i` is an isomorphism between the right pair of cards.
    pub fn verify(&self, gamma: &Graph, gamma_tilde: &Graph) -> bool {
        (0..self.n()).into_par_iter().all(|i| {
            let target = match self.kind {
                FamilyKind::FixedPoint => i,
                FamilyKind::Relabeling => match self.apply(i, i) {
                    Some(t) => t,
                    None => return false,
                },
            };
            let (Ok(a), Ok(b)) = (gamma.neighborhood(i, 1), gamma_tilde.neighborhood(target, 1))
            else {
                return false;
            };
            let m = &self.maps[i];
            match self.kind {
                FamilyKind::FixedPoint => m.is_rooted_isomorphism(&a, &b),
                FamilyKind::Relabeling => relabel_ok(m, &a, &b),
            }
        })
    }
}

/// Injective, center to center, edge-preserving, equal edge counts: an
/// isomorphism between the two cards.
fn relabel_ok(m: &VertexMapping, a: &RootedGraph, b: &RootedGraph) -> bool {
    if m.len() != a.labels.len() || a.labels.len() != b.labels.len() {
        return false;
    }
    if m.get(a.center()) != Some(b.center()) {
        return false;
    }
    let mut local = vec![0usize; a.labels.len()];
    for &(x, y) in m.pairs() {
        match (a.local_index(x), b.local_index(y)) {
            (Some(lx), Some(ly)) => local[lx] = ly,
            _ => return false,
        }
    }
    crate::canon::is_isomorphism(&a.graph, &b.graph, &local)
}

fn complete_hint(h: &VertexMapping, center: usize) -> Option<VertexMapping> {
    match h.get(center) {
        Some(c) if c == center => Some(h.clone()),
        Some(_) => None,
        None => {
            let mut pairs = h.pairs().to_vec();
            pairs.push((center, center));
            VertexMapping::new(pairs).ok()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn identity_family() {
        let g = Graph::sample_gnp(30, 0.3, crate::RngSeed(2)).unwrap();
        let f = IsoFamily::build(&g, &g, None).unwrap();
        assert!(f.verify(&g, &g));
        assert!((0..30).all(|i| f.map(i).is_identity()));
    }

    #[test]
    fn twin_pair_hints_are_used() {
        let (a, b) = (fixtures::gamma(), fixtures::gamma_tilde());
        let f = IsoFamily::build(&a, &b, Some(&fixtures::hints())).unwrap();
        assert!(f.sources().iter().all(|&s| s == MapSource::Hint));
        assert!(f.verify(&a, &b));
        // f_2 = {1->9, 3->8, 4->4, 5->5}, f_9 = {6->6, 7->7, 8->3, 10->2}
        assert_eq!(f.apply(1, 0), Some(8));
        assert_eq!(f.apply(1, 2), Some(7));
        assert_eq!(f.apply(8, 7), Some(2));
        assert_eq!(f.apply(8, 9), Some(1));
    }

    #[test]
    fn bad_hint_falls_back_to_search() {
        let (a, b) = (fixtures::gamma(), fixtures::gamma_tilde());
        let mut h = fixtures::hints();
        h.insert(3, VertexMapping::identity([1, 2, 3, 4, 5]));
        let f = IsoFamily::build(&a, &b, Some(&h)).unwrap();
        assert_eq!(f.sources()[3], MapSource::Search);
        assert!(f.verify(&a, &b));
    }

    #[test]
    fn no_family_for_triangle_vs_path() {
        let k3 = Graph::complete(3);
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(matches!(
            IsoFamily::build(&k3, &p3, None),
            Err(Error::NoFixedPointIsomorphism { .. })
        ));
    }

    #[test]
    fn relabeling_family_verifies() {
        let g = Graph::sample_gnp(25, 0.4, crate::RngSeed(4)).unwrap();
        let sigma: Vec<usize> = (0..25).map(|v| (v * 7 + 3) % 25).collect();
        let h = g.relabel(&sigma);
        let f = IsoFamily::from_relabeling(&g, &sigma).unwrap();
        assert!(f.verify(&g, &h));
        assert!(!f.verify(&g, &g));
    }
}
