//! Reconstruction engines: exact deck assembly, exhaustive enumeration at
//! tiny sizes, the fingerprint adjacency classifier and counterexample
//! search.

pub mod assembly;
pub mod counterexample;
pub mod enumerate;
pub mod fingerprint;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use assembly::{exact_assembly, AssemblyResult, MAX_ASSEMBLY_N};
pub use counterexample::{counterexample_for, counterexample_search, Counterexample, SearchReport};
pub use enumerate::{enumeration, Enumeration, MAX_ENUMERATION_N};
pub use fingerprint::{
    fingerprint_classify, score_against, AdjacencyVerdict, ClassifierScore, FingerprintIndex,
    Verdict,
};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::shotgun::{extract_deck, DeckMode};

pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// Assembly is only recommended up to this size.
pub const ASSEMBLY_ORACLE_MAX_N: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleMode {
    Enumeration,
    Assembly,
}

impl fmt::Display for OracleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OracleMode::Enumeration => "enumeration",
            OracleMode::Assembly => "assembly",
        })
    }
}

impl FromStr for OracleMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "enumeration" => Ok(OracleMode::Enumeration),
            "assembly" => Ok(OracleMode::Assembly),
            other => Err(Error::InvalidParameter(format!(
                "unknown oracle mode {other:?} (expected enumeration or assembly)"
            ))),
        }
    }
}

/// Every graph with `g`'s unlabeled deck is isomorphic to `g`.
pub fn is_reconstructable_bruteforce(g: &Graph, mode: OracleMode, budget: u64) -> Result<bool> {
    let n = g.n();
    if n == 0 {
        return Err(Error::NoVertices);
    }
    match mode {
        OracleMode::Enumeration => {
            if n > MAX_ENUMERATION_N {
                return Err(Error::TooManyVertices {
                    n,
                    max: MAX_ENUMERATION_N,
                });
            }
            let deck = extract_deck(g, DeckMode::Unlabeled)?;
            Ok(enumeration(n).by_deck[&deck].len() == 1)
        }
        OracleMode::Assembly => {
            if n > ASSEMBLY_ORACLE_MAX_N {
                return Err(Error::TooManyVertices {
                    n,
                    max: ASSEMBLY_ORACLE_MAX_N,
                });
            }
            let r = exact_assembly(&extract_deck(g, DeckMode::Unlabeled)?, budget)?;
            if !r.exhausted {
                return Err(Error::BudgetExhausted { budget });
            }
            Ok(r.codes.len() == 1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn triangle_and_twin_pair() {
        for mode in [OracleMode::Enumeration, OracleMode::Assembly] {
            assert!(is_reconstructable_bruteforce(&Graph::complete(3), mode, DEFAULT_BUDGET).unwrap());
        }
        assert!(!is_reconstructable_bruteforce(&fixtures::gamma(), OracleMode::Assembly, DEFAULT_BUDGET)
            .unwrap());
        assert!(is_reconstructable_bruteforce(&fixtures::gamma(), OracleMode::Enumeration, 1).is_err());
    }

    #[test]
    fn six_vertex_modes_agree() {
        for s in 0..30 {
            let g = Graph::sample_gnp(6, 0.5, crate::RngSeed(s)).unwrap();
            let a = is_reconstructable_bruteforce(&g, OracleMode::Enumeration, DEFAULT_BUDGET).unwrap();
            let b = is_reconstructable_bruteforce(&g, OracleMode::Assembly, DEFAULT_BUDGET).unwrap();
            assert_eq!(a, b, "seed {s}");
        }
    }
}
