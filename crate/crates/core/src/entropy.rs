//! Shannon entropies (in bits) of G(n, p) and of its 1-neighborhood cards.
//!
//! Every quantity is the explicit finite expression; asymptotic error terms
//! are dropped.

use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

const LN_2: f64 = std::f64::consts::LN_2;

/// Entropy of a Bernoulli(p) variable, with `0 log 0 = 0`.
pub fn h2_bernoulli(p: f64) -> f64 {
    fn term(x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            -x * x.log2()
        }
    }
    term(p) + term(1.0 - p)
}

/// `ln C(n, k)`.
pub fn ln_choose(n: u64, k: u64) -> f64 {
    debug_assert!(k <= n);
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

pub fn ln_factorial(n: u64) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

/// `log2 m!`.
pub fn log2_factorial(m: u64) -> f64 {
    ln_factorial(m) / LN_2
}

/// Binomial(n, p) log-pmf at every `k`, as natural logs.
fn binomial_ln_pmf(n: u64, p: f64) -> Vec<f64> {
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    (0..=n)
        .map(|k| ln_choose(n, k) + k as f64 * lp + (n - k) as f64 * lq)
        .collect()
}

/// Entropy of Binomial(n, p).
pub fn h2_binomial(n: u64, p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 || n == 0 {
        return 0.0;
    }
    binomial_ln_pmf(n, p)
        .into_iter()
        .map(|l| {
            let pk = l.exp();
            if pk > 0.0 {
                -pk * l / LN_2
            } else {
                0.0
            }
        })
        .sum()
}

fn pairs(m: u64) -> f64 {
    m as f64 * (m as f64 - 1.0) / 2.0
}

/// Entropy of the labeled graph G(m, p): `C(m,2) h2(p)`.
pub fn h2_labeled_gnp(m: u64, p: f64) -> f64 {
    pairs(m) * h2_bernoulli(p)
}

/// Entropy of the unlabeled G(m, p): `C(m,2) h2(p) - log2 m!`.
pub fn h2_unlabeled_gnp(m: u64, p: f64) -> f64 {
    h2_labeled_gnp(m, p) - log2_factorial(m)
}

/// Whether `(m, p)` satisfies `min(mp, m - mp) > ln m`, the regime where the
/// unlabeled formula is known to apply.
pub fn unlabeled_formula_valid(m: u64, p: f64) -> bool {
    let mp = m as f64 * p;
    mp.min(m as f64 - mp) > (m as f64).ln()
}

/// Leading-order form `(m²p/2) log2(1/p)`.
pub fn h2_unlabeled_asymptotic(m: u64, p: f64) -> f64 {
    let m = m as f64;
    m * m * p / 2.0 * (1.0 / p).log2()
}

/// Upper bound on the entropy of one card: condition on the root degree `k`,
/// bound the card given `k` by a labeled G(k, p).
pub fn h2_card_upper(n: u64, p: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let h = h2_bernoulli(p);
    let inner: f64 = if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        binomial_ln_pmf(n - 1, p)
            .into_iter()
            .enumerate()
            .skip(2)
            .map(|(k, l)| l.exp() * pairs(k as u64) * h)
            .sum()
    };
    inner + h2_binomial(n - 1, p)
}

/// `n · h2_card_upper(n, p) / h2_unlabeled_gnp(n, p)`.
pub fn ratio(n: u64, p: f64) -> f64 {
    n as f64 * h2_card_upper(n, p) / h2_unlabeled_gnp(n, p)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyProfile {
    pub n: u64,
    pub p: f64,
    pub h_graph_labeled: f64,
    pub h_graph_unlabeled: f64,
    pub h_card_upper: f64,
    pub ratio: f64,
    pub unlabeled_formula_valid: bool,
}

impl EntropyProfile {
    pub fn new(n: u64, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) || p.is_nan() {
            return Err(Error::InvalidProbability(p));
        }
        let h_graph_unlabeled = h2_unlabeled_gnp(n, p);
        let h_card_upper = h2_card_upper(n, p);
        Ok(EntropyProfile {
            n,
            p,
            h_graph_labeled: h2_labeled_gnp(n, p),
            h_graph_unlabeled,
            h_card_upper,
            ratio: n as f64 * h_card_upper / h_graph_unlabeled,
            unlabeled_formula_valid: unlabeled_formula_valid(n, p),
        })
    }
}

/// Steps per decade of the downward scan in [`crossover_p`].
const SCAN_STEPS_PER_DECADE: f64 = 200.0;

/// Largest `p` in `[n^-0.9, n^-0.1]` where `ratio(n, p)` falls through 1.
///
/// The ratio is not monotone over the whole bracket: it is large near
/// `n^-0.1`, dips below 1, and can climb back above 1 at the sparse end once
/// `log2 n!` eats most of the unlabeled entropy. So the bracket endpoints do
/// not straddle the root in general. The scan walks down from `n^-0.1` on a
/// log grid until the ratio first drops below 1 and bisects that step.
pub fn crossover_p(n: u64) -> Result<f64> {
    if n < 100 {
        return Err(Error::InvalidParameter(format!(
            "crossover needs n >= 100, got {n}"
        )));
    }
    let ln_n = (n as f64).ln();
    let (lo, hi) = (-0.9 * ln_n, -0.1 * ln_n);
    let step = std::f64::consts::LN_10 / SCAN_STEPS_PER_DECADE;
    let f = |lp: f64| ratio(n, lp.exp()) - 1.0;
    let mut upper = hi;
    if f(upper) <= 0.0 {
        return Err(Error::NoCrossover { n });
    }
    loop {
        let lower = (upper - step).max(lo);
        if f(lower) < 0.0 {
            let (mut a, mut b) = (lower, upper);
            for _ in 0..100 {
                let mid = 0.5 * (a + b);
                if f(mid) < 0.0 {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            return Ok((0.5 * (a + b)).exp());
        }
        if lower <= lo {
            return Err(Error::NoCrossover { n });
        }
        upper = lower;
    }
}
