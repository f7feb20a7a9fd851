use std::collections::HashSet;

use super::objective::distortion;
use super::{Method, MpPair, SolverConfig};
use crate::dist::{Distribution, EmpiricalDist};
use crate::error::{Error, Result};

/// Result of the sample fixed-point iteration.
#[derive(Debug, Clone)]
pub struct LloydOutcome {
    pub pair: MpPair,
    /// Index of the first active atom; the active set is `values()[active_start..]`.
    pub active_start: usize,
    pub iterations: usize,
    /// False when the exact scan had to take over.
    pub converged: bool,
}

/// Global minimizer of the empirical distortion.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactScan {
    pub active_start: usize,
    pub m: f64,
    pub distortion: f64,
}

/// Empirical magnitude-propensity pair by Lloyd's fixed point
/// `a ← Σ x_i 1{x_i > a} / (2 Σ 1{x_i > a})`.
pub fn lloyd_empirical(sample: &EmpiricalDist, config: &SolverConfig) -> Result<MpPair> {
    lloyd_iterate(sample, config).map(|o| o.pair)
}

/// Like [`lloyd_empirical`] but also reports the active set and iteration count.
///
/// The iteration stops as soon as the active set `{i : x_i > a}` repeats
/// itself, at which point `a` is an exact fixed point. A revisited set or the
/// iteration cap hands over to [`exact_scan`].
pub fn lloyd_iterate(sample: &EmpiricalDist, config: &SolverConfig) -> Result<LloydOutcome> {
    config.validate()?;
    check_support(sample)?;
    let n = sample.len();
    let a0 = config.init.threshold(sample);
    let mut k = sample.first_above(a0);
    if k == n {
        return Err(Error::invalid(format!(
            "initial threshold {a0} is not below the sample maximum"
        )));
    }
    let mut seen = HashSet::from([k]);
    for iter in 1..=config.max_iter {
        let m = centroid(sample, k);
        let next = sample.first_above(0.5 * m);
        if next == k {
            return Ok(LloydOutcome {
                pair: pair_from_active(sample, k, Method::Lloyd),
                active_start: k,
                iterations: iter,
                converged: true,
            });
        }
        if !seen.insert(next) {
            break;
        }
        k = next;
    }
    let scan = exact_scan(sample)?;
    Ok(LloydOutcome {
        pair: pair_from_active(sample, scan.active_start, Method::Minimize),
        active_start: scan.active_start,
        iterations: config.max_iter,
        converged: false,
    })
}

/// Exact global minimization of the empirical `L`.
///
/// `L` is piecewise quadratic with breakpoints at `2 x_i`. On the piece whose
/// active set is the suffix starting at `k` the minimizer is the suffix
/// centroid `m_k` and `L = E[X²] - m_k Σ_{i>=k} w_i x_i`, so the scan maximizes
/// `(Σ w x)² / Σ w` over suffixes that do not split tied atoms.
pub fn exact_scan(sample: &EmpiricalDist) -> Result<ExactScan> {
    check_support(sample)?;
    let values = sample.values();
    let mut best: Option<(usize, f64)> = None;
    for k in 0..values.len() {
        if k > 0 && values[k - 1] == values[k] {
            continue;
        }
        let wx = sample.tail_moment_from(k);
        if wx <= 0.0 {
            continue;
        }
        let gain = wx * wx / sample.tail_weight_from(k);
        if best.is_none_or(|(_, g)| gain > g) {
            best = Some((k, gain));
        }
    }
    let (k, _) = best.ok_or_else(|| Error::InvalidSample("all observations are zero".into()))?;
    let m = centroid(sample, k);
    Ok(ExactScan {
        active_start: k,
        m,
        distortion: distortion(sample, m),
    })
}

fn check_support(sample: &EmpiricalDist) -> Result<()> {
    if sample.distinct_count() < 2 {
        return Err(Error::InvalidSample(
            "all mass sits at a single point; no two-point quantizer exists".into(),
        ));
    }
    Ok(())
}

fn centroid(sample: &EmpiricalDist, k: usize) -> f64 {
    sample.tail_moment_from(k) / sample.tail_weight_from(k)
}

fn pair_from_active(sample: &EmpiricalDist, k: usize, method: Method) -> MpPair {
    let m = centroid(sample, k);
    MpPair::with_p(sample, m, sample.survival(0.5 * m), method)
}
