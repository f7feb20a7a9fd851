//! Value-at-Risk and Expected Shortfall, and their identities with `(m, p)`.

use serde::Serialize;

use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::quantize::MpPair;

/// Comparator levels used when none are given.
pub const DEFAULT_LEVELS: [f64; 3] = [0.9, 0.95, 0.99];

/// A confidence level in `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct RiskLevel(f64);

impl RiskLevel {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha < 1.0 {
            Ok(RiskLevel(alpha))
        } else {
            Err(Error::invalid(format!("risk level must lie in (0, 1), got {alpha}")))
        }
    }

    pub fn alpha(&self) -> f64 {
        self.0
    }
}

/// Left `α`-quantile `inf {x : P(X <= x) >= α}`.
pub fn var<D: Distribution + ?Sized>(dist: &D, level: RiskLevel) -> f64 {
    dist.quantile(level.0)
}

/// `E[X | X >= VaR_α]`, atoms at the quantile included.
pub fn es<D: Distribution + ?Sized>(dist: &D, level: RiskLevel) -> Result<f64> {
    let v = var(dist, level);
    let atom = dist.atom(v);
    let mass = dist.survival(v) + atom;
    if !(mass > 0.0) {
        return Err(Error::domain(format!(
            "no mass at or above VaR {v} at level {}",
            level.0
        )));
    }
    Ok((dist.upper_partial_moment(v) + v * atom) / mass)
}

/// Gaps between `m` and its two classical readings.
#[derive(Debug, Clone, Serialize)]
pub struct CrossIdentities {
    /// `2 VaR_{1-p}`.
    pub lhs_var: f64,
    /// `ES_{1-p}`, the expected shortfall at the level whose VaR is `m/2`.
    pub lhs_es: f64,
    pub var_gap: f64,
    pub es_gap: f64,
    pub max_abs_gap: f64,
}

/// Compares `m` with `2 VaR_{1-p}` and `ES_{1-p}`. Exact for continuous laws;
/// for atomic laws the gaps are reported as they are.
pub fn mp_cross_identities<D: Distribution + ?Sized>(dist: &D, mp: &MpPair) -> Result<CrossIdentities> {
    let level = RiskLevel::new(1.0 - mp.p)?;
    let lhs_var = 2.0 * var(dist, level);
    let lhs_es = es(dist, level)?;
    let var_gap = (mp.m - lhs_var).abs();
    let es_gap = (mp.m - lhs_es).abs();
    Ok(CrossIdentities {
        lhs_var,
        lhs_es,
        var_gap,
        es_gap,
        max_abs_gap: var_gap.max(es_gap),
    })
}
