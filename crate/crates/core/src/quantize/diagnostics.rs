//! Second-order sufficiency and uniqueness diagnostics.
//!
//! Sufficiency at a stationary pair: `2p / f(Q(1-p)) - Q(1-p) > 0`, which is
//! the hazard bound `h(a) < 2/a`. Uniqueness: `x ↦ x³ f(x)` strictly
//! log-concave, checked through `ζ(y) = 3/y + f'(y)/f(y)` being strictly
//! decreasing on a grid, plus `y f(y) → 0` as `y → 0`.

use serde::{Serialize, Serializer};

use super::MpPair;
use crate::dist::Distribution;
use crate::error::{Error, Result};

/// Three-valued verdict. Serializes as `true`, `false` or `"not applicable"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    Holds,
    Fails,
    NotApplicable,
}

impl Check {
    fn from_bool(b: bool) -> Self {
        if b {
            Check::Holds
        } else {
            Check::Fails
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Check::Holds => "holds",
            Check::Fails => "fails",
            Check::NotApplicable => "not applicable",
        }
    }
}

impl Serialize for Check {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Check::Holds => s.serialize_bool(true),
            Check::Fails => s.serialize_bool(false),
            Check::NotApplicable => s.serialize_str("not applicable"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SufficiencyReport {
    pub holds: Check,
    /// `2p / f(Q(1-p)) - Q(1-p)`.
    pub value: Option<f64>,
    /// `Q(1-p)`, the threshold seen through the quantile.
    pub threshold: Option<f64>,
    pub density: Option<f64>,
    /// `f(a) / S(a)` at `a = Q(1-p)`.
    pub hazard: Option<f64>,
    /// `2 / a`.
    pub hazard_bound: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct UniquenessReport {
    pub zeta_decreasing: Check,
    pub zeta_grid: Vec<(f64, f64)>,
    pub xf_vanishes_at_zero: Check,
    pub notes: Vec<String>,
}

/// Combined verdicts.
#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticsReport {
    pub sufficiency_holds: Check,
    pub sufficiency_value: Option<f64>,
    pub zeta_decreasing: Check,
    pub xf_vanishes_at_zero: Check,
    pub zeta_grid: Vec<(f64, f64)>,
    pub notes: String,
}

pub fn sufficiency_check<D: Distribution + ?Sized>(dist: &D, mp: &MpPair) -> SufficiencyReport {
    let not_applicable = SufficiencyReport {
        holds: Check::NotApplicable,
        value: None,
        threshold: None,
        density: None,
        hazard: None,
        hazard_bound: None,
    };
    if !dist.has_density() {
        return not_applicable;
    }
    let q = dist.upper_quantile(mp.p);
    let Some(f) = dist.density(q) else {
        return not_applicable;
    };
    let s = dist.survival(q);
    let hazard = (s > 0.0).then(|| f / s);
    let hazard_bound = (q > 0.0).then(|| 2.0 / q);
    if !(f > 0.0) || !f.is_finite() {
        return SufficiencyReport {
            holds: Check::Fails,
            value: None,
            threshold: Some(q),
            density: Some(f),
            hazard,
            hazard_bound,
        };
    }
    let value = 2.0 * mp.p / f - q;
    SufficiencyReport {
        holds: Check::from_bool(value > 0.0),
        value: Some(value),
        threshold: Some(q),
        density: Some(f),
        hazard,
        hazard_bound,
    }
}

/// Evaluates `ζ` on `grid` with central differences for `f'`.
///
/// The step is `max(1e-6, 1e-6 y)`, shrunk where needed so that both
/// stencil points stay inside `(0, support_upper)`.
pub fn uniqueness_diagnostic<D: Distribution + ?Sized>(dist: &D, grid: &[f64]) -> Result<UniquenessReport> {
    if !dist.has_density() {
        return Ok(UniquenessReport {
            zeta_decreasing: Check::NotApplicable,
            zeta_grid: Vec::new(),
            xf_vanishes_at_zero: Check::NotApplicable,
            notes: vec!["no density".into()],
        });
    }
    if grid.len() < 3 {
        return Err(Error::invalid("uniqueness grid needs at least 3 points"));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) || !(grid[0] > 0.0) {
        return Err(Error::invalid("uniqueness grid must be positive and strictly increasing"));
    }
    let upper = dist.support_upper();
    if grid[grid.len() - 1] >= upper {
        return Err(Error::invalid("uniqueness grid must lie inside the support"));
    }
    let f = |x: f64| dist.density(x).unwrap_or(0.0);

    let mut notes = Vec::new();
    let mut zeta_grid = Vec::with_capacity(grid.len());
    for &y in grid {
        let fy = f(y);
        if !(fy > 0.0) {
            notes.push(format!("density vanishes at y = {y}"));
            continue;
        }
        let h = 1e-6f64.max(1e-6 * y).min(0.5 * y).min(0.5 * (upper - y));
        let slope = (f(y + h) - f(y - h)) / (2.0 * h);
        zeta_grid.push((y, 3.0 / y + slope / fy));
    }
    let decreasing = zeta_grid.len() >= 2 && zeta_grid.windows(2).all(|w| w[1].1 < w[0].1);
    if !decreasing {
        if let Some(w) = zeta_grid.windows(2).find(|w| !(w[1].1 < w[0].1)) {
            notes.push(format!("ζ does not decrease between y = {} and y = {}", w[0].0, w[1].0));
        }
    }
    let yf: Vec<f64> = grid.iter().take(3).map(|&y| y * f(y)).collect();
    let vanishing = yf[0] < yf[1] && yf[1] < yf[2];
    Ok(UniquenessReport {
        zeta_decreasing: Check::from_bool(decreasing),
        zeta_grid,
        xf_vanishes_at_zero: Check::from_bool(vanishing),
        notes,
    })
}

/// A quantile-spaced grid strictly inside the support: three points deep in
/// the lower tail for the `y f(y) → 0` check, then 64 evenly spaced levels
/// between 0.001 and 0.999.
pub fn default_grid<D: Distribution + ?Sized>(dist: &D) -> Vec<f64> {
    let mut levels = vec![1e-6, 1e-5, 1e-4];
    levels.extend((0..64).map(|i| 0.001 + 0.998 * i as f64 / 63.0));
    let mut grid: Vec<f64> = Vec::with_capacity(levels.len());
    for t in levels {
        let y = dist.quantile(t);
        if y > 0.0 && y.is_finite() && grid.last().is_none_or(|&last| y > last) {
            grid.push(y);
        }
    }
    grid
}

/// Sufficiency at `mp` and uniqueness on `grid`.
pub fn diagnose<D: Distribution + ?Sized>(dist: &D, mp: &MpPair, grid: &[f64]) -> Result<DiagnosticsReport> {
    let suff = sufficiency_check(dist, mp);
    let uniq = uniqueness_diagnostic(dist, grid)?;
    let mut notes = uniq.notes.clone();
    if suff.holds == Check::NotApplicable {
        notes.insert(0, "sufficiency: not applicable without a density".into());
    }
    Ok(DiagnosticsReport {
        sufficiency_holds: suff.holds,
        sufficiency_value: suff.value,
        zeta_decreasing: uniq.zeta_decreasing,
        xf_vanishes_at_zero: uniq.xf_vanishes_at_zero,
        zeta_grid: uniq.zeta_grid,
        notes: notes.join("; "),
    })
}
