use rayon::prelude::*;

use super::lloyd::exact_scan;
use super::objective::{distortion, distortion_derivative};
use super::{Method, MpPair, SolverConfig};
use crate::dist::Distribution;
use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Global minimization of `L(m)`.
///
/// Scans `[E[X](1 - 1e-6), 2 Q(bracket_quantile)]` on `grid_points` nodes,
/// then golden-section refines the best cell. Where `L'` changes sign across
/// the refined cell the stationary point is polished by bisection on `L'`,
/// which resolves `m` below the flatness floor of `L` itself.
///
/// Empirical laws are solved exactly by [`exact_scan`].
pub fn solve_minimize<D: Distribution + ?Sized>(dist: &D, config: &SolverConfig) -> Result<MpPair> {
    config.validate()?;
    if let Some(e) = dist.as_empirical() {
        let scan = exact_scan(e)?;
        return Ok(MpPair::at_threshold(dist, 0.5 * scan.m, Method::Minimize));
    }
    let (lo, hi) = bracket(dist, config)?;
    let n = config.grid_points;
    let step = (hi - lo) / (n - 1) as f64;
    let values: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| distortion(dist, lo + step * i as f64))
        .collect();
    let best = argmin(&values);

    let cell_lo = lo + step * best.saturating_sub(1) as f64;
    let cell_hi = (lo + step * (best + 1) as f64).min(hi);
    let m = refine(dist, cell_lo, cell_hi, config.fp_tol);
    Ok(MpPair::at_threshold(dist, 0.5 * m, Method::Minimize))
}

/// Search interval for `m`. Lower end from `m >= E[X]`; upper end keeps the
/// threshold inside the support.
pub(crate) fn bracket<D: Distribution + ?Sized>(dist: &D, config: &SolverConfig) -> Result<(f64, f64)> {
    let lo = dist.mean() * (1.0 - 1e-6);
    let hi = 2.0 * dist.quantile(config.bracket_quantile);
    if !(hi > lo) || !hi.is_finite() {
        return Err(Error::solve_failed(
            format!("degenerate minimization bracket [{lo}, {hi}]"),
            None,
        ));
    }
    Ok((lo, hi))
}

fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = i;
        }
    }
    best
}

fn refine<D: Distribution + ?Sized>(dist: &D, lo: f64, hi: f64, tol: f64) -> f64 {
    let (g_lo, g_hi) = golden(dist, lo, hi, tol);
    let d_lo = distortion_derivative(dist, lo);
    let d_hi = distortion_derivative(dist, hi);
    if d_lo < 0.0 && d_hi > 0.0 {
        // Start from the golden bracket if it still straddles the root.
        let (mut a, mut b) = if distortion_derivative(dist, g_lo) < 0.0 && distortion_derivative(dist, g_hi) > 0.0 {
            (g_lo, g_hi)
        } else {
            (lo, hi)
        };
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b || b - a <= 0.01 * tol {
                break;
            }
            if distortion_derivative(dist, mid) < 0.0 {
                a = mid;
            } else {
                b = mid;
            }
        }
        return 0.5 * (a + b);
    }
    0.5 * (g_lo + g_hi)
}

fn golden<D: Distribution + ?Sized>(dist: &D, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = distortion(dist, c);
    let mut fd = distortion(dist, d);
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = distortion(dist, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = distortion(dist, d);
        }
        if !(c > a && d < b) {
            break;
        }
    }
    (a, b)
}
