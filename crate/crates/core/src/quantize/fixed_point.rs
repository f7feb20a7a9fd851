use std::collections::HashSet;

use super::diagnostics::{default_grid, uniqueness_diagnostic, Check};
use super::minimize::solve_minimize;
use super::{Method, MpPair, SolverConfig};
use crate::dist::Distribution;
use crate::error::{Error, Result};

/// Iterations without residual improvement before damping kicks in.
const STALL_LIMIT: usize = 10;
const DAMPING: f64 = 0.5;

/// Solves `2a = τ(a)` by iterating `a ← τ(a) / 2` from `config.init`.
///
/// A stalled residual switches to the damped map
/// `a ← (1 - γ) a + γ τ(a) / 2`; a second stall, a revisited iterate or the
/// iteration cap falls back to [`solve_minimize`]. A converged root is
/// cross-checked against the global scan unless the log-concavity diagnostic
/// certifies uniqueness, and the lower-distortion pair is returned.
pub fn solve_fixed_point<D: Distribution + ?Sized>(dist: &D, config: &SolverConfig) -> Result<MpPair> {
    config.validate()?;
    match iterate(dist, config) {
        Ok(a) => {
            let pair = MpPair::at_threshold(dist, a, Method::FixedPoint);
            cross_check(dist, config, pair)
        }
        Err(best) => {
            let fallback = solve_minimize(dist, config);
            match fallback {
                Ok(pair) if pair.residual <= config.fp_tol => Ok(pair),
                Ok(pair) => {
                    let best = match best {
                        Some(b) if b.residual < pair.residual => b,
                        _ => pair,
                    };
                    Err(Error::solve_failed(
                        format!(
                            "no threshold with residual below {} (best {})",
                            config.fp_tol, best.residual
                        ),
                        Some(best),
                    ))
                }
                Err(e) => Err(match (e, best) {
                    (Error::SolveFailed { reason, .. }, Some(b)) => Error::solve_failed(
                        format!("fixed point did not converge and fallback failed: {reason}"),
                        Some(b),
                    ),
                    (e, _) => e,
                }),
            }
        }
    }
}

/// Returns the converged threshold, or the best candidate on failure.
fn iterate<D: Distribution + ?Sized>(dist: &D, config: &SolverConfig) -> std::result::Result<f64, Option<MpPair>> {
    let mut a = config.init.threshold(dist);
    if !(dist.survival(a) > 0.0) {
        a = dist.mean();
    }
    let mut best: Option<(f64, f64)> = None;
    let mut stall = 0;
    let mut damped = false;
    let mut seen = HashSet::new();
    let candidate = |best: Option<(f64, f64)>| best.map(|(a, _)| MpPair::at_threshold(dist, a, Method::FixedPoint));

    for _ in 0..config.max_iter {
        let tau = match dist.tail_expectation(a) {
            Ok(t) => t,
            Err(_) => return Err(candidate(best)),
        };
        let residual = (2.0 * a - tau).abs();
        if residual <= config.fp_tol {
            return Ok(polish(dist, a, 2.0 * a - tau));
        }
        match best {
            Some((_, r)) if residual >= r => stall += 1,
            _ => {
                best = Some((a, residual));
                stall = 0;
            }
        }
        if stall >= STALL_LIMIT {
            if damped {
                break;
            }
            damped = true;
            stall = 0;
        }
        let next = if damped {
            (1.0 - DAMPING) * a + DAMPING * 0.5 * tau
        } else {
            0.5 * tau
        };
        if !seen.insert(next.to_bits()) {
            break;
        }
        a = next;
    }
    Err(candidate(best))
}

/// Secant steps on `g(a) = 2a - τ(a)` from an accepted root, each kept only if
/// it lowers `|g|`. The plain map contracts slowly for heavy tails.
fn polish<D: Distribution + ?Sized>(dist: &D, a: f64, g: f64) -> f64 {
    let (mut a0, mut g0) = (a, g);
    let mut a1 = 0.5 * (2.0 * a - g);
    let mut g1 = match dist.tail_expectation(a1) {
        Ok(t) => 2.0 * a1 - t,
        Err(_) => return a0,
    };
    let (mut best, mut best_g) = if g1.abs() < g0.abs() { (a1, g1) } else { (a0, g0) };
    for _ in 0..20 {
        if best_g == 0.0 || g1 == g0 {
            break;
        }
        let next = a1 - g1 * (a1 - a0) / (g1 - g0);
        let Ok(t) = dist.tail_expectation(next) else { break };
        let gn = 2.0 * next - t;
        if !next.is_finite() || !(gn.abs() < best_g.abs()) {
            break;
        }
        (a0, g0, a1, g1) = (a1, g1, next, gn);
        (best, best_g) = (next, gn);
    }
    best
}

fn cross_check<D: Distribution + ?Sized>(dist: &D, config: &SolverConfig, pair: MpPair) -> Result<MpPair> {
    if dist.has_density() {
        if let Ok(report) = uniqueness_diagnostic(dist, &default_grid(dist)) {
            if report.zeta_decreasing == Check::Holds {
                return Ok(pair);
            }
        }
    }
    let global = match solve_minimize(dist, config) {
        Ok(g) => g,
        Err(_) => return Ok(pair),
    };
    let slack = 1e-12 * dist.second_moment().max(1.0);
    if global.distortion < pair.distortion - slack && global.residual <= config.fp_tol {
        // the iteration settled on a non-global stationary point
        Ok(global)
    } else {
        Ok(pair)
    }
}
