//! Brute-force verifier for the distortion minimizer.
//!
//! Evaluates `L(m) = E[min(X², (X - m)²)]` by integrating against the density
//! in x-space, never through quantiles or tail-expectation closed forms, and
//! minimizes it on a dense grid that is recentred and shrunk tenfold per
//! round. Agreement with the solvers is therefore a genuine cross-check.

use rayon::prelude::*;
use serde::Serialize;

use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::quad::adaptive_simpson;

/// Absolute quadrature tolerance per panel, relative to `max(1, E[X²])`.
const REL_TOL: f64 = 1e-13;
const MAX_PIECES: usize = 4000;

#[derive(Debug, Clone, Serialize)]
pub struct OracleResult {
    pub m_star: f64,
    #[serde(rename = "L_star")]
    pub l_star: f64,
    pub grid_lo: f64,
    pub grid_hi: f64,
    pub grid_n: usize,
    pub refinement_rounds: usize,
    /// `(grid_hi - grid_lo) / grid_n / 10^rounds`.
    pub resolution: f64,
    /// Set when the first-round minimizer sits on an end of the initial grid.
    pub boundary_warning: Option<String>,
}

/// `L(m)` by x-space integration, reusable for repeated evaluation.
pub struct OracleObjective<'a> {
    dist: &'a dyn Distribution,
    second_moment: f64,
    tol: f64,
}

impl<'a> OracleObjective<'a> {
    pub fn new(dist: &'a dyn Distribution) -> Result<Self> {
        if dist.as_empirical().is_none() && !dist.has_density() {
            return Err(Error::NotApplicable(format!(
                "oracle needs a density or a sample, got {}",
                dist.name()
            )));
        }
        let mut obj = OracleObjective {
            dist,
            second_moment: 0.0,
            tol: 0.0,
        };
        if dist.as_empirical().is_none() {
            let rough = obj.integrate_from(0.0, &|x| x * x, 1e-10);
            obj.tol = REL_TOL * rough.max(1.0);
            obj.second_moment = obj.integrate_from(0.0, &|x| x * x, obj.tol);
        }
        Ok(obj)
    }

    /// `E[X²]` as integrated by the oracle.
    pub fn second_moment(&self) -> f64 {
        if let Some(e) = self.dist.as_empirical() {
            return e.values().iter().zip(e.weights()).map(|(x, w)| w * x * x).sum();
        }
        self.second_moment
    }

    pub fn eval(&self, m: f64) -> f64 {
        if let Some(e) = self.dist.as_empirical() {
            let mut acc = 0.0;
            for (x, w) in e.values().iter().zip(e.weights()) {
                let lo = x * x;
                let hi = (x - m) * (x - m);
                acc += w * if lo < hi { lo } else { hi };
            }
            return acc;
        }
        // min(x², (x-m)²) = x² + 1{x > m/2} (m² - 2mx)
        let a = 0.5 * m.max(0.0);
        if a <= 0.0 {
            return self.second_moment;
        }
        self.second_moment + self.integrate_from(a, &|x| m * (m - 2.0 * x), self.tol)
    }

    /// `∫_{lo}^{sup} g(x) f(x) dx` over doubling panels with a geometric
    /// estimate of the neglected tail.
    fn integrate_from(&self, lo: f64, g: &dyn Fn(f64) -> f64, tol: f64) -> f64 {
        let upper = self.dist.support_upper();
        if lo >= upper {
            return 0.0;
        }
        let f = |x: f64| {
            if x <= 0.0 {
                return 0.0;
            }
            match self.dist.density(x) {
                Some(d) if d.is_finite() => g(x) * d,
                _ => 0.0,
            }
        };
        if upper.is_finite() {
            return adaptive_simpson(&f, lo, upper, tol);
        }
        let mut total = 0.0;
        let mut left = lo;
        if left <= 0.0 {
            let scale = self.dist.mean().max(f64::MIN_POSITIVE);
            total += adaptive_simpson(&f, 0.0, scale, tol);
            left = scale;
        }
        let mut prev = f64::NAN;
        for _ in 0..MAX_PIECES {
            let right = 2.0 * left;
            if !right.is_finite() {
                break;
            }
            let piece = adaptive_simpson(&f, left, right, tol);
            total += piece;
            if piece == 0.0 && self.dist.survival(right) == 0.0 {
                break;
            }
            let ratio = piece.abs() / prev.abs();
            if ratio < 1.0 {
                let tail = piece.abs() * ratio / (1.0 - ratio);
                if tail <= tol {
                    total += piece * ratio / (1.0 - ratio);
                    break;
                }
            }
            prev = piece;
            left = right;
        }
        total
    }
}

/// Dense-grid minimization of `L` on `[grid_lo, grid_hi]`.
///
/// Each round scans `grid_n + 1` equispaced nodes, then recentres on the
/// best node with a window ten times narrower. Nodes are evaluated in
/// parallel and reduced in index order.
pub fn oracle_minimize(
    dist: &dyn Distribution,
    grid_lo: f64,
    grid_hi: f64,
    grid_n: usize,
    rounds: usize,
) -> Result<OracleResult> {
    if !(grid_lo >= 0.0) || !(grid_hi > grid_lo) || !grid_hi.is_finite() {
        return Err(Error::invalid(format!("oracle grid [{grid_lo}, {grid_hi}] is invalid")));
    }
    if grid_n < 100 {
        return Err(Error::invalid(format!("oracle grid needs at least 100 cells, got {grid_n}")));
    }
    let objective = OracleObjective::new(dist)?;
    let mut lo = grid_lo;
    let mut hi = grid_hi;
    let mut best = (f64::NAN, f64::INFINITY);
    let mut boundary_warning = None;
    for round in 0..=rounds {
        let step = (hi - lo) / grid_n as f64;
        let values: Vec<(f64, f64)> = (0..=grid_n)
            .into_par_iter()
            .map(|i| {
                let m = lo + step * i as f64;
                (m, objective.eval(m))
            })
            .collect();
        let (idx, &(m, l)) = values
            .iter()
            .enumerate()
            .fold(None, |acc: Option<(usize, &(f64, f64))>, (i, v)| match acc {
                Some((_, b)) if b.1 <= v.1 => acc,
                _ => Some((i, v)),
            })
            .expect("grid is nonempty");
        if round == 0 && (idx == 0 || idx == grid_n) {
            boundary_warning = Some(format!(
                "minimizer {m} sits on the boundary of [{grid_lo}, {grid_hi}]; widen the bracket"
            ));
        }
        if l < best.1 {
            best = (m, l);
        }
        let half = 0.05 * (hi - lo);
        lo = (best.0 - half).max(0.0);
        hi = best.0 + half;
    }
    Ok(OracleResult {
        m_star: best.0,
        l_star: best.1,
        grid_lo,
        grid_hi,
        grid_n,
        refinement_rounds: rounds,
        resolution: (grid_hi - grid_lo) / grid_n as f64 / 10f64.powi(rounds as i32),
        boundary_warning,
    })
}
