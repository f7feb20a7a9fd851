//! Magnitude-propensity solvers.
//!
//! The pair `(m, p)` is the two-point law `(1 - p) δ_0 + p δ_m` closest to a
//! loss law in the quadratic Wasserstein metric. Its threshold `a = m / 2`
//! solves `2a = E[X | X > a]`, and `m` minimizes the distortion
//! `L(m) = E[min(X², (X - m)²)]`.
//!
//! Each solving strategy implements [`Solver`] and is looked up by name in a
//! [`SolverRegistry`].

mod closed_form;
mod diagnostics;
mod fixed_point;
mod lloyd;
mod minimize;
mod objective;
mod registry;

use std::fmt;

use serde::Serialize;

pub use closed_form::closed_form_mp;
pub use diagnostics::{
    default_grid, diagnose, sufficiency_check, uniqueness_diagnostic, Check, DiagnosticsReport,
    SufficiencyReport, UniquenessReport,
};
pub use fixed_point::solve_fixed_point;
pub use lloyd::{exact_scan, lloyd_empirical, lloyd_iterate, ExactScan, LloydOutcome};
pub use minimize::solve_minimize;
pub use objective::{distortion, distortion_derivative, psi};
pub use registry::{
    AutoSolver, ClosedFormSolver, FixedPointSolver, LloydSolver, MinimizeSolver, Solver,
    SolverRegistry,
};

use crate::dist::Distribution;
use crate::error::{Error, Result};

/// Environment variable overriding [`SolverConfig::fp_tol`].
pub const TOL_ENV_VAR: &str = "MP_SOLVER_TOL";

/// How a pair was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    FixedPoint,
    Minimize,
    Lloyd,
    ClosedForm,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::FixedPoint => "fixed_point",
            Method::Minimize => "minimize",
            Method::Lloyd => "lloyd",
            Method::ClosedForm => "closed_form",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A solved magnitude-propensity pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MpPair {
    /// Magnitude, in loss units.
    pub m: f64,
    /// Propensity, `P(X > m/2)`.
    pub p: f64,
    /// Threshold, exactly `m / 2`.
    pub a: f64,
    /// `L(m)`.
    pub distortion: f64,
    /// `sqrt(L(m))`, the Wasserstein distance to the proxy.
    pub w2: f64,
    /// `|2a - τ(a)|` at termination.
    pub residual: f64,
    pub method: Method,
    /// Set when the law has an atom exactly at the threshold.
    #[serde(skip)]
    pub warning: Option<String>,
}

impl MpPair {
    /// Builds the pair induced by threshold `a`, with `p = S(a)`.
    pub fn at_threshold<D: Distribution + ?Sized>(dist: &D, a: f64, method: Method) -> Self {
        let m = 2.0 * a;
        let p = dist.survival(a);
        Self::with_p(dist, m, p, method)
    }

    /// Builds a pair from an externally known `(m, p)`; the remaining fields
    /// are evaluated on `dist`.
    pub fn with_p<D: Distribution + ?Sized>(dist: &D, m: f64, p: f64, method: Method) -> Self {
        let a = 0.5 * m;
        let distortion = distortion(dist, m);
        let residual = dist
            .tail_expectation(a)
            .map(|tau| (2.0 * a - tau).abs())
            .unwrap_or(f64::INFINITY);
        let atom = dist.atom(a);
        let warning = (atom > 0.0).then(|| {
            format!("mass {atom} sits exactly at the threshold {a}; strict convention X > a applied")
        });
        MpPair {
            m,
            p,
            a,
            distortion,
            w2: distortion.sqrt(),
            residual,
            method,
            warning,
        }
    }
}

/// Starting threshold for iterative solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Init {
    Mean,
    Value(f64),
}

impl Init {
    pub fn threshold<D: Distribution + ?Sized>(&self, dist: &D) -> f64 {
        match *self {
            Init::Mean => dist.mean(),
            Init::Value(v) => v,
        }
    }
}

/// Tolerances and search settings shared by every solver.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Bound on the residual `|2a - τ(a)|`.
    pub fp_tol: f64,
    pub max_iter: usize,
    pub init: Init,
    /// Coarse-scan resolution for minimization.
    pub grid_points: usize,
    /// Upper bracket is `2 Q(bracket_quantile)`.
    pub bracket_quantile: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            fp_tol: 1e-10,
            max_iter: 500,
            init: Init::Mean,
            grid_points: 4096,
            bracket_quantile: 0.9999,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.fp_tol > 0.0) || !self.fp_tol.is_finite() {
            return Err(Error::invalid(format!("tolerance must be positive, got {}", self.fp_tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::invalid("max_iter must be positive"));
        }
        if let Init::Value(v) = self.init {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::invalid(format!("init must be positive, got {v}")));
            }
        }
        if self.grid_points < 3 {
            return Err(Error::invalid("grid_points must be at least 3"));
        }
        if !(self.bracket_quantile > 0.0 && self.bracket_quantile < 1.0) {
            return Err(Error::invalid(format!(
                "bracket_quantile must lie in (0, 1), got {}",
                self.bracket_quantile
            )));
        }
        Ok(())
    }

    /// Applies [`TOL_ENV_VAR`] if it is set.
    pub fn with_env_overrides(mut self) -> Result<Self> {
        if let Ok(raw) = std::env::var(TOL_ENV_VAR) {
            let tol: f64 = raw
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("{TOL_ENV_VAR}={raw} is not a number")))?;
            self.fp_tol = tol;
        }
        self.validate()?;
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        SolverConfig::default().validate().unwrap();
    }

    #[test]
    fn config_rejects_bad_values() {
        let bad = [
            SolverConfig { fp_tol: 0.0, ..Default::default() },
            SolverConfig { max_iter: 0, ..Default::default() },
            SolverConfig { init: Init::Value(-1.0), ..Default::default() },
            SolverConfig { grid_points: 1, ..Default::default() },
            SolverConfig { bracket_quantile: 1.0, ..Default::default() },
        ];
        for c in bad {
            assert!(c.validate().is_err(), "{c:?}");
        }
    }

    #[test]
    fn method_names() {
        assert_eq!(Method::FixedPoint.to_string(), "fixed_point");
        assert_eq!(Method::ClosedForm.as_str(), "closed_form");
    }
}
