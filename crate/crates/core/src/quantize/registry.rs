use std::collections::BTreeMap;

use super::{
    closed_form_mp, lloyd_empirical, solve_fixed_point, solve_minimize, MpPair, SolverConfig,
};
use crate::dist::Distribution;
use crate::error::{Error, Result};

/// A magnitude-propensity solving strategy.
pub trait Solver: Send + Sync {
    /// Registry key.
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    fn solve(&self, dist: &dyn Distribution, config: &SolverConfig) -> Result<MpPair>;
}

pub struct FixedPointSolver;

impl Solver for FixedPointSolver {
    fn name(&self) -> &'static str {
        "fixed_point"
    }

    fn description(&self) -> &'static str {
        "iterate a <- E[X|X>a]/2 from the mean, minimization fallback"
    }

    fn solve(&self, dist: &dyn Distribution, config: &SolverConfig) -> Result<MpPair> {
        solve_fixed_point(dist, config)
    }
}

pub struct MinimizeSolver;

impl Solver for MinimizeSolver {
    fn name(&self) -> &'static str {
        "minimize"
    }

    fn description(&self) -> &'static str {
        "grid scan of the distortion with golden-section refinement"
    }

    fn solve(&self, dist: &dyn Distribution, config: &SolverConfig) -> Result<MpPair> {
        solve_minimize(dist, config)
    }
}

pub struct LloydSolver;

impl Solver for LloydSolver {
    fn name(&self) -> &'static str {
        "lloyd"
    }

    fn description(&self) -> &'static str {
        "sample fixed point on the active set, exact scan fallback (samples only)"
    }

    fn solve(&self, dist: &dyn Distribution, config: &SolverConfig) -> Result<MpPair> {
        let sample = dist
            .as_empirical()
            .ok_or_else(|| Error::NotApplicable(format!("lloyd needs a sample, got {}", dist.name())))?;
        lloyd_empirical(sample, config)
    }
}

pub struct ClosedFormSolver;

impl Solver for ClosedFormSolver {
    fn name(&self) -> &'static str {
        "closed_form"
    }

    fn description(&self) -> &'static str {
        "explicit formulas for uniform, exponential and pareto"
    }

    fn solve(&self, dist: &dyn Distribution, _config: &SolverConfig) -> Result<MpPair> {
        let family = dist
            .family()
            .ok_or_else(|| Error::NoClosedForm(dist.name()))?;
        closed_form_mp(&family)
    }
}

/// Lloyd for samples, fixed point otherwise.
pub struct AutoSolver;

impl Solver for AutoSolver {
    fn name(&self) -> &'static str {
        "auto"
    }

    fn description(&self) -> &'static str {
        "lloyd for samples, fixed_point for everything else"
    }

    fn solve(&self, dist: &dyn Distribution, config: &SolverConfig) -> Result<MpPair> {
        match dist.as_empirical() {
            Some(sample) => lloyd_empirical(sample, config),
            None => solve_fixed_point(dist, config),
        }
    }
}

/// Solvers keyed by name.
pub struct SolverRegistry {
    solvers: BTreeMap<&'static str, Box<dyn Solver>>,
}

impl SolverRegistry {
    pub fn empty() -> Self {
        SolverRegistry {
            solvers: BTreeMap::new(),
        }
    }

    /// `auto`, `fixed_point`, `minimize`, `lloyd` and `closed_form`.
    pub fn with_builtins() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(AutoSolver));
        r.register(Box::new(FixedPointSolver));
        r.register(Box::new(MinimizeSolver));
        r.register(Box::new(LloydSolver));
        r.register(Box::new(ClosedFormSolver));
        r
    }

    /// Adds a solver, replacing any previous one with the same name.
    pub fn register(&mut self, solver: Box<dyn Solver>) -> Option<Box<dyn Solver>> {
        self.solvers.insert(solver.name(), solver)
    }

    pub fn get(&self, name: &str) -> Result<&dyn Solver> {
        self.solvers
            .get(name)
            .map(|s| s.as_ref())
            .ok_or_else(|| Error::Unknown {
                kind: "solver",
                name: name.to_string(),
                known: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.solvers.keys().copied().collect()
    }

    pub fn solve(&self, name: &str, dist: &dyn Distribution, config: &SolverConfig) -> Result<MpPair> {
        self.get(name)?.solve(dist, config)
    }
}

impl Default for SolverRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{make_empirical, Gamma, Uniform};
    use crate::quantize::Method;

    #[test]
    fn builtins_are_registered() {
        let r = SolverRegistry::with_builtins();
        assert_eq!(r.names(), vec!["auto", "closed_form", "fixed_point", "lloyd", "minimize"]);
        assert!(matches!(r.get("newton"), Err(Error::Unknown { .. })));
    }

    #[test]
    fn every_strategy_agrees_on_uniform() {
        let r = SolverRegistry::with_builtins();
        let u = Uniform::new(3.0).unwrap();
        let cfg = SolverConfig::default();
        for name in ["auto", "fixed_point", "minimize", "closed_form"] {
            let mp = r.solve(name, &u, &cfg).unwrap();
            assert!((mp.m - 2.0).abs() < 1e-8, "{name}: {mp:?}");
        }
        assert!(matches!(r.solve("lloyd", &u, &cfg), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn auto_dispatches_samples_to_lloyd() {
        let r = SolverRegistry::default();
        let d = make_empirical(vec![0.0, 2.0], None).unwrap();
        let mp = r.solve("auto", &d, &SolverConfig::default()).unwrap();
        assert_eq!(mp.method, Method::Lloyd);
    }

    #[test]
    fn closed_form_dispatch_on_gamma() {
        let r = SolverRegistry::default();
        let g = Gamma::new(2.0, 1.0).unwrap();
        assert!(matches!(
            r.solve("closed_form", &g, &SolverConfig::default()),
            Err(Error::NoClosedForm(_))
        ));
    }

    struct Constant;

    impl Solver for Constant {
        fn name(&self) -> &'static str {
            "constant"
        }
        fn description(&self) -> &'static str {
            "test double"
        }
        fn solve(&self, dist: &dyn Distribution, _: &SolverConfig) -> Result<MpPair> {
            Ok(MpPair::at_threshold(dist, dist.mean(), Method::Minimize))
        }
    }

    #[test]
    fn custom_solver_can_be_registered() {
        let mut r = SolverRegistry::empty();
        assert!(r.register(Box::new(Constant)).is_none());
        let u = Uniform::new(1.0).unwrap();
        let mp = r.solve("constant", &u, &SolverConfig::default()).unwrap();
        assert_eq!(mp.m, 1.0);
    }
}
