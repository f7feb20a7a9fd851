use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::dist::{family_params, ParametricFamily};
use crate::error::{Error, Result};
use crate::quantize::{FixedPointSolver, Solver, SolverConfig};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub param_value: f64,
    pub m: f64,
    pub p: f64,
    pub mean: f64,
    /// Solver failure for this row; `m` and `p` are NaN when set.
    pub error: Option<String>,
}

impl SweepRow {
    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }
}

/// One magnitude-propensity curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub family_name: String,
    pub param_name: String,
    /// Ascending in `param_value`.
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn ok_rows(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| r.is_ok())
    }

    pub fn failed_rows(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| !r.is_ok())
    }

    pub fn label(&self) -> String {
        format!("{} ({})", self.family_name, self.param_name)
    }
}

/// Solves `(m, p)` along `steps` equispaced values of one family parameter,
/// with the remaining parameters taken from `fixed_params`.
pub fn sweep(
    family_name: &str,
    param_name: &str,
    from: f64,
    to: f64,
    steps: usize,
    fixed_params: &BTreeMap<String, f64>,
) -> Result<SweepResult> {
    sweep_with(
        family_name,
        param_name,
        from,
        to,
        steps,
        fixed_params,
        &FixedPointSolver,
        &SolverConfig::default(),
    )
}

/// [`sweep`] with an explicit solver and configuration.
#[allow(clippy::too_many_arguments)]
pub fn sweep_with(
    family_name: &str,
    param_name: &str,
    from: f64,
    to: f64,
    steps: usize,
    fixed_params: &BTreeMap<String, f64>,
    solver: &dyn Solver,
    config: &SolverConfig,
) -> Result<SweepResult> {
    if steps < 2 {
        return Err(Error::invalid(format!("a sweep needs at least 2 steps, got {steps}")));
    }
    if !from.is_finite() || !to.is_finite() || from == to {
        return Err(Error::invalid(format!("sweep range [{from}, {to}] is empty")));
    }
    let params = family_params(family_name).ok_or_else(|| Error::Unknown {
        kind: "distribution family",
        name: family_name.to_string(),
        known: crate::dist::family_names().join(", "),
    })?;
    if !params.contains(&param_name) {
        return Err(Error::invalid(format!(
            "{family_name} has no parameter `{param_name}` (has: {})",
            params.join(", ")
        )));
    }
    let (lo, hi) = if from < to { (from, to) } else { (to, from) };
    let n = (steps - 1) as f64;
    // endpoint interpolation keeps decimal steps such as 0.1, 0.3, ... clean
    let grid: Vec<f64> = (0..steps)
        .map(|i| {
            let t = i as f64;
            (lo * (n - t) + hi * t) / n
        })
        .collect();

    let families: Vec<ParametricFamily> = grid
        .iter()
        .map(|&v| {
            let mut all = fixed_params.clone();
            all.insert(param_name.to_string(), v);
            ParametricFamily::from_params(family_name, &all)
        })
        .collect::<Result<_>>()?;

    let rows = families
        .par_iter()
        .zip(grid.par_iter())
        .map(|(family, &v)| {
            let dist = family.build()?;
            let mean = dist.mean();
            Ok(match solver.solve(dist.as_ref(), config) {
                Ok(mp) => SweepRow {
                    param_value: v,
                    m: mp.m,
                    p: mp.p,
                    mean,
                    error: None,
                },
                Err(e) => SweepRow {
                    param_value: v,
                    m: f64::NAN,
                    p: f64::NAN,
                    mean,
                    error: Some(e.to_string()),
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(SweepResult {
        family_name: family_name.to_string(),
        param_name: param_name.to_string(),
        rows,
    })
}

/// Shortest decimal that parses back to the same `f64`.
///
/// Switches to exponent notation for very large or very small magnitudes.
pub fn fmt_num(v: f64) -> String {
    let mag = v.abs();
    if v != 0.0 && v.is_finite() && !(1e-5..1e16).contains(&mag) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

/// CSV text with header `param,m,p,mean`. Failed rows carry `NaN`.
pub fn sweep_csv_string(sweep: &SweepResult) -> String {
    let mut out = String::from("param,m,p,mean\n");
    for r in &sweep.rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_num(r.param_value),
            fmt_num(r.m),
            fmt_num(r.p),
            fmt_num(r.mean)
        );
    }
    out
}

pub fn write_sweep_csv(sweep: &SweepResult, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, sweep_csv_string(sweep))?;
    Ok(())
}

/// Reads back a file written by [`write_sweep_csv`] as `(param, m, p, mean)` tuples.
pub fn read_sweep_csv(path: impl AsRef<Path>) -> Result<Vec<[f64; 4]>> {
    let mut reader = csv::Reader::from_path(path)?;
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let mut row = [0.0; 4];
        for (slot, field) in row.iter_mut().zip(record.iter()) {
            *slot = field.parse().map_err(|_| Error::Parse {
                line,
                message: format!("`{field}` is not a number"),
            })?;
        }
        rows.push(row);
    }
    Ok(rows)
}
