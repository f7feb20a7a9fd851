use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;

use mprisk::classic::{es, mp_cross_identities, var, RiskLevel};
use mprisk::io::{
    fmt_num, mp_plot_svg_string, sweep_csv_string, sweep_with, PlotOptions, SweepResult, SweepRow,
};
use mprisk::quantize::{default_grid, diagnose as run_diagnostics, Check, DiagnosticsReport};
use mprisk::{MpPair, SolverRegistry};

use crate::args::{CompareArgs, Format, SolveArgs, SweepArgs};
use crate::source;
use crate::{emit, solver_config, CliError};

fn json_text<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn warn(mp: &MpPair) {
    if let Some(w) = &mp.warning {
        eprintln!("warning: {w}");
    }
}

const MP_FIELDS: [&str; 7] = ["m", "p", "a", "distortion", "w2", "residual", "method"];

fn mp_values(mp: &MpPair) -> [String; 7] {
    [
        fmt_num(mp.m),
        fmt_num(mp.p),
        fmt_num(mp.a),
        fmt_num(mp.distortion),
        fmt_num(mp.w2),
        fmt_num(mp.residual),
        mp.method.to_string(),
    ]
}

fn mp_text(mp: &MpPair, out: &mut String) {
    for (k, v) in MP_FIELDS.iter().zip(mp_values(mp)) {
        let _ = writeln!(out, "{k:<12}{v}");
    }
}

pub fn solve(args: &SolveArgs) -> Result<(), CliError> {
    let risk = source::from_args(&args.dist)?;
    let cfg = solver_config(&args.solver)?;
    let mp = SolverRegistry::with_builtins().solve(&args.solver.method, risk.dist.as_ref(), &cfg)?;
    warn(&mp);
    let text = match args.out.format {
        Format::Json => json_text(&mp),
        Format::Csv => format!("{}\n{}\n", MP_FIELDS.join(","), mp_values(&mp).join(",")),
        Format::Text => {
            let mut s = String::new();
            mp_text(&mp, &mut s);
            s
        }
    };
    emit(&text, args.out.output.as_deref())
}

pub fn sweep(args: &SweepArgs) -> Result<(), CliError> {
    let family = args
        .dist
        .dist
        .as_deref()
        .ok_or_else(|| CliError::input("sweep needs --dist"))?;
    if args.dist.data.is_some() || args.dist.scale.is_some() {
        return Err(CliError::input("sweep works on parametric families only"));
    }
    let fixed: BTreeMap<String, f64> = args
        .dist
        .family_flags()
        .into_iter()
        .filter(|(k, _)| *k != args.param)
        .map(|(k, v)| (k.to_string(), v))
        .collect();
    if let Some(known) = mprisk::dist::family_params(family) {
        if let Some(extra) = fixed.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(CliError::input(format!("{family} takes {}, not `{extra}`", known.join(", "))));
        }
    }
    let cfg = solver_config(&args.solver)?;
    let registry = SolverRegistry::with_builtins();
    let solver = registry.get(&args.solver.method)?;
    let result = sweep_with(family, &args.param, args.from, args.to, args.steps, &fixed, solver, &cfg)?;

    for row in result.failed_rows() {
        eprintln!(
            "warning: {}={}: {}",
            result.param_name,
            row.param_value,
            row.error.as_deref().unwrap_or("")
        );
    }
    if let Some(path) = &args.csv {
        emit(&sweep_csv_string(&result), Some(path))?;
    }
    if let Some(path) = &args.svg {
        let svg = mp_plot_svg_string(
            std::slice::from_ref(&result),
            PlotOptions {
                log_x: args.log_x,
                labels: args.labels,
            },
        )?;
        emit(&svg, Some(path))?;
    }
    let text = match args.out.format {
        Format::Json => json_text(&result),
        Format::Csv => sweep_csv_string(&result),
        Format::Text => sweep_text(&result),
    };
    emit(&text, args.out.output.as_deref())?;
    if result.ok_rows().next().is_none() {
        return Err(CliError::Solver("every sweep row failed".into()));
    }
    Ok(())
}

fn sweep_text(result: &SweepResult) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:>14} {:>22} {:>22} {:>22}", result.param_name, "m", "p", "mean");
    for r in &result.rows {
        let _ = write!(
            s,
            "{:>14} {:>22} {:>22} {:>22}",
            fmt_num(r.param_value),
            fmt_num(r.m),
            fmt_num(r.p),
            fmt_num(r.mean)
        );
        if let Some(e) = &r.error {
            let _ = write!(s, "  failed: {e}");
        }
        s.push('\n');
    }
    s
}

pub fn diagnose(args: &SolveArgs) -> Result<(), CliError> {
    let risk = source::from_args(&args.dist)?;
    let cfg = solver_config(&args.solver)?;
    let dist = risk.dist.as_ref();
    let mp = SolverRegistry::with_builtins().solve(&args.solver.method, dist, &cfg)?;
    warn(&mp);
    let report = match run_diagnostics(dist, &mp, &default_grid(dist)) {
        Ok(r) => r,
        Err(e) => DiagnosticsReport {
            sufficiency_holds: Check::NotApplicable,
            sufficiency_value: None,
            zeta_decreasing: Check::NotApplicable,
            xf_vanishes_at_zero: Check::NotApplicable,
            zeta_grid: Vec::new(),
            notes: e.to_string(),
        },
    };
    let text = match args.out.format {
        Format::Json => json_text(&json!({ "result": mp, "diagnostics": report })),
        Format::Csv => {
            let mut s = String::from("key,value\n");
            for (k, v) in MP_FIELDS.iter().zip(mp_values(&mp)) {
                let _ = writeln!(s, "{k},{v}");
            }
            let value = report.sufficiency_value.map_or("NA".to_string(), fmt_num);
            let _ = writeln!(s, "sufficiency_holds,{}", report.sufficiency_holds.label());
            let _ = writeln!(s, "sufficiency_value,{value}");
            let _ = writeln!(s, "zeta_decreasing,{}", report.zeta_decreasing.label());
            let _ = writeln!(s, "xf_vanishes_at_zero,{}", report.xf_vanishes_at_zero.label());
            s
        }
        Format::Text => {
            let mut s = String::new();
            mp_text(&mp, &mut s);
            s.push('\n');
            let value = report
                .sufficiency_value
                .map_or(String::new(), |v| format!(" (value {})", fmt_num(v)));
            let _ = writeln!(s, "{:<24}{}{value}", "sufficiency", report.sufficiency_holds.label());
            let _ = writeln!(s, "{:<24}{}", "zeta decreasing", report.zeta_decreasing.label());
            let _ = writeln!(s, "{:<24}{}", "y f(y) -> 0 at 0", report.xf_vanishes_at_zero.label());
            if !report.notes.is_empty() {
                let _ = writeln!(s, "{:<24}{}", "notes", report.notes);
            }
            if !report.zeta_grid.is_empty() {
                let _ = writeln!(s, "\n{:>24} {:>24}", "y", "zeta(y)");
                for (y, z) in &report.zeta_grid {
                    let _ = writeln!(s, "{:>24} {:>24}", fmt_num(*y), fmt_num(*z));
                }
            }
            s
        }
    };
    emit(&text, args.out.output.as_deref())
}

#[derive(Serialize)]
struct LevelValue {
    level: f64,
    value: Option<f64>,
}

#[derive(Serialize)]
struct CompareRow {
    label: String,
    mean: f64,
    m: Option<f64>,
    p: Option<f64>,
    var: Vec<LevelValue>,
    es: Vec<LevelValue>,
    var_gap: Option<f64>,
    es_gap: Option<f64>,
    error: Option<String>,
}

pub fn compare(args: &CompareArgs) -> Result<(), CliError> {
    if args.specs.len() < 2 {
        return Err(CliError::input("compare needs at least two --spec risks"));
    }
    let levels = args
        .levels
        .iter()
        .map(|&l| RiskLevel::new(l))
        .collect::<Result<Vec<_>, _>>()?;
    let risks = args
        .specs
        .iter()
        .map(|s| source::from_spec(s))
        .collect::<Result<Vec<_>, _>>()?;
    let cfg = solver_config(&args.solver)?;
    let registry = SolverRegistry::with_builtins();
    let solver = registry.get(&args.solver.method)?;

    let mut rows = Vec::new();
    let mut solved = 0;
    for risk in &risks {
        let d = risk.dist.as_ref();
        let var_row = levels
            .iter()
            .map(|&l| LevelValue {
                level: l.alpha(),
                value: Some(var(d, l)),
            })
            .collect();
        let es_row = levels
            .iter()
            .map(|&l| LevelValue {
                level: l.alpha(),
                value: es(d, l).ok(),
            })
            .collect();
        let mut row = CompareRow {
            label: risk.label.clone(),
            mean: d.mean(),
            m: None,
            p: None,
            var: var_row,
            es: es_row,
            var_gap: None,
            es_gap: None,
            error: None,
        };
        match solver.solve(d, &cfg) {
            Ok(mp) => {
                warn(&mp);
                solved += 1;
                row.m = Some(mp.m);
                row.p = Some(mp.p);
                if let Ok(g) = mp_cross_identities(d, &mp) {
                    row.var_gap = Some(g.var_gap);
                    row.es_gap = Some(g.es_gap);
                }
            }
            Err(e) => row.error = Some(e.to_string()),
        }
        rows.push(row);
    }

    if let Some(path) = &args.svg {
        let sweeps: Vec<SweepResult> = rows
            .iter()
            .filter_map(|r| {
                Some(SweepResult {
                    family_name: r.label.clone(),
                    param_name: "mean".into(),
                    rows: vec![SweepRow {
                        param_value: r.mean,
                        m: r.m?,
                        p: r.p?,
                        mean: r.mean,
                        error: None,
                    }],
                })
            })
            .collect();
        let svg = mp_plot_svg_string(
            &sweeps,
            PlotOptions {
                log_x: args.log_x,
                labels: args.labels,
            },
        )?;
        emit(&svg, Some(path))?;
    }

    let text = match args.out.format {
        Format::Json => json_text(&rows),
        Format::Csv => compare_csv(&rows, &levels),
        Format::Text => compare_text(&rows, &levels),
    };
    emit(&text, args.out.output.as_deref())?;
    if solved == 0 {
        return Err(CliError::Solver("no risk could be solved".into()));
    }
    Ok(())
}

fn opt(v: Option<f64>) -> String {
    v.map_or("NA".to_string(), fmt_num)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn compare_header(levels: &[RiskLevel]) -> Vec<String> {
    let mut h: Vec<String> = ["label", "mean", "m", "p"].iter().map(|s| s.to_string()).collect();
    h.extend(levels.iter().map(|l| format!("VaR_{}", l.alpha())));
    h.extend(levels.iter().map(|l| format!("ES_{}", l.alpha())));
    h.extend(["var_gap", "es_gap"].iter().map(|s| s.to_string()));
    h
}

fn compare_cells(r: &CompareRow) -> Vec<String> {
    let mut c = vec![r.label.clone(), fmt_num(r.mean), opt(r.m), opt(r.p)];
    c.extend(r.var.iter().map(|v| opt(v.value)));
    c.extend(r.es.iter().map(|v| opt(v.value)));
    c.push(opt(r.var_gap));
    c.push(opt(r.es_gap));
    c
}

fn compare_csv(rows: &[CompareRow], levels: &[RiskLevel]) -> String {
    let mut s = compare_header(levels).join(",");
    s.push_str(",error\n");
    for r in rows {
        let mut cells: Vec<String> = compare_cells(r).iter().map(|c| csv_field(c)).collect();
        cells.push(csv_field(r.error.as_deref().unwrap_or("")));
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

fn compare_text(rows: &[CompareRow], levels: &[RiskLevel]) -> String {
    let header = compare_header(levels);
    let body: Vec<Vec<String>> = rows.iter().map(compare_cells).collect();
    let widths: Vec<usize> = (0..header.len())
        .map(|i| body.iter().map(|r| r[i].len()).chain([header[i].len()]).max().unwrap_or(0))
        .collect();
    let mut s = String::new();
    let line = |cells: &[String], s: &mut String| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (c, w))| if i == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
            .collect();
        s.push_str(parts.join("  ").trim_end());
        s.push('\n');
    };
    line(&header, &mut s);
    for (r, cells) in rows.iter().zip(&body) {
        line(cells, &mut s);
        if let Some(e) = &r.error {
            let _ = writeln!(s, "  {} failed: {e}", r.label);
        }
    }
    s
}

pub fn methods() -> Result<(), CliError> {
    let registry = SolverRegistry::with_builtins();
    let mut s = String::new();
    for name in registry.names() {
        let solver = registry.get(name)?;
        let _ = writeln!(s, "{name:<14}{}", solver.description());
    }
    emit(&s, None)
}
