//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.
//!
//! Criterion 10 depends on an external data file and only reports SKIP when
//! `MP_HURRICANE_CSV` is unset. It never gates.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mprisk::classic::mp_cross_identities;
use mprisk::dist::special::incomplete_gamma_upper_regularized;
use mprisk::dist::{make_empirical, Exponential, Gamma, Pareto, Scaled, Uniform, Weibull};
use mprisk::io::{read_sample_csv, sweep, ColumnSelector};
use mprisk::oracle::{oracle_minimize, OracleObjective};
use mprisk::quad::adaptive_simpson;
use mprisk::quantize::{
    distortion, distortion_derivative, exact_scan, lloyd_empirical, lloyd_iterate,
    solve_fixed_point, SolverConfig,
};
use mprisk::Distribution;

const CLOSED_FORM_TOL: f64 = 1e-8;
const CLOSED_FORM_BUDGET: Duration = Duration::from_secs(1);
const EXP_ORACLE_TOL: f64 = 1e-5;
const ORACLE_CASES: usize = 50;
const ORACLE_RES_FACTOR: f64 = 10.0;
const ORACLE_L_SLACK: f64 = 1e-9;
const ORACLE_BUDGET: Duration = Duration::from_secs(60);
const ORACLE_GRID_N: usize = 200;
const ORACLE_ROUNDS: usize = 4;
const CONSTANT_P_TOL: f64 = 1e-8;
const GAMMA_EXP_TOL: f64 = 1e-6;
const LLOYD_LARGE_TOL: f64 = 0.03;
const LLOYD_SMALL_TOL: f64 = 0.15;
const HOMOGENEITY_CASES: usize = 200;
const HOMOGENEITY_TOL: f64 = 1e-8;
const STATIONARITY_TOL: f64 = 1e-7;
const FD_TOL: f64 = 1e-5;
const FD_POINTS: usize = 20;
const CROSS_TOL: f64 = 1e-8;
const SPECIAL_TOL: f64 = 1e-10;
const ERFC_1: f64 = 0.157_299_207_050_285_13;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn solve(d: &dyn Distribution) -> Result<mprisk::MpPair, String> {
    solve_fixed_point(d, &SolverConfig::default()).map_err(|e| format!("{}: {e}", d.name()))
}

/// Families drawn over the randomized parameter ranges.
fn random_law(rng: &mut ChaCha8Rng, family: usize) -> Box<dyn Distribution> {
    match family % 5 {
        0 => Box::new(Uniform::new(rng.gen_range(0.5..10.0)).unwrap()),
        1 => Box::new(Exponential::new(rng.gen_range(0.2..5.0)).unwrap()),
        2 => Box::new(Pareto::new(rng.gen_range(2.1..10.0)).unwrap()),
        3 => Box::new(Gamma::new(rng.gen_range(0.3..5.0), rng.gen_range(0.5..4.0)).unwrap()),
        _ => Box::new(Weibull::new(rng.gen_range(0.5..4.0), rng.gen_range(0.5..4.0)).unwrap()),
    }
}

fn closed_forms() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut check = |d: &dyn Distribution, m: f64, p: f64| -> Result<(), String> {
        let mp = solve(d)?;
        let err = (mp.m - m).abs().max((mp.p - p).abs());
        worst = worst.max(err);
        ensure(err <= CLOSED_FORM_TOL, || format!("{}: got ({}, {}) want ({m}, {p})", d.name(), mp.m, mp.p))
    };
    for a in [0.5, 1.0, 5.0, 10.0] {
        check(&Uniform::new(a).unwrap(), 2.0 * a / 3.0, 2.0 / 3.0)?;
    }
    for l in [0.2, 1.0, 5.0] {
        check(&Exponential::new(l).unwrap(), 2.0 / l, (-1.0f64).exp())?;
    }
    for t in [2.1, 2.5, 5.0, 10.0] {
        check(&Pareto::new(t).unwrap(), 2.0 / (t - 2.0), ((t - 2.0) / (t - 1.0)).powf(t))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < CLOSED_FORM_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("max error {worst:.1e} in {elapsed:.2?}"))
}

fn exponential_oracle() -> Outcome {
    let e = Exponential::new(1.0).unwrap();
    let r = oracle_minimize(&e, 0.01, 10.0, 2000, 3).map_err(|e| e.to_string())?;
    let p = e.survival(r.m_star / 2.0);
    let want = (-1.0f64).exp();
    ensure((r.m_star - 2.0).abs() <= EXP_ORACLE_TOL, || format!("oracle m {}", r.m_star))?;
    ensure((p - want).abs() <= EXP_ORACLE_TOL, || format!("oracle p {p}"))?;
    ensure((p - (-2.0f64).exp()).abs() > 0.2, || "p is indistinguishable from e^-2".into())?;
    Ok(format!("oracle m = {:.7}, p = {p:.7} (e^-1 = {want:.7}, not e^-2)", r.m_star))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let mut worst_ratio: f64 = 0.0;
    for case in 0..ORACLE_CASES {
        let d = random_law(&mut rng, case);
        let mp = solve(d.as_ref())?;
        let hi = 2.0 * d.quantile(0.9999);
        let r = oracle_minimize(d.as_ref(), 0.0, hi, ORACLE_GRID_N, ORACLE_ROUNDS).map_err(|e| e.to_string())?;
        let ratio = (mp.m - r.m_star).abs() / r.resolution;
        worst_ratio = worst_ratio.max(ratio);
        ensure(ratio <= ORACLE_RES_FACTOR, || {
            format!("{}: solver m {} oracle m {} resolution {:.1e}", d.name(), mp.m, r.m_star, r.resolution)
        })?;
        let l_solver = OracleObjective::new(d.as_ref()).map_err(|e| e.to_string())?.eval(mp.m);
        ensure(r.l_star <= l_solver + ORACLE_L_SLACK, || {
            format!("{}: oracle L {} above L(solver m) {}", d.name(), r.l_star, l_solver)
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < ORACLE_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("{ORACLE_CASES} cases, worst |dm| = {worst_ratio:.2} x resolution, {elapsed:.1?}"))
}

fn sweep_shapes() -> Outcome {
    let none = BTreeMap::new();
    let s = sweep("pareto", "theta", 2.1, 10.0, 50, &none).map_err(|e| e.to_string())?;
    ensure(s.failed_rows().next().is_none(), || "pareto sweep has failed rows".into())?;
    for w in s.rows.windows(2) {
        ensure(w[1].m < w[0].m && w[1].p > w[0].p, || {
            format!("pareto not monotone at theta {} -> {}", w[0].param_value, w[1].param_value)
        })?;
    }
    let mut spread: f64 = 0.0;
    for (family, param, lo, hi, p) in [
        ("uniform", "a", 0.5, 10.0, 2.0 / 3.0),
        ("exponential", "lambda", 0.2, 5.0, (-1.0f64).exp()),
    ] {
        let s = sweep(family, param, lo, hi, 20, &none).map_err(|e| e.to_string())?;
        for r in &s.rows {
            spread = spread.max((r.p - p).abs());
            ensure((r.p - p).abs() <= CONSTANT_P_TOL, || format!("{family} {param}={}: p {}", r.param_value, r.p))?;
        }
    }
    Ok(format!("pareto monotone over 50 steps; constant p within {spread:.1e}"))
}

fn gamma_sweep() -> Outcome {
    let fixed = BTreeMap::from([("beta".to_string(), 2.0)]);
    let s = sweep("gamma", "alpha", 0.1, 2.9, 15, &fixed).map_err(|e| e.to_string())?;
    ensure(s.failed_rows().next().is_none(), || "gamma sweep has failed rows".into())?;
    for w in s.rows.windows(2) {
        ensure(w[1].m > w[0].m && w[1].p > w[0].p, || {
            format!("not increasing at alpha {} -> {}", w[0].param_value, w[1].param_value)
        })?;
    }
    let g = solve(&Gamma::new(1.0, 2.0).unwrap())?;
    let e = solve(&Exponential::new(0.5).unwrap())?;
    let gap = (g.m - e.m).abs().max((g.p - e.p).abs());
    ensure(gap <= GAMMA_EXP_TOL, || format!("gamma(1,2) {g:?} vs exponential(1/2) {e:?}"))?;
    Ok(format!("m and p increasing over 15 alphas; gamma(1,2) vs exponential gap {gap:.1e}"))
}

fn uniform_sample(n: usize, seed: u64) -> mprisk::EmpiricalDist {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    make_empirical((0..n).map(|_| rng.gen::<f64>()).collect(), None).unwrap()
}

fn lloyd_consistency() -> Outcome {
    let cfg = SolverConfig::default();
    let mut detail = Vec::new();
    for (n, tol, seed) in [(10_000, LLOYD_LARGE_TOL, 6), (100, LLOYD_SMALL_TOL, 7)] {
        let d = uniform_sample(n, seed);
        let mp = lloyd_empirical(&d, &cfg).map_err(|e| e.to_string())?;
        ensure((mp.m - 2.0 / 3.0).abs() <= tol && (mp.p - 2.0 / 3.0).abs() <= tol, || {
            format!("n={n}: ({}, {})", mp.m, mp.p)
        })?;
        let it = lloyd_iterate(&d, &cfg).map_err(|e| e.to_string())?;
        let scan = exact_scan(&d).map_err(|e| e.to_string())?;
        ensure(it.active_start == scan.active_start, || {
            format!("n={n}: lloyd active set {} vs exact scan {}", it.active_start, scan.active_start)
        })?;
        detail.push(format!("n={n}: ({:.4}, {:.4})", mp.m, mp.p));
    }
    Ok(detail.join("; ") + "; active sets agree")
}

fn property_suite() -> Outcome {
    let cfg = SolverConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);

    let mut worst_h: f64 = 0.0;
    for case in 0..HOMOGENEITY_CASES {
        let c: f64 = rng.gen_range(0.1..10.0);
        let (base, scaled): (Box<dyn Distribution>, Box<dyn Distribution>) = match case % 4 {
            0 => {
                let a = rng.gen_range(0.5..10.0);
                (Box::new(Uniform::new(a).unwrap()), Box::new(Uniform::new(c * a).unwrap()))
            }
            1 => {
                let l = rng.gen_range(0.2..5.0);
                (Box::new(Exponential::new(l).unwrap()), Box::new(Exponential::new(l / c).unwrap()))
            }
            2 => {
                let inner: Arc<dyn Distribution> = Arc::new(Pareto::new(rng.gen_range(2.1..10.0)).unwrap());
                (Box::new(Scaled::new(inner.clone(), 1.0).unwrap()), Box::new(Scaled::new(inner, c).unwrap()))
            }
            _ => {
                let n = rng.gen_range(2..60);
                let d = make_empirical((0..n).map(|_| rng.gen_range(0.0..10.0)).collect(), None).unwrap();
                let s = d.scaled(c).unwrap();
                let a = exact_scan(&d).map_err(|e| e.to_string())?;
                let b = exact_scan(&s).map_err(|e| e.to_string())?;
                ensure(a.active_start == b.active_start, || "scaling moved the empirical active set".into())?;
                (Box::new(d), Box::new(s))
            }
        };
        let m0 = solve_fixed_point(base.as_ref(), &cfg).map_err(|e| e.to_string())?;
        let m1 = solve_fixed_point(scaled.as_ref(), &cfg).map_err(|e| e.to_string())?;
        let err = (m1.m - c * m0.m).abs().max((m1.p - m0.p).abs());
        worst_h = worst_h.max(err);
        ensure(err <= HOMOGENEITY_TOL, || {
            format!("{} scaled by {c}: ({}, {}) vs ({}, {})", base.name(), m1.m, m1.p, c * m0.m, m0.p)
        })?;
    }

    let mut worst_stat: f64 = 0.0;
    let mut worst_fd: f64 = 0.0;
    for case in 0..25 {
        let d = random_law(&mut rng, case);
        let mp = solve(d.as_ref())?;
        ensure(mp.m >= d.mean(), || format!("{}: m {} below mean {}", d.name(), mp.m, d.mean()))?;
        let slope = distortion_derivative(d.as_ref(), mp.m).abs();
        worst_stat = worst_stat.max(slope);
        ensure(slope <= STATIONARITY_TOL, || format!("{}: L'(m) = {slope:e}", d.name()))?;
        if case < 5 {
            for _ in 0..FD_POINTS {
                let m = rng.gen_range(0.2..4.0) * mp.m;
                let h = 1e-4 * m.max(1.0);
                let fd = (distortion(d.as_ref(), m + h) - distortion(d.as_ref(), m - h)) / (2.0 * h);
                let gap = (distortion_derivative(d.as_ref(), m) - fd).abs();
                worst_fd = worst_fd.max(gap);
                ensure(gap <= FD_TOL, || format!("{}: L' mismatch {gap:e} at m={m}", d.name()))?;
            }
        }
    }

    let x = make_empirical(vec![0.0, 2.0], None).unwrap();
    let y = make_empirical(vec![0.0, 10.0], Some(vec![0.9, 0.1])).unwrap();
    let mx = lloyd_empirical(&x, &cfg).map_err(|e| e.to_string())?;
    let my = lloyd_empirical(&y, &cfg).map_err(|e| e.to_string())?;
    ensure(mx.m == 2.0 && my.m == 10.0, || format!("convex order pair gave {} and {}", mx.m, my.m))?;

    Ok(format!(
        "homogeneity {HOMOGENEITY_CASES} cases (worst {worst_h:.1e}); max |L'| at optimum {worst_stat:.1e}; \
         max FD gap {worst_fd:.1e}; convex pair 2 <= 10"
    ))
}

fn cross_identities() -> Outcome {
    let laws: Vec<Box<dyn Distribution>> = vec![
        Box::new(Uniform::new(1.0).unwrap()),
        Box::new(Uniform::new(7.5).unwrap()),
        Box::new(Exponential::new(0.2).unwrap()),
        Box::new(Exponential::new(3.0).unwrap()),
        Box::new(Pareto::new(2.1).unwrap()),
        Box::new(Pareto::new(3.0).unwrap()),
        Box::new(Pareto::new(10.0).unwrap()),
        Box::new(Gamma::new(0.3, 2.0).unwrap()),
        Box::new(Gamma::new(2.0, 1.0).unwrap()),
        Box::new(Gamma::new(5.0, 4.0).unwrap()),
        Box::new(Weibull::new(0.5, 2.0).unwrap()),
        Box::new(Weibull::new(1.5, 1.0).unwrap()),
        Box::new(Weibull::new(4.0, 4.0).unwrap()),
    ];
    let mut worst: f64 = 0.0;
    for d in &laws {
        let mp = solve(d.as_ref())?;
        let g = mp_cross_identities(d.as_ref(), &mp).map_err(|e| e.to_string())?;
        worst = worst.max(g.max_abs_gap);
        ensure(g.var_gap <= CROSS_TOL && g.es_gap <= CROSS_TOL, || format!("{}: {g:?}", d.name()))?;
    }
    Ok(format!("{} laws, max gap {worst:.1e}", laws.len()))
}

fn special_functions() -> Outcome {
    let mut worst: f64 = 0.0;
    for x in [0.0, 1e-3, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0] {
        let q = incomplete_gamma_upper_regularized(1.0, x).map_err(|e| e.to_string())?;
        worst = worst.max((q - (-x).exp()).abs());
    }
    ensure(worst <= SPECIAL_TOL, || format!("Q(1,x) off by {worst:e}"))?;
    let q = incomplete_gamma_upper_regularized(0.5, 1.0).map_err(|e| e.to_string())?;
    // independent route: erfc(1) = 2/sqrt(pi) * integral of exp(-t^2) over [1, inf)
    let integral = adaptive_simpson(&|t: f64| (-t * t).exp(), 1.0, 9.0, 1e-16);
    let erfc_quad = 2.0 / std::f64::consts::PI.sqrt() * integral;
    ensure((q - ERFC_1).abs() <= SPECIAL_TOL, || format!("Q(0.5,1) = {q}"))?;
    ensure((erfc_quad - ERFC_1).abs() <= SPECIAL_TOL, || format!("quadrature erfc(1) = {erfc_quad}"))?;
    Ok(format!("Q(1,x) max error {worst:.1e}; Q(0.5,1) error {:.1e}", (q - ERFC_1).abs()))
}

/// `Ok(None)` means skipped.
fn hurricane() -> Result<Option<String>, String> {
    let Ok(path) = std::env::var("MP_HURRICANE_CSV") else {
        return Ok(None);
    };
    let column: ColumnSelector = std::env::var("MP_HURRICANE_COLUMN")
        .unwrap_or_else(|_| "0".into())
        .parse()
        .unwrap();
    let cfg = SolverConfig::default();
    let (d, _) = read_sample_csv(&path, &column, Some(1e6)).map_err(|e| e.to_string())?;
    let full = lloyd_empirical(&d, &cfg).map_err(|e| e.to_string())?;
    ensure((full.m - 15500.0).abs() <= 1.0 && (full.p - 0.0333).abs() <= 5e-4, || {
        format!("full data: ({}, {})", full.m, full.p)
    })?;
    let mut trimmed = d.values().to_vec();
    trimmed.pop();
    let t = make_empirical(trimmed, None).map_err(|e| e.to_string())?;
    let cut = lloyd_empirical(&t, &cfg).map_err(|e| e.to_string())?;
    ensure((cut.m - 2401.67).abs() <= 0.01 && (cut.p - 0.206897).abs() <= 1e-6, || {
        format!("without the maximum: ({}, {})", cut.m, cut.p)
    })?;
    Ok(Some(format!("full ({}, {:.4}); trimmed ({:.2}, {:.6})", full.m, full.p, cut.m, cut.p)))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("closed forms for uniform, exponential, pareto", closed_forms),
        ("oracle confirms exponential (2, e^-1)", exponential_oracle),
        ("oracle equivalence over randomized families", oracle_equivalence),
        ("pareto monotone, uniform/exponential constant p", sweep_shapes),
        ("gamma sweep increasing, gamma(1,2) = exponential(1/2)", gamma_sweep),
        ("lloyd on seeded uniform samples", lloyd_consistency),
        ("property suite", property_suite),
        ("cross-identities with VaR and ES", cross_identities),
        ("regularized upper incomplete gamma", special_functions),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {:>2}. {name}: {detail} [{secs:.2}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  {:>2}. {name}: {why} [{secs:.2}s]", i + 1);
            }
        }
    }
    match hurricane() {
        Ok(None) => println!("SKIP  10. hurricane data: set MP_HURRICANE_CSV to run (optional)"),
        Ok(Some(detail)) => println!("PASS  10. hurricane data: {detail}"),
        Err(why) => println!("FAIL  10. hurricane data (optional, not gating): {why}"),
    }
    if failed == 0 {
        println!("acceptance: all gating criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} gating criteria failed");
        ExitCode::FAILURE
    }
}
