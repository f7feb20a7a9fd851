use std::fmt::Write as _;
use std::path::Path;

use super::sweep::SweepResult;
use crate::error::{Error, Result};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN_X: f64 = 0.1 * WIDTH;
const MARGIN_Y: f64 = 0.1 * HEIGHT;
const MARKER_RADIUS: f64 = 3.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

#[derive(Debug, Clone, Copy, Default)]
pub struct PlotOptions {
    /// Logarithmic magnitude axis. Requires every plotted `m` to be positive.
    pub log_x: bool,
    /// Annotate each point with the parameter value.
    pub labels: bool,
}

/// Draws one or more `(m, p)` curves with `m` on the horizontal axis and
/// `p` on `[0, 1]`. Rows that failed to solve are left out.
pub fn render_mp_plot_svg(sweeps: &[SweepResult], path: impl AsRef<Path>, options: PlotOptions) -> Result<()> {
    std::fs::write(path, mp_plot_svg_string(sweeps, options)?)?;
    Ok(())
}

/// [`render_mp_plot_svg`] returning the document instead of writing it.
pub fn mp_plot_svg_string(sweeps: &[SweepResult], options: PlotOptions) -> Result<String> {
    let ms: Vec<f64> = sweeps.iter().flat_map(|s| s.ok_rows().map(|r| r.m)).collect();
    if ms.is_empty() {
        return Err(Error::invalid("nothing to plot: no solved rows"));
    }
    if options.log_x && ms.iter().any(|&m| !(m > 0.0)) {
        return Err(Error::invalid("log scale needs positive magnitudes"));
    }
    let tx = |m: f64| if options.log_x { m.log10() } else { m };
    let (mut lo, mut hi) = ms
        .iter()
        .map(|&m| tx(m))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(v), h.max(v)));
    if hi - lo < 1e-12 * hi.abs().max(1.0) {
        let pad = if options.log_x { 0.5 } else { 0.1 * hi.abs().max(1e-3) };
        lo -= pad;
        hi += pad;
    } else {
        let pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
    }
    let x_of = |m: f64| MARGIN_X + (tx(m) - lo) / (hi - lo) * (WIDTH - 2.0 * MARGIN_X);
    let y_of = |p: f64| HEIGHT - MARGIN_Y - p * (HEIGHT - 2.0 * MARGIN_Y);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let (x0, x1, y0, y1) = (MARGIN_X, WIDTH - MARGIN_X, HEIGHT - MARGIN_Y, MARGIN_Y);
    let _ = writeln!(
        out,
        r#"<path d="M{x0} {y1} L{x0} {y0} L{x1} {y0}" fill="none" stroke="black"/>"#
    );

    for i in 0..=5 {
        let p = i as f64 / 5.0;
        let y = y_of(p);
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{y:.2}" x2="{x0}" y2="{y:.2}" stroke="black"/><text x="{}" y="{:.2}" text-anchor="end">{p:.1}</text>"#,
            x0 - 5.0,
            x0 - 8.0,
            y + 4.0
        );
    }
    for (v, text) in x_ticks(lo, hi, options.log_x) {
        let x = MARGIN_X + (v - lo) / (hi - lo) * (WIDTH - 2.0 * MARGIN_X);
        let _ = writeln!(
            out,
            r#"<line x1="{x:.2}" y1="{y0}" x2="{x:.2}" y2="{}" stroke="black"/><text x="{x:.2}" y="{}" text-anchor="middle">{text}</text>"#,
            y0 + 5.0,
            y0 + 20.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">magnitude m{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 15.0,
        if options.log_x { " (log scale)" } else { "" }
    );
    let _ = writeln!(
        out,
        r#"<text x="20" y="{}" text-anchor="middle" transform="rotate(-90 20 {})">propensity p</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );

    for (k, sweep) in sweeps.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let points: Vec<(f64, f64, f64)> = sweep
            .ok_rows()
            .map(|r| (x_of(r.m), y_of(r.p), r.param_value))
            .collect();
        let _ = write!(out, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points=""#);
        for (i, (x, y, _)) in points.iter().enumerate() {
            let sep = if i == 0 { "" } else { " " };
            let _ = write!(out, "{sep}{x:.2},{y:.2}");
        }
        let _ = writeln!(out, r#""/>"#);
        for (x, y, v) in &points {
            let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="{MARKER_RADIUS}" fill="{color}"/>"#);
            if options.labels {
                let _ = writeln!(
                    out,
                    r#"<text x="{:.2}" y="{:.2}" font-size="10" fill="{color}">{}={}</text>"#,
                    x + 5.0,
                    y - 5.0,
                    sweep.param_name,
                    compact(*v)
                );
            }
        }
        let ly = MARGIN_Y + 10.0 + 18.0 * k as f64;
        let lx = WIDTH - MARGIN_X - 150.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            escape(&sweep.label())
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn compact(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Tick positions in transformed coordinates with their labels.
fn x_ticks(lo: f64, hi: f64, log: bool) -> Vec<(f64, String)> {
    if log {
        let first = lo.ceil() as i32;
        let last = hi.floor() as i32;
        return (first..=last).map(|e| (e as f64, format!("1e{e}"))).collect();
    }
    let raw = (hi - lo) / 6.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|s| s * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let mut ticks = Vec::new();
    let mut i = (lo / step).ceil();
    while i * step <= hi {
        let v = i * step;
        ticks.push((v, compact(v)));
        i += 1.0;
    }
    ticks
}
