//! One-dimensional quadrature.

const MAX_DEPTH: u32 = 50;

/// Adaptive Simpson integration of `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Uses the Richardson-corrected Simpson estimate on each accepted panel.
/// Non-finite integrand values are the caller's responsibility.
pub fn adaptive_simpson<F>(f: &F, a: f64, b: f64, tol: f64) -> f64
where
    F: Fn(f64) -> f64 + ?Sized,
{
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let c = 0.5 * (a + b);
    let fc = f(c);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fc + fb);
    step(f, a, b, fa, fb, fc, whole, tol, MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn step<F>(f: &F, a: f64, b: f64, fa: f64, fb: f64, fc: f64, whole: f64, tol: f64, depth: u32) -> f64
where
    F: Fn(f64) -> f64 + ?Sized,
{
    let c = 0.5 * (a + b);
    let d = 0.5 * (a + c);
    let e = 0.5 * (c + b);
    let fd = f(d);
    let fe = f(e);
    let left = (c - a) / 6.0 * (fa + 4.0 * fd + fc);
    let right = (b - c) / 6.0 * (fc + 4.0 * fe + fb);
    let delta = left + right - whole;
    // Panels narrower than the float spacing cannot be refined further.
    if depth == 0 || delta.abs() <= 15.0 * tol || !(d > a && e < b) {
        return left + right + delta / 15.0;
    }
    step(f, a, c, fa, fc, fd, left, 0.5 * tol, depth - 1)
        + step(f, c, b, fc, fb, fe, right, 0.5 * tol, depth - 1)
}
