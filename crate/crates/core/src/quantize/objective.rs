use crate::dist::Distribution;
use crate::error::{Error, Result};

/// `L(m) = E[min(X², (X - m)²)]`.
///
/// For continuous laws this is the quantile decomposition
/// `∫_0^{1-p} Q² + ∫_{1-p}^1 (Q - m)²` with `p = S(m/2)`, which expands to
/// `E[X²] + m² p - 2m E[X 1{X > m/2}]`. Empirical laws use the exact sum.
pub fn distortion<D: Distribution + ?Sized>(dist: &D, m: f64) -> f64 {
    if let Some(e) = dist.as_empirical() {
        return e
            .values()
            .iter()
            .zip(e.weights())
            .map(|(&x, w)| w * (x * x).min((x - m) * (x - m)))
            .sum();
    }
    if m <= 0.0 {
        return dist.second_moment();
    }
    let a = 0.5 * m;
    let p = dist.survival(a);
    let upper = dist.upper_partial_moment(a);
    (dist.second_moment() + m * m * p - 2.0 * m * upper).max(0.0)
}

/// `L'(m) = 2 E[(m - X) 1{X > m/2}] = 2 S(m/2) (m - τ(m/2))`.
///
/// Atoms at `m/2` are excluded from the indicator.
pub fn distortion_derivative<D: Distribution + ?Sized>(dist: &D, m: f64) -> f64 {
    let a = 0.5 * m;
    2.0 * (m * dist.survival(a) - dist.upper_partial_moment(a))
}

/// Squared Wasserstein distance from `dist` to `(1 - p) δ_0 + p δ_m`:
/// `E[X²] + m² p - 2m ∫_{1-p}^1 Q(t) dt`.
pub fn psi<D: Distribution + ?Sized>(dist: &D, m: f64, p: f64) -> Result<f64> {
    if !(m > 0.0) || !m.is_finite() {
        return Err(Error::invalid(format!("psi requires m > 0, got {m}")));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid(format!("psi requires p in (0, 1), got {p}")));
    }
    let v = dist.second_moment() + m * m * p - 2.0 * m * dist.upper_quantile_integral(p);
    Ok(v.max(0.0))
}
