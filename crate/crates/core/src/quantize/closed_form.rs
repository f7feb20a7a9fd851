use super::{Method, MpPair};
use crate::dist::ParametricFamily;
use crate::error::{Error, Result};

/// Closed-form pair for the uniform, exponential and Pareto families.
///
/// | family | m | p |
/// |---|---|---|
/// | `Uniform(a)` | `2a/3` | `2/3` |
/// | `Exponential(λ)` | `2/λ` | `e^-1` |
/// | `Pareto(θ)` | `2/(θ-2)` | `((θ-2)/(θ-1))^θ` |
///
/// The exponential propensity follows from `a = 1/λ` and `p = P(X > a)`.
pub fn closed_form_mp(family: &ParametricFamily) -> Result<MpPair> {
    family.validate()?;
    let (m, p) = match *family {
        ParametricFamily::Uniform { a } => (2.0 * a / 3.0, 2.0 / 3.0),
        ParametricFamily::Exponential { lambda } => (2.0 / lambda, (-1.0f64).exp()),
        ParametricFamily::Pareto { theta } => (
            2.0 / (theta - 2.0),
            ((theta - 2.0) / (theta - 1.0)).powf(theta),
        ),
        ParametricFamily::Gamma { .. } | ParametricFamily::Weibull { .. } => {
            return Err(Error::NoClosedForm(family.name().to_string()));
        }
    };
    let dist = family.build()?;
    Ok(MpPair::with_p(dist.as_ref(), m, p, Method::ClosedForm))
}
