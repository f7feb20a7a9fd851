//! Magnitude-propensity risk measure.
//!
//! A nonnegative loss `X` is summarized by the two-point law that puts mass
//! `1 - p` at zero and `p` at a magnitude `m`, chosen to be closest to `X` in
//! the quadratic Wasserstein distance. `m` is how large a loss is when it
//! happens and `p` is how often it happens.
//!
//! ```
//! use mprisk::dist::Exponential;
//! use mprisk::quantize::{solve_fixed_point, SolverConfig};
//!
//! let mp = solve_fixed_point(&Exponential::new(1.0).unwrap(), &SolverConfig::default()).unwrap();
//! assert!((mp.m - 2.0).abs() < 1e-8);
//! assert!((mp.p - (-1.0f64).exp()).abs() < 1e-8);
//! ```

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classic;
pub mod dist;
pub mod error;
pub mod io;
pub mod oracle;
pub mod quad;
pub mod quantize;

pub use dist::{Distribution, EmpiricalDist, ParametricFamily};
pub use error::{Error, Result};
pub use quantize::{MpPair, Solver, SolverConfig, SolverRegistry};
