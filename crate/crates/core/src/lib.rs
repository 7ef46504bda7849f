//! Pairs of negatively correlated gamma variates.
//!
//! Both constructions share a gamma shock: `Y1 = X0 + X1`, `Y2 = X0 + X2`
//! with `X0 ~ G(1, alpha0)` independent of the coupled pair `(X1, X2)`.
//!
//! * **Antithetic** ([`planner::Method::M1`]): `X1 = -sum_{i<=r} ln U_i`,
//!   `X2 = -sum_{i<=s} ln(1 - U_i)`. `Cov(X1, X2) = r c` with
//!   `c = 1 - pi^2/6`, so correlations down to `c sqrt(r/s)` are reachable,
//!   but only a discrete set of them.
//! * **Bivariate uniform** ([`planner::Method::M2`]): the uniforms come in
//!   pairs from `1 + theta (1 - 2u1)(1 - 2u2)`, giving `Cov(X1, X2) = r theta / 4`.
//!   Any correlation in `[-(m - 5)/(4 sqrt(m n)), 0)` is reachable, never
//!   below `-1/4`.
//!
//! The crate is `no_std` (it needs `alloc`). File formats and the command
//! line live in the companion `neggamma` crate.
//!
//! ```
//! use neggamma_core::{planner, model::TargetSpec, rng::RngStream, sampler};
//!
//! let target = TargetSpec::new(7.0, 10.0, -0.05).unwrap();
//! let plan = planner::solve_m2(&target).unwrap();
//! assert_eq!(plan.r, 6);
//! let mut stream = RngStream::new(42, 0);
//! let pair = sampler::sample_m2(&plan, Default::default(), &mut stream);
//! assert!(pair.y1 > 0.0 && pair.y2 > 0.0);
//! ```

#![no_std]
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod density;
pub mod error;
pub mod model;
pub mod planner;
pub mod quad;
pub mod rng;
pub mod sampler;
pub mod special;
pub mod stats;

pub use error::{Error, Result};
pub use model::{PlanM1, PlanM2, TargetSpec};
pub use planner::{Method, SolveMode};
pub use rng::RngStream;
pub use sampler::{BivariateUniformMethod, Plan, SamplePair};
pub use stats::SummaryStats;
