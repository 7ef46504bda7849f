//! Pair generators for both constructions.
//!
//! Draw order per pair (frozen):
//!
//! * antithetic: `s` uniforms `u_1..u_s`, then the shock `X0`.
//!   `X1 = -sum_{i<=r} ln u_i`, `X2 = -sum_{i<=s} ln(1 - u_i)`.
//! * bivariate-uniform: `s` pairs `(u1_i, u2_i)` in order (two uniforms per
//!   pair for conditional inversion, three per attempt for rejection), then
//!   the shock `X0`. `X1 = -sum_{i<=r} ln u1_i`, `X2 = -sum_{i<=s} ln u2_i`.
//! * shock `X0 ~ G(1, alpha0)`: see [`sample_gamma`].

use crate::error::{Error, Result};
use crate::model::{check_rate, check_theta, PlanM1, PlanM2};
use crate::rng::RngStream;
use alloc::format;

/// One draw of the correlated pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplePair {
    pub y1: f64,
    pub y2: f64,
}

impl SamplePair {
    pub fn new(y1: f64, y2: f64) -> Self {
        Self { y1, y2 }
    }

    pub fn swap(self) -> Self {
        Self { y1: self.y2, y2: self.y1 }
    }
}

/// Generator for the density `1 + theta (1 - 2u1)(1 - 2u2)` on the unit square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BivariateUniformMethod {
    /// Uniform `u1`, then `u2` by inverting the conditional CDF.
    #[default]
    ConditionalInversion,
    /// Uniform proposals on the square accepted with probability `f / (1 + |theta|)`.
    AcceptanceRejection,
}

/// Largest shape drawn as a plain sum of exponentials.
const MAX_EXPONENTIAL_SUM_SHAPE: f64 = 32.0;

/// Draws `X ~ G(1, shape)`.
///
/// * `shape == 0`: returns exactly 0 without consuming draws.
/// * integer `shape <= 32`: `-sum ln u_i` over `shape` uniforms.
/// * otherwise Marsaglia–Tsang: standard normals by the polar method (the
///   second polar variate is discarded), one extra uniform per proposal for
///   the squeeze test; shapes below 1 draw a `G(1, shape + 1)` variate first
///   and multiply by `u^{1/shape}` with one more uniform.
pub fn sample_gamma(shape: f64, stream: &mut RngStream) -> Result<f64> {
    if !(shape >= 0.0) || !shape.is_finite() {
        return Err(Error::domain(format!("gamma shape must be >= 0, got {shape}")));
    }
    Ok(gamma_unchecked(shape, stream))
}

fn gamma_unchecked(shape: f64, stream: &mut RngStream) -> f64 {
    if shape == 0.0 {
        return 0.0;
    }
    if shape <= MAX_EXPONENTIAL_SUM_SHAPE && libm::floor(shape) == shape {
        let mut x = 0.0;
        for _ in 0..shape as u32 {
            x -= libm::log(stream.next_uniform());
        }
        return x;
    }
    if shape < 1.0 {
        let g = marsaglia_tsang(shape + 1.0, stream);
        return g * libm::pow(stream.next_uniform(), 1.0 / shape);
    }
    marsaglia_tsang(shape, stream)
}

fn standard_normal(stream: &mut RngStream) -> f64 {
    loop {
        let a = 2.0 * stream.next_uniform() - 1.0;
        let b = 2.0 * stream.next_uniform() - 1.0;
        let q = a * a + b * b;
        if q < 1.0 && q > 0.0 {
            return a * libm::sqrt(-2.0 * libm::log(q) / q);
        }
    }
}

fn marsaglia_tsang(shape: f64, stream: &mut RngStream) -> f64 {
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / libm::sqrt(9.0 * d);
    loop {
        let z = standard_normal(stream);
        let t = 1.0 + c * z;
        if t <= 0.0 {
            continue;
        }
        let v = t * t * t;
        let u = stream.next_uniform();
        let z2 = z * z;
        if u < 1.0 - 0.0331 * z2 * z2 || libm::log(u) < 0.5 * z2 + d * (1.0 - v + libm::log(v)) {
            return d * v;
        }
    }
}

/// Divides both coordinates by `rate`, turning `G(1, k)` marginals into `G(rate, k)`.
pub fn scale_pair(pair: SamplePair, rate: f64) -> Result<SamplePair> {
    check_rate(rate)?;
    Ok(SamplePair { y1: pair.y1 / rate, y2: pair.y2 / rate })
}

/// Draws one antithetic pair. Consumes `s` uniforms plus the shock's draws.
pub fn sample_m1(plan: &PlanM1, stream: &mut RngStream) -> SamplePair {
    let mut x1 = 0.0;
    let mut x2 = 0.0;
    for i in 0..plan.s {
        let u = stream.next_uniform();
        if i < plan.r {
            x1 -= libm::log(u);
        }
        x2 -= libm::log1p(-u);
    }
    let x0 = gamma_unchecked(plan.alpha0, stream);
    SamplePair { y1: (x0 + x1) / plan.rate, y2: (x0 + x2) / plan.rate }
}

/// Draws `u2` given `u1` and a fresh uniform `v` by solving
/// `(1 + k) u2 - k u2^2 = v` with `k = theta (1 - 2 u1)`.
///
/// Uses the root `2v / ((1 + k) + sqrt((1 + k)^2 - 4 k v))`, the
/// conjugate form of the minus branch, which has no cancellation for
/// `k` in `(-1, 1)`.
#[inline]
pub fn conditional_inverse(theta: f64, u1: f64, v: f64) -> f64 {
    let k = theta * (1.0 - 2.0 * u1);
    if k.abs() < 1e-12 {
        return v;
    }
    let b = 1.0 + k;
    2.0 * v / (b + libm::sqrt(b * b - 4.0 * k * v))
}

/// Acceptance-rejection draw; also returns the number of proposals used.
pub fn sample_fgm_rejection(theta: f64, stream: &mut RngStream) -> (f64, f64, u32) {
    let envelope = 1.0 + theta.abs();
    let mut attempts = 0;
    loop {
        attempts += 1;
        let u1 = stream.next_uniform();
        let u2 = stream.next_uniform();
        let w = stream.next_uniform();
        let f = 1.0 + theta * (1.0 - 2.0 * u1) * (1.0 - 2.0 * u2);
        if w * envelope < f {
            return (u1, u2, attempts);
        }
    }
}

#[inline]
fn fgm_pair(theta: f64, method: BivariateUniformMethod, stream: &mut RngStream) -> (f64, f64) {
    match method {
        BivariateUniformMethod::ConditionalInversion => {
            let u1 = stream.next_uniform();
            let v = stream.next_uniform();
            (u1, conditional_inverse(theta, u1, v))
        }
        BivariateUniformMethod::AcceptanceRejection => {
            let (u1, u2, _) = sample_fgm_rejection(theta, stream);
            (u1, u2)
        }
    }
}

/// Draws `(u1, u2)` from `1 + theta (1 - 2u1)(1 - 2u2)`.
pub fn sample_bivariate_uniform(
    theta: f64,
    method: BivariateUniformMethod,
    stream: &mut RngStream,
) -> Result<(f64, f64)> {
    check_theta(theta)?;
    Ok(fgm_pair(theta, method, stream))
}

/// Draws one bivariate-uniform pair.
pub fn sample_m2(plan: &PlanM2, method: BivariateUniformMethod, stream: &mut RngStream) -> SamplePair {
    let mut x1 = 0.0;
    let mut x2 = 0.0;
    for i in 0..plan.s {
        let (u1, u2) = fgm_pair(plan.theta, method, stream);
        if i < plan.r {
            x1 -= libm::log(u1);
        }
        x2 -= libm::log(u2);
    }
    let x0 = gamma_unchecked(plan.alpha0, stream);
    SamplePair { y1: (x0 + x1) / plan.rate, y2: (x0 + x2) / plan.rate }
}

/// Either plan, for callers that pick the method at run time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Plan {
    M1(PlanM1),
    M2(PlanM2),
}

impl Plan {
    pub fn rho_theoretical(&self) -> f64 {
        match self {
            Plan::M1(p) => p.rho_theoretical,
            Plan::M2(p) => p.rho_theoretical,
        }
    }

    pub fn marginals(&self) -> (crate::model::GammaParams, crate::model::GammaParams) {
        match self {
            Plan::M1(p) => p.marginals(),
            Plan::M2(p) => p.marginals(),
        }
    }
}

/// Stateful pair source: a plan bound to its stream.
#[derive(Debug, Clone)]
pub struct PairSampler {
    plan: Plan,
    method: BivariateUniformMethod,
    stream: RngStream,
}

impl PairSampler {
    pub fn new(plan: Plan, method: BivariateUniformMethod, stream: RngStream) -> Self {
        Self { plan, method, stream }
    }

    pub fn plan(&self) -> &Plan {
        &self.plan
    }

    pub fn next_pair(&mut self) -> SamplePair {
        match &self.plan {
            Plan::M1(p) => sample_m1(p, &mut self.stream),
            Plan::M2(p) => sample_m2(p, self.method, &mut self.stream),
        }
    }
}

impl Iterator for PairSampler {
    type Item = SamplePair;

    fn next(&mut self) -> Option<SamplePair> {
        Some(self.next_pair())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::SummaryStats;

    #[test]
    fn zero_shape_is_exact_zero_and_draws_nothing() {
        let mut s = RngStream::new(5, 0);
        let before = s.clone();
        assert_eq!(sample_gamma(0.0, &mut s).unwrap(), 0.0);
        assert_eq!(s, before);
        assert!(sample_gamma(-1.0, &mut s).is_err());
    }

    #[test]
    fn integer_shape_is_sum_of_exponentials() {
        let mut a = RngStream::new(11, 2);
        let mut b = a.clone();
        let g = sample_gamma(3.0, &mut a).unwrap();
        let want: f64 = (0..3).map(|_| -libm::log(b.next_uniform())).sum();
        assert_eq!(g, want);
    }

    #[test]
    fn gamma_three_moments() {
        let mut s = RngStream::new(2024, 0);
        let mut acc = SummaryStats::new();
        for _ in 0..1_000_000 {
            let x = sample_gamma(3.0, &mut s).unwrap();
            acc.push(x, x);
        }
        assert!((acc.mean1() - 3.0).abs() < 0.006);
        assert!((acc.var1() - 3.0).abs() < 0.02);
    }

    #[test]
    fn gamma_fractional_moments() {
        for (shape, seed) in [(0.3, 1u64), (2.5, 2), (40.0, 3), (47.25, 4)] {
            let mut s = RngStream::new(seed, 0);
            let mut acc = SummaryStats::new();
            let n = 200_000;
            for _ in 0..n {
                let x = sample_gamma(shape, &mut s).unwrap();
                acc.push(x, 0.0);
            }
            let se = libm::sqrt(shape / f64::from(n));
            assert!((acc.mean1() - shape).abs() < 4.0 * se, "shape {shape}");
        }
    }

    #[test]
    fn m1_single_uniform_pair() {
        let plan = PlanM1::new(1, 1, 0.0).unwrap();
        let mut s = RngStream::new(77, 0);
        let mut peek = s.clone();
        let u = peek.next_uniform();
        let p = sample_m1(&plan, &mut s);
        assert_eq!(p.y1, -libm::log(u));
        assert_eq!(p.y2, -libm::log1p(-u));
        assert_eq!(s, peek);
    }

    #[test]
    fn m1_coupling_is_monotone() {
        let plan = PlanM1::new(1, 1, 0.0).unwrap();
        let mut pts: std::vec::Vec<(f64, SamplePair)> = (0..2000)
            .map(|i| {
                let mut s = RngStream::new(i, 0);
                let u = s.clone().next_uniform();
                (u, sample_m1(&plan, &mut s))
            })
            .collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in pts.windows(2) {
            assert!(w[1].1.y1 <= w[0].1.y1);
            assert!(w[1].1.y2 >= w[0].1.y2);
        }
    }

    #[test]
    fn m1_draw_count() {
        let plan = PlanM1::new(2, 5, 0.0).unwrap();
        let mut a = RngStream::new(1, 0);
        let mut b = a.clone();
        sample_m1(&plan, &mut a);
        for _ in 0..5 {
            b.next_uniform();
        }
        assert_eq!(a, b);
    }

    #[test]
    fn m2_draw_count_inversion() {
        let plan = PlanM2::new(2, 4, 0.0, -0.5).unwrap();
        let mut a = RngStream::new(1, 0);
        let mut b = a.clone();
        sample_m2(&plan, BivariateUniformMethod::ConditionalInversion, &mut a);
        for _ in 0..8 {
            b.next_uniform();
        }
        assert_eq!(a, b);
    }

    #[test]
    fn theta_zero_passes_second_uniform_through() {
        for method in [BivariateUniformMethod::ConditionalInversion, BivariateUniformMethod::AcceptanceRejection] {
            let mut s = RngStream::new(3, 3);
            let mut peek = s.clone();
            let (a, b) = (peek.next_uniform(), peek.next_uniform());
            let (u1, u2) = sample_bivariate_uniform(0.0, method, &mut s).unwrap();
            assert_eq!((u1, u2), (a, b));
        }
    }

    #[test]
    fn conditional_inverse_solves_cdf() {
        let mut s = RngStream::new(99, 1);
        for _ in 0..1_000_000 {
            let theta = 2.0 * s.next_uniform() - 1.0;
            let u1 = s.next_uniform();
            let v = s.next_uniform();
            let u2 = conditional_inverse(theta, u1, v);
            assert!((0.0..=1.0).contains(&u2));
            let k = theta * (1.0 - 2.0 * u1);
            let cdf = (1.0 + k) * u2 - k * u2 * u2;
            assert!((cdf - v).abs() < 1e-10);
        }
    }

    #[test]
    fn scale_pair_is_linear() {
        let p = SamplePair::new(2.0, 3.0);
        assert_eq!(scale_pair(p, 1.0).unwrap(), p);
        assert_eq!(scale_pair(p, 2.0).unwrap(), SamplePair::new(1.0, 1.5));
        assert!(scale_pair(p, 0.0).is_err());
        assert!(scale_pair(p, -1.0).is_err());
    }

    #[test]
    fn scaling_preserves_correlation() {
        let plan = PlanM1::new(2, 3, 0.0).unwrap();
        let mut s = RngStream::new(8, 0);
        let mut raw = SummaryStats::new();
        let mut scaled = SummaryStats::new();
        for _ in 0..10_000 {
            let p = sample_m1(&plan, &mut s);
            raw.accumulate(p);
            scaled.accumulate(scale_pair(p, 3.7).unwrap());
        }
        assert!((raw.corr().unwrap() - scaled.corr().unwrap()).abs() < 1e-12);
    }
}
