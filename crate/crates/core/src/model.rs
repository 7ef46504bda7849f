//! Domain records and the closed-form quantities of both constructions.
//!
//! Both methods build `Y1 = X0 + X1`, `Y2 = X0 + X2` from a shared gamma
//! shock `X0 ~ G(1, alpha0)` and a negatively coupled pair `(X1, X2)` with
//! integer shapes `r <= s`.

use crate::error::{Error, Result};
use alloc::format;

/// `c = 1 - pi^2/6 = Cov(ln U, ln(1 - U))` for `U ~ U(0, 1)`.
pub const ANTITHETIC_LOG_COV: f64 = 1.0 - core::f64::consts::PI * core::f64::consts::PI / 6.0;

/// The antithetic log-covariance constant `c`.
pub fn antithetic_log_cov() -> f64 {
    ANTITHETIC_LOG_COV
}

/// Requested marginal shapes and target correlation, normalized so `m <= n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetSpec {
    m: f64,
    n: f64,
    rho0: f64,
    swapped: bool,
}

impl TargetSpec {
    /// Validates `m, n > 0` and `-1 < rho0 < 0`. When `m > n` the roles are
    /// exchanged and [`TargetSpec::swapped`] reports it.
    pub fn new(m: f64, n: f64, rho0: f64) -> Result<Self> {
        if !(m.is_finite() && m > 0.0) || !(n.is_finite() && n > 0.0) {
            return Err(Error::domain(format!("shapes must be positive and finite (m = {m}, n = {n})")));
        }
        if !(rho0 > -1.0 && rho0 < 0.0) {
            return Err(Error::domain(format!("target correlation must lie in (-1, 0), got {rho0}")));
        }
        let swapped = m > n;
        let (m, n) = if swapped { (n, m) } else { (m, n) };
        Ok(Self { m, n, rho0, swapped })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn rho0(&self) -> f64 {
        self.rho0
    }

    /// Whether the caller's `m` and `n` were exchanged during normalization.
    pub fn swapped(&self) -> bool {
        self.swapped
    }
}

/// Gamma law in the rate parametrization, density `rate^shape e^{-rate x} x^{shape-1} / Gamma(shape)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaParams {
    pub rate: f64,
    pub shape: f64,
}

impl GammaParams {
    pub fn new(rate: f64, shape: f64) -> Result<Self> {
        if !(rate.is_finite() && rate > 0.0) || !(shape.is_finite() && shape > 0.0) {
            return Err(Error::domain(format!("gamma parameters must be positive (rate = {rate}, shape = {shape})")));
        }
        Ok(Self { rate, shape })
    }

    pub fn mean(&self) -> f64 {
        self.shape / self.rate
    }

    pub fn variance(&self) -> f64 {
        self.shape / (self.rate * self.rate)
    }

    /// Cumulative distribution function.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        crate::special::reg_inc_gamma_p(self.shape, self.rate * x).unwrap_or(f64::NAN)
    }
}

/// Resolved parameters for the antithetic construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanM1 {
    pub r: u32,
    pub s: u32,
    pub alpha0: f64,
    pub rate: f64,
    pub rho_theoretical: f64,
}

impl PlanM1 {
    /// Builds a plan and computes its exact correlation. Rate defaults to 1
    /// through [`PlanM1::with_rate`].
    pub fn new(r: u32, s: u32, alpha0: f64) -> Result<Self> {
        let rho = rho_m1(alpha0, r, s)?;
        Ok(Self { r, s, alpha0, rate: 1.0, rho_theoretical: rho })
    }

    pub fn with_rate(mut self, rate: f64) -> Result<Self> {
        check_rate(rate)?;
        self.rate = rate;
        Ok(self)
    }

    /// Marginal laws of `(Y1, Y2)`.
    pub fn marginals(&self) -> (GammaParams, GammaParams) {
        marginals(self.rate, self.alpha0, self.r, self.s)
    }

    /// `alpha0 + r c < 0`.
    pub fn is_negatively_correlated(&self) -> bool {
        self.alpha0 + f64::from(self.r) * ANTITHETIC_LOG_COV < 0.0
    }
}

/// Resolved parameters for the bivariate-uniform construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanM2 {
    pub r: u32,
    pub s: u32,
    pub alpha0: f64,
    pub theta: f64,
    pub rate: f64,
    pub rho_theoretical: f64,
}

impl PlanM2 {
    pub fn new(r: u32, s: u32, alpha0: f64, theta: f64) -> Result<Self> {
        let rho = rho_m2(alpha0, r, s, theta)?;
        Ok(Self { r, s, alpha0, theta, rate: 1.0, rho_theoretical: rho })
    }

    pub fn with_rate(mut self, rate: f64) -> Result<Self> {
        check_rate(rate)?;
        self.rate = rate;
        Ok(self)
    }

    pub fn marginals(&self) -> (GammaParams, GammaParams) {
        marginals(self.rate, self.alpha0, self.r, self.s)
    }

    /// `4 alpha0 + r theta < 0`.
    pub fn is_negatively_correlated(&self) -> bool {
        4.0 * self.alpha0 + f64::from(self.r) * self.theta < 0.0
    }
}

fn marginals(rate: f64, alpha0: f64, r: u32, s: u32) -> (GammaParams, GammaParams) {
    (
        GammaParams { rate, shape: alpha0 + f64::from(r) },
        GammaParams { rate, shape: alpha0 + f64::from(s) },
    )
}

pub(crate) fn check_rate(rate: f64) -> Result<()> {
    if rate.is_finite() && rate > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("rate must be positive and finite, got {rate}")))
    }
}

fn check_shapes(alpha0: f64, r: u32, s: u32) -> Result<()> {
    if !(alpha0.is_finite() && alpha0 >= 0.0) {
        return Err(Error::domain(format!("alpha0 must be >= 0, got {alpha0}")));
    }
    if r == 0 || r > s {
        return Err(Error::domain(format!("need 1 <= r <= s, got r = {r}, s = {s}")));
    }
    Ok(())
}

/// Correlation of the antithetic construction,
/// `(alpha0 + r c) / sqrt((alpha0 + r)(alpha0 + s))`.
pub fn rho_m1(alpha0: f64, r: u32, s: u32) -> Result<f64> {
    check_shapes(alpha0, r, s)?;
    let (r, s) = (f64::from(r), f64::from(s));
    Ok((alpha0 + r * ANTITHETIC_LOG_COV) / libm::sqrt((alpha0 + r) * (alpha0 + s)))
}

/// Most negative correlation of the antithetic construction for given
/// `r <= s`, reached at `alpha0 = 0`: `c sqrt(r / s)`.
pub fn rho_m1_lower_bound(r: u32, s: u32) -> Result<f64> {
    rho_m1(0.0, r, s)
}

/// Correlation of the bivariate-uniform construction,
/// `(alpha0 + r theta / 4) / sqrt((alpha0 + r)(alpha0 + s))`.
pub fn rho_m2(alpha0: f64, r: u32, s: u32, theta: f64) -> Result<f64> {
    check_shapes(alpha0, r, s)?;
    check_theta(theta)?;
    let (r, s) = (f64::from(r), f64::from(s));
    Ok((alpha0 + r * theta / 4.0) / libm::sqrt((alpha0 + r) * (alpha0 + s)))
}

/// Attainable lower bound of the bivariate-uniform construction,
/// `-(m - 5) / (4 sqrt(m n))`. Requires `m >= 6` and `n >= m`.
pub fn rho_m2_lower_bound(m: f64, n: f64) -> Result<f64> {
    if !(m >= 6.0) || !m.is_finite() {
        return Err(Error::domain(format!("the bound requires m >= 6, got m = {m}")));
    }
    if !(n >= m) || !n.is_finite() {
        return Err(Error::domain(format!("the bound requires n >= m, got m = {m}, n = {n}")));
    }
    Ok(-(m - 5.0) / (4.0 * libm::sqrt(m * n)))
}

/// Correlation of a uniform pair drawn from `1 + theta (1 - 2u1)(1 - 2u2)`: `theta / 3`.
pub fn uniform_pair_corr(theta: f64) -> Result<f64> {
    check_theta(theta)?;
    Ok(theta / 3.0)
}

/// `Cov(ln U1, ln U2)` under the same density: `theta / 4`.
pub fn log_pair_cov_m2(theta: f64) -> Result<f64> {
    check_theta(theta)?;
    Ok(theta / 4.0)
}

pub(crate) fn check_theta(theta: f64) -> Result<()> {
    if (-1.0..=1.0).contains(&theta) {
        Ok(())
    } else {
        Err(Error::domain(format!("theta must lie in [-1, 1], got {theta}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_value() {
        assert!((antithetic_log_cov() - -0.644934).abs() < 5e-7);
        assert_eq!(ANTITHETIC_LOG_COV, 1.0 - core::f64::consts::PI.powi(2) / 6.0);
    }

    #[test]
    fn rho_m1_table_rows() {
        assert!((rho_m1(0.0, 2, 3).unwrap() - -0.5266).abs() < 5e-4);
        assert!((rho_m1(2.0, 5, 8).unwrap() - -0.1463).abs() < 5e-4);
        assert_eq!(rho_m1(0.0, 1, 1).unwrap(), ANTITHETIC_LOG_COV);
        // mpmath: -0.14637610204881154
        assert!((rho_m1(2.0, 5, 8).unwrap() - -0.146_376_102_048_811_55).abs() < 1e-15);
    }

    #[test]
    fn rho_m1_domain() {
        assert!(rho_m1(-0.1, 1, 2).is_err());
        assert!(rho_m1(0.0, 3, 2).is_err());
        assert!(rho_m1(0.0, 0, 2).is_err());
    }

    #[test]
    fn lower_bound_matches_alpha_zero() {
        assert!((rho_m1_lower_bound(1, 1).unwrap() - -0.644934).abs() < 5e-7);
        assert!((rho_m1_lower_bound(2, 8).unwrap() - -0.322467).abs() < 5e-7);
        for s in 1..=20 {
            for r in 1..=s {
                assert_eq!(rho_m1_lower_bound(r, s).unwrap(), rho_m1(0.0, r, s).unwrap());
            }
        }
    }

    #[test]
    fn rho_m2_examples() {
        assert_eq!(rho_m2(0.0, 4, 4, -1.0).unwrap(), -0.25);
        assert!((rho_m2(1.0, 6, 9, -0.945553).unwrap() - -0.05).abs() < 1e-4);
        for (r, s) in [(1, 1), (3, 7), (10, 12)] {
            assert_eq!(rho_m2(0.0, r, s, 0.0).unwrap(), 0.0);
        }
        assert!(rho_m2(0.0, 1, 1, -1.5).is_err());
    }

    #[test]
    fn rho_m2_bound_values() {
        assert!((rho_m2_lower_bound(7.0, 10.0).unwrap() - -0.0597).abs() < 1e-4);
        assert!((rho_m2_lower_bound(6.0, 6.0).unwrap() - -1.0 / 24.0).abs() < 1e-15);
        assert!((rho_m2_lower_bound(1e6, 1e6).unwrap() - -0.25).abs() < 1e-3);
        assert!(rho_m2_lower_bound(5.0, 9.0).is_err());
        assert!(rho_m2_lower_bound(8.0, 7.0).is_err());
    }

    #[test]
    fn uniform_and_log_pair_formulas() {
        assert_eq!(uniform_pair_corr(-1.0).unwrap(), -1.0 / 3.0);
        assert_eq!(uniform_pair_corr(0.0).unwrap(), 0.0);
        assert_eq!(log_pair_cov_m2(-1.0).unwrap(), -0.25);
        assert_eq!(log_pair_cov_m2(0.0).unwrap(), 0.0);
        assert!(uniform_pair_corr(1.01).is_err());
    }

    #[test]
    fn target_spec_normalizes() {
        let t = TargetSpec::new(10.0, 7.0, -0.05).unwrap();
        assert_eq!((t.m(), t.n(), t.swapped()), (7.0, 10.0, true));
        let t = TargetSpec::new(7.0, 10.0, -0.05).unwrap();
        assert!(!t.swapped());
        assert!(TargetSpec::new(7.0, 10.0, 0.0).is_err());
        assert!(TargetSpec::new(7.0, 10.0, -1.0).is_err());
        assert!(TargetSpec::new(0.0, 10.0, -0.5).is_err());
    }

    #[test]
    fn rate_does_not_change_correlation() {
        let a = PlanM1::new(5, 8, 2.0).unwrap();
        let b = a.with_rate(3.5).unwrap();
        assert_eq!(a.rho_theoretical, b.rho_theoretical);
        assert!(a.with_rate(0.0).is_err());
        let p = PlanM2::new(6, 9, 1.0, -0.9).unwrap();
        assert_eq!(p.with_rate(0.25).unwrap().rho_theoretical, p.rho_theoretical);
    }

    #[test]
    fn negativity_predicates() {
        assert!(PlanM1::new(5, 8, 2.0).unwrap().is_negatively_correlated());
        assert!(!PlanM1::new(1, 1, 1.0).unwrap().is_negatively_correlated());
        assert!(PlanM2::new(6, 9, 1.0, -0.945553).unwrap().is_negatively_correlated());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn rho_m1_increasing_in_alpha0_while_negative(
                r in 1u32..30, extra in 0u32..30, fa in 0.0f64..1.0, fd in 1e-6f64..1.0
            ) {
                // Spread a and a + d over [0, r|c|), where the correlation is negative.
                let top = f64::from(r) * -ANTITHETIC_LOG_COV;
                let (a, d) = (fa * top, fd * (1.0 - fa) * top);
                let s = r + extra;
                let hi = rho_m1(a + d, r, s).unwrap();
                prop_assume!(hi < 0.0);
                prop_assert!(rho_m1(a, r, s).unwrap() < hi);
            }

            #[test]
            fn rho_m2_never_below_quarter(
                r in 1u32..200, extra in 0u32..200, a in 0.0f64..100.0, theta in -1.0f64..=1.0
            ) {
                prop_assert!(rho_m2(a, r, r + extra, theta).unwrap() >= -0.25);
            }
        }
    }
}
