//! Joint density of `(Y1, Y2)` for the single-uniform antithetic case
//! `r = s = 1`, where `Y1 = X0 - ln U`, `Y2 = X0 - ln(1 - U)`.
//!
//! Inverting the map gives `x0 = y1 - ln(1 + e^{y1 - y2})`, and the support is
//! `y1 > 0`, `y2 > y1 - ln(e^{y1} - 1)`. With `X0 ~ G(1, alpha0)` the density
//! is `x0^{alpha0 - 1} / (Gamma(alpha0) (e^{y1} + e^{y2}))`. The
//! `1 / Gamma(alpha0)` factor makes it integrate to one for every
//! `alpha0 > 0`; it equals one at `alpha0 = 1`.

use crate::error::{Error, Result};
use crate::special::log_gamma;
use alloc::format;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointDensityParams {
    alpha0: f64,
    ln_gamma_alpha0: f64,
}

impl JointDensityParams {
    pub fn new(alpha0: f64) -> Result<Self> {
        if !(alpha0 > 0.0) || !alpha0.is_finite() {
            return Err(Error::domain(format!("alpha0 must be > 0, got {alpha0}")));
        }
        Ok(Self { alpha0, ln_gamma_alpha0: log_gamma(alpha0)? })
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }
}

/// Lower edge of the support: `y1 - ln(e^{y1} - 1) = -ln(1 - e^{-y1})`.
pub fn support_boundary(y1: f64) -> Result<f64> {
    if !(y1 > 0.0) {
        return Err(Error::domain(format!("support_boundary needs y1 > 0, got {y1}")));
    }
    // ln(1 - e^{-y}): expm1 form for small y, log1p form once e^{-y} <= 1/2.
    let log1mexp = if y1 < core::f64::consts::LN_2 {
        libm::log(-libm::expm1(-y1))
    } else {
        libm::log1p(-libm::exp(-y1))
    };
    Ok(-log1mexp)
}

/// `ln(1 + e^t)` without overflow.
fn softplus(t: f64) -> f64 {
    if t > 0.0 {
        t + libm::log1p(libm::exp(-t))
    } else {
        libm::log1p(libm::exp(t))
    }
}

/// `ln(e^a + e^b)`.
fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + libm::log1p(libm::exp(lo - hi))
}

/// The shared-shock value `x0 = y1 - ln(1 + e^{y1 - y2})` implied by a point.
pub fn implied_shock(y1: f64, y2: f64) -> f64 {
    y1 - softplus(y1 - y2)
}

/// Joint density of `(Y1, Y2)` for `r = s = 1`; zero off the support.
pub fn joint_density_r1s1(y1: f64, y2: f64, params: &JointDensityParams) -> f64 {
    if !(y1 > 0.0) || y2.is_nan() {
        return 0.0;
    }
    let x0 = implied_shock(y1, y2);
    if !(x0 > 0.0) {
        return 0.0;
    }
    let log_f = (params.alpha0 - 1.0) * libm::log(x0) - params.ln_gamma_alpha0 - log_add_exp(y1, y2);
    libm::exp(log_f)
}

/// Closed form of `\int_b^\infty dx / (a + e^x) = (ln(a + e^b) - b) / a`.
pub fn integral_identity(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain(format!("integral_identity needs a > 0, got {a}")));
    }
    let ln_a = libm::log(a);
    // ln(a + e^b) - b, split on which term dominates.
    let v = if b > ln_a {
        libm::log1p(a * libm::exp(-b))
    } else {
        ln_a - b + libm::log1p(libm::exp(b - ln_a))
    };
    Ok(v / a)
}
