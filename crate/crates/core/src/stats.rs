//! Streaming moments, Pearson correlation, and the Kolmogorov–Smirnov statistic.

use crate::error::{Error, Result};
use crate::sampler::SamplePair;

/// Single-pass accumulator of means, variances, and covariance of a pair
/// stream (Welford updates, Chan et al. merge).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SummaryStats {
    n: u64,
    mean1: f64,
    mean2: f64,
    m2_1: f64,
    m2_2: f64,
    c12: f64,
}

impl SummaryStats {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64, y: f64) {
        self.n += 1;
        let n = self.n as f64;
        let dx = x - self.mean1;
        self.mean1 += dx / n;
        let dy = y - self.mean2;
        self.mean2 += dy / n;
        self.m2_1 += dx * (x - self.mean1);
        self.m2_2 += dy * (y - self.mean2);
        self.c12 += dx * (y - self.mean2);
    }

    pub fn accumulate(&mut self, pair: SamplePair) {
        self.push(pair.y1, pair.y2);
    }

    /// Combines two accumulators as if their inputs had been concatenated.
    pub fn merge(&self, other: &Self) -> Self {
        if self.n == 0 {
            return *other;
        }
        if other.n == 0 {
            return *self;
        }
        let (na, nb) = (self.n as f64, other.n as f64);
        let n = na + nb;
        let d1 = other.mean1 - self.mean1;
        let d2 = other.mean2 - self.mean2;
        let w = na * nb / n;
        Self {
            n: self.n + other.n,
            mean1: self.mean1 + d1 * nb / n,
            mean2: self.mean2 + d2 * nb / n,
            m2_1: self.m2_1 + other.m2_1 + d1 * d1 * w,
            m2_2: self.m2_2 + other.m2_2 + d2 * d2 * w,
            c12: self.c12 + other.c12 + d1 * d2 * w,
        }
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean1(&self) -> f64 {
        self.mean1
    }

    pub fn mean2(&self) -> f64 {
        self.mean2
    }

    fn denom(&self) -> f64 {
        if self.n < 2 {
            f64::NAN
        } else {
            (self.n - 1) as f64
        }
    }

    /// Unbiased variance of the first coordinate (NaN below two samples).
    pub fn var1(&self) -> f64 {
        self.m2_1 / self.denom()
    }

    pub fn var2(&self) -> f64 {
        self.m2_2 / self.denom()
    }

    pub fn cov(&self) -> f64 {
        self.c12 / self.denom()
    }

    /// Pearson correlation, or `None` when either variance vanishes.
    pub fn corr(&self) -> Option<f64> {
        if self.n < 2 || !(self.m2_1 > 0.0) || !(self.m2_2 > 0.0) {
            return None;
        }
        Some(self.c12 / libm::sqrt(self.m2_1 * self.m2_2))
    }
}

impl Extend<SamplePair> for SummaryStats {
    fn extend<I: IntoIterator<Item = SamplePair>>(&mut self, iter: I) {
        for p in iter {
            self.accumulate(p);
        }
    }
}

impl FromIterator<SamplePair> for SummaryStats {
    fn from_iter<I: IntoIterator<Item = SamplePair>>(iter: I) -> Self {
        let mut s = Self::new();
        s.extend(iter);
        s
    }
}

/// Asymptotic 1% critical value coefficient of the one-sample KS test.
pub const KS_CRIT_1PCT: f64 = 1.6276;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    pub statistic: f64,
    pub n: usize,
    pub critical_1pct: f64,
}

impl KsResult {
    pub fn passes_1pct(&self) -> bool {
        self.statistic < self.critical_1pct
    }
}

/// One-sample KS distance between sorted `samples` and `cdf`:
/// `max_i max(i/n - F(x_i), F(x_i) - (i-1)/n)`.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<KsResult> {
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = samples.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        let above = (i + 1) as f64 / n - f;
        let below = f - i as f64 / n;
        d = d.max(above).max(below);
    }
    Ok(KsResult {
        statistic: d,
        n: samples.len(),
        critical_1pct: KS_CRIT_1PCT / libm::sqrt(n),
    })
}

/// Sorts `samples` in place and computes [`ks_statistic`].
pub fn ks_test<F: Fn(f64) -> f64>(samples: &mut [f64], cdf: F) -> Result<KsResult> {
    samples.sort_unstable_by(f64::total_cmp);
    ks_statistic(samples, cdf)
}
