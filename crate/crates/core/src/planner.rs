//! Inverse problems: from requested shapes `(m, n)` and a target correlation,
//! find integer construction parameters.

use crate::error::{Error, Result};
use crate::model::{rho_m2_lower_bound, PlanM1, PlanM2, TargetSpec, ANTITHETIC_LOG_COV};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

/// In exact mode a target is accepted when the plan obtained from the
/// nearest integer `r` reproduces it within this absolute tolerance, i.e.
/// to the four decimals the correlations are customarily quoted with.
pub const EXACT_RHO_TOL: f64 = 5e-4;

/// Slack on the bivariate-uniform bound, absorbing round-off in user input.
const M2_BOUND_SLACK: f64 = 1e-12;

/// Tolerance used to decide that a real shape is integer-valued.
const INTEGRAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Antithetic uniforms `U`, `1 - U`.
    M1,
    /// Bivariate uniforms with density `1 + theta (1 - 2u1)(1 - 2u2)`.
    M2,
}

impl Method {
    pub fn number(self) -> u8 {
        match self {
            Method::M1 => 1,
            Method::M2 => 2,
        }
    }
}

/// How [`solve_m1`] treats targets that no integer `r` hits exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolveMode {
    #[default]
    Exact,
    Nearest,
}

/// Attainable correlation range for a method and pair of shapes.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub method: Method,
    pub m: f64,
    pub n: f64,
    pub rho_min: f64,
    pub rho_max: f64,
    pub notes: String,
}

fn nearly_integer(x: f64) -> Option<f64> {
    let k = libm::round(x);
    ((x - k).abs() <= INTEGRAL_TOL).then_some(k)
}

/// Integer `r` values with `r <= m < r (1 - c)`, each paired with its plan.
fn m1_window(m: f64, n: f64) -> Result<Vec<PlanM1>> {
    let gap = nearly_integer(n - m).ok_or_else(|| {
        Error::domain(format!(
            "n - m must be an integer so that s = n - m + r is integral (m = {m}, n = {n})"
        ))
    })?;
    let one_minus_c = 1.0 - ANTITHETIC_LOG_COV;
    let r_hi = libm::floor(m + INTEGRAL_TOL);
    let mut plans = Vec::new();
    let mut r = libm::floor(m / one_minus_c).max(1.0);
    while r <= r_hi {
        if m < r * one_minus_c {
            let alpha0 = (m - r).max(0.0);
            let s = r + gap;
            plans.push(PlanM1::new(r as u32, s as u32, alpha0)?);
        }
        r += 1.0;
    }
    if plans.is_empty() {
        return Err(Error::NoAdmissiblePlan(format!(
            "no integer r satisfies r <= m < r(1 - c) for m = {m}"
        )));
    }
    Ok(plans)
}

/// `r* = (m - rho0 sqrt(m n)) / (1 - c)`, the real root of the target equation.
pub fn m1_real_r(m: f64, n: f64, rho0: f64) -> f64 {
    (m - rho0 * libm::sqrt(m * n)) / (1.0 - ANTITHETIC_LOG_COV)
}

/// Correlation of the antithetic construction written in terms of the
/// marginal shapes: `(m + r (c - 1)) / sqrt(m n)`.
pub fn rho_m1_from_shapes(r: f64, m: f64, n: f64) -> f64 {
    (m + r * (ANTITHETIC_LOG_COV - 1.0)) / libm::sqrt(m * n)
}

/// Solves for an antithetic plan.
///
/// `Exact` rounds `r*` and accepts the plan only when it reproduces the
/// target within [`EXACT_RHO_TOL`]. `Nearest` scans the whole integer window
/// and returns the plan whose correlation is closest to the target, ties
/// going to the smaller `r`.
pub fn solve_m1(spec: &TargetSpec, mode: SolveMode) -> Result<PlanM1> {
    let (m, n, rho0) = (spec.m(), spec.n(), spec.rho0());
    if m < 1.0 {
        return Err(Error::domain(format!("the antithetic method needs m >= 1, got {m}")));
    }
    let window = m1_window(m, n)?;
    let rho_min = window.iter().map(|p| p.rho_theoretical).fold(f64::INFINITY, f64::min);
    if rho0 < rho_min - EXACT_RHO_TOL {
        return Err(Error::Infeasible {
            reason: format!("target {rho0} lies below every attainable correlation for m = {m}, n = {n}"),
            bound: rho_min,
        });
    }

    let mut best = window[0];
    for p in &window[1..] {
        if (p.rho_theoretical - rho0).abs() < (best.rho_theoretical - rho0).abs() {
            best = *p;
        }
    }

    match mode {
        SolveMode::Nearest => Ok(best),
        SolveMode::Exact => {
            let r_star = m1_real_r(m, n, rho0);
            let r = libm::round(r_star);
            window
                .iter()
                .find(|p| f64::from(p.r) == r && (p.rho_theoretical - rho0).abs() <= EXACT_RHO_TOL)
                .copied()
                .ok_or(Error::NotRepresentable {
                    rho_target: rho0,
                    r_star,
                    nearest_rho: best.rho_theoretical,
                })
        }
    }
}

/// Solves for a bivariate-uniform plan.
///
/// With `y = 4m - 4 rho0 sqrt(m n)`: `r = ceil(y / 5)`, `theta = 4 - y / r`,
/// `alpha0 = m - r`, `s = n - alpha0`. The resulting plan reproduces `rho0`
/// up to round-off because `r (4 - theta) = y`.
pub fn solve_m2(spec: &TargetSpec) -> Result<PlanM2> {
    let (m, n, rho0) = (spec.m(), spec.n(), spec.rho0());
    let (mi, ni) = match (nearly_integer(m), nearly_integer(n)) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(Error::domain(format!(
                "the bivariate-uniform method needs integer shapes, got m = {m}, n = {n}"
            )))
        }
    };
    if mi < 6.0 {
        return Err(Error::NoAdmissiblePlan(format!(
            "the bivariate-uniform method needs m >= 6 for a negative correlation, got m = {mi}"
        )));
    }
    let bound = rho_m2_lower_bound(mi, ni)?;
    if rho0 < bound - M2_BOUND_SLACK {
        return Err(Error::Infeasible {
            reason: format!("target {rho0} lies below the attainable bound for m = {mi}, n = {ni}"),
            bound,
        });
    }

    let y = 4.0 * mi - 4.0 * rho0 * libm::sqrt(mi * ni);
    let a = y / 5.0;
    // `a` integral up to round-off means theta = -1 exactly; do not bump r.
    let r = nearly_integer(a).unwrap_or_else(|| libm::ceil(a));
    let mut theta = 4.0 - y / r;
    if theta < -1.0 && theta > -1.0 - INTEGRAL_TOL {
        theta = -1.0;
    }
    let alpha0 = mi - r;
    let s = ni - alpha0;
    debug_assert!(r < mi && (-1.0..0.0).contains(&theta));
    PlanM2::new(r as u32, s as u32, alpha0, theta)
}

/// Attainable correlation range for `method` at shapes `(m, n)` (swapped if `m > n`).
pub fn feasibility(method: Method, m: f64, n: f64) -> Result<FeasibilityReport> {
    let (m, n) = if m > n { (n, m) } else { (m, n) };
    if !(m.is_finite() && m > 0.0 && n.is_finite()) {
        return Err(Error::domain(format!("shapes must be positive and finite (m = {m}, n = {n})")));
    }
    match method {
        Method::M1 => {
            let window = m1_window(m, n)?;
            let rhos = window.iter().map(|p| p.rho_theoretical);
            let rho_min = rhos.clone().fold(f64::INFINITY, f64::min);
            let rho_max = rhos.fold(f64::NEG_INFINITY, f64::max);
            let rs: Vec<String> = window.iter().map(|p| format!("{}", p.r)).collect();
            Ok(FeasibilityReport {
                method,
                m,
                n,
                rho_min,
                rho_max,
                notes: format!(
                    "attainable correlations are discrete: one per admissible r in {{{}}}",
                    rs.join(", ")
                ),
            })
        }
        Method::M2 => {
            let (mi, ni) = match (nearly_integer(m), nearly_integer(n)) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(Error::domain(format!("integer shapes required, got m = {m}, n = {n}"))),
            };
            if mi < 6.0 {
                return Err(Error::NoAdmissiblePlan(format!(
                    "m = {mi} < 6: the bound -(m - 5)/(4 sqrt(m n)) admits no negative correlation"
                )));
            }
            Ok(FeasibilityReport {
                method,
                m: mi,
                n: ni,
                rho_min: rho_m2_lower_bound(mi, ni)?,
                rho_max: -f64::EPSILON,
                notes: String::from(
                    "every correlation in [rho_min, 0) is attainable; the upper end is open and reported as -epsilon",
                ),
            })
        }
    }
}

/// One row of the reference table of antithetic correlations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    pub r: u32,
    pub m: u32,
    pub n: u32,
    pub rho: f64,
}

/// The 60-row reference table: `r in {2, 5, 8, 12}`, every integer `m` in
/// the window `r <= m < r (1 - c)`, and `n in {m + 1, m + 3, m + 6}`, sorted
/// by `(r, m, n)`.
pub fn reference_table() -> Vec<TableRow> {
    const RS: [u32; 4] = [2, 5, 8, 12];
    const N_OFFSETS: [u32; 3] = [1, 3, 6];
    let one_minus_c = 1.0 - ANTITHETIC_LOG_COV;
    let mut rows = Vec::with_capacity(60);
    for r in RS {
        let mut m = r;
        while f64::from(m) < f64::from(r) * one_minus_c {
            for off in N_OFFSETS {
                let n = m + off;
                rows.push(TableRow {
                    r,
                    m,
                    n,
                    rho: rho_m1_from_shapes(f64::from(r), f64::from(m), f64::from(n)),
                });
            }
            m += 1;
        }
    }
    rows
}

impl TableRow {
    /// `rho` cut to four decimals toward zero, the convention of the
    /// published table (e.g. -0.40789 displays as -0.4078).
    pub fn rho_display(&self) -> f64 {
        libm::trunc(self.rho * 1e4) / 1e4
    }
}

/// Evaluates the antithetic correlation of a row through the plan route,
/// `rho_m1(m - r, r, n - m + r)`.
pub fn table_row_plan(row: &TableRow) -> Result<PlanM1> {
    PlanM1::new(row.r, row.n - row.m + row.r, f64::from(row.m - row.r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{rho_m1, rho_m2, rho_m2_lower_bound};

    fn spec(m: f64, n: f64, rho: f64) -> TargetSpec {
        TargetSpec::new(m, n, rho).unwrap()
    }

    #[test]
    fn m1_exact_inverts_table_row() {
        let p = solve_m1(&spec(2.0, 3.0, -0.5266), SolveMode::Exact).unwrap();
        assert_eq!((p.r, p.s, p.alpha0), (2, 3, 0.0));
    }

    #[test]
    fn m1_exact_large_row() {
        let p = solve_m1(&spec(19.0, 25.0, -0.0339), SolveMode::Exact).unwrap();
        assert_eq!((p.r, p.s, p.alpha0), (12, 18, 7.0));
        assert!((p.rho_theoretical - rho_m1(7.0, 12, 18).unwrap()).abs() < 1e-15);
        assert!((p.rho_theoretical - -0.0339).abs() < 2e-4);
    }

    #[test]
    fn m1_below_global_bound_is_infeasible() {
        for mode in [SolveMode::Exact, SolveMode::Nearest] {
            match solve_m1(&spec(3.0, 3.0, -0.9), mode) {
                Err(Error::Infeasible { bound, .. }) => {
                    assert!((bound - ANTITHETIC_LOG_COV).abs() < 1e-12)
                }
                other => panic!("unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn m1_exact_rejects_between_values() {
        // Window for m = 7, n = 10 yields -0.146, -0.343, -0.540.
        let err = solve_m1(&spec(7.0, 10.0, -0.25), SolveMode::Exact).unwrap_err();
        assert!(matches!(err, Error::NotRepresentable { .. }));
        let p = solve_m1(&spec(7.0, 10.0, -0.25), SolveMode::Nearest).unwrap();
        assert_eq!(p.r, 6);
    }

    #[test]
    fn m1_nearest_brute_force() {
        for m in 1..=30 {
            for gap in [0, 2, 5] {
                let (m, n) = (f64::from(m), f64::from(m + gap));
                for k in 1..20 {
                    let rho0 = -0.035 * f64::from(k);
                    let Ok(t) = TargetSpec::new(m, n, rho0) else { continue };
                    let Ok(p) = solve_m1(&t, SolveMode::Nearest) else { continue };
                    // Exhaustive scan over every integer r <= m.
                    let mut best = f64::INFINITY;
                    for r in 1..=(m as u32) {
                        if m < f64::from(r) * (1.0 - ANTITHETIC_LOG_COV) {
                            let rho = rho_m1(m - f64::from(r), r, r + gap).unwrap();
                            best = best.min((rho - rho0).abs());
                        }
                    }
                    assert_eq!((p.rho_theoretical - rho0).abs(), best);
                    assert!(p.is_negatively_correlated());
                }
            }
        }
    }

    #[test]
    fn m1_non_integer_gap_rejected() {
        assert!(matches!(
            solve_m1(&spec(7.0, 9.5, -0.2), SolveMode::Nearest),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn m2_worked_example() {
        let p = solve_m2(&spec(7.0, 10.0, -0.05)).unwrap();
        assert_eq!((p.r, p.s, p.alpha0), (6, 9, 1.0));
        // mpmath: theta = -0.94555334217802518
        assert!((p.theta - -0.945_553_342_178_025_2).abs() < 1e-13);
        assert!((p.rho_theoretical - -0.05).abs() < 1e-12);
    }

    #[test]
    fn m2_boundary_theta_minus_one() {
        let p = solve_m2(&spec(6.0, 6.0, -1.0 / 24.0)).unwrap();
        assert_eq!((p.r, p.s, p.alpha0, p.theta), (5, 5, 1.0, -1.0));
    }

    #[test]
    fn m2_below_bound() {
        match solve_m2(&spec(7.0, 10.0, -0.07)) {
            Err(Error::Infeasible { bound, .. }) => assert!((bound - -0.0597).abs() < 1e-4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(solve_m2(&spec(5.0, 9.0, -0.01)), Err(Error::NoAdmissiblePlan(_))));
        assert!(matches!(solve_m2(&spec(6.5, 9.0, -0.01)), Err(Error::Domain(_))));
    }

    #[test]
    fn m2_round_trip_grid() {
        for m in 6..=20 {
            for n in m..=25 {
                let (mf, nf) = (f64::from(m), f64::from(n));
                let bound = rho_m2_lower_bound(mf, nf).unwrap();
                for k in 1..=7 {
                    let rho0 = bound * f64::from(k) / 8.0;
                    let p = solve_m2(&spec(mf, nf, rho0)).unwrap();
                    let rho = rho_m2(p.alpha0, p.r, p.s, p.theta).unwrap();
                    assert!((rho - rho0).abs() < 1e-12, "m={m} n={n} k={k}");
                    assert!((-1.0..0.0).contains(&p.theta));
                    assert!(p.alpha0 >= 0.0 && p.r <= p.s && f64::from(p.r) < mf);
                    assert!(p.is_negatively_correlated());
                }
            }
        }
    }

    #[test]
    fn feasibility_reports() {
        let f = feasibility(Method::M2, 7.0, 10.0).unwrap();
        assert!((f.rho_min - -0.0597).abs() < 1e-4);
        assert!(f.rho_min < f.rho_max && f.rho_max < 0.0);

        let f = feasibility(Method::M1, 2.0, 2.0).unwrap();
        assert!((f.rho_min - ANTITHETIC_LOG_COV).abs() < 1e-15);
        assert_eq!(f.rho_min, f.rho_max);

        assert!(feasibility(Method::M2, 5.0, 9.0).is_err());

        let f = feasibility(Method::M1, 10.0, 7.0).unwrap();
        assert_eq!((f.m, f.n), (7.0, 10.0));
        assert!((f.rho_max - -0.146_376_102_048_811_55).abs() < 1e-15);
    }

    #[test]
    fn table_shape() {
        let t = reference_table();
        assert_eq!(t.len(), 60);
        let find = |r, m, n| t.iter().find(|x| (x.r, x.m, x.n) == (r, m, n)).unwrap().rho;
        assert!((find(2, 2, 5) - -0.4078).abs() < 5e-4);
        assert!((find(12, 16, 22) - -0.1993).abs() < 5e-4);
        assert_eq!(t.iter().find(|x| (x.r, x.m, x.n) == (2, 2, 5)).unwrap().rho_display(), -0.4078);
        for row in &t {
            assert!((row.rho_display() - row.rho).abs() < 1e-4);
            let p = table_row_plan(row).unwrap();
            assert!((p.rho_theoretical - row.rho).abs() < 1e-14);
        }
    }
}
