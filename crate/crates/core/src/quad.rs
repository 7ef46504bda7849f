//! Adaptive Gauss–Kronrod quadrature.
//!
//! Global bisection with a 7/15-point Gauss–Kronrod pair: the interval with
//! the largest error estimate `|K15 - G7|` is split until the summed
//! estimate falls below the tolerance. Neither rule evaluates the endpoints,
//! so integrable endpoint singularities such as `ln x` at 0 are handled by
//! repeated bisection toward them.

use crate::error::{Error, Result};
use alloc::collections::BinaryHeap;
use core::cell::Cell;
use core::cmp::Ordering;

/// Upper limit on the number of subintervals.
pub const MAX_INTERVALS: usize = 20_000;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd Kronrod nodes 1, 3, 5 and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Segment {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment { a, b, value: kronrod * half, error: ((kronrod - gauss) * half).abs() }
}

/// Integrates `f` over `[a, b]` to absolute error `tol`.
pub fn quad_1d<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain(alloc::format!("quad_1d needs finite a < b, got [{a}, {b}]")));
    }
    let first = gk15(&mut f, a, b);
    let mut total = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    while error > tol {
        if heap.len() >= MAX_INTERVALS {
            return Err(Error::NoConvergence { estimate: error, tol });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) {
            // Interval exhausted at machine precision.
            return Err(Error::NoConvergence { estimate: error, tol });
        }
        let left = gk15(&mut f, worst.a, mid);
        let right = gk15(&mut f, mid, worst.b);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        if error <= tol || !error.is_finite() {
            // Recompute from scratch to shed accumulated cancellation.
            total = heap.iter().map(|s| s.value).sum();
            error = heap.iter().map(|s| s.error).sum();
        }
    }
    if !total.is_finite() {
        return Err(Error::NoConvergence { estimate: error, tol });
    }
    Ok(total)
}

/// Iterated integral `\int_{x0}^{x1} \int_{lo(x)}^{hi(x)} f(x, y) dy dx`.
///
/// Inner integrals run at `tol / (10 (x1 - x0))`; empty inner ranges
/// contribute zero. The first inner failure is reported.
pub fn quad_2d<F, L, H>(f: F, x0: f64, x1: f64, lo: L, hi: H, tol: f64) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
    L: Fn(f64) -> f64,
    H: Fn(f64) -> f64,
{
    let inner_tol = tol / (10.0 * (x1 - x0));
    let failure: Cell<Option<Error>> = Cell::new(None);
    let outer = quad_1d(
        |x| {
            let (a, b) = (lo(x), hi(x));
            if !(a < b) {
                return 0.0;
            }
            match quad_1d(|y| f(x, y), a, b, inner_tol) {
                Ok(v) => v,
                Err(e) => {
                    let prev = failure.take();
                    failure.set(Some(prev.unwrap_or(e)));
                    0.0
                }
            }
        },
        x0,
        x1,
        tol,
    )?;
    match failure.take() {
        Some(e) => Err(e),
        None => Ok(outer),
    }
}
