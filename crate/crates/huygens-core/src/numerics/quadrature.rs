//! Adaptive Gauss-Kronrod quadrature with error estimates.
//!
//! The basic rule is the 15-point Kronrod extension of 7-point Gauss,
//! with QUADPACK-style error rescaling. Adaptive refinement bisects the
//! segment with the largest error estimate until the global estimate
//! meets the requested tolerance.

use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

/// Tolerances and subdivision budget for adaptive integration.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 1e-14, max_subdivisions: 10_000 }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Self {
        assert!(rel_tol > 0.0 && abs_tol > 0.0, "tolerances must be positive");
        Self { rel_tol, abs_tol, max_subdivisions }
    }

    fn tolerance_for(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }

    /// Spec with both tolerances tightened by `factor`, for inner integrals
    /// of iterated quadrature.
    fn tightened(&self, factor: f64) -> Self {
        Self {
            rel_tol: self.rel_tol * factor,
            abs_tol: self.abs_tol * factor,
            max_subdivisions: self.max_subdivisions,
        }
    }
}

/// An integral value together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub err_est: f64,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum QuadratureError {
    #[error("integration bounds out of order: [{a}, {b}]")]
    BadInterval { a: f64, b: f64 },
    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (best value {}, error estimate {})", best.value, best.err_est
    )]
    NonConvergence { subdivisions: usize, best: Quadrature },
}

impl QuadratureError {
    /// Best estimate carried by a non-convergence error.
    pub fn best_estimate(&self) -> Option<Quadrature> {
        match self {
            QuadratureError::NonConvergence { best, .. } => Some(*best),
            _ => None,
        }
    }
}

// 15-point Kronrod nodes with embedded 7-point Gauss weights (QUADPACK).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_17,
    0.207_784_955_007_898_47,
    0.0,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_69,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

/// QUADPACK error rescaling: conservative bound on the Kronrod error from
/// the raw Gauss/Kronrod difference.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

fn qk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut fv1 = [0.0f64; 7];
    let mut fv2 = [0.0f64; 7];
    let mut res_gauss = 0.0;
    let mut res_kronrod = f_center * WGK[7];
    let mut res_abs = res_kronrod.abs();

    for (j, wg) in WG.iter().enumerate().take(3) {
        let jtw = j * 2 + 1;
        let x = half * XGK[jtw];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_gauss += wg * (f1 + f2);
        res_kronrod += WGK[jtw] * (f1 + f2);
        res_abs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    res_gauss += WG[3] * f_center;

    for j in 0..4 {
        let jtwm1 = j * 2;
        if jtwm1 >= 7 {
            break;
        }
        let x = half * XGK[jtwm1];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_kronrod += WGK[jtwm1] * (f1 + f2);
        res_abs += WGK[jtwm1] * (f1.abs() + f2.abs());
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let err = (res_kronrod - res_gauss) * half;
    let value = res_kronrod * half;
    let res_abs = res_abs * half.abs();
    (value, rescale_error(err, res_abs, res_asc * half.abs()), res_abs)
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    res_abs: f64,
}

impl Segment {
    /// A segment is worth splitting only if bisection can still produce
    /// new points and its error is not already at the roundoff floor of
    /// the 15-point rule.
    fn splittable(&self) -> bool {
        let mid = 0.5 * (self.a + self.b);
        mid > self.a && mid < self.b && self.err > 100.0 * f64::EPSILON * self.res_abs
    }
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
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
        self.err.total_cmp(&other.err)
    }
}

/// Adaptive integral of `f` over `[a, b]`.
pub fn integrate_1d<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Quadrature, QuadratureError>
where
    F: Fn(f64) -> f64,
{
    integrate_1d_segmented(f, &[a, b], spec)
}

/// Adaptive integral over consecutive panels `[breaks[0], breaks[n-1]]`.
///
/// Interior breakpoints seed the initial subdivision; callers use them to
/// pin known kinks or oscillation period boundaries.
pub fn integrate_1d_segmented<F>(f: F, breaks: &[f64], spec: &QuadratureSpec) -> Result<Quadrature, QuadratureError>
where
    F: Fn(f64) -> f64,
{
    assert!(breaks.len() >= 2, "need at least two breakpoints");
    let a = breaks[0];
    let b = breaks[breaks.len() - 1];
    if a > b {
        return Err(QuadratureError::BadInterval { a, b });
    }
    if a == b {
        return Ok(Quadrature { value: 0.0, err_est: 0.0 });
    }

    let mut heap: BinaryHeap<Segment> = BinaryHeap::new();
    let mut total_value = 0.0;
    let mut total_err = 0.0;
    let mut subdivisions = 0usize;

    for w in breaks.windows(2) {
        debug_assert!(w[0] <= w[1], "breakpoints must be sorted");
        if w[0] == w[1] {
            continue;
        }
        let (value, err, res_abs) = qk15(&f, w[0], w[1]);
        total_value += value;
        total_err += err;
        subdivisions += 1;
        heap.push(Segment { a: w[0], b: w[1], value, err, res_abs });
    }

    while total_err > spec.tolerance_for(total_value) {
        // Segments stuck at the roundoff floor stay in the totals but are
        // dropped from the work heap; an empty heap means the requested
        // tolerance is below what f64 evaluation can deliver, and the
        // honest error estimate is returned as-is.
        let worst = loop {
            match heap.pop() {
                Some(seg) if seg.splittable() => break seg,
                Some(_) => continue,
                None => {
                    return Ok(Quadrature { value: total_value, err_est: total_err });
                }
            }
        };
        if subdivisions >= spec.max_subdivisions {
            return Err(QuadratureError::NonConvergence {
                subdivisions,
                best: Quadrature { value: total_value, err_est: total_err },
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        let (v1, e1, r1) = qk15(&f, worst.a, mid);
        let (v2, e2, r2) = qk15(&f, mid, worst.b);
        total_value += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.err;
        subdivisions += 1;
        heap.push(Segment { a: worst.a, b: mid, value: v1, err: e1, res_abs: r1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, err: e2, res_abs: r2 });
    }

    Ok(Quadrature { value: total_value, err_est: total_err })
}

/// Adaptive integral of `f(x, y)` over the clipped region
/// `{ (x, y) : y ∈ [outer.0, outer.1], x ∈ [inner_lo, inner_hi(y)] }`.
///
/// Slices where `inner_hi(y) <= inner_lo` contribute zero. `outer_breaks`
/// must list the points where `inner_hi` switches branch: adaptive rules
/// converge slowly across the derivative kink, so the outer interval is
/// split there up front.
pub fn integrate_2d_clipped<F, H>(
    f: F,
    outer: (f64, f64),
    inner_hi: H,
    inner_lo: f64,
    outer_breaks: &[f64],
    spec: &QuadratureSpec,
) -> Result<Quadrature, QuadratureError>
where
    F: Fn(f64, f64) -> f64,
    H: Fn(f64) -> f64,
{
    let (a, b) = outer;
    if a > b {
        return Err(QuadratureError::BadInterval { a, b });
    }
    if a == b {
        return Ok(Quadrature { value: 0.0, err_est: 0.0 });
    }

    let mut breaks: Vec<f64> = vec![a, b];
    breaks.extend(outer_breaks.iter().copied().filter(|&x| x > a && x < b));
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let inner_spec = spec.tightened(0.05);
    let max_inner_err = Cell::new(0.0f64);
    let inner_failed = Cell::new(false);

    let outer_integrand = |y: f64| -> f64 {
        let hi = inner_hi(y);
        if hi <= inner_lo {
            return 0.0;
        }
        match integrate_1d(|x| f(x, y), inner_lo, hi, &inner_spec) {
            Ok(q) => {
                max_inner_err.set(max_inner_err.get().max(q.err_est));
                q.value
            }
            Err(e) => {
                inner_failed.set(true);
                e.best_estimate().map_or(0.0, |q| q.value)
            }
        }
    };

    let outer = integrate_1d_segmented(&outer_integrand, &breaks, spec);
    let inner_err_integrated = max_inner_err.get() * (b - a);
    match outer {
        Ok(q) if !inner_failed.get() => Ok(Quadrature {
            value: q.value,
            err_est: q.err_est + inner_err_integrated,
        }),
        Ok(q) => Err(QuadratureError::NonConvergence {
            subdivisions: spec.max_subdivisions,
            best: Quadrature { value: q.value, err_est: q.err_est + inner_err_integrated },
        }),
        Err(QuadratureError::NonConvergence { subdivisions, best }) => {
            Err(QuadratureError::NonConvergence {
                subdivisions,
                best: Quadrature { value: best.value, err_est: best.err_est + inner_err_integrated },
            })
        }
        Err(e) => Err(e),
    }
}

/// Breakpoints that split `[t_lo, t_hi]` at period boundaries of
/// `cos(omega t)`, used to keep adaptive rules efficient on long
/// oscillatory windows. Returns just the endpoints when the window spans
/// less than one period.
pub fn oscillation_breakpoints(t_lo: f64, t_hi: f64, omega: f64) -> Vec<f64> {
    let mut points = vec![t_lo];
    if omega.abs() > 0.0 {
        let period = std::f64::consts::TAU / omega.abs();
        if t_hi - t_lo > period {
            let mut t = t_lo + period;
            while t < t_hi {
                points.push(t);
                t += period;
            }
        }
    }
    points.push(t_hi);
    points
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_sin_over_half_period() {
        let q = integrate_1d(f64::sin, 0.0, std::f64::consts::PI, &QuadratureSpec::default()).unwrap();
        assert!((q.value - 2.0).abs() < 1e-12, "value {}", q.value);
        assert!(q.err_est >= (q.value - 2.0).abs());
    }

    #[test]
    fn empty_interval_is_exactly_zero() {
        let q = integrate_1d(|x| x.exp(), 1.3, 1.3, &QuadratureSpec::default()).unwrap();
        assert_eq!(q.value, 0.0);
        assert_eq!(q.err_est, 0.0);
    }

    #[test]
    fn honors_relative_tolerance() {
        let spec = QuadratureSpec::new(1e-12, 1e-16, 10_000);
        let q = integrate_1d(|x: f64| (x * x).exp() * x.sin(), 0.0, 2.0, &spec).unwrap();
        // reference from 30-digit arithmetic
        let reference = 15.156_747_652_034_052;
        assert!((q.value - reference).abs() < 1e-11 * reference);
    }

    #[test]
    fn rectangular_region_area() {
        let q = integrate_2d_clipped(|_, _| 1.0, (0.0, 1.0), |_| 1.0, 0.0, &[], &QuadratureSpec::default())
            .unwrap();
        assert!((q.value - 1.0).abs() < 1e-13);
    }

    #[test]
    fn triangular_clip_area() {
        let q = integrate_2d_clipped(|_, _| 1.0, (0.0, 1.0), |y| y, 0.0, &[], &QuadratureSpec::default())
            .unwrap();
        assert!((q.value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn inactive_clip_matches_iterated_product() {
        // Separable integrand on a rectangle: the clipped routine must agree
        // with the product of 1d integrals.
        let spec = QuadratureSpec::default();
        let fx = integrate_1d(|x: f64| (2.0 * x).cos(), 0.2, 0.9, &spec).unwrap();
        let fy = integrate_1d(|y: f64| (0.5 * y).sin() + 1.2, 1.0, 2.0, &spec).unwrap();
        let q = integrate_2d_clipped(
            |x, y| (2.0 * x).cos() * ((0.5 * y).sin() + 1.2),
            (1.0, 2.0),
            |_| 0.9,
            0.2,
            &[],
            &spec,
        )
        .unwrap();
        let product = fx.value * fy.value;
        assert!((q.value - product).abs() < 1e-11 * product.abs().max(1.0));
    }

    #[test]
    fn nonconvergence_carries_best_estimate() {
        let spec = QuadratureSpec::new(1e-14, 1e-18, 4);
        let err = integrate_1d(|x: f64| (40.0 * x).sin() / (x + 1e-3), 0.0, 3.0, &spec).unwrap_err();
        let best = err.best_estimate().expect("non-convergence keeps best estimate");
        assert!(best.err_est > 0.0);
    }

    #[test]
    fn oscillation_breakpoints_cover_window() {
        let pts = oscillation_breakpoints(0.0, 10.0, 5.0);
        assert!(pts.len() > 3);
        assert_eq!(pts[0], 0.0);
        assert_eq!(*pts.last().unwrap(), 10.0);
        let short = oscillation_breakpoints(0.0, 0.1, 5.0);
        assert_eq!(short, vec![0.0, 0.1]);
    }
}
