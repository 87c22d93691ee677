//! Adaptive explicit Runge-Kutta integration (Dormand-Prince 5(4))
//! for small fixed-size systems.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum OdeError {
    #[error("step size underflow at x = {x} (h = {h}); integrand too stiff or singular")]
    StepSizeUnderflow { x: f64, h: f64 },
    #[error("step budget of {max_steps} exhausted before reaching the end point")]
    TooManySteps { max_steps: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OdeOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 1e-12, max_steps: 2_000_000 }
    }
}

// Dormand-Prince 5(4) tableau.
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// b - b_hat: weights of the embedded 4th-order error estimate.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrate `dy/dx = f(x, y)` from `x0` to `x1` (either direction) for a
/// two-component state, returning the state at `x1`.
pub fn dopri5_2d<F>(f: F, x0: f64, x1: f64, y0: [f64; 2], opts: &OdeOptions) -> Result<[f64; 2], OdeError>
where
    F: Fn(f64, [f64; 2]) -> [f64; 2],
{
    if x0 == x1 {
        return Ok(y0);
    }
    let direction = (x1 - x0).signum();
    let span = (x1 - x0).abs();
    let mut x = x0;
    let mut y = y0;
    let mut k1 = f(x, y);
    // Conservative initial step; the controller adapts within a few steps.
    let mut h = direction * span * 1e-3;

    for _ in 0..opts.max_steps {
        if (x - x1).abs() == 0.0 || (x1 - x) * direction <= 0.0 {
            return Ok(y);
        }
        if (x1 - x) * direction < h.abs() {
            h = x1 - x;
        }
        if h.abs() < 16.0 * f64::EPSILON * x.abs().max(1.0) {
            return Err(OdeError::StepSizeUnderflow { x, h });
        }

        let mut k = [[0.0f64; 2]; 7];
        k[0] = k1;
        for stage in 0..6 {
            let mut yi = y;
            for (j, kj) in k.iter().enumerate().take(stage + 1) {
                yi[0] += h * A[stage][j] * kj[0];
                yi[1] += h * A[stage][j] * kj[1];
            }
            k[stage + 1] = f(x + C[stage] * h, yi);
        }

        // 5th-order solution: the last A row doubles as the b weights (FSAL).
        let mut y_next = y;
        for (j, kj) in k.iter().enumerate().take(6) {
            y_next[0] += h * A[5][j] * kj[0];
            y_next[1] += h * A[5][j] * kj[1];
        }

        let mut err_sq = 0.0;
        for i in 0..2 {
            let mut e = 0.0;
            for (j, kj) in k.iter().enumerate() {
                e += E[j] * kj[i];
            }
            e *= h;
            let scale = opts.abs_tol + opts.rel_tol * y[i].abs().max(y_next[i].abs());
            err_sq += (e / scale) * (e / scale);
        }
        let err = (err_sq / 2.0).sqrt();

        if err <= 1.0 {
            x += h;
            y = y_next;
            k1 = k[6]; // FSAL: last stage is f at the accepted point
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h *= factor;
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
        }
    }
    Err(OdeError::TooManySteps { max_steps: opts.max_steps })
}
