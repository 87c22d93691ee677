//! Bracketed scalar root finding.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum RootError {
    #[error("root is not bracketed: f({lo}) = {f_lo}, f({hi}) = {f_hi}")]
    NotBracketed { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("bracket expansion exhausted without a sign change (last upper bound {hi})")]
    BracketNotFound { hi: f64 },
    #[error("root iteration did not converge within {max_iter} iterations")]
    NoConvergence { max_iter: usize },
}

/// Find a root of `f` in `[lo, hi]` with a secant/bisection hybrid
/// (the Illinois variant of regula falsi).
///
/// Secant steps give superlinear convergence on smooth functions; the
/// Illinois down-weighting of a twice-retained endpoint prevents the
/// one-sided stagnation of plain regula falsi, and any step that leaves
/// the bracket falls back to bisection. Terminates once the bracket width
/// drops below `abs_tol`.
pub fn find_root_bracketed<F>(f: F, lo: f64, hi: f64, abs_tol: f64, max_iter: usize) -> Result<f64, RootError>
where
    F: Fn(f64) -> f64,
{
    assert!(lo <= hi, "invalid bracket ordering");
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a);
    let mut fb = f(b);

    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(RootError::NotBracketed { lo, hi, f_lo: fa, f_hi: fb });
    }

    // -1: last update replaced the lower end, +1: the upper end.
    let mut side = 0i8;
    for _ in 0..max_iter {
        if (b - a).abs() <= abs_tol {
            return Ok(0.5 * (a + b));
        }

        let mid = 0.5 * (a + b);
        let mut x = if fb != fa { (a * fb - b * fa) / (fb - fa) } else { mid };
        // Guarantee progress: stay inside the bracket by a sliver.
        let min_step = 0.125 * abs_tol.max(4.0 * f64::EPSILON * (a.abs() + b.abs()));
        if !x.is_finite() || x <= a + min_step || x >= b - min_step {
            x = mid;
        }

        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = x;
            fb = fx;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
    }
    Err(RootError::NoConvergence { max_iter })
}

/// Expand `[lo, lo + step0]` geometrically upward until `f` changes sign.
///
/// Returns the first bracketing interval found. `f(lo)` must be finite;
/// expansion stops after `max_doublings` without a sign change.
pub fn expand_bracket_upward<F>(f: &F, lo: f64, step0: f64, max_doublings: usize) -> Result<(f64, f64), RootError>
where
    F: Fn(f64) -> f64,
{
    assert!(step0 > 0.0);
    let f_lo = f(lo);
    if f_lo == 0.0 {
        return Ok((lo, lo));
    }
    let mut step = step0;
    let mut a = lo;
    let mut fa = f_lo;
    for _ in 0..max_doublings {
        let b = a + step;
        let fb = f(b);
        if fb == 0.0 || fb.signum() != fa.signum() {
            return Ok((a, b));
        }
        a = b;
        fa = fb;
        step *= 2.0;
    }
    Err(RootError::BracketNotFound { hi: a })
}
