//! Bracketed scalar root finding: bisection with secant acceleration.
//!
//! The bracket never widens. A secant step is accepted only when it falls
//! strictly inside the bracket; whenever the bracket fails to halve within
//! two steps the next step is forced to the midpoint, so the method
//! inherits the bisection convergence guarantee.

use crate::{Error, Result};

/// Find a root of `f` in `[lo, hi]` with `f(lo)` and `f(hi)` of opposite sign.
///
/// Converges to |x - root| <= `xtol` or |f(x)| <= `ftol`, whichever first.
pub fn bisect_secant<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    xtol: f64,
    ftol: f64,
) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::Bracket(format!(
            "no sign change on [{a}, {b}]: f(a)={fa:.3e}, f(b)={fb:.3e}"
        )));
    }

    let mut width_two_ago = b - a;
    for iter in 0..220 {
        let width = b - a;
        if width <= xtol {
            return Ok(0.5 * (a + b));
        }
        // Secant candidate from the bracket endpoints; force bisection when
        // the bracket has not halved over the last two iterations.
        let xs = b - fb * (b - a) / (fb - fa);
        let stalled = iter >= 2 && width > 0.5 * width_two_ago;
        let x = if !stalled && xs.is_finite() && xs > a && xs < b {
            xs.clamp(a + 1e-3 * width, b - 1e-3 * width)
        } else {
            0.5 * (a + b)
        };
        width_two_ago = if iter % 2 == 0 { width } else { width_two_ago };

        let fx = f(x);
        if fx == 0.0 || (fx.is_finite() && fx.abs() <= ftol) {
            return Ok(x);
        }
        if !fx.is_finite() {
            return Err(Error::Bracket(format!(
                "function returned non-finite value at x = {x}"
            )));
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
    }
    Err(Error::Bracket(format!(
        "root iteration failed to converge on [{a}, {b}]"
    )))
}
