//! Bracketed scalar root finding: bisection with a guarded Newton polish.
//!
//! Every root the library needs lives on a strictly monotone stretch of a
//! smooth function, so a sign-changing bracket is always available. The
//! solver keeps the bracket invariant at all times and only accepts a Newton
//! iterate that lands strictly inside it; otherwise it bisects. Termination
//! is on bracket width, `|b - a| <= 1e-14 * (1 + |x|)`, which the quadratic
//! Newton tail usually reaches in a handful of iterations.

use crate::{Error, Result};

const WIDTH_TOL: f64 = 1e-14;
const MAX_ITER: usize = 200;

/// Doubles the interval `[lo, hi]` outward (both ends) until `f` changes
/// sign across it. The seed interval is the caller's; `[-1, 1]` suits the
/// level-structure equations.
pub(crate) fn expand_bracket(
    f: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
) -> Result<(f64, f64)> {
    let mut flo = f(lo);
    let mut fhi = f(hi);
    for _ in 0..MAX_ITER {
        if flo == 0.0 {
            return Ok((lo, lo));
        }
        if fhi == 0.0 {
            return Ok((hi, hi));
        }
        if flo.signum() != fhi.signum() {
            return Ok((lo, hi));
        }
        lo *= 2.0;
        hi *= 2.0;
        flo = f(lo);
        fhi = f(hi);
    }
    Err(Error::ConvergenceFailure {
        context: "bracket expansion found no sign change",
    })
}

/// Finds the root of `f` inside the sign-changing bracket `[a, b]`.
///
/// `df` is the derivative, used only for the guarded Newton acceleration;
/// correctness rests on bisection alone. Exact zeros of `f` are returned
/// verbatim, so analytically clean inputs give bitwise-clean roots.
pub(crate) fn solve_bracketed(
    f: impl Fn(f64) -> f64,
    df: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
) -> Result<f64> {
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let mut flo = f(lo);
    if flo == 0.0 {
        return Ok(lo);
    }
    let fhi = f(hi);
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::ConvergenceFailure {
            context: "root bracket does not change sign",
        });
    }

    let mut x = 0.5 * (lo + hi);
    for _ in 0..MAX_ITER {
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        if hi - lo <= WIDTH_TOL * (1.0 + x.abs()) {
            return Ok(x);
        }
        let d = df(x);
        let newton = x - fx / d;
        x = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(Error::ConvergenceFailure {
        context: "root iteration exceeded its step budget",
    })
}
