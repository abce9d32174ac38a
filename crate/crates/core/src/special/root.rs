use super::pcf::pcf_d_prime;
use crate::error::{Error, Result};

/// Bracket used by [`solve_mu`] callers that have no better information.
pub const DEFAULT_BRACKET: (f64, f64) = (0.25, 0.35);

/// Width below which a bracket counts as collapsed.
const X_TOL: f64 = 1e-12;
const MAX_ITER: usize = 200;

/// Outcome of a bracketed root search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketRoot {
    pub x: f64,
    pub fx: f64,
    pub iterations: usize,
}

/// Solution of the stationarity condition for the extremal state.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RootResult {
    pub mu: f64,
    pub mu_squared: f64,
    pub nu: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Root of a continuous `f` that changes sign on `[lo, hi]`.
///
/// Illinois-modified regula falsi with a bisection step whenever the
/// secant estimate fails to halve the bracket within two iterations.
/// Stops once `|f| < f_tol` and the bracket is narrower than `1e-12`.
pub fn bracket_root(mut f: impl FnMut(f64) -> Result<f64>, lo: f64, hi: f64, f_tol: f64) -> Result<BracketRoot> {
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let (mut fa, mut fb) = (f(a)?, f(b)?);
    if fa == 0.0 {
        return Ok(BracketRoot {
            x: a,
            fx: 0.0,
            iterations: 0,
        });
    }
    if fb == 0.0 {
        return Ok(BracketRoot {
            x: b,
            fx: 0.0,
            iterations: 0,
        });
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(Error::Bracket { lo, hi });
    }
    // which end was retained last: -1 for a, +1 for b
    let mut side = 0i8;
    let mut width_two_ago = f64::INFINITY;
    let mut width_prev = b - a;
    let mut best = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
    for it in 1..=MAX_ITER {
        let width = b - a;
        let mut x = (a * fb - b * fa) / (fb - fa);
        if !(x > a && x < b) || width > 0.5 * width_two_ago {
            x = 0.5 * (a + b);
            side = 0;
        }
        width_two_ago = width_prev;
        width_prev = width;

        let fx = f(x)?;
        if fx.abs() < best.1.abs() {
            best = (x, fx);
        }
        if fx == 0.0 {
            return Ok(BracketRoot { x, fx, iterations: it });
        }
        if fx.signum() == fb.signum() {
            b = x;
            fb = fx;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        } else {
            a = x;
            fa = fx;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        }
        if b - a < X_TOL && best.1.abs() < f_tol {
            return Ok(BracketRoot {
                x: best.0,
                fx: best.1,
                iterations: it,
            });
        }
    }
    Err(Error::Precision("root bracket did not collapse"))
}

/// `g(mu) = D'_{mu - 1/2}(-2 sqrt(mu))`; its zero fixes the extremal order.
pub fn stationarity(mu: f64) -> Result<f64> {
    if !(mu > 0.0) {
        return Err(Error::Domain("mu must be positive"));
    }
    pcf_d_prime(mu - 0.5, -2.0 * libm::sqrt(mu))
}

/// Solves `D'_{mu - 1/2}(-2 sqrt(mu)) = 0` for `mu` on the given bracket.
pub fn solve_mu(bracket_lo: f64, bracket_hi: f64, tol: f64) -> Result<RootResult> {
    if !(bracket_lo > 0.0 && bracket_hi > 0.0) {
        return Err(Error::Domain("mu bracket must be positive"));
    }
    let r = bracket_root(stationarity, bracket_lo, bracket_hi, tol)?;
    Ok(RootResult {
        mu: r.x,
        mu_squared: r.x * r.x,
        nu: r.x - 0.5,
        residual: r.fx,
        iterations: r.iterations,
    })
}
