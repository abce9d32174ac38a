//! Parabolic cylinder functions `D_nu(x)`, solutions of
//! `y'' + (nu + 1/2 - x^2/4) y = 0` decaying as `x -> +inf`.

use core::f64::consts::PI;

use super::gamma::{ln_gamma, recip_gamma};
use super::gauss::GaussLegendre;
use super::kummer::kummer_m;
use crate::error::{Error, Result};

/// Up to this argument `D_nu` is summed from its Kummer series, which loses
/// roughly `e^{x^2/2}` ulps to cancellation for positive `x`.
pub const SERIES_LIMIT: f64 = 2.0;

/// From this argument on the large-`x` asymptotic series is used; in between
/// the Weber equation is integrated backwards from here by Taylor steps.
pub const ASYMPTOTIC_SWITCH: f64 = 9.0;

const TAYLOR_STEP: f64 = 0.25;

const MAX_ORDER: f64 = 5.0;
const MAX_ARG: f64 = 20.0;

fn check_range(nu: f64, x: f64) -> Result<()> {
    if !(nu.abs() <= MAX_ORDER) {
        return Err(Error::Domain("pcf: order must satisfy |nu| <= 5"));
    }
    if !(x.abs() <= MAX_ARG) {
        return Err(Error::Domain("pcf: argument must satisfy |x| <= 20"));
    }
    Ok(())
}

/// Parabolic cylinder function `D_nu(x)` for real `|nu| <= 5`, `|x| <= 20`.
///
/// Uses the even/odd decomposition
///
/// ```text
/// D_nu(x) = 2^{nu/2} e^{-x^2/4} [ sqrt(pi) / Gamma((1-nu)/2) M(-nu/2, 1/2, x^2/2)
///                               - sqrt(2 pi) x / Gamma(-nu/2) M((1-nu)/2, 3/2, x^2/2) ]
/// ```
///
/// for `x <= SERIES_LIMIT`, the asymptotic series
/// `x^nu e^{-x^2/4} sum_s (-1)^s (-nu)_{2s} / (s! (2x^2)^s)` for
/// `x >= ASYMPTOTIC_SWITCH`, and Taylor integration of the Weber equation
/// from `ASYMPTOTIC_SWITCH` down to `x` in between. Marching towards smaller
/// `x` follows the growing direction of `D_nu`, so the integration is stable.
pub fn pcf_d(nu: f64, x: f64) -> Result<f64> {
    check_range(nu, x)?;
    d_unchecked(nu, x)
}

/// `dD_nu/dx = (x/2) D_nu(x) - D_{nu+1}(x)`.
pub fn pcf_d_prime(nu: f64, x: f64) -> Result<f64> {
    check_range(nu, x)?;
    Ok(0.5 * x * d_unchecked(nu, x)? - d_unchecked(nu + 1.0, x)?)
}

pub(crate) fn d_unchecked(nu: f64, x: f64) -> Result<f64> {
    if x >= ASYMPTOTIC_SWITCH {
        Ok(asymptotic(nu, x))
    } else if x > SERIES_LIMIT {
        Ok(weber_march(nu, x))
    } else {
        series(nu, x)
    }
}

/// Integrates `y'' = (x^2/4 - nu - 1/2) y` from the asymptotic values at
/// `ASYMPTOTIC_SWITCH` down to `x` with local Taylor expansions.
fn weber_march(nu: f64, x: f64) -> f64 {
    const TERMS: usize = 64;
    let x0 = ASYMPTOTIC_SWITCH;
    let mut y = asymptotic(nu, x0);
    let mut dy = 0.5 * x0 * y - asymptotic(nu + 1.0, x0);
    let steps = libm::ceil((x0 - x) / TAYLOR_STEP) as usize;
    let h = (x - x0) / steps as f64;
    let mut xc = x0;
    let mut a = [0.0f64; TERMS];
    for _ in 0..steps {
        // q(xc + t) = q0 + q1 t + t^2 / 4
        let q0 = 0.25 * xc * xc - nu - 0.5;
        let q1 = 0.5 * xc;
        a[0] = y;
        a[1] = dy;
        let (mut sy, mut sdy) = (y + dy * h, dy);
        let mut hp = h;
        for n in 0..TERMS - 2 {
            let mut rhs = q0 * a[n];
            if n >= 1 {
                rhs += q1 * a[n - 1];
            }
            if n >= 2 {
                rhs += 0.25 * a[n - 2];
            }
            a[n + 2] = rhs / ((n + 2) * (n + 1)) as f64;
            sdy += (n + 2) as f64 * a[n + 2] * hp;
            hp *= h;
            let t = a[n + 2] * hp;
            sy += t;
            if n > 4 && t.abs() <= 1e-18 * sy.abs() && (a[n + 1] * hp / h).abs() <= 1e-17 * sy.abs() {
                break;
            }
        }
        y = sy;
        dy = sdy;
        xc += h;
    }
    y
}

fn series(nu: f64, x: f64) -> Result<f64> {
    let z = 0.5 * x * x;
    let even_coef = libm::sqrt(PI) * recip_gamma(0.5 * (1.0 - nu));
    let odd_coef = libm::sqrt(2.0 * PI) * x * recip_gamma(-0.5 * nu);
    let even = if even_coef == 0.0 {
        0.0
    } else {
        even_coef * kummer_m(-0.5 * nu, 0.5, z)?
    };
    let odd = if odd_coef == 0.0 {
        0.0
    } else {
        odd_coef * kummer_m(0.5 * (1.0 - nu), 1.5, z)?
    };
    Ok(libm::exp2(0.5 * nu) * libm::exp(-0.5 * z) * (even - odd))
}

fn asymptotic(nu: f64, x: f64) -> f64 {
    let inv = 1.0 / (2.0 * x * x);
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    for s in 0..200 {
        let sf = s as f64;
        let next = -term * (2.0 * sf - nu) * (2.0 * sf + 1.0 - nu) * inv / (sf + 1.0);
        if next == 0.0 || next.abs() >= term.abs() {
            break;
        }
        sum += next;
        term = next;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    libm::pow(x, nu) * libm::exp(-0.25 * x * x) * sum
}

/// `D_nu(x)` from the integral representation
/// `e^{-x^2/4} / Gamma(-nu) int_0^inf e^{-x xi - xi^2/2} xi^{-nu-1} d xi`,
/// valid only for `nu < 0`.
///
/// The piece `[0, eps]`, `eps = min(1, 1/|x|)`, is integrated term by term
/// through the Hermite generating function; the rest uses 20-point
/// Gauss-Legendre panels that double in width from `eps` up to 1 and are
/// uniform beyond. Independent of the Kummer route in [`pcf_d`], so it serves
/// as its oracle.
pub fn pcf_d_integral(nu: f64, x: f64) -> Result<f64> {
    if !(nu < 0.0) {
        return Err(Error::Domain("integral representation diverges unless nu < 0"));
    }
    if !(x.abs() <= MAX_ARG) || nu < -MAX_ORDER - 1.0 {
        return Err(Error::Domain("pcf integral: argument out of range"));
    }
    let (lg, _) = ln_gamma(-nu)?;
    Ok(weighted_integral(nu, x) * libm::exp(-lg))
}

/// `int_0^inf exp(-x^2/4 - x xi - xi^2/2) xi^{-nu-1} d xi`.
fn weighted_integral(nu: f64, x: f64) -> f64 {
    let eps = if x.abs() > 1.0 { 1.0 / x.abs() } else { 1.0 };
    let pre = -0.25 * x * x;

    // [0, eps]: e^{-x xi - xi^2/2} = sum_n He_n(x) (-xi)^n / n!
    let mut h_prev = 0.0f64;
    let mut h = 1.0f64;
    let mut head = 0.0f64;
    for n in 0..400 {
        let nf = n as f64;
        let contrib = h / (nf - nu);
        head += contrib;
        if n > 4 && contrib.abs() < 1e-18 * head.abs() && h_prev.abs() < 1e-17 * head.abs() {
            break;
        }
        let next = (-eps * x * h - eps * eps * h_prev) / (nf + 1.0);
        h_prev = h;
        h = next;
    }
    head *= libm::exp(pre + (-nu) * libm::log(eps));

    let gl = GaussLegendre::new(20);
    let integrand = |xi: f64| libm::exp(pre - x * xi - 0.5 * xi * xi + (-nu - 1.0) * libm::log(xi));
    let mut tail = 0.0;
    let mut a = eps;
    while a < 1.0 {
        let b = (2.0 * a).min(1.0);
        tail += gl.integrate(a, b, integrand);
        a = b;
    }
    let upper = (-x).max(0.0) + 40.0;
    while a < upper {
        let b = (a + 0.5).min(upper);
        tail += gl.integrate(a, b, integrand);
        a = b;
    }
    head + tail
}
