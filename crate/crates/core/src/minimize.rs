//! Direct minimisation of the discretised uncertainty functional over real
//! amplitudes.
//!
//! The discrete functional is the lumped piecewise-linear one: trapezoid
//! weights for `N = int f^2`, `C = int k f^2` and `B = int k^2 f^2`, and the
//! stiffness `A = sum (f_{i+1} - f_i)^2 / h` for `int f'^2`. A centred
//! difference would leave the alternating mode `(-1)^i` invisible to `A` and
//! the descent would collapse into it; Simpson's alternating weights would
//! imprint that same mode on the minimiser at `O(h^2)`. With `a = A/N`, `b = B/N`, `c = C/N`
//! the objective is `a (b - c^2)`, homogeneous of degree zero in `f`.
//!
//! Steps are preconditioned by the tridiagonal metric
//! `2 (var K + a diag(w ((k - c)^2 + var)))`, which mirrors the leading
//! terms of the Hessian and keeps the iteration count independent of the
//! grid size. Nothing is imposed at `k = 0`: the vanishing slope there comes
//! out of the stationarity condition.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{MomentumGrid, Quadrature};
use crate::moments::{derivative, NORM_TOLERANCE};
use crate::state::SpectralState;

/// Halvings tried per line search before giving up.
const MAX_BACKTRACK: usize = 50;
/// Armijo sufficient-decrease constant.
const ARMIJO: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizeOptions {
    /// Initial trial step of each line search (1 is a full Newton-like step).
    pub step: f64,
    pub max_iter: usize,
    /// Stop once the preconditioned gradient norm falls below this.
    pub grad_tol: f64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self {
            step: 1.0,
            max_iter: 2000,
            grad_tol: 1e-7,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimizeReport {
    pub omega_min: f64,
    pub iterations: usize,
    pub grad_norm: f64,
    pub converged: bool,
    /// Objective after every accepted step, starting with the initial value.
    pub history: Vec<f64>,
    pub state: SpectralState,
}

fn trapezoid(grid: &MomentumGrid) -> Vec<f64> {
    let h = grid.spacing();
    let mut w = alloc::vec![h; grid.n()];
    w[0] = 0.5 * h;
    w[grid.n() - 1] = 0.5 * h;
    w
}

struct Parts {
    a: f64,
    b: f64,
    c: f64,
    n: f64,
}

impl Parts {
    fn omega(&self) -> f64 {
        self.a * (self.b - self.c * self.c)
    }
}

fn parts(grid: &MomentumGrid, f: &[f64]) -> Parts {
    let h = grid.spacing();
    let (mut n, mut cc, mut bb) = (0.0, 0.0, 0.0);
    for ((&k, &w), &v) in grid.nodes().iter().zip(&trapezoid(grid)).zip(f) {
        let p = w * v * v;
        n += p;
        cc += k * p;
        bb += k * k * p;
    }
    let aa: f64 = f.windows(2).map(|s| (s[1] - s[0]) * (s[1] - s[0])).sum::<f64>() / h;
    Parts {
        a: aa / n,
        b: bb / n,
        c: cc / n,
        n,
    }
}

fn check(grid: &MomentumGrid, f: &[f64]) -> Result<()> {
    if f.len() != grid.n() {
        return Err(Error::Dimension {
            expected: grid.n(),
            found: f.len(),
        });
    }
    if grid.n() < 5 {
        return Err(Error::GridTooCoarse { n: grid.n(), min: 5 });
    }
    Ok(())
}

/// The discrete objective for real nodal values `f` (any normalisation).
pub fn discrete_omega(grid: &MomentumGrid, f: &[f64]) -> Result<f64> {
    check(grid, f)?;
    let p = parts(grid, f);
    if !(p.n > 0.0) {
        return Err(Error::DegenerateState);
    }
    Ok(p.omega())
}

/// Objective and its exact gradient with respect to the nodal values.
pub fn discrete_omega_gradient(grid: &MomentumGrid, f: &[f64]) -> Result<(f64, Vec<f64>)> {
    check(grid, f)?;
    let p = parts(grid, f);
    if !(p.n > 0.0) {
        return Err(Error::DegenerateState);
    }
    let h = grid.spacing();
    let last = f.len() - 1;
    let var = p.b - p.c * p.c;
    let weights = trapezoid(grid);
    let g = (0..f.len())
        .map(|i| {
            let (k, w) = (grid.nodes()[i], weights[i]);
            // grad A = 2 K f
            let mut kf = 0.0;
            if i > 0 {
                kf += f[i] - f[i - 1];
            }
            if i < last {
                kf += f[i] - f[i + 1];
            }
            let da = (2.0 * kf / h - p.a * 2.0 * w * f[i]) / p.n;
            let db = (2.0 * w * k * k * f[i] - p.b * 2.0 * w * f[i]) / p.n;
            let dc = (2.0 * w * k * f[i] - p.c * 2.0 * w * f[i]) / p.n;
            da * var + p.a * (db - 2.0 * p.c * dc)
        })
        .collect();
    Ok((p.omega(), g))
}

/// Solves the symmetric tridiagonal system `(diag + off-diagonals) x = rhs`.
fn thomas(diag: &[f64], off: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut cp = Vec::with_capacity(n);
    let mut dp = Vec::with_capacity(n);
    cp.push(if n > 1 { off[0] / diag[0] } else { 0.0 });
    dp.push(rhs[0] / diag[0]);
    for i in 1..n {
        let m = diag[i] - off[i - 1] * cp[i - 1];
        cp.push(if i < n - 1 { off[i] / m } else { 0.0 });
        dp.push((rhs[i] - off[i - 1] * dp[i - 1]) / m);
    }
    let mut x = dp;
    for i in (0..n - 1).rev() {
        x[i] -= cp[i] * x[i + 1];
    }
    x
}

/// The preconditioning metric as (diagonal, off-diagonal) of a symmetric
/// tridiagonal matrix.
fn metric(grid: &MomentumGrid, f: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let p = parts(grid, f);
    let var = (p.b - p.c * p.c).max(f64::MIN_POSITIVE);
    let n = f.len();
    let s = var / grid.spacing();
    let weights = trapezoid(grid);
    let diag = (0..n)
        .map(|i| {
            let (k, w) = (grid.nodes()[i], weights[i]);
            let stiff = if i == 0 || i == n - 1 { s } else { 2.0 * s };
            2.0 * (stiff + p.a * w * ((k - p.c) * (k - p.c) + var)) / p.n
        })
        .collect();
    (diag, alloc::vec![-2.0 * s / p.n; n - 1])
}

fn tri_mul(diag: &[f64], off: &[f64], x: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|i| {
            let mut y = diag[i] * x[i];
            if i > 0 {
                y += off[i - 1] * x[i - 1];
            }
            if i < n - 1 {
                y += off[i] * x[i + 1];
            }
            y
        })
        .collect()
}

/// Infinitesimal dilation `f/2 + k f'`, the direction along which the
/// continuum objective is exactly flat.
fn dilation(grid: &MomentumGrid, f: &[f64]) -> Vec<f64> {
    let df = derivative(f, grid.spacing());
    grid.nodes()
        .iter()
        .zip(f)
        .zip(&df)
        .map(|((k, v), d)| 0.5 * v + k * d)
        .collect()
}

/// Descent direction: metric-preconditioned gradient with the dilation and
/// normalisation directions removed in the metric inner product.
fn direction(grid: &MomentumGrid, f: &[f64], g: &[f64]) -> Vec<f64> {
    let (diag, off) = metric(grid, f);
    let mut d = thomas(&diag, &off, g);
    for v in [dilation(grid, f), f.to_vec()] {
        let mv = tri_mul(&diag, &off, &v);
        let vmv: f64 = v.iter().zip(&mv).map(|(a, b)| a * b).sum();
        if vmv > 0.0 {
            let r = d.iter().zip(&mv).map(|(a, b)| a * b).sum::<f64>() / vmv;
            d.iter_mut().zip(&v).for_each(|(di, vi)| *di -= r * vi);
        }
    }
    d
}

fn normalized(grid: &MomentumGrid, f: &mut [f64]) {
    let n2: f64 = grid.weights().iter().zip(f.iter()).map(|(w, v)| w * v * v).sum();
    let s = 1.0 / libm::sqrt(n2);
    f.iter_mut().for_each(|v| *v *= s);
}

/// Preconditioned projected gradient descent with Armijo backtracking,
/// renormalising after every step.
pub fn minimize_omega(init: &SpectralState, opts: &MinimizeOptions) -> Result<MinimizeReport> {
    if !(opts.step > 0.0) || !(opts.grad_tol > 0.0) {
        return Err(Error::Domain("step and grad_tol must be positive"));
    }
    if !init.is_real(1e-10) {
        return Err(Error::Contract("minimizer needs a real amplitude"));
    }
    init.require_normalized(NORM_TOLERANCE)?;
    let grid = init.grid().clone();
    let mut f: Vec<f64> = init.amp().iter().map(|a| a.re).collect();
    let (mut om, mut g) = discrete_omega_gradient(&grid, &f)?;
    let mut history = alloc::vec![om];
    let mut iterations = 0;
    let mut trial = alloc::vec![0.0; f.len()];

    let converged = loop {
        let d = direction(&grid, &f, &g);
        let slope: f64 = g.iter().zip(&d).map(|(a, b)| a * b).sum();
        let grad_norm = libm::sqrt(slope.max(0.0));
        if grad_norm < opts.grad_tol {
            break (true, grad_norm);
        }
        if iterations == opts.max_iter {
            break (false, grad_norm);
        }

        let mut t = opts.step;
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACK {
            for ((x, v), di) in trial.iter_mut().zip(&f).zip(&d) {
                *x = v - t * di;
            }
            let cand = discrete_omega(&grid, &trial)?;
            if cand <= om - ARMIJO * t * slope {
                accepted = Some(cand);
                break;
            }
            // a predicted decrease below round-off means we are at the floor
            if t * slope < 1e-15 * om {
                break;
            }
            t *= 0.5;
        }
        match accepted {
            Some(_) => {
                core::mem::swap(&mut f, &mut trial);
                normalized(&grid, &mut f);
                let (o, gg) = discrete_omega_gradient(&grid, &f)?;
                om = o;
                g = gg;
                history.push(om);
                iterations += 1;
            }
            None if t * slope < 1e-15 * om => break (true, grad_norm),
            None => return Err(Error::OptimizationFailure { iterations, grad_norm }),
        }
    };

    let amp = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    Ok(MinimizeReport {
        omega_min: om,
        iterations,
        grad_norm: converged.1,
        converged: converged.0,
        history,
        state: SpectralState::new(grid, amp)?,
    })
}
