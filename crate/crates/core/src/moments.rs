//! Momentum and registration-time statistics of a spectral state, and the
//! uncertainty functional built from them.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Quadrature;
use crate::state::SpectralState;

/// Normalisation slack accepted by the moment functionals.
pub const NORM_TOLERANCE: f64 = 1e-6;

/// Mean, second moment and variance of a one-dimensional distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
    pub second_moment: f64,
}

impl Moments {
    /// Builds moments from `<x>` and `<x^2>`; round-off negatives in the
    /// variance down to `-1e-12` are clamped to zero.
    pub fn from_raw(mean: f64, second_moment: f64) -> Self {
        let mut variance = second_moment - mean * mean;
        if (-1e-12..0.0).contains(&variance) {
            variance = 0.0;
        }
        Self {
            mean,
            variance,
            second_moment,
        }
    }

    pub fn std_dev(&self) -> f64 {
        libm::sqrt(self.variance.max(0.0))
    }
}

/// Second-order finite-difference derivative on a uniform grid: centred in the
/// interior, one-sided three-point stencils at both ends.
pub(crate) fn derivative<T>(v: &[T], h: f64) -> Vec<T>
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>,
{
    let n = v.len();
    debug_assert!(n >= 3);
    let inv = 0.5 / h;
    let mut d = Vec::with_capacity(n);
    d.push((v[1] * 4.0 - v[0] * 3.0 - v[2]) * inv);
    for i in 1..n - 1 {
        d.push((v[i + 1] - v[i - 1]) * inv);
    }
    d.push((v[n - 1] * 3.0 - v[n - 2] * 4.0 + v[n - 3]) * inv);
    d
}

pub(crate) fn amplitude_derivative(state: &SpectralState) -> Result<Vec<Complex64>> {
    let n = state.grid().n();
    if n < 5 {
        return Err(Error::GridTooCoarse { n, min: 5 });
    }
    Ok(derivative(state.amp(), state.grid().spacing()))
}

/// Mean momentum `int k |f|^2 dk` and its spread.
pub fn momentum_moments(state: &SpectralState) -> Result<Moments> {
    state.require_normalized(NORM_TOLERANCE)?;
    let grid = state.grid();
    let (mut m1, mut m2) = (0.0, 0.0);
    for ((&k, &w), a) in grid.nodes().iter().zip(grid.weights()).zip(state.amp()) {
        let p = w * a.norm_sqr();
        m1 += k * p;
        m2 += k * k * p;
    }
    Ok(Moments::from_raw(m1, m2))
}

/// Registration-time second moment computed in the momentum domain,
/// `int |df/dk|^2 dk`.
pub fn time_variance_spectral(state: &SpectralState) -> Result<f64> {
    let d = amplitude_derivative(state)?;
    state.require_normalized(NORM_TOLERANCE)?;
    let w = state.grid().weights();
    Ok(w.iter().zip(&d).map(|(w, d)| w * d.norm_sqr()).sum())
}

/// Mean registration time `Re int conj(f) (-i df/dk) dk`.
///
/// Zero for real amplitudes; a phase `exp(i k s)` moves it by `s`.
pub fn tau_mean_spectral(state: &SpectralState) -> Result<f64> {
    let d = amplitude_derivative(state)?;
    let w = state.grid().weights();
    let minus_i = Complex64::new(0.0, -1.0);
    Ok(w.iter()
        .zip(state.amp().iter().zip(&d))
        .map(|(w, (a, d))| w * (a.conj() * minus_i * d).re)
        .sum())
}

/// Uncertainty functional: `int |df/dk|^2 dk` times the momentum variance.
pub fn omega(state: &SpectralState) -> Result<f64> {
    let t2 = time_variance_spectral(state)?;
    let m = momentum_moments(state)?;
    Ok(t2 * m.variance)
}
