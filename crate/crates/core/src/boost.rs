//! Boosts along the propagation axis and light-cone translations.
//!
//! A boost with velocity `beta` multiplies every momentum by the blueshift
//! `1/D`, `D = sqrt((1 - beta)/(1 + beta))`, so `f_m(k) = sqrt(D) f(D k)`.
//! Because the grid belongs to the state this is done exactly: nodes are
//! stretched by `1/D` and amplitudes multiplied by `sqrt(D)`. For a
//! right-mover only `s = a - a0` of a translation `(a, a0)` is visible; it
//! multiplies `f(k)` by `exp(i k s)` and moves registration times by `s`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::{auto_time_grid, time_amplitude, BOUNDARY_DENSITY_LIMIT};
use crate::grid::{MomentumGrid, Quadrature, TimeGrid};
use crate::moments::{momentum_moments, omega, time_variance_spectral, NORM_TOLERANCE};
use crate::state::SpectralState;

/// Boost velocity plus space and time translation.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FrameTransform {
    pub beta: f64,
    pub a: f64,
    pub a0: f64,
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.abs() < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain("boost velocity must satisfy |beta| < 1"))
    }
}

impl FrameTransform {
    pub fn new(beta: f64, a: f64, a0: f64) -> Result<Self> {
        check_beta(beta)?;
        Ok(Self { beta, a, a0 })
    }

    pub fn boost(beta: f64) -> Result<Self> {
        Self::new(beta, 0.0, 0.0)
    }

    /// `sqrt((1 - beta)/(1 + beta))`; momenta scale by its inverse.
    pub fn doppler(&self) -> f64 {
        libm::sqrt((1.0 - self.beta) / (1.0 + self.beta))
    }

    /// Light-cone shift `a - a0` seen by a right-moving state.
    pub fn shift(&self) -> f64 {
        self.a - self.a0
    }

    /// The transform equivalent to applying `self` and then `next`.
    /// Velocities add relativistically; the first translation is contracted
    /// by the second boost.
    pub fn then(&self, next: &FrameTransform) -> FrameTransform {
        let beta = (self.beta + next.beta) / (1.0 + self.beta * next.beta);
        let d = next.doppler();
        FrameTransform {
            beta,
            a: d * self.a + next.a,
            a0: d * self.a0 + next.a0,
        }
    }

    /// Boost, then translate.
    pub fn apply(&self, state: &SpectralState) -> Result<SpectralState> {
        translate_state(&boost_state(state, self.beta)?, self.a, self.a0)
    }
}

/// State seen by an observer moving with velocity `beta`.
pub fn boost_state(state: &SpectralState, beta: f64) -> Result<SpectralState> {
    let t = FrameTransform::boost(beta)?;
    let d = t.doppler();
    let grid = MomentumGrid::new(state.grid().k_max() / d, state.grid().n())?;
    let s = libm::sqrt(d);
    SpectralState::new(grid, state.amp().iter().map(|a| a * s).collect())
}

/// Multiplies the amplitude by `exp(i k (a - a0))`.
pub fn translate_state(state: &SpectralState, a: f64, a0: f64) -> Result<SpectralState> {
    let s = a - a0;
    if s == 0.0 {
        return Ok(state.clone());
    }
    let amp = state
        .grid()
        .nodes()
        .iter()
        .zip(state.amp())
        .map(|(&k, v)| v * Complex64::from_polar(1.0, k * s))
        .collect();
    SpectralState::new(state.grid().clone(), amp)
}

/// Piecewise-cubic interpolation of `state` onto `grid`, zero beyond the
/// state's cutoff. Not renormalised.
pub fn resample(state: &SpectralState, grid: &MomentumGrid) -> Result<SpectralState> {
    let src = state.grid();
    let (h, n) = (src.spacing(), src.n());
    let amp = state.amp();
    let out = grid
        .nodes()
        .iter()
        .map(|&k| {
            if k > src.k_max() * (1.0 + 1e-14) {
                return Complex64::new(0.0, 0.0);
            }
            let x = k / h;
            // four-point stencil, shifted inwards at the ends
            let i = (libm::floor(x) as usize).saturating_sub(1).min(n - 4);
            let t = x - i as f64;
            let mut v = Complex64::new(0.0, 0.0);
            for j in 0..4 {
                let mut l = 1.0;
                for m in 0..4 {
                    if m != j {
                        l *= (t - m as f64) / (j as f64 - m as f64);
                    }
                }
                v += amp[i + j] * l;
            }
            v
        })
        .collect();
    SpectralState::new(grid.clone(), out)
}

fn rel(measured: f64, predicted: f64) -> f64 {
    if predicted == 0.0 {
        measured.abs()
    } else {
        (measured - predicted).abs() / predicted.abs()
    }
}

/// Momentum and registration-time statistics before and after a boost,
/// next to the scalings expected from the Doppler factor.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InvarianceReport {
    pub beta: f64,
    pub doppler: f64,
    pub mean: f64,
    pub var_k: f64,
    pub var_tau: f64,
    pub product: f64,
    pub mean_m: f64,
    pub var_k_m: f64,
    pub var_tau_m: f64,
    pub product_m: f64,
    pub predicted_mean_m: f64,
    pub predicted_var_k_m: f64,
    pub predicted_var_tau_m: f64,
    pub dev_mean: f64,
    pub dev_var_k: f64,
    pub dev_var_tau: f64,
    /// `|product_m - product| / product`
    pub dev_product: f64,
}

/// `var_tau` is the spectral second moment `int |f'|^2 dk`, the quantity
/// that enters the uncertainty product.
pub fn invariance_report(state: &SpectralState, beta: f64) -> Result<InvarianceReport> {
    let boosted = boost_state(state, beta)?;
    let d = FrameTransform::boost(beta)?.doppler();
    let m = momentum_moments(state)?;
    let mm = momentum_moments(&boosted)?;
    let var_tau = time_variance_spectral(state)?;
    let var_tau_m = time_variance_spectral(&boosted)?;
    let product = omega(state)?;
    let product_m = omega(&boosted)?;
    let predicted_mean_m = m.mean / d;
    let predicted_var_k_m = m.variance / (d * d);
    let predicted_var_tau_m = var_tau * d * d;
    Ok(InvarianceReport {
        beta,
        doppler: d,
        mean: m.mean,
        var_k: m.variance,
        var_tau,
        product,
        mean_m: mm.mean,
        var_k_m: mm.variance,
        var_tau_m,
        product_m,
        predicted_mean_m,
        predicted_var_k_m,
        predicted_var_tau_m,
        dev_mean: rel(mm.mean, predicted_mean_m),
        dev_var_k: rel(mm.variance, predicted_var_k_m),
        dev_var_tau: rel(var_tau_m, predicted_var_tau_m),
        dev_product: rel(product_m, product),
    })
}

/// `|mean_m - mean (1 + beta)| / mean`, the error of the first-order Doppler
/// formula. It is `beta^2 / 2 + O(beta^3)`.
pub fn doppler_small_beta_check(state: &SpectralState, beta: f64) -> Result<f64> {
    let m = momentum_moments(state)?;
    let mm = momentum_moments(&boost_state(state, beta)?)?;
    Ok((mm.mean - m.mean * (1.0 + beta)).abs() / m.mean)
}

/// Pointwise comparison of outcome densities before and after a transform.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CovarianceReport {
    pub transform: FrameTransform,
    pub doppler: f64,
    /// Max `|p'(tau) - p((tau - s)/D)/D|`: boost first, then translate.
    pub tau_deviation: f64,
    /// Max `|p'(tau) - p(tau/D - s)/D|`: translate first, then boost.
    pub tau_deviation_translate_first: f64,
    /// Max `|p(tau) - D p'(D tau - s)|`, the printed argument read as the
    /// original density expressed through the transformed one.
    pub tau_deviation_literal: f64,
    /// Max `|p'(k) - D p(D k)|` over the boosted nodes.
    pub k_deviation: f64,
    /// Largest density among all the comparisons, for scale.
    pub peak_density: f64,
}

fn density_on(state: &SpectralState, lo: f64, hi: f64, m: usize) -> Result<Vec<f64>> {
    Ok(time_amplitude(state, &TimeGrid::new(lo, hi, m)?)?.density())
}

fn max_diff(x: &[f64], y: &[f64], jac: f64) -> f64 {
    x.iter().zip(y).map(|(p, q)| (p - jac * q).abs()).fold(0.0, f64::max)
}

/// Checks that the transformed state's registration-time and momentum
/// densities are the scaled and shifted originals. The tau window spans
/// twelve spectral standard deviations around the transformed mean with
/// `m` nodes.
pub fn covariance_check(state: &SpectralState, transform: &FrameTransform, m: usize) -> Result<CovarianceReport> {
    check_beta(transform.beta)?;
    state.require_normalized(NORM_TOLERANCE)?;
    let d = transform.doppler();
    let s = transform.shift();
    let moved = transform.apply(state)?;

    let tg = auto_time_grid(&moved, 12.0, m)?;
    let ta = time_amplitude(&moved, &tg)?;
    let boundary_density = ta.boundary_density();
    if boundary_density >= BOUNDARY_DENSITY_LIMIT {
        return Err(Error::WindowTooSmall { boundary_density });
    }
    let (lo, hi) = (tg.tau_min(), tg.tau_max());
    let moved_p = ta.density();
    let inv = 1.0 / d;

    let orig = density_on(state, (lo - s) * inv, (hi - s) * inv, m)?;
    let tau_deviation = max_diff(&moved_p, &orig, inv);
    let swapped = density_on(state, lo * inv - s, hi * inv - s, m)?;
    let tau_deviation_translate_first = max_diff(&moved_p, &swapped, inv);

    let og = auto_time_grid(state, 12.0, m)?;
    let orig_p = time_amplitude(state, &og)?.density();
    let lit = density_on(&moved, d * og.tau_min() - s, d * og.tau_max() - s, m)?;
    let tau_deviation_literal = max_diff(&orig_p, &lit, d);

    let boosted = boost_state(state, transform.beta)?;
    let k_deviation = max_diff(&boosted.density(), &state.density(), d);

    let peak_density = moved_p.iter().chain(&orig_p).fold(0.0f64, |a, &b| a.max(b));
    Ok(CovarianceReport {
        transform: *transform,
        doppler: d,
        tau_deviation,
        tau_deviation_translate_first,
        tau_deviation_literal,
        k_deviation,
        peak_density,
    })
}
