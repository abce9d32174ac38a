//! Minimum time-energy uncertainty states of a massless particle whose
//! momentum spectrum lives on the half-line `k > 0`.
//!
//! The crate is `no_std` (it needs `alloc`) and is organised bottom-up:
//!
//! - [`grid`], [`state`], [`moments`], [`fourier`]: quadrature grids, spectral
//!   amplitudes `f(k)`, momentum and registration-time statistics, the
//!   half-line Fourier transform to `f(tau)` and the uncertainty functional.
//! - [`special`]: log-gamma, Kummer's `M(a, b, z)`, parabolic cylinder
//!   functions `D_nu(x)` and the root solver for the stationarity condition
//!   `D'_{mu-1/2}(-2 sqrt(mu)) = 0`.
//! - [`extremal`], [`minimize`]: the analytic extremal state and an
//!   independent direct minimiser of the discretised functional.
//! - [`boost`]: light-cone boosts and translations of states and the checks
//!   that the uncertainty product is frame independent.
//! - [`sampler`]: Monte Carlo draws from the energy and registration-time
//!   outcome distributions with a fixed, portable generator.
//!
//! Natural units are used throughout (`hbar = c = 1`), so momentum and energy
//! coincide for right-moving states.

#![cfg_attr(not(test), no_std)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod boost;
pub mod error;
pub mod extremal;
pub mod fourier;
pub mod grid;
pub mod minimize;
pub mod moments;
pub mod sampler;
pub mod special;
pub mod state;

pub use num_complex::Complex64;

pub use boost::{
    boost_state, covariance_check, doppler_small_beta_check, invariance_report, resample, translate_state,
    CovarianceReport, FrameTransform, InvarianceReport,
};
pub use error::{Error, Result};
pub use extremal::{build_extremal, check_euler_lagrange, extremal_integrals, ExtremalParams};
pub use fourier::{auto_time_grid, time_amplitude, time_moments, TimeAmplitude};
pub use grid::{MomentumGrid, Quadrature, TimeGrid};
pub use minimize::{discrete_omega, discrete_omega_gradient, minimize_omega, MinimizeOptions, MinimizeReport};
pub use moments::{momentum_moments, omega, tau_mean_spectral, time_variance_spectral, Moments};
pub use sampler::{
    estimate_moments, ks_statistic, momentum_cdf, sample_momentum, sample_tau, tau_cdf, PiecewiseCdf, SampleBatch,
    SampleKind, SampleStats, SplitMix64,
};
pub use special::{kummer_m, ln_gamma, pcf_d, pcf_d_integral, pcf_d_prime, solve_mu, RootResult, DEFAULT_BRACKET};
pub use state::{default_k_max, SpectralState};
