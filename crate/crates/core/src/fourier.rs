//! Half-line Fourier transform from `f(k)` to the registration-time
//! amplitude `f(tau)`, and the statistics of `|f(tau)|^2`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Quadrature, TimeGrid};
use crate::moments::{tau_mean_spectral, time_variance_spectral, Moments};
use crate::state::SpectralState;

/// Largest `|f(tau)|^2` tolerated at either end of a tau window.
pub const BOUNDARY_DENSITY_LIMIT: f64 = 1e-8;

/// Registration-time amplitude `f(tau)` on a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct TimeAmplitude {
    grid: TimeGrid,
    amp: Vec<Complex64>,
}

impl TimeAmplitude {
    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn amp(&self) -> &[Complex64] {
        &self.amp
    }

    pub fn density(&self) -> Vec<f64> {
        self.amp.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `int |f(tau)|^2 dtau` over the window.
    pub fn norm_squared(&self) -> f64 {
        self.grid
            .weights()
            .iter()
            .zip(&self.amp)
            .map(|(w, a)| w * a.norm_sqr())
            .sum()
    }

    /// Largest density at the two window edges.
    pub fn boundary_density(&self) -> f64 {
        let n = self.amp.len();
        self.amp[0].norm_sqr().max(self.amp[n - 1].norm_sqr())
    }
}

/// `f(tau) = (2 pi)^{-1/2} int_0^kmax f(k) exp(-i k tau) dk`, evaluated with the
/// state's Simpson weights at every node of `tgrid`.
///
/// The `(2 pi)^{-1/2}` factor makes `|f(tau)|^2 dtau` a probability measure with
/// the same normalisation as `|f(k)|^2 dk`.
pub fn time_amplitude(state: &SpectralState, tgrid: &TimeGrid) -> Result<TimeAmplitude> {
    let kg = state.grid();
    let h = kg.spacing();
    // weights times amplitudes, reused for every tau
    let wf: Vec<Complex64> = kg.weights().iter().zip(state.amp()).map(|(&w, &a)| a * w).collect();
    let scale = 1.0 / libm::sqrt(2.0 * PI);
    let amp = tgrid
        .nodes()
        .iter()
        .map(|&tau| {
            // exp(-i k_i tau) by repeated rotation, re-anchored every 64 nodes
            let step = Complex64::from_polar(1.0, -h * tau);
            let mut acc = Complex64::new(0.0, 0.0);
            let mut phase = Complex64::new(1.0, 0.0);
            for (i, &v) in wf.iter().enumerate() {
                if i % 64 == 0 {
                    phase = Complex64::from_polar(1.0, -(h * i as f64) * tau);
                }
                acc += v * phase;
                phase *= step;
            }
            acc * scale
        })
        .collect();
    Ok(TimeAmplitude {
        grid: tgrid.clone(),
        amp,
    })
}

/// Mean and raw second moment of `|f(tau)|^2`.
pub fn time_moments(ta: &TimeAmplitude) -> Result<Moments> {
    let boundary_density = ta.boundary_density();
    if boundary_density >= BOUNDARY_DENSITY_LIMIT {
        return Err(Error::WindowTooSmall { boundary_density });
    }
    let (mut m1, mut m2) = (0.0, 0.0);
    for ((&t, &w), a) in ta.grid.nodes().iter().zip(ta.grid.weights()).zip(&ta.amp) {
        let p = w * a.norm_sqr();
        m1 += t * p;
        m2 += t * t * p;
    }
    Ok(Moments::from_raw(m1, m2))
}

/// Tau window centred on the state's mean registration time, spanning
/// `half_widths` spectral standard deviations either side.
pub fn auto_time_grid(state: &SpectralState, half_widths: f64, m: usize) -> Result<TimeGrid> {
    let mean = tau_mean_spectral(state)?;
    let second = time_variance_spectral(state)?;
    let sd = libm::sqrt((second - mean * mean).max(0.0));
    if !(sd > 0.0) {
        return Err(Error::DegenerateState);
    }
    TimeGrid::centered(mean, half_widths * sd, m)
}
