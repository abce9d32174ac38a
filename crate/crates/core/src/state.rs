use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{MomentumGrid, Quadrature};

/// Relative amplitude at `k_max` above which a state counts as truncated.
pub const CUTOFF_TOLERANCE: f64 = 1e-6;

/// Momentum-representation amplitude `f(k)` sampled on a [`MomentumGrid`].
///
/// `|f(k)|^2 dk` is the energy outcome distribution; the underlying field
/// amplitude is `psi(k, k) = sqrt(k) f(k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralState {
    grid: MomentumGrid,
    amp: Vec<Complex64>,
}

impl SpectralState {
    pub fn new(grid: MomentumGrid, amp: Vec<Complex64>) -> Result<Self> {
        if grid.n() != amp.len() {
            return Err(Error::Dimension {
                expected: grid.n(),
                found: amp.len(),
            });
        }
        Ok(Self { grid, amp })
    }

    pub fn from_fn(grid: MomentumGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let amp = grid.nodes().iter().map(|&k| f(k)).collect();
        Self { grid, amp }
    }

    pub fn from_real_fn(grid: MomentumGrid, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(grid, |k| Complex64::new(f(k), 0.0))
    }

    /// Normalised real amplitude whose density `|f|^2` is a Gaussian with mean
    /// `kbar` and standard deviation `sigma`, cut off at `k = 0`.
    pub fn gaussian(grid: MomentumGrid, kbar: f64, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(Error::Domain("gaussian width must be positive"));
        }
        let s4 = 4.0 * sigma * sigma;
        Self::from_real_fn(grid, |k| libm::exp(-(k - kbar) * (k - kbar) / s4)).normalize()
    }

    pub fn grid(&self) -> &MomentumGrid {
        &self.grid
    }

    pub fn amp(&self) -> &[Complex64] {
        &self.amp
    }

    pub fn into_parts(self) -> (MomentumGrid, Vec<Complex64>) {
        (self.grid, self.amp)
    }

    /// `|f(k_i)|^2` at every node.
    pub fn density(&self) -> Vec<f64> {
        self.amp.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm_squared(&self) -> f64 {
        self.grid
            .weights()
            .iter()
            .zip(&self.amp)
            .map(|(w, a)| w * a.norm_sqr())
            .sum()
    }

    /// Rescale to unit norm.
    pub fn normalize(&self) -> Result<Self> {
        let n2 = self.norm_squared();
        if !(n2 > 0.0) || !n2.is_finite() {
            return Err(Error::DegenerateState);
        }
        let s = 1.0 / libm::sqrt(n2);
        Ok(Self {
            grid: self.grid.clone(),
            amp: self.amp.iter().map(|a| a * s).collect(),
        })
    }

    pub(crate) fn require_normalized(&self, tol: f64) -> Result<()> {
        if (self.norm_squared() - 1.0).abs() > tol {
            Err(Error::Contract("state must be normalized"))
        } else {
            Ok(())
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.amp.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// `|f(k_max)| / max |f|`.
    pub fn tail_ratio(&self) -> f64 {
        let m = self.max_abs();
        if m == 0.0 {
            return 0.0;
        }
        self.amp[self.amp.len() - 1].norm() / m
    }

    /// `Some(tail_ratio)` when the cutoff visibly truncates the state.
    pub fn cutoff_warning(&self) -> Option<f64> {
        let r = self.tail_ratio();
        (r > CUTOFF_TOLERANCE).then_some(r)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.amp.iter().all(|a| a.im.abs() <= tol)
    }

    pub(crate) fn real_parts(&self) -> Vec<f64> {
        self.amp.iter().map(|a| a.re).collect()
    }

    /// L2 distance `(int |f - g|^2 dk)^(1/2)` to a state on the same grid.
    pub fn l2_distance(&self, other: &SpectralState) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::Contract("states must share a grid"));
        }
        let d: f64 = self
            .grid
            .weights()
            .iter()
            .zip(self.amp.iter().zip(&other.amp))
            .map(|(w, (a, b))| w * (a - b).norm_sqr())
            .sum();
        Ok(libm::sqrt(d.max(0.0)))
    }
}

/// Cutoff policy: mean plus twelve standard deviations.
pub fn default_k_max(mean: f64, std_dev: f64) -> f64 {
    mean + 12.0 * std_dev
}
