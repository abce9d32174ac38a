//! Monte Carlo draws from the momentum and registration-time outcome
//! densities.
//!
//! Draws use inverse-CDF sampling of the tabulated density: each grid cell
//! carries the trapezoid mass of `|f|^2` and is filled uniformly, so the CDF
//! is piecewise linear between nodes.
//!
//! The generator is SplitMix64, spelled out so other implementations can
//! reproduce a stream bit for bit. With 64-bit wrapping arithmetic:
//!
//! ```text
//! state = state + 0x9E3779B97F4A7C15
//! z = state
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! z = z ^ (z >> 31)
//! ```
//!
//! `z` is the output, and a uniform variate in `[0, 1)` is `(z >> 11) * 2^-53`.
//! The stream starts from `state = seed`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fourier::{time_amplitude, BOUNDARY_DENSITY_LIMIT};
use crate::grid::{Quadrature, TimeGrid};
use crate::moments::NORM_TOLERANCE;
use crate::state::SpectralState;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum SampleKind {
    Momentum,
    Tau,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub values: Vec<f64>,
    pub seed: u64,
    pub kind: SampleKind,
}

/// Piecewise-linear CDF of a density tabulated on ascending nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseCdf {
    nodes: Vec<f64>,
    /// Cumulative mass at each node, ending at 1.
    cum: Vec<f64>,
}

impl PiecewiseCdf {
    pub fn new(nodes: &[f64], density: &[f64]) -> Result<Self> {
        if nodes.len() != density.len() {
            return Err(Error::Dimension {
                expected: nodes.len(),
                found: density.len(),
            });
        }
        if nodes.len() < 2 {
            return Err(Error::DegenerateState);
        }
        let mut cum = Vec::with_capacity(nodes.len());
        cum.push(0.0);
        let mut total = 0.0;
        for i in 1..nodes.len() {
            total += 0.5 * (nodes[i] - nodes[i - 1]) * (density[i] + density[i - 1]);
            cum.push(total);
        }
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::DegenerateState);
        }
        cum.iter_mut().for_each(|c| *c /= total);
        Ok(Self {
            nodes: nodes.to_vec(),
            cum,
        })
    }

    /// Smallest `x` with `F(x) = u`.
    pub fn quantile(&self, u: f64) -> f64 {
        // first node whose cumulative mass reaches u, never the left end
        let j = self.cum.partition_point(|&c| c < u).clamp(1, self.cum.len() - 1);
        let (c0, c1) = (self.cum[j - 1], self.cum[j]);
        let (x0, x1) = (self.nodes[j - 1], self.nodes[j]);
        if c1 > c0 {
            x0 + (x1 - x0) * ((u - c0) / (c1 - c0))
        } else {
            x0
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let n = self.nodes.len();
        if x <= self.nodes[0] {
            return 0.0;
        }
        if x >= self.nodes[n - 1] {
            return 1.0;
        }
        let j = self.nodes.partition_point(|&t| t <= x);
        let (x0, x1) = (self.nodes[j - 1], self.nodes[j]);
        let (c0, c1) = (self.cum[j - 1], self.cum[j]);
        c0 + (c1 - c0) * (x - x0) / (x1 - x0)
    }

    fn draw(&self, count: usize, seed: u64) -> Vec<f64> {
        let mut rng = SplitMix64::new(seed);
        (0..count).map(|_| self.quantile(rng.next_f64())).collect()
    }
}

fn check_count(count: usize) -> Result<()> {
    if count == 0 {
        Err(Error::Domain("sample count must be at least 1"))
    } else {
        Ok(())
    }
}

/// CDF of `|f(k)|^2 dk` on the state's grid.
pub fn momentum_cdf(state: &SpectralState) -> Result<PiecewiseCdf> {
    PiecewiseCdf::new(state.grid().nodes(), &state.density())
}

/// CDF of `|f(tau)|^2 dtau` on `tgrid`.
pub fn tau_cdf(state: &SpectralState, tgrid: &TimeGrid) -> Result<PiecewiseCdf> {
    let ta = time_amplitude(state, tgrid)?;
    let boundary_density = ta.boundary_density();
    if boundary_density >= BOUNDARY_DENSITY_LIMIT {
        return Err(Error::WindowTooSmall { boundary_density });
    }
    PiecewiseCdf::new(tgrid.nodes(), &ta.density())
}

/// `count` energy outcomes.
pub fn sample_momentum(state: &SpectralState, count: usize, seed: u64) -> Result<SampleBatch> {
    check_count(count)?;
    state.require_normalized(NORM_TOLERANCE)?;
    let values = momentum_cdf(state)?.draw(count, seed);
    Ok(SampleBatch {
        values,
        seed,
        kind: SampleKind::Momentum,
    })
}

/// `count` registration-time outcomes, with the density tabulated on `tgrid`.
pub fn sample_tau(state: &SpectralState, tgrid: &TimeGrid, count: usize, seed: u64) -> Result<SampleBatch> {
    check_count(count)?;
    state.require_normalized(NORM_TOLERANCE)?;
    let values = tau_cdf(state, tgrid)?.draw(count, seed);
    Ok(SampleBatch {
        values,
        seed,
        kind: SampleKind::Tau,
    })
}

/// Sample moments with their standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SampleStats {
    pub count: usize,
    pub mean: f64,
    /// Unbiased, `n - 1` denominator.
    pub variance: f64,
    /// `s / sqrt(n)`
    pub se_mean: f64,
    /// From the fourth central moment:
    /// `sqrt((m4 - s^4 (n - 3)/(n - 1)) / n)`.
    pub se_variance: f64,
}

pub fn estimate_moments(values: &[f64]) -> Result<SampleStats> {
    let count = values.len();
    if count < 2 {
        return Err(Error::Domain("moment estimates need at least two samples"));
    }
    let n = count as f64;
    let mean = values.iter().sum::<f64>() / n;
    let (mut m2, mut m4) = (0.0, 0.0);
    for &x in values {
        let d = (x - mean) * (x - mean);
        m2 += d;
        m4 += d * d;
    }
    let variance = m2 / (n - 1.0);
    let m4 = m4 / n;
    let vv = (m4 - variance * variance * (n - 3.0) / (n - 1.0)) / n;
    Ok(SampleStats {
        count,
        mean,
        variance,
        se_mean: libm::sqrt(variance / n),
        se_variance: libm::sqrt(vv.max(0.0)),
    })
}

/// Kolmogorov-Smirnov distance between the empirical CDF of `values` and
/// `cdf`.
pub fn ks_statistic(values: &[f64], cdf: &PiecewiseCdf) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf.cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}
