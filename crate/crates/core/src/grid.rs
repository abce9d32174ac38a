//! Uniform grids carrying composite-Simpson weights.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Nodes and weights of a quadrature rule on a bounded interval.
pub trait Quadrature {
    fn nodes(&self) -> &[f64];
    fn weights(&self) -> &[f64];

    fn len(&self) -> usize {
        self.nodes().len()
    }

    fn is_empty(&self) -> bool {
        self.nodes().is_empty()
    }

    /// Node spacing.
    fn spacing(&self) -> f64 {
        let x = self.nodes();
        (x[x.len() - 1] - x[0]) / (x.len() - 1) as f64
    }

    /// `sum_i w_i v_i`.
    fn integrate(&self, values: &[Complex64]) -> Result<Complex64> {
        check_len(self.len(), values.len())?;
        Ok(self
            .weights()
            .iter()
            .zip(values)
            .fold(Complex64::new(0.0, 0.0), |acc, (&w, &v)| acc + v * w))
    }

    fn integrate_real(&self, values: &[f64]) -> Result<f64> {
        check_len(self.len(), values.len())?;
        Ok(self.weights().iter().zip(values).map(|(w, v)| w * v).sum())
    }
}

/// Free-function form of [`Quadrature::integrate`].
pub fn quadrature<G: Quadrature + ?Sized>(values: &[Complex64], grid: &G) -> Result<Complex64> {
    grid.integrate(values)
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { expected, found })
    }
}

/// Composite Simpson rule on `n` (odd, >= 3) equally spaced nodes.
fn simpson(lo: f64, hi: f64, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidGrid("node count must be odd and at least 3"));
    }
    if !(lo.is_finite() && hi.is_finite()) || hi <= lo {
        return Err(Error::InvalidGrid("interval bounds must be finite and increasing"));
    }
    let h = (hi - lo) / (n - 1) as f64;
    let mut nodes: Vec<f64> = (0..n).map(|i| lo + h * i as f64).collect();
    nodes[n - 1] = hi;
    let weights = (0..n)
        .map(|i| {
            let c = if i == 0 || i == n - 1 {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            c * h / 3.0
        })
        .collect();
    Ok((nodes, weights))
}

/// Discretisation of the momentum half-line `[0, k_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumGrid {
    k_max: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl MomentumGrid {
    pub fn new(k_max: f64, n: usize) -> Result<Self> {
        if !(k_max > 0.0) {
            return Err(Error::InvalidGrid("k_max must be positive"));
        }
        let (nodes, weights) = simpson(0.0, k_max, n)?;
        Ok(Self { k_max, nodes, weights })
    }

    pub fn k_max(&self) -> f64 {
        self.k_max
    }

    pub fn n(&self) -> usize {
        self.nodes.len()
    }
}

impl Quadrature for MomentumGrid {
    fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Grid over registration-time differences `tau = x - t`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    tau_min: f64,
    tau_max: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl TimeGrid {
    pub fn new(tau_min: f64, tau_max: f64, m: usize) -> Result<Self> {
        let (nodes, weights) = simpson(tau_min, tau_max, m)?;
        Ok(Self {
            tau_min,
            tau_max,
            nodes,
            weights,
        })
    }

    /// Symmetric window `[center - half_width, center + half_width]`.
    pub fn centered(center: f64, half_width: f64, m: usize) -> Result<Self> {
        Self::new(center - half_width, center + half_width, m)
    }

    pub fn tau_min(&self) -> f64 {
        self.tau_min
    }

    pub fn tau_max(&self) -> f64 {
        self.tau_max
    }

    pub fn m(&self) -> usize {
        self.nodes.len()
    }
}

impl Quadrature for TimeGrid {
    fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    fn weights(&self) -> &[f64] {
        &self.weights
    }
}
