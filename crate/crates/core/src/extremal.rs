//! The analytic minimum-uncertainty state.
//!
//! Stationarity of the uncertainty functional under the normalisation
//! constraint gives the Weber equation in `x = scale (k - c)` with
//! `nu + 1/2 = sqrt(a (b - c^2))`. Free variation at `k = 0` forces
//! `f'(0) = 0`, and integrating the Euler-Lagrange equation against `f'`
//! forces `b = 3c^2/2`; together these give `a = 2 mu^2 / c^2`,
//! `scale = 2 sqrt(mu) / c`, and put the boundary at `x = -2 sqrt(mu)`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{MomentumGrid, Quadrature};
use crate::moments::{derivative, NORM_TOLERANCE};
use crate::special::pcf::d_unchecked;
use crate::state::{SpectralState, CUTOFF_TOLERANCE};

/// Constants of an extremal (or candidate extremal) state.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExtremalParams {
    pub mu: f64,
    pub nu: f64,
    /// `int (df/dk)^2 dk`
    pub a: f64,
    /// `int k^2 f^2 dk`
    pub b: f64,
    /// Mean momentum the state was built around.
    pub c: f64,
    /// `int k f^2 dk` as realised on the grid.
    pub realized_c: f64,
    /// Coefficient of the map `x = scale (k - c)`.
    pub scale: f64,
}

impl ExtremalParams {
    /// Parameters implied by an arbitrary real state through its own
    /// integrals: `mu = sqrt(a (b - c^2))`, `scale = (4a / (b - c^2))^{1/4}`.
    pub fn from_state(state: &SpectralState) -> Result<Self> {
        let (a, b, c) = extremal_integrals(state)?;
        let var = b - c * c;
        let mu = libm::sqrt(a * var);
        Ok(Self {
            mu,
            nu: mu - 0.5,
            a,
            b,
            c,
            realized_c: c,
            scale: libm::sqrt(libm::sqrt(4.0 * a / var)),
        })
    }

    /// The extremal value of the functional, `a b / 3`.
    pub fn omega(&self) -> f64 {
        self.a * self.b / 3.0
    }
}

/// Builds `f(k) = N D_{mu-1/2}((2 sqrt(mu) / c)(k - c))` on `grid`, normalised,
/// and returns it with its realised integrals.
pub fn build_extremal(mu: f64, c: f64, grid: &MomentumGrid) -> Result<(SpectralState, ExtremalParams)> {
    if !(mu > 0.0) || !(c > 0.0) {
        return Err(Error::Domain("extremal state needs mu > 0 and c > 0"));
    }
    let nu = mu - 0.5;
    let scale = 2.0 * libm::sqrt(mu) / c;
    let amp = grid
        .nodes()
        .iter()
        .map(|&k| d_unchecked(nu, scale * (k - c)).map(|v| Complex64::new(v, 0.0)))
        .collect::<Result<Vec<_>>>()?;
    let state = SpectralState::new(grid.clone(), amp)?.normalize()?;
    let tail_ratio = state.tail_ratio();
    if tail_ratio > CUTOFF_TOLERANCE {
        return Err(Error::Cutoff { tail_ratio });
    }
    let (a, b, realized_c) = extremal_integrals(&state)?;
    Ok((
        state,
        ExtremalParams {
            mu,
            nu,
            a,
            b,
            c,
            realized_c,
            scale,
        },
    ))
}

/// `(a, b, c) = (int (df/dk)^2, int k^2 f^2, int k f^2)` for a real state.
pub fn extremal_integrals(state: &SpectralState) -> Result<(f64, f64, f64)> {
    if !state.is_real(1e-10) {
        return Err(Error::Contract("extremal integrals need a real amplitude"));
    }
    let n = state.grid().n();
    if n < 5 {
        return Err(Error::GridTooCoarse { n, min: 5 });
    }
    state.require_normalized(NORM_TOLERANCE)?;
    let grid = state.grid();
    let f = state.real_parts();
    let df = derivative(&f, grid.spacing());
    let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let (k, w) = (grid.nodes()[i], grid.weights()[i]);
        a += w * df[i] * df[i];
        b += w * k * k * f[i] * f[i];
        c += w * k * f[i] * f[i];
    }
    Ok((a, b, c))
}

/// Max-norm residual of `f'' + (nu + 1/2 - x^2/4) f` after mapping the grid to
/// `x = scale (k - c)`, using the three-point second difference and skipping
/// the two end nodes.
pub fn check_euler_lagrange(state: &SpectralState, params: &ExtremalParams) -> Result<f64> {
    let n = state.grid().n();
    if n < 201 {
        return Err(Error::GridTooCoarse { n, min: 201 });
    }
    if !state.is_real(1e-10) {
        return Err(Error::Contract("Euler-Lagrange check needs a real amplitude"));
    }
    let grid = state.grid();
    let hx = params.scale * grid.spacing();
    let inv = 1.0 / (hx * hx);
    let f = state.real_parts();
    let shift = params.nu + 0.5;
    let mut worst = 0.0f64;
    for i in 1..n - 1 {
        let x = params.scale * (grid.nodes()[i] - params.c);
        let d2 = (f[i + 1] - 2.0 * f[i] + f[i - 1]) * inv;
        worst = worst.max((d2 + (shift - 0.25 * x * x) * f[i]).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::{momentum_moments, omega, time_variance_spectral};
    use crate::special::solve_mu;

    fn mu_star() -> f64 {
        solve_mu(0.25, 0.35, 1e-12).unwrap().mu
    }

    fn extremal(c: f64, k_max: f64, n: usize) -> (SpectralState, ExtremalParams) {
        build_extremal(mu_star(), c, &MomentumGrid::new(k_max, n).unwrap()).unwrap()
    }

    #[test]
    fn boundary_maps_to_root_argument() {
        let mu = mu_star();
        let (_, p) = extremal(1.0, 12.0, 4001);
        assert!((p.scale * (0.0 - p.c) + 2.0 * mu.sqrt()).abs() < 1e-15);
        assert!((p.scale * p.c - 2.0 * mu.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn slope_vanishes_at_origin() {
        let mu = mu_star();
        // exact slope: the root makes D'_nu(-2 sqrt mu) vanish
        let d0 = crate::special::pcf_d_prime(mu - 0.5, -2.0 * mu.sqrt()).unwrap();
        assert!(d0.abs() < 1e-10);
        // and the one-sided difference sees it once h^2 is small enough
        let (s, _) = extremal(1.0, 12.0, 16001);
        let f = s.real_parts();
        let df = derivative(&f, s.grid().spacing());
        let max = df.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        assert!(df[0].abs() < 1e-6 * max, "f'(0) = {}", df[0]);
    }

    #[test]
    fn extremum_identities_hold() {
        let mu = mu_star();
        let (s, p) = extremal(1.0, 12.0, 4001);
        assert!((p.b / (p.c * p.c) - 1.5).abs() < 1e-4);
        assert!(((p.a * (p.b - p.c * p.c)).sqrt() / mu - 1.0).abs() < 1e-4);
        assert!((p.omega() / (mu * mu) - 1.0).abs() < 1e-4);
        assert!((omega(&s).unwrap() - mu * mu).abs() < 1e-3);
        let m = momentum_moments(&s).unwrap();
        assert!((m.mean - 1.0).abs() < 1e-4);
        assert!((m.variance - 0.5).abs() < 1e-4);
        assert!((p.realized_c - 1.0).abs() < 1e-9);
    }

    #[test]
    fn a_is_the_time_variance() {
        let (s, p) = extremal(1.0, 12.0, 4001);
        assert!((time_variance_spectral(&s).unwrap() - p.a).abs() < 1e-10);
    }

    #[test]
    fn gaussian_integrals() {
        let s = SpectralState::gaussian(MomentumGrid::new(40.0, 4001).unwrap(), 10.0, 1.0).unwrap();
        let (a, b, c) = extremal_integrals(&s).unwrap();
        assert!((a - 0.25).abs() < 1e-4);
        assert!((b - 101.0).abs() < 1e-4);
        assert!((c - 10.0).abs() < 1e-4);
    }

    #[test]
    fn integrals_scale_with_c() {
        let (_, p1) = extremal(1.0, 12.0, 4001);
        let (_, p2) = extremal(2.0, 24.0, 4001);
        assert!((p2.a / p1.a - 0.25).abs() < 1e-8);
        assert!((p2.b / p1.b - 4.0).abs() < 1e-8);
        assert!((p2.realized_c / p1.realized_c - 2.0).abs() < 1e-8);
    }

    #[test]
    fn complex_state_rejected() {
        let grid = MomentumGrid::new(10.0, 101).unwrap();
        let s = SpectralState::from_fn(grid, |k| crate::Complex64::new(0.0, (-k).exp()))
            .normalize()
            .unwrap();
        assert!(matches!(extremal_integrals(&s), Err(Error::Contract(_))));
    }

    #[test]
    fn euler_lagrange_residual() {
        let (s, p) = extremal(1.0, 12.0, 4001);
        let r = check_euler_lagrange(&s, &p).unwrap();
        assert!(r < 1e-4 * s.max_abs(), "residual {r}");
        let (s2, p2) = extremal(1.0, 12.0, 8001);
        let r2 = check_euler_lagrange(&s2, &p2).unwrap();
        let ratio = r / r2;
        assert!(ratio > 3.0 && ratio < 5.0, "ratio {ratio}");
    }

    #[test]
    fn euler_lagrange_flags_a_gaussian() {
        let grid = MomentumGrid::new(12.0, 4001).unwrap();
        let g = SpectralState::gaussian(grid, 1.0, 0.7).unwrap();
        let (_, p) = extremal(1.0, 12.0, 4001);
        let r = check_euler_lagrange(&g, &p).unwrap();
        assert!(r > 0.05 * g.max_abs(), "residual {r}");
    }

    #[test]
    fn coarse_grid_rejected() {
        let grid = MomentumGrid::new(12.0, 101).unwrap();
        let (s, p) = build_extremal(mu_star(), 1.0, &grid).unwrap();
        assert!(matches!(check_euler_lagrange(&s, &p), Err(Error::GridTooCoarse { .. })));
    }

    #[test]
    fn short_cutoff_is_an_error() {
        let grid = MomentumGrid::new(3.0, 401).unwrap();
        assert!(matches!(
            build_extremal(mu_star(), 1.0, &grid),
            Err(Error::Cutoff { .. })
        ));
    }
}
