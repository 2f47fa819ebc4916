//! Complex radial fields sampled on a [`RadialGrid`], with plain and weighted
//! Lebesgue norms.

use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::RadialGrid;

/// Fraction of the nodes (at the outer edge) treated as the boundary layer.
pub const BOUNDARY_LAYER: f64 = 0.05;
/// Relative amplitude below which a field counts as decayed at R.
pub const DECAY_TOLERANCE: f64 = 1e-12;

#[derive(Clone)]
pub struct RadialField {
    grid: Arc<RadialGrid>,
    values: Vec<Complex64>,
    spectral: OnceLock<Vec<Complex64>>,
}

impl std::fmt::Debug for RadialField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialField")
            .field("grid", &self.grid.spec())
            .field("len", &self.values.len())
            .finish()
    }
}

impl RadialField {
    pub fn new(grid: Arc<RadialGrid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "field has {} samples but the grid has {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values, spectral: OnceLock::new() })
    }

    pub(crate) fn with_spectral(grid: Arc<RadialGrid>, values: Vec<Complex64>, spectral: Vec<Complex64>) -> Self {
        let cache = OnceLock::new();
        let _ = cache.set(spectral);
        Self { grid, values, spectral: cache }
    }

    pub fn zeros(grid: Arc<RadialGrid>) -> Self {
        let n = grid.len();
        Self { grid, values: vec![Complex64::new(0.0, 0.0); n], spectral: OnceLock::new() }
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(grid: Arc<RadialGrid>, f: F) -> Self {
        let values = grid.nodes().iter().map(|&r| f(r)).collect();
        Self { grid, values, spectral: OnceLock::new() }
    }

    pub fn from_real_fn<F: Fn(f64) -> f64>(grid: Arc<RadialGrid>, f: F) -> Self {
        Self::from_fn(grid, |r| Complex64::new(f(r), 0.0))
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub(crate) fn spectral_cache(&self) -> &OnceLock<Vec<Complex64>> {
        &self.spectral
    }

    /// Pointwise map of the samples; the spectral cache is dropped.
    pub fn map<F: Fn(f64, Complex64) -> Complex64>(&self, f: F) -> Self {
        let values = self.grid.nodes().iter().zip(&self.values).map(|(&r, &v)| f(r, v)).collect();
        Self { grid: self.grid.clone(), values, spectral: OnceLock::new() }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|_, v| c * v)
    }

    fn zip_with<F: Fn(Complex64, Complex64) -> Complex64>(&self, other: &Self, f: F) -> Result<Self> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::GridMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self { grid: self.grid.clone(), values, spectral: OnceLock::new() })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.re == 0.0 && v.im == 0.0)
    }

    /// ‖f‖_{L²(ℝⁿ)}.
    pub fn l2_norm(&self) -> f64 {
        integrate_real(&self.grid, self.values.iter().map(|v| v.norm_sqr())).sqrt()
    }

    /// Boundary-layer decay measurements; see [`boundary_decay_check`].
    pub fn boundary_decay(&self) -> BoundaryDecay {
        let j = self.values.len();
        let start = j - ((j as f64 * BOUNDARY_LAYER).ceil() as usize).max(1);
        let peak = self.max_abs();
        let w = self.grid.weights();
        let total: f64 = self.values.iter().zip(w).map(|(v, w)| w * v.norm_sqr()).sum();
        let outer: f64 = self.values[start..].iter().zip(&w[start..]).map(|(v, w)| w * v.norm_sqr()).sum();
        let edge = self.values[start..].iter().map(|v| v.norm()).fold(0.0, f64::max);
        BoundaryDecay {
            mass_fraction: if total > 0.0 { outer / total } else { 0.0 },
            relative_amplitude: if peak > 0.0 { edge / peak } else { 0.0 },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryDecay {
    /// Share of ∫|f|² carried by the outermost 5% of nodes.
    pub mass_fraction: f64,
    /// max |f| over the outermost 5% of nodes divided by max |f|.
    pub relative_amplitude: f64,
}

/// Checks that a field has decayed to `tolerance` (relative amplitude) in the
/// outer boundary layer; logs a warning and returns false otherwise.
pub fn boundary_decay_check(f: &RadialField, tolerance: f64) -> bool {
    let d = f.boundary_decay();
    let ok = d.relative_amplitude <= tolerance;
    if !ok {
        log::warn!(
            "field has not decayed at R = {}: boundary amplitude {:.3e} (relative) exceeds {:.1e}",
            f.grid().max_radius(),
            d.relative_amplitude,
            tolerance
        );
    }
    ok
}

pub(crate) fn integrate_real<I: IntoIterator<Item = f64>>(grid: &RadialGrid, samples: I) -> f64 {
    let s: f64 = grid.weights().iter().zip(samples).map(|(w, v)| w * v).sum();
    grid.surface_area() * s
}

/// ∫_{ℝⁿ} f dx = ω_{n−1} Σ_j w_j f(r_j).
pub fn integrate(f: &RadialField) -> Complex64 {
    let g = f.grid();
    let s: Complex64 = g.weights().iter().zip(f.values()).map(|(w, v)| v * w).sum();
    s * g.surface_area()
}

/// ‖ |x|^γ f ‖_{L^p(ℝⁿ)}; p = ∞ gives max_j r_j^γ |f(r_j)|.
pub fn weighted_lp_norm(f: &RadialField, p: f64, gamma: f64) -> Result<f64> {
    let g = f.grid();
    if p.is_infinite() {
        return Ok(g
            .nodes()
            .iter()
            .zip(f.values())
            .map(|(r, v)| r.powf(gamma) * v.norm())
            .fold(0.0, f64::max));
    }
    if !(p >= 1.0) {
        return Err(Error::InvalidArgument(format!("Lebesgue exponent must lie in [1, ∞] (got {p})")));
    }
    let samples = f.values().iter().map(|v| v.norm().powf(p));
    if gamma == 0.0 {
        return Ok(integrate_real(g, samples).powf(1.0 / p));
    }
    let w = g.power_weights(gamma * p)?;
    let s: f64 = w.iter().zip(samples).map(|(w, v)| w * v).sum();
    Ok((g.surface_area() * s).powf(1.0 / p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, GridScheme};
    use std::f64::consts::PI;

    #[test]
    fn gaussian_integral_and_norm() {
        for scheme in [GridScheme::BesselZeros, GridScheme::Uniform] {
            let g = build_grid(3, 12.0, 256, scheme).unwrap();
            let f = RadialField::from_real_fn(g.clone(), |r| (-r * r).exp());
            let v = integrate(&f);
            assert!((v.re - PI.powf(1.5)).abs() < 1e-6, "{scheme}: {}", v.re);
            let h = RadialField::from_real_fn(g, |r| (-r * r / 2.0).exp());
            let nrm = weighted_lp_norm(&h, 2.0, 0.0).unwrap();
            assert!((nrm - PI.powf(0.75)).abs() < 1e-6);
            assert_eq!(nrm, integrate(&h.map(|_, v| v * v.conj())).re.sqrt());
        }
    }

    #[test]
    fn weighted_norm_rejects_non_integrable_weight() {
        let g = build_grid(3, 5.0, 64, GridScheme::Uniform).unwrap();
        let f = RadialField::from_real_fn(g, |r| (-r * r).exp());
        assert!(weighted_lp_norm(&f, 2.0, -1.6).is_err());
        assert!(weighted_lp_norm(&f, 2.0, -1.4).is_ok());
        assert_eq!(weighted_lp_norm(&f, f64::INFINITY, 0.0).unwrap(), f.max_abs());
    }

    #[test]
    fn boundary_check_flags_slow_decay() {
        let g = build_grid(3, 5.0, 64, GridScheme::Uniform).unwrap();
        let fast = RadialField::from_real_fn(g.clone(), |r| (-4.0 * r * r).exp());
        let slow = RadialField::from_real_fn(g, |r| (-r).exp());
        assert!(boundary_decay_check(&fast, DECAY_TOLERANCE));
        assert!(!boundary_decay_check(&slow, DECAY_TOLERANCE));
    }
}
