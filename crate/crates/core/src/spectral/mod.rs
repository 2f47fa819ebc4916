//! Radial Fourier analysis: the Hankel transform realizing the n-dimensional
//! Fourier transform û(ξ) = ∫ e^{−ix·ξ} u(x) dx of radial functions,
//! multipliers, Littlewood–Paley projections, fractional derivatives and the
//! free Schrödinger propagator.

mod plan;
mod symbol;

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::RadialField;
use crate::grid::RadialGrid;
use crate::special::bessel_j_scaled;

pub(crate) use plan::TransformPlan;
pub use symbol::{bump, dyadic_range, MultiplierSymbol, SymbolKind};

/// Share of the top dual modes used by the resolution check.
pub const RESOLUTION_BAND: f64 = 0.1;
/// Largest admissible spectral energy share in that band.
pub const RESOLUTION_TOLERANCE: f64 = 1e-6;
/// Largest lowest-mode energy share for which negative powers are allowed.
pub const LOW_MODE_TOLERANCE: f64 = 1e-10;
/// Spectral tail share defining the effective bandwidth.
pub const BANDWIDTH_TOLERANCE: f64 = 1e-12;

/// Samples of û on the dual grid ρ_k.
#[derive(Debug, Clone)]
pub struct SpectralField {
    grid: Arc<RadialGrid>,
    values: Vec<Complex64>,
}

impl SpectralField {
    pub fn new(grid: Arc<RadialGrid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "spectral field has {} samples but the grid has {} dual nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(grid: Arc<RadialGrid>, f: F) -> Self {
        let values = grid.dual_nodes().iter().map(|&p| f(p)).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn nodes(&self) -> &[f64] {
        self.grid.dual_nodes()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// ω_{n−1} Σ_k v_k |û_k|², which equals (2π)ⁿ‖u‖² by Plancherel.
    pub fn energy(&self) -> f64 {
        spectral_energy(&self.grid, &self.values)
    }
}

pub(crate) fn spectral_energy(grid: &RadialGrid, values: &[Complex64]) -> f64 {
    let s: f64 = grid.dual_weights().iter().zip(values).map(|(v, u)| v * u.norm_sqr()).sum();
    grid.surface_area() * s
}

/// Spectral samples of a field, computed once and cached on the field.
pub fn spectrum(f: &RadialField) -> &[Complex64] {
    f.spectral_cache().get_or_init(|| f.grid().plan().forward(f.values()))
}

/// Share of the spectral energy carried by the top 10% of dual modes.
pub fn unresolved_fraction(f: &RadialField) -> f64 {
    let spec = spectrum(f);
    let g = f.grid();
    let start = g.len() - ((g.len() as f64 * RESOLUTION_BAND).ceil() as usize).max(1);
    let total = spectral_energy(g, spec);
    if total == 0.0 {
        return 0.0;
    }
    let top: f64 = g.dual_weights()[start..].iter().zip(&spec[start..]).map(|(v, u)| v * u.norm_sqr()).sum();
    g.surface_area() * top / total
}

/// The Fourier transform of f on the dual grid; fails if the grid is too
/// coarse for f's spectral content.
pub fn hankel_forward(f: &RadialField) -> Result<SpectralField> {
    let fraction = unresolved_fraction(f);
    if fraction > RESOLUTION_TOLERANCE {
        return Err(Error::UnderResolved { fraction });
    }
    Ok(SpectralField { grid: f.grid().clone(), values: spectrum(f).to_vec() })
}

pub fn hankel_inverse(spec: &SpectralField) -> RadialField {
    let values = spec.grid.plan().inverse(&spec.values);
    RadialField::with_spectral(spec.grid.clone(), values, spec.values.clone())
}

fn from_spectrum(grid: &Arc<RadialGrid>, spec: Vec<Complex64>) -> RadialField {
    let values = grid.plan().inverse(&spec);
    RadialField::with_spectral(grid.clone(), values, spec)
}

/// Multiplies û by m(ρ) and transforms back.
pub fn apply_multiplier(f: &RadialField, m: &MultiplierSymbol) -> RadialField {
    let g = f.grid();
    let spec = spectrum(f).iter().zip(g.dual_nodes()).map(|(u, &p)| u * m.eval(p)).collect();
    from_spectrum(g, spec)
}

/// Share of the spectral energy in the lowest dual mode.
pub fn low_frequency_share(f: &RadialField) -> f64 {
    let g = f.grid();
    let spec = spectrum(f);
    let total = spectral_energy(g, spec);
    if total == 0.0 {
        return 0.0;
    }
    g.surface_area() * g.dual_weights()[0] * spec[0].norm_sqr() / total
}

/// |∇|^s f. Negative powers drop the lowest dual mode, and are refused when
/// that mode carries more than [`LOW_MODE_TOLERANCE`] of the energy.
pub fn fractional_derivative(f: &RadialField, s: f64) -> Result<RadialField> {
    let g = f.grid();
    let spec = spectrum(f);
    if s == 0.0 {
        return Ok(f.clone());
    }
    let mut out: Vec<Complex64> = spec.iter().zip(g.dual_nodes()).map(|(u, p)| u * p.powf(s)).collect();
    if s < 0.0 {
        let fraction = low_frequency_share(f);
        if fraction > LOW_MODE_TOLERANCE {
            return Err(Error::LowFrequencyMass { power: s, fraction });
        }
        out[0] = Complex64::new(0.0, 0.0);
    }
    Ok(from_spectrum(g, out))
}

/// Smallest dual node above which the spectral energy share is below `tol`.
pub fn effective_bandwidth(f: &RadialField, tol: f64) -> f64 {
    let g = f.grid();
    let spec = spectrum(f);
    let w = g.dual_weights();
    let total: f64 = w.iter().zip(spec).map(|(v, u)| v * u.norm_sqr()).sum();
    if total == 0.0 {
        return 0.0;
    }
    let mut tail = 0.0;
    for k in (0..g.len()).rev() {
        tail += w[k] * spec[k].norm_sqr();
        if tail > tol * total {
            return g.dual_nodes()[k];
        }
    }
    g.dual_nodes()[0]
}

/// Raised when free flow for time t carries content past the box: waves at
/// the effective bandwidth ρ_eff travel 2|t|ρ_eff, and the series reflects
/// them at R once that exceeds R.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AliasingWarning {
    pub time: f64,
    pub bandwidth: f64,
    pub travel: f64,
    pub max_radius: f64,
}

pub fn aliasing_risk(f: &RadialField, t: f64) -> Option<AliasingWarning> {
    let bandwidth = effective_bandwidth(f, BANDWIDTH_TOLERANCE);
    let travel = 2.0 * t.abs() * bandwidth;
    let max_radius = f.grid().max_radius();
    (travel > max_radius).then_some(AliasingWarning { time: t, bandwidth, travel, max_radius })
}

/// e^{itΔ} f, i.e. the symbol e^{−itρ²}.
pub fn free_propagate(f: &RadialField, t: f64) -> RadialField {
    if let Some(w) = aliasing_risk(f, t) {
        log::warn!(
            "free flow to t = {} moves content at frequency {:.3} a distance {:.1} beyond the box R = {}",
            w.time,
            w.bandwidth,
            w.travel,
            w.max_radius
        );
    }
    propagate_spectrum(f, t)
}

pub(crate) fn propagate_spectrum(f: &RadialField, t: f64) -> RadialField {
    let g = f.grid();
    let spec = spectrum(f)
        .iter()
        .zip(g.dual_nodes())
        .map(|(u, p)| u * Complex64::from_polar(1.0, -t * p * p))
        .collect();
    from_spectrum(g, spec)
}

/// ∂_r f from the Fourier–Bessel series (spectrally exact).
pub fn gradient_radial(f: &RadialField) -> RadialField {
    let g = f.grid();
    let values = g.plan().derivative(spectrum(f));
    RadialField::new(g.clone(), values).expect("derivative has one value per node")
}

const FD_HALF_WIDTH: usize = 4;

/// ∂_r f by ninth-order finite differences on the nodes, using the even
/// reflection f(−r) = f(r) near the origin and one-sided stencils near R.
pub fn gradient_radial_fd(f: &RadialField) -> RadialField {
    let g = f.grid();
    let r = g.nodes();
    let j = r.len() as i64;
    let width = 2 * FD_HALF_WIDTH as i64 + 1;
    let vals = f.values();
    let out = (0..j)
        .map(|i| {
            let start = (i - FD_HALF_WIDTH as i64).min(j - width);
            let mut xs = Vec::with_capacity(width as usize);
            let mut idx = Vec::with_capacity(width as usize);
            for k in start..start + width {
                if k >= 0 {
                    xs.push(r[k as usize]);
                    idx.push(k as usize);
                } else {
                    let m = (-k - 1) as usize;
                    xs.push(-r[m]);
                    idx.push(m);
                }
            }
            let w = fd_weights(r[i as usize], &xs);
            idx.iter().zip(&w).map(|(&k, w)| vals[k] * w).sum()
        })
        .collect();
    RadialField::new(g.clone(), out).expect("one value per node")
}

// Fornberg's recursion for first-derivative weights at z.
fn fd_weights(z: f64, x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut c = vec![[0.0f64; 2]; n];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(1);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for jj in 0..i {
            let c3 = x[i] - x[jj];
            c2 *= c3;
            if jj == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[jj][k] = (c4 * c[jj][k] - k as f64 * c[jj][k - 1]) / c3;
            }
            c[jj][0] = c4 * c[jj][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|w| w[1]).collect()
}

/// Evaluates the Fourier–Bessel series of f at arbitrary radii in [0, R].
pub fn interpolate(f: &RadialField, radii: &[f64]) -> Vec<Complex64> {
    let plan = f.grid().plan();
    let coeffs = plan.coefficients(spectrum(f));
    radii.par_iter().map(|&r| plan.evaluate(&coeffs, r)).collect()
}

/// Fourier–Bessel evaluation at a fixed set of radii, precomputed as a
/// matrix acting on spectral values. Worth it when many fields share the radii.
pub struct Resampler {
    rows: usize,
    cols: usize,
    matrix: Vec<f64>,
}

impl Resampler {
    pub fn new(grid: &RadialGrid, radii: &[f64]) -> Self {
        let plan = grid.plan();
        let nu = grid.order();
        let cols = grid.len();
        let dual = plan.dual();
        let scale: Vec<f64> = plan.coefficients(&vec![Complex64::new(1.0, 0.0); cols]).iter().map(|c| c.re).collect();
        let mut matrix = vec![0.0; radii.len() * cols];
        matrix.par_chunks_mut(cols).zip(radii.par_iter()).for_each(|(row, &r)| {
            for k in 0..cols {
                row[k] = scale[k] * dual[k].powf(nu) * bessel_j_scaled(nu, dual[k] * r);
            }
        });
        Self { rows: radii.len(), cols, matrix }
    }

    pub fn apply(&self, spec: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(spec.len(), self.cols, "spectral vector does not match the resampler");
        (0..self.rows)
            .map(|i| {
                let row = &self.matrix[i * self.cols..(i + 1) * self.cols];
                let (mut re, mut im) = (0.0, 0.0);
                for (a, v) in row.iter().zip(spec) {
                    re += a * v.re;
                    im += a * v.im;
                }
                Complex64::new(re, im)
            })
            .collect()
    }
}

/// Evaluates the Fourier–Bessel series of ∂_r f at arbitrary radii.
pub fn interpolate_derivative(f: &RadialField, radii: &[f64]) -> Vec<Complex64> {
    let g = f.grid();
    let nu = g.order();
    let coeffs = g.plan().coefficients(spectrum(f));
    let dual = g.plan().dual();
    radii
        .par_iter()
        .map(|&r| {
            coeffs
                .iter()
                .zip(dual)
                .map(|(a, p)| a * (-p.powf(nu + 2.0) * r * bessel_j_scaled(nu + 1.0, p * r)))
                .sum()
        })
        .collect()
}

/// û(ρ) at arbitrary frequencies by quadrature of the Hankel integral.
pub fn fourier_transform_at(f: &RadialField, rho: &[f64]) -> Vec<Complex64> {
    let g = f.grid();
    let nu = g.order();
    let c = (2.0 * PI).powf(g.dimension() as f64 / 2.0);
    let wf: Vec<Complex64> = g.weights().iter().zip(f.values()).map(|(w, v)| v * w).collect();
    rho.par_iter()
        .map(|&p| {
            let s: Complex64 = wf.iter().zip(g.nodes()).map(|(v, r)| v * bessel_j_scaled(nu, p * r)).sum();
            s * c
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, GridScheme};

    fn gaussian(grid: &Arc<RadialGrid>) -> RadialField {
        RadialField::from_real_fn(grid.clone(), |r| (-r * r / 2.0).exp())
    }

    #[test]
    fn gaussian_is_an_eigenfunction() {
        for (n, scheme) in [(3, GridScheme::BesselZeros), (4, GridScheme::BesselZeros), (3, GridScheme::Uniform), (5, GridScheme::Uniform)] {
            let g = build_grid(n, 16.0, 192, scheme).unwrap();
            let f = gaussian(&g);
            let spec = hankel_forward(&f).unwrap();
            let c = (2.0 * PI).powf(n as f64 / 2.0);
            for (p, v) in spec.nodes().iter().zip(spec.values()) {
                if *p <= 5.0 {
                    let exact = c * (-p * p / 2.0).exp();
                    assert!((v.re - exact).abs() < 1e-6 * exact.max(1e-3), "n={n} {scheme} rho={p}: {} vs {exact}", v.re);
                }
            }
        }
    }

    #[test]
    fn round_trip_and_plancherel() {
        for n in [3, 4, 6] {
            let g = build_grid(n, 12.0, 128, GridScheme::BesselZeros).unwrap();
            let f = RadialField::from_fn(g.clone(), |r| Complex64::new((-r * r).exp() * (1.0 + r), (-(r - 2.0).powi(2)).exp()));
            let back = hankel_inverse(&hankel_forward(&f).unwrap());
            let err = back.sub(&f).unwrap().max_abs() / f.max_abs();
            assert!(err < 1e-12, "n={n}: {err}");
            let spec = hankel_forward(&f).unwrap();
            let ratio = spec.energy() / ((2.0 * PI).powi(n as i32) * f.l2_norm().powi(2));
            assert!((ratio - 1.0).abs() < 1e-10, "n={n}: {ratio}");
        }
    }

    #[test]
    fn spectral_and_fd_gradients_agree() {
        for scheme in [GridScheme::BesselZeros, GridScheme::Uniform] {
            let g = build_grid(3, 12.0, 256, scheme).unwrap();
            let f = gaussian(&g);
            let d = gradient_radial(&f);
            let fd = gradient_radial_fd(&f);
            for ((r, a), b) in g.nodes().iter().zip(d.values()).zip(fd.values()) {
                let exact = -r * (-r * r / 2.0).exp();
                assert!((a.re - exact).abs() < 1e-9, "{scheme} r={r}");
                assert!((b.re - exact).abs() < 1e-6, "{scheme} r={r}");
            }
        }
    }

    #[test]
    fn negative_power_refuses_low_frequency_mass() {
        let g = build_grid(3, 12.0, 128, GridScheme::BesselZeros).unwrap();
        let f = gaussian(&g);
        assert!(matches!(fractional_derivative(&f, -0.5), Err(Error::LowFrequencyMass { .. })));
        let hi = apply_multiplier(&f, &MultiplierSymbol::ge(1.0));
        let up = fractional_derivative(&fractional_derivative(&hi, -0.5).unwrap(), 0.5).unwrap();
        assert!(up.sub(&hi).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn interpolation_reproduces_nodes_and_closed_form() {
        for n in [3, 5] {
            let g = build_grid(n, 10.0, 96, GridScheme::BesselZeros).unwrap();
            let f = gaussian(&g);
            let vals = interpolate(&f, &[0.0, g.nodes()[7], 1.2345]);
            assert!((vals[0].re - 1.0).abs() < 1e-10);
            assert!((vals[1] - f.values()[7]).norm() < 1e-12);
            assert!((vals[2].re - (-1.2345f64 * 1.2345 / 2.0).exp()).abs() < 1e-10);
            let d = interpolate_derivative(&f, &[0.7]);
            assert!((d[0].re + 0.7 * (-0.49f64 / 2.0).exp()).abs() < 1e-10);
        }
    }

    #[test]
    fn resampler_matches_direct_interpolation() {
        let g = build_grid(4, 10.0, 80, GridScheme::BesselZeros).unwrap();
        let f = gaussian(&g);
        let radii = [0.0, 0.3, 2.5, 9.9];
        let a = Resampler::new(&g, &radii).apply(spectrum(&f));
        let b = interpolate(&f, &radii);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-13);
        }
    }
}
