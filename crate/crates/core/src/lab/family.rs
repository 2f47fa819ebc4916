use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{RadialField, DECAY_TOLERANCE};
use crate::grid::RadialGrid;
use crate::spectral::{hankel_inverse, interpolate, SpectralField};

/// Dilation factors of the `dilation_orbit` family.
pub const DILATIONS: [f64; 3] = [0.25, 1.0, 4.0];

/// A radial test function that can be evaluated at any radius.
#[derive(Debug, Clone)]
pub enum Profile {
    /// Σ c_k e^{−r²/(2σ_k²)}, as (c_k, σ_k).
    Gaussians(Vec<(Complex64, f64)>),
    /// Σ c_k (e^{−(r−a_k)²/(2w_k²)} + e^{−(r+a_k)²/(2w_k²)}), as (c_k, a_k, w_k).
    Rings(Vec<(Complex64, f64, f64)>),
    /// The Fourier–Bessel series of a grid field, zero beyond R.
    Sampled(RadialField),
    /// λ^{−n/2} f(r/λ).
    Dilated { base: Box<Profile>, lambda: f64, n: usize },
}

impl Profile {
    pub fn zero() -> Self {
        Profile::Gaussians(Vec::new())
    }

    pub fn gaussian(amplitude: f64, sigma: f64) -> Self {
        Profile::Gaussians(vec![(Complex64::new(amplitude, 0.0), sigma)])
    }

    pub fn eval(&self, r: f64) -> Complex64 {
        match self {
            Profile::Gaussians(terms) => terms.iter().map(|(c, s)| c * (-r * r / (2.0 * s * s)).exp()).sum(),
            Profile::Rings(terms) => terms
                .iter()
                .map(|(c, a, w)| {
                    let k = 2.0 * w * w;
                    c * ((-(r - a).powi(2) / k).exp() + (-(r + a).powi(2) / k).exp())
                })
                .sum(),
            Profile::Sampled(_) => self.sample(&[r])[0],
            Profile::Dilated { base, lambda, n } => base.eval(r / lambda) * lambda.powf(-(*n as f64) / 2.0),
        }
    }

    pub fn sample(&self, radii: &[f64]) -> Vec<Complex64> {
        match self {
            Profile::Sampled(f) => {
                let big = f.grid().max_radius();
                let inside: Vec<f64> = radii.iter().copied().filter(|&r| r <= big).collect();
                let mut vals = interpolate(f, &inside).into_iter();
                radii.iter().map(|&r| if r <= big { vals.next().expect("counted") } else { Complex64::new(0.0, 0.0) }).collect()
            }
            Profile::Dilated { base, lambda, n } => {
                let scaled: Vec<f64> = radii.iter().map(|r| r / lambda).collect();
                let k = lambda.powf(-(*n as f64) / 2.0);
                base.sample(&scaled).into_iter().map(|v| v * k).collect()
            }
            _ => radii.iter().map(|&r| self.eval(r)).collect(),
        }
    }

    pub fn sample_abs(&self, radii: &[f64]) -> Vec<f64> {
        self.sample(radii).into_iter().map(|v| v.norm()).collect()
    }

    pub fn dilate(&self, lambda: f64, n: usize) -> Self {
        Profile::Dilated { base: Box::new(self.clone()), lambda, n }
    }

    pub fn on_grid(&self, grid: &Arc<RadialGrid>) -> RadialField {
        if let Profile::Sampled(f) = self {
            if f.grid().same_as(grid) {
                return f.clone();
            }
        }
        RadialField::new(grid.clone(), self.sample(grid.nodes())).expect("one value per node")
    }

    /// A radius beyond which |f| stays below `tol` times its scale.
    pub fn support(&self, tol: f64) -> f64 {
        let k = (2.0 * (1.0 / tol).ln()).sqrt();
        match self {
            Profile::Gaussians(terms) => terms.iter().map(|(_, s)| s * k).fold(0.0, f64::max),
            Profile::Rings(terms) => terms.iter().map(|(_, a, w)| a + w * k).fold(0.0, f64::max),
            Profile::Sampled(f) => f.grid().max_radius(),
            Profile::Dilated { base, lambda, .. } => lambda * base.support(tol),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Profile::Gaussians(t) => t.iter().all(|(c, _)| c.norm() == 0.0),
            Profile::Rings(t) => t.iter().all(|(c, _, _)| c.norm() == 0.0),
            Profile::Sampled(f) => f.is_zero(),
            Profile::Dilated { base, .. } => base.is_zero(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    GaussianMix,
    RadialBumps,
    BandLimited,
    DilationOrbit,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::GaussianMix => "gaussian_mix",
            FamilyKind::RadialBumps => "radial_bumps",
            FamilyKind::BandLimited => "band_limited",
            FamilyKind::DilationOrbit => "dilation_orbit",
        }
    }
}

impl std::str::FromStr for FamilyKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian_mix" => Ok(FamilyKind::GaussianMix),
            "radial_bumps" => Ok(FamilyKind::RadialBumps),
            "band_limited" => Ok(FamilyKind::BandLimited),
            "dilation_orbit" => Ok(FamilyKind::DilationOrbit),
            other => Err(Error::InvalidArgument(format!("unknown family kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Member {
    pub profile: Profile,
    pub field: RadialField,
    pub meta: BTreeMap<String, f64>,
}

#[derive(Debug, Clone)]
pub struct TestFamily {
    pub seed: u64,
    pub count: usize,
    pub kind: FamilyKind,
    pub members: Vec<Member>,
}

impl TestFamily {
    pub fn profiles(&self) -> Vec<Profile> {
        self.members.iter().map(|m| m.profile.clone()).collect()
    }
}

fn unit_phase(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(rng.random_range(0.5..1.5), rng.random_range(0.0..2.0 * PI))
}

fn gaussian_mix(rng: &mut ChaCha8Rng, widths: (f64, f64)) -> (Profile, BTreeMap<String, f64>) {
    let terms = rng.random_range(1..=3usize);
    let mut meta = BTreeMap::new();
    let list = (0..terms)
        .map(|k| {
            let c = unit_phase(rng);
            let sigma = rng.random_range(widths.0.ln()..widths.1.ln()).exp();
            meta.insert(format!("sigma_{k}"), sigma);
            meta.insert(format!("amplitude_{k}"), c.norm());
            (c, sigma)
        })
        .collect();
    (Profile::Gaussians(list), meta)
}

fn radial_bumps(rng: &mut ChaCha8Rng) -> (Profile, BTreeMap<String, f64>) {
    let terms = rng.random_range(1..=2usize);
    let mut meta = BTreeMap::new();
    let list = (0..terms)
        .map(|k| {
            let c = unit_phase(rng);
            let a = rng.random_range(1.0..3.0);
            let w = rng.random_range(0.3..0.6);
            meta.insert(format!("radius_{k}"), a);
            meta.insert(format!("width_{k}"), w);
            (c, a, w)
        })
        .collect();
    (Profile::Rings(list), meta)
}

/// A Gaussian shell e^{−(ρ−ρ₀)²/(2s²)} in frequency; the declared band is
/// ρ₀ ± 5.5s.
fn band_limited(rng: &mut ChaCha8Rng, grid: &Arc<RadialGrid>) -> Result<(Profile, BTreeMap<String, f64>)> {
    let rho0 = rng.random_range(2.5..4.0);
    let s = rng.random_range(0.2..0.4);
    let c = unit_phase(rng);
    let (lo, hi) = (rho0 - 5.5 * s, rho0 + 5.5 * s);
    if hi > 0.9 * grid.max_frequency() {
        return Err(Error::InvalidArgument(format!(
            "band_limited members need frequencies up to {hi:.2}, above 90% of the grid's maximum {:.2}",
            grid.max_frequency()
        )));
    }
    let spec = SpectralField::from_fn(grid.clone(), |rho| c * (-(rho - rho0).powi(2) / (2.0 * s * s)).exp());
    let field = hankel_inverse(&spec);
    let meta = BTreeMap::from([
        ("center".to_string(), rho0),
        ("spread".to_string(), s),
        ("band_lo".to_string(), lo),
        ("band_hi".to_string(), hi),
    ]);
    Ok((Profile::Sampled(field), meta))
}

/// Six Gaussian shells of spread s = (hi − lo)/10 in frequency, with random
/// complex amplitudes and centres uniform in [lo + 3s, hi − 3s], scaled to
/// ‖u‖₂ = `mass_norm`.
pub fn band_noise(grid: &Arc<RadialGrid>, seed: u64, band: (f64, f64), mass_norm: f64) -> Result<RadialField> {
    let (lo, hi) = band;
    if !(lo >= 0.0 && hi > lo) {
        return Err(Error::InvalidArgument(format!("band must satisfy 0 <= lo < hi (got [{lo}, {hi}])")));
    }
    if hi > 0.9 * grid.max_frequency() {
        return Err(Error::InvalidArgument(format!(
            "band reaches {hi}, above 90% of the grid's maximum frequency {:.2}",
            grid.max_frequency()
        )));
    }
    let s = (hi - lo) / 10.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shells: Vec<(Complex64, f64)> =
        (0..6).map(|_| (unit_phase(&mut rng), rng.random_range(lo + 3.0 * s..hi - 3.0 * s))).collect();
    let spec = SpectralField::from_fn(grid.clone(), |rho| {
        shells.iter().map(|(c, p)| c * (-(rho - p).powi(2) / (2.0 * s * s)).exp()).sum()
    });
    let field = hankel_inverse(&spec);
    let norm = field.l2_norm();
    Ok(field.scale(Complex64::new(mass_norm / norm, 0.0)))
}

/// Draws `count` members of the given kind (3·count for `dilation_orbit`,
/// one per factor in [`DILATIONS`]). Every member must decay to 1e−12 of its
/// peak in the boundary layer of `grid`.
pub fn random_radial_family(grid: &Arc<RadialGrid>, seed: u64, count: usize, kind: FamilyKind) -> Result<TestFamily> {
    if count == 0 {
        return Err(Error::InvalidArgument("family size must be at least 1".into()));
    }
    let n = grid.dimension();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut members = Vec::new();
    for i in 0..count {
        let mut draws = match kind {
            FamilyKind::GaussianMix => vec![gaussian_mix(&mut rng, (0.5, 2.0))],
            FamilyKind::RadialBumps => vec![radial_bumps(&mut rng)],
            FamilyKind::BandLimited => vec![band_limited(&mut rng, grid)?],
            FamilyKind::DilationOrbit => {
                let (base, meta) = gaussian_mix(&mut rng, (0.5, 1.0));
                DILATIONS
                    .iter()
                    .map(|&l| {
                        let mut m = meta.clone();
                        m.insert("lambda".into(), l);
                        (if l == 1.0 { base.clone() } else { base.dilate(l, n) }, m)
                    })
                    .collect()
            }
        };
        for (profile, mut meta) in draws.drain(..) {
            meta.insert("base".into(), i as f64);
            let field = profile.on_grid(grid);
            let decay = field.boundary_decay().relative_amplitude;
            if decay > DECAY_TOLERANCE {
                return Err(Error::InvalidArgument(format!(
                    "member {} of the {} family has boundary amplitude {decay:.2e} > {DECAY_TOLERANCE:.0e} at R = {}",
                    members.len(),
                    kind.name(),
                    grid.max_radius()
                )));
            }
            members.push(Member { profile, field, meta });
        }
    }
    Ok(TestFamily { seed, count, kind, members })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, GridScheme};
    use crate::spectral::spectrum;

    fn grid() -> Arc<RadialGrid> {
        build_grid(3, 40.0, 1024, GridScheme::BesselZeros).unwrap()
    }

    #[test]
    fn families_are_reproducible() {
        let g = grid();
        for kind in [FamilyKind::GaussianMix, FamilyKind::RadialBumps, FamilyKind::BandLimited, FamilyKind::DilationOrbit] {
            let a = random_radial_family(&g, 7, 2, kind).unwrap();
            let b = random_radial_family(&g, 7, 2, kind).unwrap();
            for (x, y) in a.members.iter().zip(&b.members) {
                assert_eq!(x.field.values(), y.field.values());
            }
        }
        assert!(random_radial_family(&g, 0, 0, FamilyKind::GaussianMix).is_err());
    }

    #[test]
    fn dilation_orbit_members_are_dilates() {
        let g = grid();
        let fam = random_radial_family(&g, 3, 1, FamilyKind::DilationOrbit).unwrap();
        assert_eq!(fam.members.len(), 3);
        let base = &fam.members[1].profile;
        for (m, l) in fam.members.iter().zip(DILATIONS) {
            for r in [0.1, 0.7, 2.0] {
                let want = base.eval(r / l) * l.powf(-1.5);
                assert!((m.profile.eval(r) - want).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn band_limited_mass_stays_in_band() {
        let g = grid();
        let fam = random_radial_family(&g, 11, 4, FamilyKind::BandLimited).unwrap();
        for m in &fam.members {
            let (lo, hi) = (m.meta["band_lo"], m.meta["band_hi"]);
            let spec = spectrum(&m.field);
            let w = g.dual_weights();
            let mut inside = 0.0;
            let mut outside = 0.0;
            for ((rho, v), w) in g.dual_nodes().iter().zip(spec).zip(w) {
                if (lo..=hi).contains(rho) {
                    inside += w * v.norm_sqr();
                } else {
                    outside += w * v.norm_sqr();
                }
            }
            assert!(outside <= 1e-10 * (inside + outside), "{outside:e}");
        }
    }

    #[test]
    fn band_noise_is_seeded_and_normalized() {
        let g = grid();
        let a = band_noise(&g, 5, (1.0, 3.0), 2.0).unwrap();
        assert_eq!(a.values(), band_noise(&g, 5, (1.0, 3.0), 2.0).unwrap().values());
        assert_ne!(a.values(), band_noise(&g, 6, (1.0, 3.0), 2.0).unwrap().values());
        assert!((a.l2_norm() - 2.0).abs() < 1e-12);
        assert!(band_noise(&g, 5, (3.0, 1.0), 1.0).is_err());
    }

    #[test]
    fn wide_members_are_rejected_on_small_boxes() {
        let g = build_grid(3, 10.0, 256, GridScheme::BesselZeros).unwrap();
        assert!(random_radial_family(&g, 1, 3, FamilyKind::DilationOrbit).is_err());
    }
}
