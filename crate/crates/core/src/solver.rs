//! Split-step time integration of iu_t + Δu = |u|^{4/n}u for radial data,
//! trajectory recording, the Duhamel consistency check and the scaling map.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagnostics::{energy, mass};
use crate::error::{Error, Result};
use crate::field::{boundary_decay_check, RadialField};
use crate::grid::RadialGrid;
use crate::spectral::{self, free_propagate, propagate_spectrum, spectral_energy, spectrum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitScheme {
    /// Half nonlinear phase, full linear flow, half nonlinear phase.
    Strang,
    /// Full nonlinear phase, then full linear flow.
    Lie,
}

impl std::str::FromStr for SplitScheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strang" => Ok(SplitScheme::Strang),
            "lie" => Ok(SplitScheme::Lie),
            other => Err(Error::InvalidArgument(format!("unknown splitting scheme `{other}` (expected strang or lie)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub dt: f64,
    pub t_end: f64,
    pub record_stride: usize,
    pub scheme: SplitScheme,
    /// Zero the top third of the dual modes after every step.
    pub dealias: bool,
    /// Switches the |u|^{4/n}u term off (free flow) when false.
    pub nonlinear: bool,
    /// Abort when the outer 5% of nodes carry more than this share of the mass.
    pub boundary_mass_tolerance: f64,
    /// Warn when the initial data has not decayed to this relative amplitude at R.
    pub decay_tolerance: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            t_end: 0.5,
            record_stride: 1,
            scheme: SplitScheme::Strang,
            dealias: false,
            nonlinear: true,
            boundary_mass_tolerance: 1e-6,
            decay_tolerance: crate::field::DECAY_TOLERANCE,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidArgument(format!("dt must be positive (got {})", self.dt)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidArgument(format!("t_end must be non-negative (got {})", self.t_end)));
        }
        if self.record_stride == 0 {
            return Err(Error::InvalidArgument("record_stride must be at least 1".into()));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config: SolverConfig,
    pub initial_data: String,
    pub steps: usize,
    /// max_t |M(t) − M(0)| / M(0) over recorded states.
    pub mass_drift: f64,
    /// max_t |E(t) − E(0)| / E(0) over recorded states.
    pub energy_drift: f64,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<RadialField>,
    provenance: Provenance,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, states: Vec<RadialField>, provenance: Provenance) -> Result<Self> {
        if times.is_empty() || times.len() != states.len() {
            return Err(Error::InvalidArgument("a trajectory needs one state per recorded time".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument("trajectory times must be strictly increasing".into()));
        }
        let g = states[0].grid();
        if states.iter().any(|s| !s.grid().same_as(g)) {
            return Err(Error::GridMismatch);
        }
        Ok(Self { times, states, provenance })
    }

    /// A trajectory from states with no solver behind them (test data, forcing terms).
    pub fn from_states(times: Vec<f64>, states: Vec<RadialField>, description: &str) -> Result<Self> {
        let provenance = Provenance {
            config: SolverConfig { nonlinear: false, ..SolverConfig::default() },
            initial_data: description.to_string(),
            steps: 0,
            mass_drift: 0.0,
            energy_drift: 0.0,
        };
        Self::new(times, states, provenance)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[RadialField] {
        &self.states
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        self.states[0].grid()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Index of a recorded time (matched to a relative 1e−9).
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let tol = 1e-9 * t.abs().max(1.0);
        self.times.iter().position(|&s| (s - t).abs() <= tol)
    }

    /// Trapezoid weights over the recorded times; a single state counts as
    /// one sample of unit duration.
    pub fn time_weights(&self) -> Vec<f64> {
        trapezoid_weights(&self.times)
    }
}

pub fn trapezoid_weights(times: &[f64]) -> Vec<f64> {
    let m = times.len();
    if m == 1 {
        return vec![1.0];
    }
    let mut w = vec![0.0; m];
    for i in 0..m - 1 {
        let h = 0.5 * (times[i + 1] - times[i]);
        w[i] += h;
        w[i + 1] += h;
    }
    w
}

/// F(u) = |u|^{4/n} u.
pub fn nonlinearity(f: &RadialField) -> RadialField {
    let p = 2.0 / f.grid().dimension() as f64;
    f.map(|_, v| v * v.norm_sqr().powf(p))
}

fn phase(f: &RadialField, tau: f64) -> RadialField {
    let p = 2.0 / f.grid().dimension() as f64;
    f.map(|_, v| v * Complex64::from_polar(1.0, -tau * v.norm_sqr().powf(p)))
}

/// One Strang step: e^{−i|u|^{4/n}dt/2}, then e^{i dt Δ}, then the half phase again.
pub fn strang_step(f: &RadialField, dt: f64) -> RadialField {
    phase(&free_propagate(&phase(f, 0.5 * dt), dt), 0.5 * dt)
}

/// One Lie step: full nonlinear phase, then the linear flow.
pub fn lie_step(f: &RadialField, dt: f64) -> RadialField {
    free_propagate(&phase(f, dt), dt)
}

fn step(f: &RadialField, cfg: &SolverConfig) -> RadialField {
    let next = match (cfg.nonlinear, cfg.scheme) {
        (false, _) => propagate_spectrum(f, cfg.dt),
        (true, SplitScheme::Strang) => phase(&propagate_spectrum(&phase(f, 0.5 * cfg.dt), cfg.dt), 0.5 * cfg.dt),
        (true, SplitScheme::Lie) => propagate_spectrum(&phase(f, cfg.dt), cfg.dt),
    };
    if cfg.dealias {
        let cutoff = 2.0 / 3.0 * f.grid().max_frequency();
        let m = spectral::MultiplierSymbol::custom("dealias", false, move |p| {
            Complex64::new(if p > cutoff { 0.0 } else { 1.0 }, 0.0)
        });
        spectral::apply_multiplier(&next, &m)
    } else {
        next
    }
}

fn relative_drift(values: &[f64]) -> f64 {
    let v0 = values[0];
    let worst = values.iter().map(|v| (v - v0).abs()).fold(0.0, f64::max);
    if v0 == 0.0 {
        worst
    } else {
        worst / v0.abs()
    }
}

/// Evolves u0 to t_end, recording every `record_stride` steps (and the final state).
pub fn evolve(u0: &RadialField, cfg: &SolverConfig) -> Result<Trajectory> {
    evolve_described(u0, cfg, "unspecified")
}

pub fn evolve_described(u0: &RadialField, cfg: &SolverConfig, description: &str) -> Result<Trajectory> {
    cfg.validate()?;
    boundary_decay_check(u0, cfg.decay_tolerance);
    if let Some(w) = spectral::aliasing_risk(u0, cfg.t_end) {
        log::warn!(
            "evolution to t = {} may carry frequency {:.3} content {:.1} beyond R = {}",
            cfg.t_end,
            w.bandwidth,
            w.travel,
            w.max_radius
        );
    }
    let steps = cfg.steps();
    let mut times = vec![0.0];
    let mut states = vec![u0.clone()];
    let mut u = u0.clone();
    for k in 1..=steps {
        u = step(&u, cfg);
        if k % cfg.record_stride == 0 || k == steps {
            let t = k as f64 * cfg.dt;
            let d = u.boundary_decay();
            if d.mass_fraction > cfg.boundary_mass_tolerance {
                return Err(Error::BoundaryBreach { time: t, fraction: d.mass_fraction, limit: cfg.boundary_mass_tolerance });
            }
            times.push(t);
            states.push(u.clone());
        }
    }
    let masses: Vec<f64> = states.par_iter().map(mass).collect();
    let energies: Vec<f64> = states.par_iter().map(|s| energy(s).total).collect();
    let provenance = Provenance {
        config: cfg.clone(),
        initial_data: description.to_string(),
        steps,
        mass_drift: relative_drift(&masses),
        energy_drift: relative_drift(&energies),
    };
    Trajectory::new(times, states, provenance)
}

/// ‖u(t₁) − e^{i(t₁−t₀)Δ}u(t₀) + i∫_{t₀}^{t₁} e^{i(t₁−s)Δ}F(u(s))ds‖₂ / ‖u(t₁)‖₂,
/// with the time integral by the trapezoid rule over recorded states.
pub fn duhamel_residual(traj: &Trajectory, t0: f64, t1: f64) -> Result<f64> {
    if t1 < t0 {
        return Err(Error::InvalidArgument(format!("duhamel_residual needs t1 >= t0 (got t0 = {t0}, t1 = {t1})")));
    }
    let i0 = traj.index_of(t0).ok_or_else(|| Error::InvalidArgument(format!("t0 = {t0} is not a recorded time")))?;
    let i1 = traj.index_of(t1).ok_or_else(|| Error::InvalidArgument(format!("t1 = {t1} is not a recorded time")))?;
    if i1 == i0 {
        return Ok(0.0);
    }
    let g = traj.grid();
    let rho = g.dual_nodes();
    let times = traj.times();
    let t1 = times[i1];
    let free = |spec: &[Complex64], dt: f64| -> Vec<Complex64> {
        spec.iter().zip(rho).map(|(u, p)| u * Complex64::from_polar(1.0, -dt * p * p)).collect()
    };
    let mut acc: Vec<Complex64> = spectrum(&traj.states()[i1]).to_vec();
    for (a, b) in acc.iter_mut().zip(free(spectrum(&traj.states()[i0]), t1 - times[i0])) {
        *a -= b;
    }
    if traj.provenance().config.nonlinear {
        let w = trapezoid_weights(&times[i0..=i1]);
        let terms: Vec<Vec<Complex64>> = (i0..=i1)
            .into_par_iter()
            .map(|m| {
                let f = nonlinearity(&traj.states()[m]);
                free(spectrum(&f), t1 - times[m])
            })
            .collect();
        for (term, wm) in terms.iter().zip(&w) {
            for (a, b) in acc.iter_mut().zip(term) {
                *a += Complex64::new(0.0, *wm) * b;
            }
        }
    }
    let scale = (2.0 * std::f64::consts::PI).powi(g.dimension() as i32);
    let res = (spectral_energy(g, &acc) / scale).sqrt();
    let norm = traj.states()[i1].l2_norm();
    Ok(if norm == 0.0 { res } else { res / norm })
}

/// Mass share a rescale may push off the grid before it is refused.
pub const RESCALE_LOSS_TOLERANCE: f64 = 1e-10;

/// u^λ(t, x) = λ^{−n/2} u(t/λ², x/λ), resampled on the same grid.
pub fn rescale_trajectory(traj: &Trajectory, lambda: f64) -> Result<Trajectory> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument(format!("scaling parameter must be positive (got {lambda})")));
    }
    let g = traj.grid().clone();
    let n = g.dimension() as f64;
    let radii: Vec<f64> = g.nodes().iter().map(|r| r / lambda).collect();
    let cutoff = g.max_radius() / lambda.max(1.0);
    // Source mass beyond R/λ is lost when λ > 1; when λ < 1 it is the mass
    // beyond R that maps past R, which the grid cannot hold either way.
    let kept_radius = if lambda > 1.0 { cutoff } else { g.max_radius() * lambda };
    for (t, s) in traj.times().iter().zip(traj.states()) {
        let total = mass(s);
        if total == 0.0 {
            continue;
        }
        let lost = mass_beyond(s, kept_radius) / total;
        if lost > RESCALE_LOSS_TOLERANCE {
            return Err(Error::InvalidArgument(format!(
                "rescaling by λ = {lambda} pushes {lost:.3e} of the mass at t = {t} outside [0, R]"
            )));
        }
    }
    let amp = lambda.powf(-n / 2.0);
    let resampler = spectral::Resampler::new(&g, &radii);
    let states: Vec<RadialField> = traj
        .states()
        .par_iter()
        .map(|s| {
            let vals = resampler.apply(spectrum(s));
            let vals = vals.into_iter().zip(&radii).map(|(v, &r)| if r <= g.max_radius() { v * amp } else { Complex64::new(0.0, 0.0) }).collect();
            RadialField::new(g.clone(), vals).expect("one value per node")
        })
        .collect();
    for s in &states {
        let fraction = spectral::unresolved_fraction(s);
        if fraction > spectral::RESOLUTION_TOLERANCE {
            return Err(Error::UnderResolved { fraction });
        }
    }
    let times = traj.times().iter().map(|t| t * lambda * lambda).collect();
    let mut provenance = traj.provenance().clone();
    provenance.initial_data = format!("rescaled(lambda={lambda}) of {}", provenance.initial_data);
    provenance.config.dt *= lambda * lambda;
    provenance.config.t_end *= lambda * lambda;
    Trajectory::new(times, states, provenance)
}

/// ∫_{|x|>a} |f|² dx from the local interpolant of |f|².
pub fn mass_beyond(f: &RadialField, a: f64) -> f64 {
    let g = f.grid();
    let dens: Vec<f64> = f.values().iter().map(|v| v.norm_sqr()).collect();
    let cum = g.stencil().cumulative(&dens, g.dimension() as f64 - 1.0);
    (g.surface_area() * (cum.total() - cum.at(a))).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, GridScheme};

    #[test]
    fn zero_data_stays_zero() {
        let g = build_grid(3, 10.0, 64, GridScheme::BesselZeros).unwrap();
        let cfg = SolverConfig { t_end: 0.01, ..SolverConfig::default() };
        let traj = evolve(&RadialField::zeros(g), &cfg).unwrap();
        assert!(traj.states().iter().all(|s| s.is_zero()));
        assert_eq!(traj.provenance().mass_drift, 0.0);
    }

    #[test]
    fn linear_limit_matches_free_flow() {
        let g = build_grid(3, 16.0, 128, GridScheme::BesselZeros).unwrap();
        let u = RadialField::from_real_fn(g, |r| (-r * r).exp());
        let cfg = SolverConfig { nonlinear: false, ..SolverConfig::default() };
        let a = step(&u, &cfg);
        let b = free_propagate(&u, cfg.dt);
        assert_eq!(a.values(), b.values());
    }

    #[test]
    fn rejects_invalid_config() {
        assert!(SolverConfig { dt: 0.0, ..SolverConfig::default() }.validate().is_err());
        assert!(SolverConfig { record_stride: 0, ..SolverConfig::default() }.validate().is_err());
    }

    #[test]
    fn boundary_breach_aborts() {
        let g = build_grid(3, 6.0, 128, GridScheme::BesselZeros).unwrap();
        let u = RadialField::from_real_fn(g, |r| 2.0 * (-r * r).exp());
        let cfg = SolverConfig { t_end: 2.0, dt: 1e-2, ..SolverConfig::default() };
        assert!(matches!(evolve(&u, &cfg), Err(Error::BoundaryBreach { .. })));
    }

    #[test]
    fn duhamel_rejects_reversed_interval() {
        let g = build_grid(3, 10.0, 64, GridScheme::BesselZeros).unwrap();
        let u = RadialField::from_real_fn(g, |r| (-r * r).exp());
        let cfg = SolverConfig { t_end: 0.01, ..SolverConfig::default() };
        let traj = evolve(&u, &cfg).unwrap();
        assert!(duhamel_residual(&traj, 0.01, 0.0).is_err());
        assert_eq!(duhamel_residual(&traj, 0.005, 0.005).unwrap(), 0.0);
    }
}
