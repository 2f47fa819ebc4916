//! Norm functionals along trajectories: mass, energy, spacetime Lebesgue
//! norms, the weighted S and N norms, the frequency-localized Morawetz
//! quantity, frequency scale and concentration profiles, the nonlinear
//! commutator, and high-frequency decay tables.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{integrate_real, weighted_lp_norm, RadialField};
use crate::grid::RadialGrid;
use crate::quad::bisect_increasing;
use crate::riesz::RieszPotential;
use crate::solver::{nonlinearity, Trajectory};
use crate::spectral::{apply_multiplier, fractional_derivative, gradient_radial, spectrum, MultiplierSymbol};

/// M(f) = ∫|f|² dx.
pub fn mass(f: &RadialField) -> f64 {
    integrate_real(f.grid(), f.values().iter().map(|v| v.norm_sqr()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Energy {
    /// ½∫|∇f|².
    pub kinetic: f64,
    /// n/(2(n+2)) ∫|f|^{2(n+2)/n}.
    pub potential: f64,
    pub total: f64,
}

pub fn energy(f: &RadialField) -> Energy {
    let g = f.grid();
    let n = g.dimension() as f64;
    let du = gradient_radial(f);
    let kinetic = 0.5 * integrate_real(g, du.values().iter().map(|v| v.norm_sqr()));
    let p = (n + 2.0) / n;
    let potential = n / (2.0 * (n + 2.0)) * integrate_real(g, f.values().iter().map(|v| v.norm_sqr().powf(p)));
    Energy { kinetic, potential, total: kinetic + potential }
}

fn check_exponent(name: &str, p: f64) -> Result<()> {
    if p >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must lie in [1, ∞] (got {p})")))
    }
}

/// Combines per-time values a(t) into (∫ a(t)^q dt)^{1/q}, or max_t a(t) for q = ∞.
fn time_norm(traj: &Trajectory, per_time: &[f64], q: f64) -> f64 {
    if q.is_infinite() {
        return per_time.iter().copied().fold(0.0, f64::max);
    }
    let w = traj.time_weights();
    w.iter().zip(per_time).map(|(w, a)| w * a.powf(q)).sum::<f64>().powf(1.0 / q)
}

/// ‖u‖_{L^q_t L^r_x} with the trapezoid rule in time.
pub fn spacetime_norm(traj: &Trajectory, q: f64, r: f64) -> Result<f64> {
    check_exponent("time exponent q", q)?;
    check_exponent("space exponent r", r)?;
    let per_time = traj.states().par_iter().map(|s| weighted_lp_norm(s, r, 0.0)).collect::<Result<Vec<_>>>()?;
    Ok(time_norm(traj, &per_time, q))
}

/// ∫ |v|² |x|^{2γ} dx for one field.
pub(crate) fn weighted_square(v: &RadialField, gamma: f64) -> Result<f64> {
    let g = v.grid();
    let w = g.power_weights(2.0 * gamma)?;
    Ok(g.surface_area() * w.iter().zip(v.values()).map(|(w, x)| w * x.norm_sqr()).sum::<f64>())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SNorm {
    /// ‖|x|^{−(1+ε)/2} |∇|^{(1−ε)/2} u‖_{L²_{t,x}}.
    pub weighted: f64,
    /// ‖u‖_{L^∞_t L²_x}.
    pub mass_sup: f64,
    pub total: f64,
}

/// The S norm ‖|x|^{−(1+ε)/2}|∇|^{(1−ε)/2}u‖_{L²_{t,x}} + ‖u‖_{L^∞_t L²_x}.
pub fn s_norm(traj: &Trajectory, eps: f64) -> Result<SNorm> {
    check_epsilon(eps)?;
    let per_time = traj
        .states()
        .par_iter()
        .map(|s| -> Result<(f64, f64)> {
            let v = fractional_derivative(s, 0.5 * (1.0 - eps))?;
            Ok((weighted_square(&v, -0.5 * (1.0 + eps))?, s.l2_norm()))
        })
        .collect::<Result<Vec<_>>>()?;
    let w = traj.time_weights();
    let weighted = w.iter().zip(&per_time).map(|(w, p)| w * p.0).sum::<f64>().sqrt();
    let mass_sup = per_time.iter().map(|p| p.1).fold(0.0, f64::max);
    Ok(SNorm { weighted, mass_sup, total: weighted + mass_sup })
}

pub(crate) fn check_epsilon(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("ε must lie in (0, 1) (got {eps})")))
    }
}

fn collect_slices(results: Vec<Result<f64>>) -> Result<Vec<f64>> {
    let mut failed = Vec::new();
    let mut first = None;
    let mut values = Vec::with_capacity(results.len());
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(v) => values.push(v),
            Err(e) => {
                failed.push(i);
                first.get_or_insert(e);
            }
        }
    }
    match first {
        None => Ok(values),
        Some(e) => Err(Error::SliceFailure { slices: failed, source: Box::new(e) }),
    }
}

/// The N norm ‖|x|^{(1+ε)/2}|∇|^{−(1−ε)/2}G‖_{L²_{t,x}} through the spectral
/// path. Slices with low-frequency content are reported by index.
pub fn n_norm(g_traj: &Trajectory, eps: f64) -> Result<f64> {
    check_epsilon(eps)?;
    let slices = g_traj
        .states()
        .par_iter()
        .map(|s| {
            if s.is_zero() {
                return Ok(0.0);
            }
            let v = fractional_derivative(s, -0.5 * (1.0 - eps))?;
            weighted_square(&v, 0.5 * (1.0 + eps))
        })
        .collect();
    let slices = collect_slices(slices)?;
    let w = g_traj.time_weights();
    Ok(w.iter().zip(&slices).map(|(w, v)| w * v).sum::<f64>().sqrt())
}

/// ∫|I_s G|²|x|^{2γ}dx over ℝⁿ with I_s = |∇|^{−s} evaluated in physical
/// space, including the exterior r > R. Works for any G, including ones with
/// zero-frequency content.
pub fn riesz_weighted_square(field: &RadialField, s: f64, gamma: f64, rel_tol: f64) -> Result<f64> {
    let g = field.grid();
    let n = g.dimension();
    if !(s > 0.0 && s < n as f64) {
        return Err(Error::InvalidArgument(format!("Riesz order must lie in (0, {n}) (got {s})")));
    }
    if field.is_zero() {
        return Ok(0.0);
    }
    let big = g.max_radius();
    let st = g.stencil();
    let mut total = 0.0;
    let w = g.power_weights(2.0 * gamma)?;
    let mut interior = vec![0.0; g.len()];
    for part in 0..2 {
        let samples: Vec<f64> = field.values().iter().map(|v| if part == 0 { v.re } else { v.im }).collect();
        if samples.iter().all(|&x| x == 0.0) {
            continue;
        }
        let profile = |r: f64| if r > big { 0.0 } else { st.interpolate(&samples, r) };
        let pot = RieszPotential::new(n, s, big, &profile).with_tolerance(rel_tol);
        let vals: Vec<f64> = g.nodes().par_iter().map(|&r| pot.at(r)).collect();
        for (acc, v) in interior.iter_mut().zip(&vals) {
            *acc += v * v;
        }
        total += pot.exterior_weighted_square(gamma);
    }
    total += g.surface_area() * w.iter().zip(&interior).map(|(w, v)| w * v).sum::<f64>();
    Ok(total)
}

/// The N norm through physical-space Riesz potentials; the slow oracle for
/// [`n_norm`] and the only path for forcing terms with low frequencies.
pub fn n_norm_riesz(g_traj: &Trajectory, eps: f64) -> Result<f64> {
    check_epsilon(eps)?;
    let slices = g_traj
        .states()
        .iter()
        .map(|s| riesz_weighted_square(s, 0.5 * (1.0 - eps), 0.5 * (1.0 + eps), 1e-10))
        .collect();
    let slices = collect_slices(slices)?;
    let w = g_traj.time_weights();
    Ok(w.iter().zip(&slices).map(|(w, v)| w * v).sum::<f64>().sqrt())
}

/// Q = ∫∫ |∇u_{<N}|² / |Nx|^{1+ε} dx dt.
pub fn q_functional(traj: &Trajectory, n_cut: f64, eps: f64) -> Result<f64> {
    if !(n_cut > 0.0) {
        return Err(Error::InvalidArgument(format!("frequency N must be positive (got {n_cut})")));
    }
    check_epsilon(eps)?;
    let lo = MultiplierSymbol::lt(n_cut);
    let per_time = traj
        .states()
        .par_iter()
        .map(|s| weighted_square(&gradient_radial(&apply_multiplier(s, &lo)), -0.5 * (1.0 + eps)))
        .collect::<Result<Vec<_>>>()?;
    let w = traj.time_weights();
    Ok(n_cut.powf(-(1.0 + eps)) * w.iter().zip(&per_time).map(|(w, v)| w * v).sum::<f64>())
}

struct Tails<'a> {
    grid: &'a RadialGrid,
    space: Vec<f64>,
    freq: Vec<f64>,
}

impl<'a> Tails<'a> {
    fn new(f: &'a RadialField) -> Self {
        Self {
            grid: f.grid(),
            space: f.values().iter().map(|v| v.norm_sqr()).collect(),
            freq: spectrum(f).iter().map(|v| v.norm_sqr()).collect(),
        }
    }

    fn c(&self) -> f64 {
        self.grid.dimension() as f64 - 1.0
    }

    fn freq_edge(&self) -> f64 {
        *self.grid.dual_stencil().edges().last().expect("non-empty")
    }

    /// Smallest ρ* with half of ∫|û|² below it.
    fn median_frequency(&self) -> f64 {
        let cum = self.grid.dual_stencil().cumulative(&self.freq, self.c());
        bisect_increasing(|x| cum.at(x), 0.5 * cum.total(), 0.0, self.freq_edge())
    }

    /// Smallest a with ∫_{|x|≥a}|u|² ≤ η.
    fn spatial_radius(&self, eta: f64) -> f64 {
        let omega = self.grid.surface_area();
        let cum = self.grid.stencil().cumulative(&self.space, self.c());
        let total = omega * cum.total();
        if total <= eta {
            return 0.0;
        }
        bisect_increasing(|x| omega * cum.at(x), total - eta, 0.0, self.grid.max_radius())
    }

    /// Smallest b with (2π)^{−n}∫_{|ξ|≥b}|û|² ≤ η.
    fn spectral_radius(&self, eta: f64) -> f64 {
        let scale = self.grid.surface_area() / (2.0 * PI).powi(self.grid.dimension() as i32);
        let cum = self.grid.dual_stencil().cumulative(&self.freq, self.c());
        let total = scale * cum.total();
        if total <= eta {
            return 0.0;
        }
        bisect_increasing(|x| scale * cum.at(x), total - eta, 0.0, self.freq_edge())
    }
}

/// N(f): the median radius of the spectral mass distribution |û(ξ)|²dξ.
pub fn frequency_scale(f: &RadialField) -> Result<f64> {
    if f.is_zero() {
        return Err(Error::ZeroField("frequency scale of the zero field is undefined".into()));
    }
    Ok(Tails::new(f).median_frequency())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlmostPeriodicityProfile {
    pub times: Vec<f64>,
    pub n_of_t: Vec<f64>,
    pub eta_grid: Vec<f64>,
    /// max over t of the larger of the two normalized tail radii.
    pub c_of_eta: Vec<f64>,
    /// max over t of a_η(t)·N(t), the spatial part alone.
    pub c_spatial: Vec<f64>,
    /// max over t of b_η(t)/N(t), the frequency part alone.
    pub c_spectral: Vec<f64>,
}

/// For each η, the smallest C with ∫_{|x|≥C/N(t)}|u|² ≤ η and
/// (2π)^{−n}∫_{|ξ|≥CN(t)}|û|² ≤ η at every recorded t. η is absolute.
pub fn concentration_profile(traj: &Trajectory, eta_grid: &[f64]) -> Result<AlmostPeriodicityProfile> {
    if let Some(e) = eta_grid.iter().find(|e| !(**e > 0.0)) {
        return Err(Error::InvalidArgument(format!("η values must be positive (got {e})")));
    }
    let rows = traj
        .states()
        .par_iter()
        .map(|s| -> Result<(f64, Vec<(f64, f64)>)> {
            if s.is_zero() {
                return Err(Error::ZeroField("concentration profile needs positive mass at every time".into()));
            }
            let tails = Tails::new(s);
            let nt = tails.median_frequency();
            let radii = eta_grid.iter().map(|&e| (tails.spatial_radius(e) * nt, tails.spectral_radius(e) / nt)).collect();
            Ok((nt, radii))
        })
        .collect::<Result<Vec<_>>>()?;
    let k = eta_grid.len();
    let mut c_spatial = vec![0.0f64; k];
    let mut c_spectral = vec![0.0f64; k];
    for (_, radii) in &rows {
        for (i, (a, b)) in radii.iter().enumerate() {
            c_spatial[i] = c_spatial[i].max(*a);
            c_spectral[i] = c_spectral[i].max(*b);
        }
    }
    let c_of_eta = c_spatial.iter().zip(&c_spectral).map(|(a, b)| a.max(*b)).collect();
    Ok(AlmostPeriodicityProfile {
        times: traj.times().to_vec(),
        n_of_t: rows.iter().map(|r| r.0).collect(),
        eta_grid: eta_grid.to_vec(),
        c_of_eta,
        c_spatial,
        c_spectral,
    })
}

/// G = P_{<N}F(u) − F(P_{<N}u) with F(u) = |u|^{4/n}u.
pub fn commutator(f: &RadialField, n_cut: f64) -> RadialField {
    commutator_with(f, n_cut, nonlinearity)
}

/// The commutator for an arbitrary pointwise map F.
pub fn commutator_with<F: Fn(&RadialField) -> RadialField>(f: &RadialField, n_cut: f64, map: F) -> RadialField {
    let lo = MultiplierSymbol::lt(n_cut);
    let a = apply_multiplier(&map(f), &lo);
    let b = map(&apply_multiplier(f, &lo));
    a.sub(&b).expect("same grid")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormEntry {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    pub value: f64,
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct NormTable {
    pub entries: Vec<NormEntry>,
}

impl NormTable {
    pub fn push(&mut self, name: &str, params: &[(&str, f64)], value: f64, tolerance: Option<f64>) {
        self.entries.push(NormEntry {
            name: name.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            value,
            tolerance,
        });
    }

    /// Values of one named quantity, in insertion order.
    pub fn column(&self, name: &str) -> Vec<f64> {
        self.entries.iter().filter(|e| e.name == name).map(|e| e.value).collect()
    }

    pub fn is_valid(&self) -> bool {
        self.entries.iter().all(|e| e.value.is_finite() && e.value >= 0.0)
    }
}

/// For each N: ‖u_{≥N}‖_S, its mass part ‖u_{≥N}‖_{L^∞_tL²_x}, and
/// N^{−(1+ε)/2}‖|∇|^{−(1−ε)/2}∇u_{<N}‖_S. In the last, the S norm of
/// |∇|^{−(1−ε)/2}∇u_{<N} is ‖|x|^{−(1+ε)/2}∂_r u_{<N}‖_{L²_{t,x}} +
/// sup_t‖|∇|^{(1+ε)/2}u_{<N}‖₂.
pub fn high_freq_s_decay(traj: &Trajectory, n_list: &[f64], eps: f64) -> Result<NormTable> {
    check_epsilon(eps)?;
    if let Some(n) = n_list.iter().find(|n| !(**n > 0.0)) {
        return Err(Error::InvalidArgument(format!("frequencies must be positive (got {n})")));
    }
    let w = traj.time_weights();
    let rows = n_list
        .par_iter()
        .map(|&n_cut| -> Result<[f64; 4]> {
            let hi = MultiplierSymbol::ge(n_cut);
            let lo = MultiplierSymbol::lt(n_cut);
            let mut s_weighted = 0.0;
            let mut mass_sup = 0.0f64;
            let mut low_weighted = 0.0;
            let mut low_sup = 0.0f64;
            for (s, wt) in traj.states().iter().zip(&w) {
                let uh = apply_multiplier(s, &hi);
                s_weighted += wt * weighted_square(&fractional_derivative(&uh, 0.5 * (1.0 - eps))?, -0.5 * (1.0 + eps))?;
                mass_sup = mass_sup.max(uh.l2_norm());
                let ul = apply_multiplier(s, &lo);
                low_weighted += wt * weighted_square(&gradient_radial(&ul), -0.5 * (1.0 + eps))?;
                low_sup = low_sup.max(fractional_derivative(&ul, 0.5 * (1.0 + eps))?.l2_norm());
            }
            let high = s_weighted.sqrt() + mass_sup;
            let low = n_cut.powf(-0.5 * (1.0 + eps)) * (low_weighted.sqrt() + low_sup);
            Ok([high, mass_sup, low, s_weighted.sqrt()])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = NormTable::default();
    for (n_cut, row) in n_list.iter().zip(rows) {
        let p = [("N", *n_cut), ("eps", eps)];
        table.push("s_norm_high", &p, row[0], None);
        table.push("mass_high_sup", &p, row[1], None);
        table.push("s_norm_low_scaled", &p, row[2], None);
        table.push("s_norm_high_weighted", &p, row[3], None);
    }
    Ok(table)
}

/// Ratios ‖u‖_{L^{2(n+2)/n}_{t,x}}/‖u‖_S and ‖u‖_{L²_tL^{2n/(n−2)}_x}/‖u‖_S.
pub fn embedding_ratios(traj: &Trajectory, eps: f64) -> Result<(f64, f64)> {
    let n = traj.grid().dimension() as f64;
    let s = s_norm(traj, eps)?.total;
    if s == 0.0 {
        return Ok((0.0, 0.0));
    }
    let crit = spacetime_norm(traj, 2.0 * (n + 2.0) / n, 2.0 * (n + 2.0) / n)?;
    let endpoint = spacetime_norm(traj, 2.0, 2.0 * n / (n - 2.0))?;
    Ok((crit / s, endpoint / s))
}
