//! ‖u‖_S ≲ ‖u(t₀)‖₂ + ‖G‖_N for solutions of iu_t + Δu = G.

use num_complex::Complex64;
use rayon::prelude::*;

use super::RatioReport;
use crate::diagnostics::{check_epsilon, n_norm, weighted_square};
use crate::error::{Error, Result};
use crate::field::RadialField;
use crate::solver::{trapezoid_weights, Trajectory};
use crate::spectral::{aliasing_risk, fractional_derivative, free_propagate, hankel_inverse, spectrum, SpectralField};

/// t_k = t₀ + (t_end − t₀)(k/K)², k = 0..=K: dense where free waves still
/// overlap the origin.
pub fn stretched_times(t0: f64, t_end: f64, count: usize) -> Vec<f64> {
    let k = count.max(1) as f64;
    (0..=count.max(1)).map(|i| t0 + (t_end - t0) * (i as f64 / k).powi(2)).collect()
}

/// Integrand of the weighted part of the S norm at one time.
fn s_slice(u: &RadialField, eps: f64) -> Result<(f64, f64)> {
    let v = fractional_derivative(u, 0.5 * (1.0 - eps))?;
    Ok((weighted_square(&v, -0.5 * (1.0 + eps))?, u.l2_norm()))
}

fn s_norm_from_slices(times: &[f64], slices: &[(f64, f64)]) -> f64 {
    let w = if times.len() == 1 { vec![1.0] } else { trapezoid_weights(times) };
    let weighted = w.iter().zip(slices).map(|(w, s)| w * s.0).sum::<f64>().sqrt();
    weighted + slices.iter().map(|s| s.1).fold(0.0, f64::max)
}

/// Ratio ‖u‖_S/(‖u₀‖₂ + ‖G‖_N) on the recorded `times`, u(times[0]) = u₀.
/// Without forcing, u is the free flow evaluated exactly at each time; with
/// forcing (recorded at the same times) the Duhamel integral is accumulated
/// by the trapezoid rule in the spectral variable. Free-flow aliasing
/// warnings are logged and noted in the report.
pub fn check_weighted_strichartz(u0: &RadialField, forcing: Option<&Trajectory>, times: &[f64], eps: f64) -> Result<RatioReport> {
    check_epsilon(eps)?;
    if times.is_empty() || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("times must be non-empty and strictly increasing".into()));
    }
    let t0 = times[0];
    let span = times[times.len() - 1] - t0;
    let mut report = RatioReport::new("weighted_strichartz", &[("eps", eps), ("t0", t0), ("T", span)]);
    if let Some(w) = aliasing_risk(u0, span) {
        log::warn!("free flow over {span} travels {:.3} past R = {}", w.travel, u0.grid().max_radius());
        report.note(format!("aliasing risk: travel {:.3} exceeds R = {}", w.travel, u0.grid().max_radius()));
    }
    let slices: Vec<(f64, f64)> = match forcing {
        None => times.par_iter().map(|&t| s_slice(&free_propagate(u0, t - t0), eps)).collect::<Result<_>>()?,
        Some(g) => {
            if g.times().len() != times.len() || g.times().iter().zip(times).any(|(a, b)| (a - b).abs() > 1e-12 * b.abs().max(1.0)) {
                return Err(Error::InvalidArgument("forcing must be recorded at the given times".into()));
            }
            if !g.grid().same_as(u0.grid()) {
                return Err(Error::GridMismatch);
            }
            duhamel_states(u0, g, t0)?.par_iter().map(|u| s_slice(u, eps)).collect::<Result<_>>()?
        }
    };
    let lhs = s_norm_from_slices(times, &slices);
    let forcing_norm = match forcing {
        Some(g) => n_norm(g, eps)?,
        None => 0.0,
    };
    report.push(lhs, u0.l2_norm() + forcing_norm);
    Ok(report)
}

/// u(t_k) = e^{i(t_k−t₀)Δ}u₀ − i∫_{t₀}^{t_k} e^{i(t_k−s)Δ}G(s) ds.
fn duhamel_states(u0: &RadialField, g: &Trajectory, t0: f64) -> Result<Vec<RadialField>> {
    let grid = u0.grid();
    let rho2: Vec<f64> = grid.dual_nodes().iter().map(|r| r * r).collect();
    let u0h = spectrum(u0);
    let pulled = |k: usize| -> Vec<Complex64> {
        let s = g.times()[k] - t0;
        spectrum(&g.states()[k]).iter().zip(&rho2).map(|(v, r2)| v * Complex64::from_polar(1.0, s * r2)).collect()
    };
    let mut acc = vec![Complex64::new(0.0, 0.0); grid.len()];
    let mut prev = pulled(0);
    let mut out = Vec::with_capacity(g.len());
    for k in 0..g.len() {
        let t = g.times()[k] - t0;
        if k > 0 {
            let cur = pulled(k);
            let h = 0.5 * (g.times()[k] - g.times()[k - 1]);
            for ((a, p), c) in acc.iter_mut().zip(&prev).zip(&cur) {
                *a += (p + c) * h;
            }
            prev = cur;
        }
        let vals = u0h
            .iter()
            .zip(&acc)
            .zip(&rho2)
            .map(|((u, a), r2)| (u - Complex64::i() * a) * Complex64::from_polar(1.0, -t * r2))
            .collect();
        out.push(hankel_inverse(&SpectralField::new(grid.clone(), vals)?));
    }
    Ok(out)
}

/// Free-flow ratios on [0, T] for each horizon T, with `points` + 1
/// stretched times per horizon; one sample per horizon.
pub fn strichartz_saturation(u0: &RadialField, horizons: &[f64], points: usize, eps: f64) -> Result<RatioReport> {
    check_epsilon(eps)?;
    let mut report = RatioReport::new("strichartz_saturation", &[("eps", eps), ("points", points as f64)]);
    for (i, &t) in horizons.iter().enumerate() {
        let times = stretched_times(0.0, t, points);
        let r = check_weighted_strichartz(u0, None, &times, eps)?;
        let s = r.samples[0];
        report.push(s.lhs, s.rhs);
        report.note(format!("sample {i} has T = {t}"));
        report.notes.extend(r.notes);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::s_norm;
    use crate::grid::{build_grid, GridScheme};

    #[test]
    fn zero_data_reports_zero() {
        let g = build_grid(3, 20.0, 256, GridScheme::BesselZeros).unwrap();
        let z = RadialField::zeros(g.clone());
        let times = stretched_times(0.0, 1.0, 8);
        let forcing = Trajectory::from_states(times.clone(), vec![z.clone(); times.len()], "zero").unwrap();
        assert_eq!(check_weighted_strichartz(&z, None, &times, 0.01).unwrap().sup_ratio, 0.0);
        assert_eq!(check_weighted_strichartz(&z, Some(&forcing), &times, 0.01).unwrap().sup_ratio, 0.0);
    }

    #[test]
    fn free_flow_matches_stored_trajectory() {
        let g = build_grid(3, 60.0, 1024, GridScheme::BesselZeros).unwrap();
        let u0 = RadialField::from_real_fn(g, |r| (-r * r).exp());
        let times = stretched_times(0.0, 2.0, 40);
        let r = check_weighted_strichartz(&u0, None, &times, 0.01).unwrap();
        let states = times.iter().map(|&t| free_propagate(&u0, t)).collect();
        let traj = Trajectory::from_states(times, states, "free").unwrap();
        let s = s_norm(&traj, 0.01).unwrap().total;
        assert!((r.samples[0].lhs - s).abs() < 1e-12 * s);
    }

    #[test]
    fn duhamel_accumulation_solves_the_forced_equation() {
        // G = e^{itΔ}h gives u(t) = e^{itΔ}(u₀ − i t h).
        let g = build_grid(3, 40.0, 512, GridScheme::BesselZeros).unwrap();
        let u0 = RadialField::from_real_fn(g.clone(), |r| (-r * r).exp());
        let h = RadialField::from_real_fn(g.clone(), |r| r * r * (-r * r).exp());
        let times: Vec<f64> = (0..=50).map(|k| k as f64 * 0.01).collect();
        let forcing = Trajectory::from_states(times.clone(), times.iter().map(|&t| free_propagate(&h, t)).collect(), "g").unwrap();
        let states = duhamel_states(&u0, &forcing, 0.0).unwrap();
        let t = 0.5;
        let want = free_propagate(&u0.sub(&h.scale(Complex64::new(0.0, t))).unwrap(), t);
        let err = states.last().unwrap().sub(&want).unwrap().l2_norm();
        assert!(err < 1e-12, "{err}");
    }
}
