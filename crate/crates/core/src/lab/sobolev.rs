//! ‖|x|^β u‖_{q′} ≲ ‖|x|^{−α}|∇|^s u‖_p for radial u, and
//! ‖|x|^{−α}P_{<N}f‖_p ≲ ⟨N⟩^α‖⟨x⟩^{−α}f‖_p.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{collect_samples, HlsParams, Profile, RatioReport};
use crate::error::{Error, Result};
use crate::field::{weighted_lp_norm, RadialField};
use crate::grid::{GridSpec, RadialGrid};
use crate::spectral::{apply_multiplier, fractional_derivative, MultiplierSymbol};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SobolevParams {
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub s: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl SobolevParams {
    /// ‖u‖_{2n/(n−2)} ≲ ‖|x|^{−(1+ε)/2}|∇|^{(1−ε)/2}u‖₂.
    pub fn first_embedding(n: usize, eps: f64) -> Self {
        let nf = n as f64;
        Self { n, p: 2.0, q: 2.0 * nf / (nf + 2.0), s: 0.5 * (1.0 - eps), alpha: 0.5 * (1.0 + eps), beta: 0.0 }
    }

    /// ‖|x|^{(1+ε)/2}u‖₂ ≲ ‖|∇|^{(1−ε)/2}u‖_{2n/(n+2)}.
    pub fn dual_embedding(n: usize, eps: f64) -> Self {
        let nf = n as f64;
        Self { n, p: 2.0 * nf / (nf + 2.0), q: 2.0, s: 0.5 * (1.0 - eps), alpha: 0.0, beta: 0.5 * (1.0 + eps) }
    }

    pub fn validate(&self) -> Result<Vec<String>> {
        let Self { n, p, q, s, alpha, beta } = *self;
        HlsParams { n, p, q, s, alpha, beta }.validate()
    }

    /// q′, the exponent of the left-hand side.
    pub fn lhs_exponent(&self) -> f64 {
        if self.q == 1.0 {
            f64::INFINITY
        } else {
            self.q / (self.q - 1.0)
        }
    }
}

/// Ratio ‖|x|^β u‖_{q′}/‖|x|^{−α}|∇|^s u‖_p for each field, with both sides
/// computed on the field's grid.
pub fn check_radial_sobolev(fields: &[RadialField], params: &SobolevParams) -> Result<RatioReport> {
    let notes = params.validate()?;
    if let Some(f) = fields.iter().find(|f| f.grid().dimension() != params.n) {
        return Err(Error::InvalidArgument(format!("field lives in dimension {}, parameters in {}", f.grid().dimension(), params.n)));
    }
    let p = params;
    let mut report = RatioReport::new(
        "radial_sobolev",
        &[("n", p.n as f64), ("p", p.p), ("q", p.q), ("s", p.s), ("alpha", p.alpha), ("beta", p.beta)],
    );
    for note in notes {
        report.note(note);
    }
    collect_samples(&mut report, fields.len(), |i| {
        let u = &fields[i];
        if u.is_zero() {
            return Ok((0.0, 0.0));
        }
        let lhs = weighted_lp_norm(u, p.lhs_exponent(), p.beta)?;
        let rhs = weighted_lp_norm(&fractional_derivative(u, p.s)?, p.p, -p.alpha)?;
        Ok((lhs, rhs))
    })?;
    Ok(report)
}

fn validate_uncertainty(n: usize, alpha: f64, p: f64, n_cut: f64) -> Result<()> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::Hypothesis(format!("1 < p < ∞ fails (p = {p})")));
    }
    if !(alpha > 0.0 && alpha < n as f64 / p) {
        return Err(Error::Hypothesis(format!("0 < α < n/p = {} fails (α = {alpha})", n as f64 / p)));
    }
    if !(n_cut > 0.0) {
        return Err(Error::Hypothesis(format!("N > 0 fails (N = {n_cut})")));
    }
    Ok(())
}

fn uncertainty_sides(f: &RadialField, alpha: f64, p: f64, n_cut: f64) -> Result<(f64, f64)> {
    if f.is_zero() {
        return Ok((0.0, 0.0));
    }
    let low = apply_multiplier(f, &MultiplierSymbol::lt(n_cut));
    let lhs = weighted_lp_norm(&low, p, -alpha)?;
    let damped = f.map(|r, v| v * (1.0 + r * r).powf(-0.5 * alpha));
    let bracket = (1.0 + n_cut * n_cut).sqrt();
    Ok((lhs, bracket.powf(alpha) * weighted_lp_norm(&damped, p, 0.0)?))
}

/// Ratio ‖|x|^{−α}P_{<N}f‖_p/(⟨N⟩^α‖⟨x⟩^{−α}f‖_p) for each field at one N.
pub fn check_uncertainty(fields: &[RadialField], alpha: f64, p: f64, n_cut: f64) -> Result<RatioReport> {
    let n = fields.first().map_or(3, |f| f.grid().dimension());
    validate_uncertainty(n, alpha, p, n_cut)?;
    let mut report = RatioReport::new("uncertainty", &[("n", n as f64), ("alpha", alpha), ("p", p), ("N", n_cut)]);
    collect_samples(&mut report, fields.len(), |i| uncertainty_sides(&fields[i], alpha, p, n_cut))?;
    Ok(report)
}

/// How the test function is chosen along an N-sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeMode {
    /// The same f on the same grid for every N.
    Fixed,
    /// f(N·), concentrated on |x| ≲ 1/N, on a grid of radius R/N.
    ScaleMatched,
}

/// One sample per N, in the order of `n_list`.
pub fn uncertainty_sweep(
    profile: &Profile,
    spec: GridSpec,
    alpha: f64,
    p: f64,
    n_list: &[f64],
    mode: ProbeMode,
) -> Result<RatioReport> {
    let n = spec.dimension;
    for &n_cut in n_list {
        validate_uncertainty(n, alpha, p, n_cut)?;
    }
    let name = match mode {
        ProbeMode::Fixed => "uncertainty_fixed",
        ProbeMode::ScaleMatched => "uncertainty_scale_matched",
    };
    let mut report = RatioReport::new(name, &[("n", n as f64), ("alpha", alpha), ("p", p)]);
    let fixed = match mode {
        ProbeMode::Fixed => Some(profile.on_grid(&Arc::new(RadialGrid::new(spec)?))),
        ProbeMode::ScaleMatched => None,
    };
    collect_samples(&mut report, n_list.len(), |i| {
        let n_cut = n_list[i];
        match &fixed {
            Some(f) => uncertainty_sides(f, alpha, p, n_cut),
            None => {
                let grid = Arc::new(RadialGrid::new(GridSpec { max_radius: spec.max_radius / n_cut, ..spec })?);
                uncertainty_sides(&profile.dilate(1.0 / n_cut, n).on_grid(&grid), alpha, p, n_cut)
            }
        }
    })?;
    for (s, n_cut) in report.samples.iter().zip(n_list) {
        report.notes.push(format!("sample {} has N = {n_cut}", s.id));
    }
    Ok(report)
}

/// Least-squares slope of log(ratio) against log(N) over N ≥ max(N)/10.
pub fn top_decade_slope(n_list: &[f64], ratios: &[f64]) -> f64 {
    let top = n_list.iter().copied().fold(0.0, f64::max);
    let pts: Vec<(f64, f64)> = n_list
        .iter()
        .zip(ratios)
        .filter(|(n, _)| **n >= top / 10.0)
        .map(|(n, r)| (n.ln(), r.ln()))
        .collect();
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (mx, my) = (sx / m, sy / m);
    let num: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let den: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, GridScheme};

    #[test]
    fn presets_satisfy_hypotheses() {
        for n in [3, 4, 5, 6] {
            for eps in [0.001, 0.01, 0.1] {
                assert!(SobolevParams::first_embedding(n, eps).validate().unwrap().is_empty());
                assert!(SobolevParams::dual_embedding(n, eps).validate().unwrap().is_empty());
            }
        }
        let first = SobolevParams::first_embedding(3, 0.01);
        assert!((first.lhs_exponent() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn zero_fields_and_rejections() {
        let g = build_grid(3, 20.0, 256, GridScheme::BesselZeros).unwrap();
        let z = RadialField::zeros(g);
        let r = check_radial_sobolev(&[z.clone()], &SobolevParams::first_embedding(3, 0.01)).unwrap();
        assert_eq!(r.sup_ratio, 0.0);
        assert_eq!(check_uncertainty(&[z.clone()], 0.5, 2.0, 1.0).unwrap().sup_ratio, 0.0);
        assert!(check_uncertainty(&[z.clone()], 1.5, 2.0, 1.0).unwrap_err().to_string().contains("α < n/p"));
        assert!(check_uncertainty(&[z], 0.5, 1.0, 1.0).is_err());
    }

    #[test]
    fn slope_of_a_power_law() {
        let ns: Vec<f64> = (0..11).map(|k| 2f64.powi(k)).collect();
        let rs: Vec<f64> = ns.iter().map(|n| 3.0 * n.powf(-0.5)).collect();
        assert!((top_decade_slope(&ns, &rs) + 0.5).abs() < 1e-12);
    }
}
