//! Empirical constants for weighted inequalities on radial functions.
//!
//! Each checker validates its exponent hypotheses before computing, evaluates
//! both sides for a batch of samples in parallel and returns a
//! [`RatioReport`]. Profiles are sampled on a geometric grid ([`LogGrid`]),
//! where dilations act as shifts and the trapezoid rule in log r converges
//! quickly for smooth integrands.

mod bilinear;
mod family;
mod hls;
mod multiplier;
mod nonlinear;
mod sobolev;
mod strichartz;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::RadialStencil;
use crate::report::{Cell, Table};
use crate::special::sphere_area;

pub use bilinear::{bilinear_oracle, check_bilinear, BilinearParams, Regime};
pub use family::{band_noise, random_radial_family, FamilyKind, Member, Profile, TestFamily, DILATIONS};
pub use hls::{check_hls, hls_oracle, HlsParams, SELF_CONVERGENCE_LIMIT};
pub use multiplier::{check_weighted_multiplier, MultiplierKind};
pub use nonlinear::{check_nonlinear_estimates, sobolev_norm, NonlinearVariant};
pub use sobolev::{
    check_radial_sobolev, check_uncertainty, top_decade_slope, uncertainty_sweep, ProbeMode, SobolevParams,
};
pub use strichartz::{check_weighted_strichartz, strichartz_saturation, stretched_times};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioSample {
    pub id: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

/// Per-sample LHS/RHS values of one inequality and their largest ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub check: String,
    pub params: BTreeMap<String, f64>,
    pub samples: Vec<RatioSample>,
    pub sup_ratio: f64,
    /// max over samples of |ratio(λ-dilate)/ratio − 1|, when measured.
    pub invariance_residual: Option<f64>,
    pub notes: Vec<String>,
}

/// LHS/RHS with the conventions 0/0 = 0 and x/0 = ∞.
pub fn ratio_of(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 {
        0.0
    } else if rhs == 0.0 {
        f64::INFINITY
    } else {
        lhs / rhs
    }
}

impl RatioReport {
    pub fn new(check: &str, params: &[(&str, f64)]) -> Self {
        Self {
            check: check.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            samples: Vec::new(),
            sup_ratio: 0.0,
            invariance_residual: None,
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, lhs: f64, rhs: f64) {
        let ratio = ratio_of(lhs, rhs);
        self.samples.push(RatioSample { id: self.samples.len(), lhs, rhs, ratio });
        self.sup_ratio = self.sup_ratio.max(ratio);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.ratio).collect()
    }

    /// Rows (sample_id, params…, lhs, rhs, ratio) plus a `sup` summary row.
    pub fn to_table(&self) -> Table {
        let mut header: Vec<&str> = vec!["sample_id"];
        header.extend(self.params.keys().map(String::as_str));
        header.extend(["lhs", "rhs", "ratio"]);
        let mut t = Table::new(&self.check, &header);
        let params: Vec<Cell> = self.params.values().map(|&v| Cell::from(v)).collect();
        for s in &self.samples {
            let mut row = vec![Cell::from(s.id)];
            row.extend(params.iter().cloned());
            row.extend([s.lhs.into(), s.rhs.into(), s.ratio.into()]);
            t.push(row);
        }
        let mut row = vec![Cell::from("sup")];
        row.extend(params.iter().cloned());
        row.extend([Cell::from(""), Cell::from(""), self.sup_ratio.into()]);
        t.push(row);
        t
    }
}

/// Evaluates `sample` for every index in parallel and collects the results
/// in index order.
pub(crate) fn collect_samples<F>(report: &mut RatioReport, count: usize, sample: F) -> Result<()>
where
    F: Fn(usize) -> Result<(f64, f64)> + Sync,
{
    let values = (0..count).into_par_iter().map(&sample).collect::<Result<Vec<_>>>()?;
    for (lhs, rhs) in values {
        report.push(lhs, rhs);
    }
    Ok(())
}

/// max_i |b_i/a_i − 1| over paired ratios.
pub fn invariance_residual(base: &[f64], dilated: &[f64]) -> f64 {
    base.iter()
        .zip(dilated)
        .map(|(a, b)| if *a == 0.0 && *b == 0.0 { 0.0 } else { (b / a - 1.0).abs() })
        .fold(0.0, f64::max)
}

/// 1/p′ = 1 − 1/p.
pub(crate) fn dual_reciprocal(p: f64) -> f64 {
    1.0 - 1.0 / p
}

pub(crate) fn check_lebesgue(name: &str, p: f64) -> Result<()> {
    if p >= 1.0 {
        Ok(())
    } else {
        Err(Error::Hypothesis(format!("{name} must lie in [1, ∞] (got {name} = {p})")))
    }
}

/// Tolerance for exact relations between exponents.
pub(crate) const RELATION_TOLERANCE: f64 = 1e-12;

/// Geometric nodes r_j = r_min e^{jh}.
#[derive(Debug, Clone)]
pub struct LogGrid {
    nodes: Vec<f64>,
    step: f64,
    stencil: RadialStencil,
}

impl LogGrid {
    pub fn new(r_min: f64, r_max: f64, per_decade: usize) -> Self {
        assert!(r_min > 0.0 && r_max > r_min && per_decade >= 4);
        let step = std::f64::consts::LN_10 / per_decade as f64;
        let count = ((r_max / r_min).ln() / step).ceil() as usize + 1;
        let nodes: Vec<f64> = (0..count).map(|j| r_min * (j as f64 * step).exp()).collect();
        let stencil = RadialStencil::new(&nodes, *nodes.last().expect("non-empty"));
        Self { nodes, step, stencil }
    }

    /// [1e−6, 300] at 200 nodes per decade: Gaussians of width 1/8 to 8 are
    /// resolved to interpolation errors near 1e−9.
    pub fn standard() -> Self {
        Self::new(1e-6, 300.0, 200)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn max_radius(&self) -> f64 {
        *self.nodes.last().expect("non-empty")
    }

    /// ∫_0^∞ φ(r) r^c dr from samples of φ, for c > −1 and φ ≈ φ(r_min) below
    /// r_min. The part below r_min is the geometric continuation of the sum.
    pub fn integral(&self, phi: &[f64], c: f64) -> f64 {
        assert!(c > -1.0, "r^{c} is not integrable at the origin");
        let e = c + 1.0;
        let body: f64 = self.nodes.iter().zip(phi).map(|(r, v)| r.powf(e) * v).sum();
        let q = (-e * self.step).exp();
        let head = phi[0] * self.nodes[0].powf(e) * q / (1.0 - q);
        self.step * (body + head)
    }

    /// ‖|x|^γ f‖_{L^p(ℝⁿ)} from samples of |f|.
    pub fn lp_norm(&self, n: usize, abs: &[f64], p: f64, gamma: f64) -> Result<f64> {
        if p.is_infinite() {
            if gamma < 0.0 && abs[0] > 0.0 {
                return Ok(f64::INFINITY);
            }
            return Ok(self.nodes.iter().zip(abs).map(|(r, v)| r.powf(gamma) * v).fold(0.0, f64::max));
        }
        let c = gamma * p + n as f64 - 1.0;
        if c <= -1.0 {
            return Err(Error::NotIntegrable { exponent: c });
        }
        let phi: Vec<f64> = abs.iter().map(|v| v.powf(p)).collect();
        Ok((sphere_area(n) * self.integral(&phi, c)).powf(1.0 / p))
    }

    /// Even interpolation of nodal samples; zero beyond the last node.
    pub fn interpolate(&self, values: &[f64], r: f64) -> f64 {
        if r > self.max_radius() {
            0.0
        } else {
            self.stencil.interpolate(values, r)
        }
    }

    pub fn stencil(&self) -> &RadialStencil {
        &self.stencil
    }
}
