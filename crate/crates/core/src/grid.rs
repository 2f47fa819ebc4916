//! Radial grids on [0, R] with quadrature for ∫_{ℝⁿ} over radial functions,
//! plus the dual frequency grid the Hankel transform pairs with.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::RadialStencil;
use crate::special::{bessel_j, bessel_zeros, sphere_area};
use crate::spectral::TransformPlan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridScheme {
    /// Nodes at scaled zeros of J_{n/2−1}; pairs exactly with the Hankel transform.
    BesselZeros,
    /// Midpoint nodes with product-integration weights.
    Uniform,
}

impl GridScheme {
    pub fn name(self) -> &'static str {
        match self {
            GridScheme::BesselZeros => "bessel_zeros",
            GridScheme::Uniform => "uniform",
        }
    }
}

impl fmt::Display for GridScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for GridScheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bessel_zeros" | "bessel" => Ok(GridScheme::BesselZeros),
            "uniform" => Ok(GridScheme::Uniform),
            other => Err(Error::InvalidArgument(format!(
                "unknown grid scheme `{other}` (expected bessel_zeros or uniform)"
            ))),
        }
    }
}

/// Grid parameters; two grids with equal parameters are interchangeable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub dimension: usize,
    pub max_radius: f64,
    pub node_count: usize,
    pub scheme: GridScheme,
}

pub struct RadialGrid {
    spec: GridSpec,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    dual_nodes: Vec<f64>,
    dual_weights: Vec<f64>,
    zeros: Vec<f64>,
    surface_area: f64,
    stencil: RadialStencil,
    dual_stencil: RadialStencil,
    plan: OnceLock<TransformPlan>,
}

impl fmt::Debug for RadialGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialGrid").field("spec", &self.spec).finish_non_exhaustive()
    }
}

/// Builds a grid of J nodes on [0, R] in ℝⁿ.
pub fn build_grid(n: usize, max_radius: f64, node_count: usize, scheme: GridScheme) -> Result<Arc<RadialGrid>> {
    RadialGrid::new(GridSpec { dimension: n, max_radius, node_count, scheme }).map(Arc::new)
}

impl RadialGrid {
    pub fn new(spec: GridSpec) -> Result<Self> {
        let GridSpec { dimension: n, max_radius: r, node_count: j, scheme } = spec;
        if n < 3 {
            return Err(Error::Dimension(n));
        }
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::GridParameter(format!("max_radius must be positive and finite (got {r})")));
        }
        if j < 8 {
            return Err(Error::GridParameter(format!("node_count must be at least 8 (got {j})")));
        }
        let nu = n as f64 / 2.0 - 1.0;
        let zeros = bessel_zeros(nu, j + 1);
        let s = zeros[j];
        let dual_nodes: Vec<f64> = zeros[..j].iter().map(|z| z / r).collect();
        let jp1: Vec<f64> = zeros[..j].iter().map(|&z| bessel_j(nu + 1.0, z)).collect();
        let dual_weights = dual_nodes
            .iter()
            .zip(&jp1)
            .map(|(rho, jj)| 2.0 * rho.powf(2.0 * nu) / (r * r * jj * jj))
            .collect();

        let (nodes, weights) = match scheme {
            GridScheme::BesselZeros => {
                let w_band = s / r;
                let nodes: Vec<f64> = zeros[..j].iter().map(|z| z * r / s).collect();
                let weights = nodes
                    .iter()
                    .zip(&jp1)
                    .map(|(x, jj)| 2.0 * x.powf(2.0 * nu) / (w_band * w_band * jj * jj))
                    .collect();
                (nodes, weights)
            }
            GridScheme::Uniform => {
                let h = r / j as f64;
                let nodes: Vec<f64> = (0..j).map(|i| (i as f64 + 0.5) * h).collect();
                let weights = RadialStencil::new(&nodes, r).weights(n as f64 - 1.0);
                (nodes, weights)
            }
        };
        let stencil = RadialStencil::new(&nodes, r);
        let dual_edge = s / r;
        let dual_stencil = RadialStencil::new(&dual_nodes, dual_edge);
        Ok(Self {
            spec,
            nodes,
            weights,
            dual_nodes,
            dual_weights,
            zeros,
            surface_area: sphere_area(n),
            stencil,
            dual_stencil,
            plan: OnceLock::new(),
        })
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn dimension(&self) -> usize {
        self.spec.dimension
    }

    pub fn max_radius(&self) -> f64 {
        self.spec.max_radius
    }

    pub fn len(&self) -> usize {
        self.spec.node_count
    }

    pub fn is_empty(&self) -> bool {
        self.spec.node_count == 0
    }

    pub fn scheme(&self) -> GridScheme {
        self.spec.scheme
    }

    /// Bessel order ν = n/2 − 1 of the transform kernel.
    pub fn order(&self) -> f64 {
        self.spec.dimension as f64 / 2.0 - 1.0
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Radial weights: Σ w_j g(r_j) ≈ ∫_0^R g(r) r^{n−1} dr.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn surface_area(&self) -> f64 {
        self.surface_area
    }

    /// Dual frequency nodes ρ_k = j_{ν,k}/R.
    pub fn dual_nodes(&self) -> &[f64] {
        &self.dual_nodes
    }

    /// Dual weights: Σ v_k G(ρ_k) ≈ ∫_0^∞ G(ρ) ρ^{n−1} dρ for band-limited G.
    pub fn dual_weights(&self) -> &[f64] {
        &self.dual_weights
    }

    /// The first J+1 positive zeros of J_ν.
    pub fn bessel_zeros(&self) -> &[f64] {
        &self.zeros
    }

    /// Highest resolved frequency ρ_max.
    pub fn max_frequency(&self) -> f64 {
        *self.dual_nodes.last().expect("grid has nodes")
    }

    pub fn stencil(&self) -> &RadialStencil {
        &self.stencil
    }

    pub fn dual_stencil(&self) -> &RadialStencil {
        &self.dual_stencil
    }

    /// Product-integration weights for ∫_0^R g(r) r^{n−1+γ} dr with g smooth
    /// and even; used for the singular power weights |x|^γ.
    pub fn power_weights(&self, gamma: f64) -> Result<Vec<f64>> {
        let c = self.spec.dimension as f64 - 1.0 + gamma;
        if c <= -1.0 {
            return Err(Error::NotIntegrable { exponent: c });
        }
        Ok(self.stencil.weights(c))
    }

    pub(crate) fn plan(&self) -> &TransformPlan {
        self.plan.get_or_init(|| TransformPlan::new(self))
    }

    pub fn same_as(&self, other: &RadialGrid) -> bool {
        std::ptr::eq(self, other) || self.spec == other.spec
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(build_grid(2, 1.0, 64, GridScheme::Uniform), Err(Error::Dimension(2))));
        assert!(build_grid(3, 0.0, 64, GridScheme::Uniform).is_err());
        assert!(build_grid(3, 1.0, 7, GridScheme::BesselZeros).is_err());
    }

    #[test]
    fn uniform_weights_sum_to_ball_volume() {
        let g = build_grid(3, 1.0, 256, GridScheme::Uniform).unwrap();
        let s: f64 = g.weights().iter().sum();
        assert!((s - 1.0 / 3.0).abs() < 1e-6 / 3.0);
        let g = build_grid(5, 2.0, 256, GridScheme::Uniform).unwrap();
        let s: f64 = g.weights().iter().sum();
        assert!((s / 6.4 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn bessel_nodes_for_n3_are_uniform() {
        let g = build_grid(3, 20.0, 512, GridScheme::BesselZeros).unwrap();
        assert!((g.nodes()[0] - 20.0 / 513.0).abs() < 1e-15);
        let h = 20.0 / 513.0;
        for (j, (r, w)) in g.nodes().iter().zip(g.weights()).enumerate() {
            let x = (j + 1) as f64 * h;
            assert!((r - x).abs() < 1e-12);
            assert!((w - h * x * x).abs() < 1e-12 * h * x * x);
        }
    }

    #[test]
    fn power_weights_reject_non_integrable_exponents() {
        let g = build_grid(3, 1.0, 64, GridScheme::Uniform).unwrap();
        assert!(g.power_weights(-3.0).is_err());
        assert!(g.power_weights(-1.5).is_ok());
    }
}
