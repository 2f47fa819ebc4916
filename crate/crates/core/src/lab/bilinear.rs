//! ∫∫_{|x| ≤ C|y|} |x|^α |y|^β |f(x)| |g(y)| dx dy ≲ ‖f‖_p ‖g‖_q.

use serde::{Deserialize, Serialize};

use super::{check_lebesgue, collect_samples, dual_reciprocal, LogGrid, Profile, RatioReport, RELATION_TOLERANCE};
use crate::error::{Error, Result};
use crate::quad::adaptive;
use crate::special::sphere_area;

/// Which variable is confined to the smaller radii.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// |x| ≤ C|y|, admissible for α > −n/p′.
    XSmall,
    /// |y| ≤ C|x|, admissible for α < −n/p′.
    YSmall,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BilinearParams {
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub alpha: f64,
    pub beta: f64,
    pub regime: Regime,
    pub cutoff: f64,
}

impl BilinearParams {
    pub fn new(n: usize, p: f64, q: f64, alpha: f64, beta: f64, regime: Regime) -> Self {
        Self { n, p, q, alpha, beta, regime, cutoff: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        let Self { n, p, q, alpha, beta, regime, cutoff } = *self;
        check_lebesgue("p", p)?;
        check_lebesgue("q", q)?;
        let nf = n as f64;
        if 1.0 / p + 1.0 / q < 1.0 - RELATION_TOLERANCE {
            return Err(Error::Hypothesis(format!("1/p + 1/q ≥ 1 fails: 1/p + 1/q = {}", 1.0 / p + 1.0 / q)));
        }
        let scaling = alpha + beta + nf * dual_reciprocal(p) + nf * dual_reciprocal(q);
        if scaling.abs() > RELATION_TOLERANCE {
            return Err(Error::Hypothesis(format!("scaling condition α + β = −n/p′ − n/q′ fails by {scaling:e}")));
        }
        let edge = -nf * dual_reciprocal(p);
        match regime {
            Regime::XSmall if !(alpha > edge) => {
                Err(Error::Hypothesis(format!("region |x| ≲ |y| needs α > −n/p′ = {edge} (got α = {alpha})")))
            }
            Regime::YSmall if !(alpha < edge) => {
                Err(Error::Hypothesis(format!("region |y| ≲ |x| needs α < −n/p′ = {edge} (got α = {alpha})")))
            }
            _ if !(cutoff > 0.0) => Err(Error::InvalidArgument(format!("cutoff C must be positive (got {cutoff})"))),
            _ => Ok(()),
        }
    }

    fn name(&self) -> &'static str {
        match self.regime {
            Regime::XSmall => "bilinear_x_small",
            Regime::YSmall => "bilinear_y_small",
        }
    }

    /// (inner exponent, outer exponent): the confined variable carries r^{a},
    /// the free one ρ^{b}, both including the r^{n−1} of polar coordinates.
    fn exponents(&self) -> (f64, f64) {
        let nf = self.n as f64;
        match self.regime {
            Regime::XSmall => (self.alpha + nf - 1.0, self.beta + nf - 1.0),
            Regime::YSmall => (self.beta + nf - 1.0, self.alpha + nf - 1.0),
        }
    }
}

/// ω² ∫ o(ρ) ρ^{b} ∫_0^{Cρ} i(r) r^{a} dr dρ on the log grid.
fn region_integral(grid: &LogGrid, n: usize, inner: &[f64], outer: &[f64], a: f64, b: f64, cutoff: f64) -> f64 {
    let cum = grid.stencil().cumulative(inner, a);
    let phi: Vec<f64> = grid
        .nodes()
        .iter()
        .zip(outer)
        .map(|(&rho, o)| if *o == 0.0 { 0.0 } else { o * cum.at(cutoff * rho) / rho.powf(a + 1.0) })
        .collect();
    sphere_area(n).powi(2) * grid.integral(&phi, a + b + 1.0)
}

/// Ratio LHS/(‖f‖_p‖g‖_q) for each pair, with the LHS computed on `grid`.
pub fn check_bilinear(pairs: &[(Profile, Profile)], params: &BilinearParams, grid: &LogGrid) -> Result<RatioReport> {
    params.validate()?;
    let p = params;
    let mut report = RatioReport::new(
        p.name(),
        &[("n", p.n as f64), ("p", p.p), ("q", p.q), ("alpha", p.alpha), ("beta", p.beta), ("cutoff", p.cutoff)],
    );
    let (a, b) = p.exponents();
    collect_samples(&mut report, pairs.len(), |i| {
        let (f, g) = &pairs[i];
        let fa = f.sample_abs(grid.nodes());
        let ga = g.sample_abs(grid.nodes());
        let (inner, outer) = match p.regime {
            Regime::XSmall => (&fa, &ga),
            Regime::YSmall => (&ga, &fa),
        };
        let lhs = region_integral(grid, p.n, inner, outer, a, b, p.cutoff);
        let rhs = grid.lp_norm(p.n, &fa, p.p, 0.0)? * grid.lp_norm(p.n, &ga, p.q, 0.0)?;
        Ok((lhs, rhs))
    })?;
    Ok(report)
}

/// ∫_0^x φ(r) r^{e} dr with r = x u^{1/(e+1)}, which removes the endpoint power.
pub(super) fn power_integral<F: Fn(f64) -> f64>(phi: F, e: f64, x: f64, rel_tol: f64) -> f64 {
    let m = 1.0 / (e + 1.0);
    x.powf(e + 1.0) * m * adaptive(|u| phi(x * u.powf(m)), 0.0, 1.0, 0.0, rel_tol).value
}

/// The LHS by nested adaptive quadrature of the exact profiles; the slow
/// reference for [`check_bilinear`]. Meant for analytic profiles.
pub fn bilinear_oracle(f: &Profile, g: &Profile, params: &BilinearParams) -> Result<f64> {
    params.validate()?;
    let (a, b) = params.exponents();
    let (inner, outer) = match params.regime {
        Regime::XSmall => (f, g),
        Regime::YSmall => (g, f),
    };
    let tol = 1e-17;
    let reach = outer.support(tol).max(inner.support(tol) / params.cutoff);
    let cap = inner.support(tol);
    let c = params.cutoff;
    let v = power_integral(
        |rho| {
            let x = (c * rho).min(cap);
            let inside = power_integral(|r| inner.eval(r).norm(), a, x, 1e-11);
            outer.eval(rho).norm() * inside / rho.powf(a + 1.0)
        },
        a + b + 1.0,
        reach,
        1e-10,
    );
    Ok(sphere_area(params.n).powi(2) * v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hypotheses_are_named() {
        let ok = BilinearParams::new(3, 2.0, 2.0, -1.0, -2.0, Regime::XSmall);
        assert!(ok.validate().is_ok());
        let wrong_region = BilinearParams { regime: Regime::YSmall, ..ok };
        assert!(wrong_region.validate().unwrap_err().to_string().contains("α < −n/p′"));
        let unscaled = BilinearParams { beta: -1.0, ..ok };
        assert!(unscaled.validate().unwrap_err().to_string().contains("scaling"));
        let holder = BilinearParams { p: 4.0, q: 4.0, alpha: -1.0, beta: -3.5, ..ok };
        assert!(holder.validate().unwrap_err().to_string().contains("1/p + 1/q"));
    }

    #[test]
    fn zero_input_gives_zero_ratio() {
        let params = BilinearParams::new(3, 2.0, 2.0, -1.0, -2.0, Regime::XSmall);
        let grid = LogGrid::standard();
        let r = check_bilinear(&[(Profile::zero(), Profile::gaussian(1.0, 1.0))], &params, &grid).unwrap();
        assert_eq!(r.sup_ratio, 0.0);
    }

    #[test]
    fn fast_path_matches_nested_quadrature() {
        let grid = LogGrid::standard();
        let f = Profile::gaussian(1.0, 0.7);
        let g = Profile::Rings(vec![(num_complex::Complex64::new(0.5, 0.5), 1.5, 0.4)]);
        for params in [
            BilinearParams::new(3, 2.0, 2.0, -1.0, -2.0, Regime::XSmall),
            BilinearParams::new(3, 2.0, 2.0, -2.0, -1.0, Regime::YSmall),
            BilinearParams { cutoff: 2.0, ..BilinearParams::new(4, 1.5, 3.0, 0.5, -4.5, Regime::XSmall) },
        ] {
            params.validate().unwrap();
            let fast = check_bilinear(&[(f.clone(), g.clone())], &params, &grid).unwrap().samples[0].lhs;
            let slow = bilinear_oracle(&f, &g, &params).unwrap();
            assert!((fast - slow).abs() < 1e-8 * slow, "{params:?}: {fast} vs {slow}");
        }
    }
}
