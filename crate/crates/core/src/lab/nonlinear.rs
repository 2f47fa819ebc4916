//! N-norm bounds for |u|^{4/n}|v| in terms of norms of u and v.
//!
//! basic:     ‖|u|^{4/n}|v|‖_N ≲ ‖u‖_{L^∞L²}^{4/n} ‖v‖_S
//! refined_1: ‖|∇|^{(1−ε)/2}|u|^{4/n}|v|‖_N ≲ ‖|∇|^{n(1−ε)/4}u‖_{L^∞L²}^{4/n} ‖|∇|^{−(1−ε)/2}v‖_S
//! refined_2: ‖|∇|^{(1−ε)/2}|u|^{4/n}|v|‖_N ≲ ‖|∇|^{3(1−ε)/4}u‖_{L^∞L²}^{4/n} ‖|∇|^{(1−ε)(1/2−3/n)}v‖_S
//!
//! In the refined forms the N norm of |∇|^{(1−ε)/2}H is ‖|x|^{(1+ε)/2}H‖_{L²_{t,x}}.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::RatioReport;
use crate::diagnostics::{check_epsilon, n_norm_riesz, s_norm, weighted_square};
use crate::error::{Error, Result};
use crate::field::RadialField;
use crate::solver::Trajectory;
use crate::spectral::{fractional_derivative, spectrum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NonlinearVariant {
    Basic,
    Refined1,
    Refined2,
}

impl NonlinearVariant {
    pub fn name(self) -> &'static str {
        match self {
            NonlinearVariant::Basic => "basic",
            NonlinearVariant::Refined1 => "refined_1",
            NonlinearVariant::Refined2 => "refined_2",
        }
    }
}

impl std::str::FromStr for NonlinearVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "basic" => Ok(NonlinearVariant::Basic),
            "refined_1" => Ok(NonlinearVariant::Refined1),
            "refined_2" => Ok(NonlinearVariant::Refined2),
            other => Err(Error::InvalidArgument(format!("unknown nonlinear estimate `{other}`"))),
        }
    }
}

/// ‖|∇|^s f‖₂ by Plancherel, (2π)^{−n}ω∫ρ^{2s}|f̂|²ρ^{n−1}dρ; needs s > −n/2.
/// No low-frequency restriction applies since the weight stays integrable.
pub fn sobolev_norm(f: &RadialField, s: f64) -> Result<f64> {
    let g = f.grid();
    let n = g.dimension();
    if !(s > -(n as f64) / 2.0) {
        return Err(Error::InvalidArgument(format!("‖|∇|^s f‖₂ needs s > −n/2 (got s = {s})")));
    }
    let spec = spectrum(f);
    let sum: f64 = if s >= 0.0 {
        g.dual_weights().iter().zip(g.dual_nodes()).zip(spec).map(|((w, r), v)| w * r.powf(2.0 * s) * v.norm_sqr()).sum()
    } else {
        let w = g.dual_stencil().weights(n as f64 - 1.0 + 2.0 * s);
        w.iter().zip(spec).map(|(w, v)| w * v.norm_sqr()).sum()
    };
    Ok((g.surface_area() * sum / (2.0 * PI).powi(n as i32)).sqrt())
}

fn product(u: &RadialField, v: &RadialField, exponent: f64) -> RadialField {
    let vals = u.values().iter().zip(v.values()).map(|(a, b)| Complex64::new(a.norm().powf(exponent) * b.norm(), 0.0)).collect();
    RadialField::new(u.grid().clone(), vals).expect("same grid")
}

/// sup_t ‖|∇|^s w(t)‖₂.
fn sup_sobolev(traj: &Trajectory, s: f64) -> Result<f64> {
    let vals = traj.states().par_iter().map(|w| sobolev_norm(w, s)).collect::<Result<Vec<_>>>()?;
    Ok(vals.into_iter().fold(0.0, f64::max))
}

/// (∫ w(t) ‖|x|^γ |∇|^σ f(t)‖₂² dt)^{1/2}.
fn weighted_l2(traj: &Trajectory, sigma: f64, gamma: f64) -> Result<f64> {
    let slices = traj
        .states()
        .par_iter()
        .map(|f| if sigma == 0.0 { weighted_square(f, gamma) } else { weighted_square(&fractional_derivative(f, sigma)?, gamma) })
        .collect::<Result<Vec<_>>>()?;
    Ok(traj.time_weights().iter().zip(&slices).map(|(w, v)| w * v).sum::<f64>().sqrt())
}

/// The S norm of |∇|^σ v: ‖|x|^{−(1+ε)/2}|∇|^{(1−ε)/2+σ}v‖_{L²_{t,x}} + sup_t‖|∇|^σ v‖₂.
fn shifted_s_norm(v: &Trajectory, sigma: f64, eps: f64) -> Result<f64> {
    let order = 0.5 * (1.0 - eps) + sigma;
    if order < 0.0 {
        return Err(Error::InvalidArgument(format!("S norm of |∇|^{sigma}v needs a derivative of negative order {order}")));
    }
    Ok(weighted_l2(v, order, -0.5 * (1.0 + eps))? + sup_sobolev(v, sigma)?)
}

/// One sample: the LHS norm of |u|^{4/n}|v| and the RHS product, for
/// trajectories recorded at the same times on the same grid. The basic LHS
/// goes through physical-space Riesz potentials since |u|^{4/n}|v| has
/// zero-frequency content.
pub fn check_nonlinear_estimates(u: &Trajectory, v: &Trajectory, variant: NonlinearVariant, eps: f64) -> Result<RatioReport> {
    check_epsilon(eps)?;
    if !u.grid().same_as(v.grid()) {
        return Err(Error::GridMismatch);
    }
    if u.times() != v.times() {
        return Err(Error::InvalidArgument("u and v must be recorded at the same times".into()));
    }
    let n = u.grid().dimension() as f64;
    let e = 4.0 / n;
    let mut report = RatioReport::new(&format!("nonlinear_{}", variant.name()), &[("n", n), ("eps", eps)]);
    let states = u.states().iter().zip(v.states()).map(|(a, b)| product(a, b, e)).collect();
    let g = Trajectory::from_states(u.times().to_vec(), states, "|u|^{4/n}|v|")?;
    let (lhs, rhs) = match variant {
        NonlinearVariant::Basic => {
            let lhs = n_norm_riesz(&g, eps)?;
            let mass = u.states().iter().map(|s| s.l2_norm()).fold(0.0, f64::max);
            (lhs, mass.powf(e) * s_norm(v, eps)?.total)
        }
        NonlinearVariant::Refined1 => {
            let lhs = weighted_l2(&g, 0.0, 0.5 * (1.0 + eps))?;
            let u_part = sup_sobolev(u, 0.25 * n * (1.0 - eps))?;
            (lhs, u_part.powf(e) * shifted_s_norm(v, -0.5 * (1.0 - eps), eps)?)
        }
        NonlinearVariant::Refined2 => {
            let lhs = weighted_l2(&g, 0.0, 0.5 * (1.0 + eps))?;
            let u_part = sup_sobolev(u, 0.75 * (1.0 - eps))?;
            (lhs, u_part.powf(e) * shifted_s_norm(v, (1.0 - eps) * (0.5 - 3.0 / n), eps)?)
        }
    };
    report.push(lhs, rhs);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, GridScheme};

    #[test]
    fn plancherel_and_gaussian_derivatives() {
        let g = build_grid(3, 32.0, 512, GridScheme::BesselZeros).unwrap();
        let f = RadialField::from_real_fn(g, |r| (-r * r / 2.0).exp());
        assert!((sobolev_norm(&f, 0.0).unwrap() - f.l2_norm()).abs() < 1e-12);
        // ‖|∇|^s e^{−r²/2}‖₂² = (2π)^{−3}4π∫ρ^{2s+2}(2π)³e^{−ρ²}dρ = 2π Γ(s + 3/2)
        for s in [-1.0, -0.495, 0.5, 1.0] {
            let exact = (2.0 * PI * statrs::function::gamma::gamma(s + 1.5)).sqrt();
            let v = sobolev_norm(&f, s).unwrap();
            assert!((v - exact).abs() < 1e-6 * exact, "s={s}: {v} vs {exact}");
        }
        assert!(sobolev_norm(&f, -1.5).is_err());
    }

    #[test]
    fn zero_pair_is_zero() {
        let g = build_grid(3, 10.0, 64, GridScheme::BesselZeros).unwrap();
        let z = Trajectory::from_states(vec![0.0, 0.1], vec![RadialField::zeros(g.clone()), RadialField::zeros(g)], "z").unwrap();
        for v in [NonlinearVariant::Basic, NonlinearVariant::Refined1, NonlinearVariant::Refined2] {
            assert_eq!(check_nonlinear_estimates(&z, &z, v, 0.01).unwrap().sup_ratio, 0.0);
        }
    }
}
