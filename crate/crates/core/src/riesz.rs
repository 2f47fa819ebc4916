//! Riesz potentials I_s = |∇|^{−s} of radial functions in physical space,
//! and the spherical averages of |x − y|^{−λ} they are built from.
//!
//! For |x| = r and |y| = ρ with ρ < r,
//! ∫_{S^{n−1}} |x − ρθ|^{−λ} dσ(θ) = r^{−λ} K(ρ/r), where
//! K(t) = ω_{n−1} ₂F₁(λ/2, λ/2 − n/2 + 1; n/2; t²).

use std::f64::consts::PI;

use statrs::function::gamma::gamma;

use crate::quad::{adaptive, adaptive_limited, Integral};
use crate::special::sphere_area;

/// Gauss hypergeometric ₂F₁(a, b; c; z) for 0 ≤ z < 1.
///
/// The power series is used for z ≤ 0.7; above that the 1 − z connection
/// formula, which needs c − a − b away from the integers. Returns None when
/// neither applies.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> Option<f64> {
    if !(0.0..1.0).contains(&z) {
        return None;
    }
    if z <= 0.7 {
        return Some(series(a, b, c, z));
    }
    let d = c - a - b;
    if (d - d.round()).abs() < 1e-6 {
        return None;
    }
    let w = 1.0 - z;
    let t1 = gamma(c) * gamma(d) / (gamma(c - a) * gamma(c - b)) * series(a, b, 1.0 - d, w);
    let t2 = w.powf(d) * gamma(c) * gamma(-d) / (gamma(a) * gamma(b)) * series(c - a, c - b, d + 1.0, w);
    Some(t1 + t2)
}

fn series(a: f64, b: f64, c: f64, z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..5000 {
        let k = k as f64;
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Smallest 1 − t passed to the kernel from [`RieszPotential::at`].
const GAP_FLOOR: f64 = 1e-13;

/// K(t) = ∫_{S^{n−1}} |e − tθ|^{−λ} dσ(θ) for 0 ≤ t < 1 and unit e.
pub fn sphere_kernel(n: usize, lambda: f64, t: f64) -> f64 {
    let omega = sphere_area(n);
    if t == 0.0 {
        return omega;
    }
    if n == 3 && t >= 1e-3 {
        let e = 2.0 - lambda;
        return if e.abs() < 1e-12 {
            2.0 * PI / t * ((1.0 + t) / (1.0 - t)).ln()
        } else {
            2.0 * PI * ((1.0 + t).powf(e) - (1.0 - t).powf(e)) / (t * e)
        };
    }
    let nf = n as f64;
    match hyp2f1(lambda / 2.0, lambda / 2.0 - nf / 2.0 + 1.0, nf / 2.0, t * t) {
        Some(v) => omega * v,
        None => sphere_kernel_quadrature(n, lambda, t, 1e-13).value,
    }
}

/// K(t) by adaptive quadrature of the polar-angle integral
/// ω_{n−2} ∫_0^π (1 + t² − 2t cos φ)^{−λ/2} sin^{n−2}φ dφ.
pub fn sphere_kernel_quadrature(n: usize, lambda: f64, t: f64, rel_tol: f64) -> Integral {
    let omega = sphere_area(n - 1);
    let mut f = |phi: f64| {
        let d = (1.0 - t) * (1.0 - t) + 4.0 * t * (0.5 * phi).sin().powi(2);
        d.powf(-lambda / 2.0) * phi.sin().powi(n as i32 - 2)
    };
    // The peak at φ = 0 has width about 1 − t; split there first.
    let split = (4.0 * (1.0 - t)).clamp(1e-8, PI);
    let a = adaptive_limited(&mut f, 0.0, split, 0.0, rel_tol, 4000);
    let b = adaptive_limited(&mut f, split, PI, 0.0, rel_tol, 4000);
    Integral { value: omega * (a.value + b.value), error: omega * (a.error + b.error), converged: a.converged && b.converged }
}

/// c_{n,s} with (|∇|^{−s}G)(x) = c_{n,s} ∫ |x − y|^{s−n} G(y) dy, 0 < s < n.
pub fn riesz_constant(n: usize, s: f64) -> f64 {
    let nf = n as f64;
    gamma((nf - s) / 2.0) / (2f64.powf(s) * PI.powf(nf / 2.0) * gamma(s / 2.0))
}

/// Physical-space |∇|^{−s} of a radial profile G supported in [0, R].
pub struct RieszPotential<'a> {
    n: usize,
    s: f64,
    lambda: f64,
    support: f64,
    profile: &'a (dyn Fn(f64) -> f64 + Sync),
    rel_tol: f64,
}

impl<'a> RieszPotential<'a> {
    pub fn new(n: usize, s: f64, support: f64, profile: &'a (dyn Fn(f64) -> f64 + Sync)) -> Self {
        assert!(s > 0.0 && s < n as f64, "Riesz order must lie in (0, n)");
        Self { n, s, lambda: n as f64 - s, support, profile, rel_tol: 1e-10 }
    }

    pub fn with_tolerance(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    fn density(&self, rho: f64) -> f64 {
        (self.profile)(rho) * rho.powi(self.n as i32 - 1)
    }

    /// r^λ I_s G(r)/c_{n,s} for r ≥ R: ∫ G(ρ)ρ^{n−1}K(ρ/r)dρ.
    fn far_moment(&self, r: f64) -> f64 {
        let (n, lambda, big) = (self.n, self.lambda, self.support);
        adaptive(|p| self.density(p) * sphere_kernel(n, lambda, p / r), 0.0, big, 0.0, self.rel_tol).value
    }

    /// I_s G(r) for any r ≥ 0.
    pub fn at(&self, r: f64) -> f64 {
        let c = riesz_constant(self.n, self.s);
        let (n, lambda, big) = (self.n, self.lambda, self.support);
        let tol = self.rel_tol;
        if r == 0.0 {
            let v = adaptive(|p| self.density(p) * p.powf(-lambda), 0.0, big, 0.0, tol).value;
            return c * sphere_area(n) * v;
        }
        // Exponent m flattens the (1 − t)^{s−1} endpoint singularity of K.
        let m = if self.s < 1.0 { 1.0 / self.s } else { 1.0 };
        // Below u_floor the kernel argument would round to 1; the flattened
        // integrand is constant to leading order there, so u is frozen.
        let floor = |gap: f64| (GAP_FLOOR / gap).min(1.0).powf(1.0 / m);
        let inner = if r <= big {
            let u_floor = floor(1.0);
            adaptive(
                |u| {
                    let u = u.max(u_floor);
                    let um = u.powf(m);
                    let rho = r * (1.0 - um);
                    let jac = r * m * u.powf(m - 1.0);
                    self.density(rho) * sphere_kernel(n, lambda, rho / r) * jac
                },
                0.0,
                1.0,
                0.0,
                tol,
            )
            .value
        } else {
            return c * r.powf(-lambda) * self.far_moment(r);
        };
        let outer = if r < big {
            let span = big - r;
            let u_floor = floor(span / big);
            adaptive(
                |u| {
                    let u = u.max(u_floor);
                    let rho = r + span * u.powf(m);
                    let jac = span * m * u.powf(m - 1.0);
                    self.density(rho) * rho.powf(-lambda) * sphere_kernel(n, lambda, r / rho) * jac
                },
                0.0,
                1.0,
                0.0,
                tol,
            )
            .value
        } else {
            0.0
        };
        c * (r.powf(-lambda) * inner + outer)
    }

    /// ω_{n−1} ∫_R^∞ |I_s G(r)|² r^{2γ+n−1} dr, by the substitution r = R/τ.
    pub fn exterior_weighted_square(&self, gamma: f64) -> f64 {
        let big = self.support;
        let e = 2.0 * gamma + self.n as f64 - 1.0;
        let v = adaptive(
            |tau| {
                if tau == 0.0 {
                    return 0.0;
                }
                // r^{e/2−λ}/τ in log form keeps the product finite as τ → 0.
                let r = big / tau;
                let scale = ((e / 2.0 - self.lambda) * r.ln() + 0.5 * big.ln() - tau.ln()).exp();
                let i = riesz_constant(self.n, self.s) * self.far_moment(r) * scale;
                i * i
            },
            0.0,
            1.0,
            0.0,
            1e-8,
        );
        sphere_area(self.n) * v.value
    }
}
