//! The weight a(x) = ⟨x⟩ − ε⟨x⟩^{1−ε}, its derivatives, the Morawetz
//! functional M_a = 2∫∇a·Im(φ̄∇φ), the virial production terms and their
//! verification along trajectories.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagnostics::check_epsilon;
use crate::error::{Error, Result};
use crate::field::{integrate_real, RadialField};
use crate::report::{Check, DiagnosticsReport, Table};
use crate::solver::{nonlinearity, Trajectory};
use crate::spectral::gradient_radial;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightEvaluation {
    pub r: f64,
    pub a: f64,
    pub a_prime: f64,
    pub a_double_prime: f64,
    pub delta_a: f64,
    pub neg_bilap_a: f64,
    /// A(r), the δ_jk coefficient of a_jk and its eigenvalue on vectors orthogonal to x.
    pub tangential_eigenvalue: f64,
    /// B(r), the x_j x_k coefficient of a_jk.
    pub radial_coefficient: f64,
}

/// Closed-form derivatives of a at radius r (⟨r⟩ = (1 + r²)^{1/2}).
pub fn weight_eval(r: f64, eps: f64, n: usize) -> WeightEvaluation {
    let nf = n as f64;
    let x = (1.0 + r * r).sqrt();
    let e1 = eps * (1.0 - eps);
    let e2 = e1 * (1.0 + eps);
    let a = x - eps * x.powf(1.0 - eps);
    let a_prime = r / x - e1 * r * x.powf(-1.0 - eps);
    let big_a = 1.0 / x - e1 * x.powf(-1.0 - eps);
    let big_b = -x.powi(-3) + e2 * x.powf(-3.0 - eps);
    let neg_bilap_a = (nf - 1.0) * (nf - 3.0) * x.powi(-3) - e2 * (nf - 1.0 - eps) * (nf - 3.0 - eps) * x.powf(-3.0 - eps)
        + 6.0 * (nf - 3.0) * x.powi(-5)
        - 2.0 * e2 * (3.0 + eps) * (nf - 3.0 - eps) * x.powf(-5.0 - eps)
        + 15.0 * x.powi(-7)
        - e2 * (3.0 + eps) * (5.0 + eps) * x.powf(-7.0 - eps);
    WeightEvaluation {
        r,
        a,
        a_prime,
        a_double_prime: big_a + big_b * r * r,
        delta_a: nf * big_a + big_b * r * r,
        neg_bilap_a,
        tangential_eigenvalue: big_a,
        radial_coefficient: big_b,
    }
}

/// The three normalized lower-bound quantities at one radius:
/// (−ΔΔa)⟨r⟩^{3+ε}, min(a″, A)⟨r⟩^{1+ε}, Δa⟨r⟩^{1+ε}.
pub fn normalized_bounds(r: f64, eps: f64, n: usize) -> [f64; 3] {
    let w = weight_eval(r, eps, n);
    let x = (1.0 + r * r).sqrt();
    [
        w.neg_bilap_a * x.powf(3.0 + eps),
        w.a_double_prime.min(w.tangential_eigenvalue) * x.powf(1.0 + eps),
        w.delta_a * x.powf(1.0 + eps),
    ]
}

pub const BOUND_NAMES: [&str; 3] = ["neg_bilap_a", "hessian_min", "delta_a"];

/// Values at or below this floor count as violating a lower bound.
pub const POSITIVITY_FLOOR: f64 = 0.0;

/// log-spaced radii 10^{lo} … 10^{hi}.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| 10f64.powf(lo + (hi - lo) * i as f64 / (count - 1).max(1) as f64)).collect()
}

/// Checks the three pointwise lower bounds on `r_grid`, reporting the
/// minima and the first violating radius of each quantity.
pub fn verify_pointwise_bounds(eps: f64, n: usize, r_grid: &[f64]) -> Result<DiagnosticsReport> {
    check_epsilon(eps)?;
    if n < 3 {
        return Err(Error::Dimension(n));
    }
    let mut table = Table::new("pointwise_bounds", &["n", "eps", "r", "neg_bilap_a_norm", "hessian_min_norm", "delta_a_norm"]);
    let mut minima = [(f64::INFINITY, 0.0); 3];
    let mut first_violation: [Option<f64>; 3] = [None; 3];
    for &r in r_grid {
        let v = normalized_bounds(r, eps, n);
        table.push(vec![n.into(), eps.into(), r.into(), v[0].into(), v[1].into(), v[2].into()]);
        for k in 0..3 {
            if v[k] < minima[k].0 {
                minima[k] = (v[k], r);
            }
            if v[k] <= POSITIVITY_FLOOR && first_violation[k].is_none() {
                first_violation[k] = Some(r);
            }
        }
    }
    let mut report = DiagnosticsReport::new("verify-weights");
    report.tables.push(table);
    for k in 0..3 {
        let detail = match first_violation[k] {
            Some(r) => format!("n={n} eps={eps}: first violation at r={r:e}; minimum at r={:e}", minima[k].1),
            None => format!("n={n} eps={eps}: minimum at r={:e}", minima[k].1),
        };
        report.checks.push(Check::greater_than(BOUND_NAMES[k], minima[k].0, POSITIVITY_FLOOR, detail));
    }
    Ok(report)
}

/// M_a(f) = 2∫ a′(r) Im(f̄ ∂_r f) dx.
pub fn morawetz_functional(f: &RadialField, eps: f64) -> f64 {
    let g = f.grid();
    let n = g.dimension();
    let du = gradient_radial(f);
    let samples = g.nodes().iter().zip(f.values()).zip(du.values()).map(|((&r, u), d)| {
        let ap = weight_eval(r, eps, n).a_prime;
        2.0 * ap * (u.conj() * d).im
    });
    integrate_real(g, samples)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductionBreakdown {
    /// ∫(−ΔΔa)|φ|².
    pub bilap_term: f64,
    /// 4∫a″|∂_rφ|².
    pub hessian_term: f64,
    /// (4/(n+2))∫Δa|φ|^{2(n+2)/n}.
    pub nonlinear_term: f64,
    /// 2∫∇a·{G, φ}_p, zero without forcing.
    pub forcing_term: f64,
    /// ∫|G||∇φ| + ∫|G||φ|/⟨x⟩, zero without forcing.
    pub forcing_majorant: f64,
    pub total: f64,
}

/// ∂_t M_a split into its terms for a field solving iφ_t + Δφ = F(φ) + G.
pub fn morawetz_production(f: &RadialField, eps: f64, forcing: Option<&RadialField>) -> Result<ProductionBreakdown> {
    let g = f.grid();
    if let Some(gf) = forcing {
        if !gf.grid().same_as(g) {
            return Err(Error::GridMismatch);
        }
    }
    let n = g.dimension();
    let nf = n as f64;
    let p = (nf + 2.0) / nf;
    let du = gradient_radial(f);
    let weights: Vec<WeightEvaluation> = g.nodes().iter().map(|&r| weight_eval(r, eps, n)).collect();
    let u = f.values();
    let d = du.values();
    let bilap_term = integrate_real(g, weights.iter().zip(u).map(|(w, u)| w.neg_bilap_a * u.norm_sqr()));
    let hessian_term = 4.0 * integrate_real(g, weights.iter().zip(d).map(|(w, d)| w.a_double_prime * d.norm_sqr()));
    let nonlinear_term =
        4.0 / (nf + 2.0) * integrate_real(g, weights.iter().zip(u).map(|(w, u)| w.delta_a * u.norm_sqr().powf(p)));
    let (forcing_term, forcing_majorant) = match forcing {
        None => (0.0, 0.0),
        Some(gf) => {
            // {G, φ}_p = 2Re(G∇φ̄) − ∇Re(φḠ); the gradient part is moved onto a.
            let gv = gf.values();
            let first = 4.0
                * integrate_real(g, weights.iter().zip(gv).zip(d).map(|((w, gv), d)| w.a_prime * (gv * d.conj()).re));
            let second =
                2.0 * integrate_real(g, weights.iter().zip(gv).zip(u).map(|((w, gv), u)| w.delta_a * (u * gv.conj()).re));
            let majorant = integrate_real(
                g,
                g.nodes().iter().zip(gv).zip(u.iter().zip(d)).map(|((&r, gv), (u, d))| {
                    gv.norm() * (d.norm() + u.norm() / (1.0 + r * r).sqrt())
                }),
            );
            (first + second, majorant)
        }
    };
    Ok(ProductionBreakdown {
        bilap_term,
        hessian_term,
        nonlinear_term,
        forcing_term,
        forcing_majorant,
        total: bilap_term + hessian_term + nonlinear_term + forcing_term,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BracketComparison {
    /// 2∫a′{F(φ), φ}_p with the bracket formed pointwise.
    pub bracket: f64,
    /// (4/(n+2))∫Δa|φ|^{2(n+2)/n}.
    pub identity: f64,
    pub relative_difference: f64,
}

/// Compares the two sides of 2∫∇a·{F(φ),φ}_p = (4/(n+2))∫Δa|φ|^{2(n+2)/n}.
/// The left side differentiates F(φ) spectrally and integrates the bracket;
/// the right side needs no derivative of φ at all.
pub fn bracket_identity(f: &RadialField, eps: f64) -> BracketComparison {
    let g = f.grid();
    let n = g.dimension();
    let nf = n as f64;
    let fu = nonlinearity(f);
    let du = gradient_radial(f);
    let dfu = gradient_radial(&fu);
    let bracket = 2.0
        * integrate_real(
            g,
            g.nodes().iter().enumerate().map(|(j, &r)| {
                let ap = weight_eval(r, eps, n).a_prime;
                let b = fu.values()[j] * du.values()[j].conj() - f.values()[j] * dfu.values()[j].conj();
                ap * b.re
            }),
        );
    let p = (nf + 2.0) / nf;
    let identity = 4.0 / (nf + 2.0)
        * integrate_real(
            g,
            g.nodes().iter().zip(f.values()).map(|(&r, u)| weight_eval(r, eps, n).delta_a * u.norm_sqr().powf(p)),
        );
    let scale = bracket.abs().max(identity.abs());
    BracketComparison {
        bracket,
        identity,
        relative_difference: if scale == 0.0 { 0.0 } else { (bracket - identity).abs() / scale },
    }
}

/// Tolerance of the centered-difference check of ∂_t M_a.
pub const FD_TOLERANCE: f64 = 0.01;
/// Above this residual the recording stride is declared too coarse.
pub const COARSE_STRIDE_RESIDUAL: f64 = 0.05;
/// Slack for |M_a| ≤ 2‖φ‖₂‖∇φ‖₂.
pub const CAUCHY_SCHWARZ_SLACK: f64 = 1e-10;

/// Morawetz verification along a trajectory with G = 0.
pub fn verify_monotonicity(traj: &Trajectory, eps: f64) -> Result<DiagnosticsReport> {
    verify_monotonicity_forced(traj, None, eps)
}

/// Morawetz verification for iφ_t + Δφ = F(φ) + G with G sampled at the same times.
///
/// Per time: M_a, the production terms, the centered difference of M_a and
/// its residual against the production total. Overall: the time-integrated
/// left side ∫∫(|φ|²/⟨x⟩^{3+ε} + |φ|^{2(n+2)/n}/⟨x⟩ + |∇φ|²/⟨x⟩^{1+ε}),
/// the right side sup_t‖φ‖₂‖∇φ‖₂, and their ratio.
pub fn verify_monotonicity_forced(traj: &Trajectory, forcing: Option<&Trajectory>, eps: f64) -> Result<DiagnosticsReport> {
    check_epsilon(eps)?;
    if let Some(gt) = forcing {
        if gt.len() != traj.len() || gt.times().iter().zip(traj.times()).any(|(a, b)| (a - b).abs() > 1e-12 * b.abs().max(1.0)) {
            return Err(Error::InvalidArgument("forcing must be recorded at the trajectory's times".into()));
        }
    }
    let g = traj.grid();
    let n = g.dimension();
    let nf = n as f64;
    let p = (nf + 2.0) / nf;
    struct Slice {
        m: f64,
        prod: ProductionBreakdown,
        lhs_density: f64,
        l2: f64,
        grad: f64,
    }
    let slices = (0..traj.len())
        .into_par_iter()
        .map(|i| -> Result<Slice> {
            let f = &traj.states()[i];
            let gf = forcing.map(|t| &t.states()[i]);
            let prod = morawetz_production(f, eps, gf)?;
            let du = gradient_radial(f);
            let lhs_density = integrate_real(
                g,
                g.nodes().iter().zip(f.values()).zip(du.values()).map(|((&r, u), d)| {
                    let x = (1.0 + r * r).sqrt();
                    u.norm_sqr() * x.powf(-3.0 - eps) + u.norm_sqr().powf(p) / x + d.norm_sqr() * x.powf(-1.0 - eps)
                }),
            );
            Ok(Slice {
                m: morawetz_functional(f, eps),
                prod,
                lhs_density,
                l2: f.l2_norm(),
                grad: du.l2_norm(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let times = traj.times();
    let mut table = Table::new(
        "morawetz",
        &["t", "M_a", "bilap_term", "hessian_term", "nonlinear_term", "forcing_term", "forcing_majorant", "total", "fd_derivative", "fd_residual"],
    );
    let mut worst_fd = 0.0f64;
    let mut worst_cs = 0.0f64;
    for i in 0..slices.len() {
        let s = &slices[i];
        let (fd, res) = if i > 0 && i + 1 < slices.len() {
            let fd = (slices[i + 1].m - slices[i - 1].m) / (times[i + 1] - times[i - 1]);
            let scale = s.prod.total.abs();
            let res = if scale == 0.0 { (fd - s.prod.total).abs() } else { (fd - s.prod.total).abs() / scale };
            worst_fd = worst_fd.max(res);
            (fd, res)
        } else {
            (f64::NAN, f64::NAN)
        };
        let cs_bound = 2.0 * s.l2 * s.grad;
        if cs_bound > 0.0 {
            worst_cs = worst_cs.max(s.m.abs() / cs_bound);
        } else if s.m != 0.0 {
            worst_cs = f64::INFINITY;
        }
        table.push(vec![
            times[i].into(),
            s.m.into(),
            s.prod.bilap_term.into(),
            s.prod.hessian_term.into(),
            s.prod.nonlinear_term.into(),
            s.prod.forcing_term.into(),
            s.prod.forcing_majorant.into(),
            s.prod.total.into(),
            fd.into(),
            res.into(),
        ]);
    }
    let w = traj.time_weights();
    let lhs: f64 = w.iter().zip(&slices).map(|(w, s)| w * s.lhs_density).sum();
    let rhs = slices.iter().map(|s| s.l2 * s.grad).fold(0.0, f64::max);
    let forcing_total: f64 = w.iter().zip(&slices).map(|(w, s)| w * s.prod.forcing_majorant).sum();
    let ratio = if rhs > 0.0 { lhs / rhs } else { 0.0 };
    let mut report = DiagnosticsReport::new("verify-morawetz");
    report.tables.push(table);
    if slices.len() >= 3 {
        report.checks.push(Check::at_most(
            "fd_vs_production",
            worst_fd,
            FD_TOLERANCE,
            "max relative gap between the centered difference of M_a and the production formula at interior times",
        ));
        if worst_fd > COARSE_STRIDE_RESIDUAL {
            report.checks.push(Check::at_most(
                "stride_resolution",
                worst_fd,
                COARSE_STRIDE_RESIDUAL,
                "recording stride too coarse for the finite-difference check",
            ));
        }
    } else {
        report.checks.push(Check::info("fd_vs_production", 0.0, "fewer than three recorded times; no interior point"));
    }
    report.checks.push(Check::at_most(
        "functional_bound",
        worst_cs,
        1.0 + CAUCHY_SCHWARZ_SLACK,
        "max over t of |M_a| / (2‖φ‖₂‖∇φ‖₂)",
    ));
    report.checks.push(Check::info("spacetime_lhs", lhs, "time-integrated three-term weighted density"));
    report.checks.push(Check::info("rhs", rhs, "sup_t ‖φ‖₂‖∇φ‖₂"));
    report.checks.push(Check::info("morawetz_ratio", ratio, "recorded constant C with LHS ≤ C·RHS"));
    if forcing.is_some() {
        report.checks.push(Check::info("forcing_majorant", forcing_total, "∫∫|G|(|∇φ| + |φ|/⟨x⟩)"));
    }
    Ok(report)
}

/// Pass/fail chart of the three pointwise bounds over (n, ε) pairs.
pub fn positivity_frontier(dims: &[usize], eps_list: &[f64], r_grid: &[f64]) -> Result<Table> {
    let mut table = Table::new("frontier", &["n", "eps", "neg_bilap_a_min", "hessian_min", "delta_a_min", "pass"]);
    for &n in dims {
        for &eps in eps_list {
            let rep = verify_pointwise_bounds(eps, n, r_grid)?;
            let mins: Vec<f64> = BOUND_NAMES.iter().map(|k| rep.check(k).expect("present").value).collect();
            table.push(vec![
                n.into(),
                eps.into(),
                mins[0].into(),
                mins[1].into(),
                mins[2].into(),
                (if rep.passed() { "PASS" } else { "FAIL" }).into(),
            ]);
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, GridScheme};

    fn fd(f: impl Fn(f64) -> f64, r: f64, h: f64) -> (f64, f64) {
        let d1 = (-f(r + 2.0 * h) + 8.0 * f(r + h) - 8.0 * f(r - h) + f(r - 2.0 * h)) / (12.0 * h);
        let d2 = (-f(r + 2.0 * h) + 16.0 * f(r + h) - 30.0 * f(r) + 16.0 * f(r - h) - f(r - 2.0 * h)) / (12.0 * h * h);
        (d1, d2)
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for n in [3, 5] {
            for eps in [0.01, 0.3] {
                for r in log_grid(-3.0, 3.0, 25) {
                    let w = weight_eval(r, eps, n);
                    let h = 1e-3 * r.max(1e-1);
                    let (d1, d2) = fd(|s| weight_eval(s, eps, n).a, r, h);
                    assert!((d1 - w.a_prime).abs() <= 1e-6 * w.a_prime.abs().max(1e-3), "a' at r={r}");
                    assert!((d2 - w.a_double_prime).abs() <= 1e-6 * w.a_double_prime.abs().max(1e-3), "a'' at r={r}");
                    let lap = w.a_double_prime + (n as f64 - 1.0) * w.a_prime / r;
                    assert!((lap - w.delta_a).abs() <= 1e-8 * w.delta_a.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn bilaplacian_matches_radial_differences() {
        // −ΔΔa = −(Δa)″ − (n−1)(Δa)′/r, differenced from the closed-form Δa.
        for n in [3, 4, 6] {
            for eps in [0.01, 0.2] {
                for r in [0.05f64, 0.5, 1.0, 3.0, 20.0] {
                    let h = 1e-3 * r.max(0.2);
                    let (d1, d2) = fd(|s| weight_eval(s, eps, n).delta_a, r, h);
                    let want = -d2 - (n as f64 - 1.0) * d1 / r;
                    let got = weight_eval(r, eps, n).neg_bilap_a;
                    assert!((want - got).abs() <= 1e-4 * got.abs(), "n={n} eps={eps} r={r}: {want} vs {got}");
                }
            }
        }
    }

    #[test]
    fn origin_values() {
        for n in 3..=8 {
            let eps = 0.05;
            let w = weight_eval(0.0, eps, n);
            assert!((w.delta_a - n as f64 * (1.0 - eps * (1.0 - eps))).abs() < 1e-14);
        }
        let w = weight_eval(0.0, 1e-12, 3);
        assert!((w.neg_bilap_a - 15.0).abs() < 1e-9);
    }

    #[test]
    fn large_radius_asymptotics() {
        // Corrections decay only like ε r^{−ε}.
        let eps = 0.01;
        let w = weight_eval(1e6, eps, 4);
        assert!((w.a / 1e6 - 1.0).abs() < eps);
        assert!((w.delta_a * 1e6 - 3.0).abs() < 4.0 * eps);
        let w = weight_eval(1e12, 1e-3, 4);
        assert!((w.a / 1e12 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn real_fields_carry_no_momentum() {
        let g = build_grid(3, 12.0, 128, GridScheme::BesselZeros).unwrap();
        let f = RadialField::from_real_fn(g, |r| (-r * r).exp());
        assert!(morawetz_functional(&f, 0.01).abs() < 1e-14);
    }

    #[test]
    fn zero_field_production_vanishes() {
        let g = build_grid(3, 12.0, 64, GridScheme::BesselZeros).unwrap();
        let z = RadialField::zeros(g);
        let p = morawetz_production(&z, 0.01, Some(&z)).unwrap();
        assert_eq!(p.total, 0.0);
        assert_eq!(p.forcing_majorant, 0.0);
    }
}
