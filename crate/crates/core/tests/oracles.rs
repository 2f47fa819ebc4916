//! Reference values computed by scripts/oracles.py (mpmath, 30 digits).

use std::f64::consts::FRAC_1_SQRT_2;

use radnls::diagnostics::{concentration_profile, energy, frequency_scale, mass, s_norm};
use radnls::lab::{
    check_bilinear, check_hls, check_nonlinear_estimates, check_radial_sobolev, BilinearParams, HlsParams, LogGrid,
    NonlinearVariant, Profile, Regime, SobolevParams,
};
use radnls::morawetz::morawetz_functional;
use radnls::solver::Trajectory;
use radnls::{build_grid, Complex64, GridScheme, RadialField};

const EPS: f64 = 0.01;

fn gaussian(a: f64) -> RadialField {
    let g = build_grid(3, 20.0, 512, GridScheme::BesselZeros).unwrap();
    RadialField::from_real_fn(g, move |r| (-a * r * r).exp())
}

/// |∇|^σ of a Gaussian has an algebraic tail; the box must be wider.
fn wide_gaussian(a: f64) -> RadialField {
    let g = build_grid(3, 40.0, 1024, GridScheme::BesselZeros).unwrap();
    RadialField::from_real_fn(g, move |r| (-a * r * r).exp())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn gaussian_mass() {
    let f = gaussian(1.0).scale(Complex64::new(2.0, 0.0));
    let m = mass(&f);
    assert!(rel(m, 7.8748049728612099) < 1e-6, "{m}");
}

#[test]
fn gaussian_kinetic_energy() {
    let k = energy(&gaussian(0.5)).kinetic;
    assert!(rel(k, 4.1762459976237809) < 1e-6, "{k}");
}

#[test]
fn gaussian_median_frequency() {
    let rho = frequency_scale(&wide_gaussian(0.5)).unwrap();
    assert!(rel(rho, 1.0876520317581672) < 1e-6, "{rho}");
}

#[test]
fn gaussian_concentration_constant() {
    let u = gaussian(0.5);
    let traj = Trajectory::from_states(vec![0.0], vec![u], "gaussian").unwrap();
    let c = concentration_profile(&traj, &[0.5]).unwrap().c_of_eta[0];
    assert!(rel(c, 1.9602916408538535) < 1e-3, "{c}");
}

#[test]
fn chirped_gaussian_momentum() {
    let g = build_grid(3, 20.0, 512, GridScheme::BesselZeros).unwrap();
    let f = RadialField::from_fn(g, |r| Complex64::from_polar((-r * r / 2.0).exp(), r * r / 2.0));
    let m = morawetz_functional(&f, EPS);
    assert!(m > 0.0);
    assert!(rel(m, 9.4819609576298413) < 1e-6, "{m}");
}

#[test]
fn single_slice_s_norm() {
    let traj = Trajectory::from_states(vec![0.0], vec![wide_gaussian(0.5)], "gaussian").unwrap();
    let s = s_norm(&traj, EPS).unwrap();
    assert!(rel(s.weighted, 2.8115678726570584) < 1e-5, "{}", s.weighted);
    assert!(rel(s.total, 5.1712983650717553) < 1e-5, "{}", s.total);
}

#[test]
fn bilinear_gaussian_pair() {
    let f = Profile::gaussian(1.0, FRAC_1_SQRT_2);
    let params = BilinearParams::new(3, 2.0, 2.0, -1.0, -2.0, Regime::XSmall);
    let r = check_bilinear(&[(f.clone(), f)], &params, &LogGrid::standard()).unwrap();
    assert!(rel(r.sup_ratio, 10.410322276548584) < 1e-6, "{}", r.sup_ratio);
}

#[test]
fn hls_gaussian_pair() {
    let f = Profile::gaussian(1.0, FRAC_1_SQRT_2);
    let params = HlsParams { n: 3, p: 1.5, q: 1.5, s: 1.0, alpha: 0.0, beta: 0.0 };
    let r = check_hls(&[(f.clone(), f)], &params, &LogGrid::standard()).unwrap();
    assert!(rel(r.sup_ratio, 7.0685834705770348) < 1e-4, "{}", r.sup_ratio);
}

#[test]
fn first_sobolev_embedding_on_a_gaussian() {
    let r = check_radial_sobolev(&[wide_gaussian(0.5)], &SobolevParams::first_embedding(3, EPS)).unwrap();
    let s = r.samples[0];
    assert!(rel(s.lhs, 1.0115961189854815) < 1e-6, "{}", s.lhs);
    assert!(rel(s.rhs, 2.8115678726570584) < 1e-5, "{}", s.rhs);
}

#[test]
fn basic_nonlinear_estimate_on_a_gaussian() {
    let traj = Trajectory::from_states(vec![0.0], vec![gaussian(0.5)], "gaussian").unwrap();
    let r = check_nonlinear_estimates(&traj, &traj, NonlinearVariant::Basic, EPS).unwrap();
    let s = r.samples[0];
    assert!(rel(s.lhs, 1.0562956086711699) < 1e-5, "{}", s.lhs);
    assert!(rel(s.rhs, 16.246112953230335) < 1e-5, "{}", s.rhs);
}
