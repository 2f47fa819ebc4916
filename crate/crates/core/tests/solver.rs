use radnls::diagnostics::mass;
use radnls::solver::{duhamel_residual, evolve, SolverConfig};
use radnls::{build_grid, GridScheme, RadialField};

fn data() -> RadialField {
    let g = build_grid(3, 20.0, 512, GridScheme::BesselZeros).unwrap();
    RadialField::from_real_fn(g, |r| 2.0 * (-r * r).exp())
}

fn run(u0: &RadialField, dt: f64, t_end: f64) -> RadialField {
    let cfg = SolverConfig { dt, t_end, record_stride: usize::MAX, ..SolverConfig::default() };
    evolve(u0, &cfg).unwrap().states().last().unwrap().clone()
}

#[test]
fn strang_splitting_is_second_order() {
    let u0 = data();
    let dt = 1e-3;
    let t_end = 0.05;
    let reference = run(&u0, dt / 8.0, t_end);
    let coarse = run(&u0, dt, t_end).sub(&reference).unwrap().l2_norm();
    let fine = run(&u0, dt / 2.0, t_end).sub(&reference).unwrap().l2_norm();
    let order = (coarse / fine).log2();
    assert!((1.8..=2.2).contains(&order), "order {order} ({coarse:e}, {fine:e})");
}

#[test]
fn time_reversal_returns_the_data() {
    let u0 = data();
    let cfg = SolverConfig { t_end: 0.2, ..SolverConfig::default() };
    let forward = evolve(&u0, &cfg).unwrap();
    let one_way = duhamel_residual(&forward, 0.0, 0.2).unwrap();
    let back = run(&forward.states().last().unwrap().map(|_, v| v.conj()), cfg.dt, cfg.t_end).map(|_, v| v.conj());
    let err = back.sub(&u0).unwrap().l2_norm() / u0.l2_norm();
    assert!(err <= 10.0 * one_way, "{err:e} vs one-way residual {one_way:e}");
}

#[test]
fn mass_drift_does_not_accumulate() {
    let u0 = data();
    let cfg = SolverConfig { t_end: 0.4, record_stride: 50, ..SolverConfig::default() };
    let traj = evolve(&u0, &cfg).unwrap();
    let m0 = mass(&u0);
    let drift: Vec<f64> = traj.states().iter().map(|s| (mass(s) - m0).abs() / m0).collect();
    assert!(drift.iter().all(|d| *d < 1e-10), "{drift:?}");
}
