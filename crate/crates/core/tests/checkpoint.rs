use radnls::checkpoint::{load, save};
use radnls::diagnostics::mass;
use radnls::solver::{evolve, SolverConfig};
use radnls::{build_grid, GridScheme, RadialField};

#[test]
fn saved_trajectories_reload_with_identical_diagnostics() {
    let g = build_grid(4, 15.0, 128, GridScheme::BesselZeros).unwrap();
    let u0 = RadialField::from_real_fn(g, |r| (-r * r).exp());
    let traj = evolve(&u0, &SolverConfig { t_end: 0.02, ..SolverConfig::default() }).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.ckpt");
    save(&traj, &path).unwrap();
    let back = load(&path).unwrap();
    assert_eq!(back.grid().spec(), traj.grid().spec());
    for (a, b) in back.states().iter().zip(traj.states()) {
        assert_eq!(mass(a), mass(b));
    }
}
