//! The subcommands. Each returns an [`Outcome`]; FAIL checks are results,
//! not errors.

use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use radnls::checkpoint;
use radnls::diagnostics::{
    commutator, concentration_profile, energy, frequency_scale, high_freq_s_decay, mass, q_functional, s_norm,
};
use radnls::grid::{GridSpec, RadialGrid};
use radnls::lab::{
    check_bilinear, check_hls, check_nonlinear_estimates, check_radial_sobolev, check_weighted_strichartz,
    random_radial_family, strichartz_saturation, top_decade_slope, uncertainty_sweep, BilinearParams, FamilyKind,
    LogGrid, NonlinearVariant, ProbeMode, Profile, RatioReport, SobolevParams,
};
use radnls::morawetz::{log_grid, verify_monotonicity, verify_monotonicity_forced, verify_pointwise_bounds, BOUND_NAMES};
use radnls::report::{Cell, Check, DiagnosticsReport, Table};
use radnls::solver::{duhamel_residual, evolve_described, Trajectory};
use radnls::spectral::{apply_multiplier, free_propagate, MultiplierSymbol};
use radnls::{RadialField, Result};
use rayon::prelude::*;

use crate::config::Config;
use crate::output::Outcome;

pub const CHECKPOINT_FILE: &str = "trajectory.ckpt";

struct Clock {
    last: Instant,
    laps: Vec<(String, f64)>,
}

impl Clock {
    fn start() -> Self {
        Clock { last: Instant::now(), laps: Vec::new() }
    }

    fn lap(&mut self, phase: &str) {
        self.laps.push((phase.to_string(), self.last.elapsed().as_secs_f64()));
        self.last = Instant::now();
    }

    fn finish(self, mut outcome: Outcome) -> Outcome {
        outcome.timings.extend(self.laps);
        outcome
    }
}

fn run_solver(cfg: &Config, grid: &Arc<RadialGrid>) -> Result<Trajectory> {
    let u0 = cfg.data.on_grid(grid)?;
    evolve_described(&u0, &cfg.solver, &cfg.data.describe())
}

fn norms_table(traj: &Trajectory, with_scale: bool) -> Result<Table> {
    let mut header = vec!["t", "mass", "kinetic", "potential", "energy"];
    if with_scale {
        header.push("frequency_scale");
    }
    let mut t = Table::new("norms", &header);
    for (time, s) in traj.times().iter().zip(traj.states()) {
        let e = energy(s);
        let mut row: Vec<Cell> = vec![(*time).into(), mass(s).into(), e.kinetic.into(), e.potential.into(), e.total.into()];
        if with_scale {
            row.push(frequency_scale(s)?.into());
        }
        t.push(row);
    }
    Ok(t)
}

fn initial_mass(traj: &Trajectory) -> Check {
    Check::info("mass_initial", mass(&traj.states()[0]), format!("M(t = {})", traj.times()[0]))
}

pub fn simulate(cfg: &Config, dir: &Path) -> Result<Outcome> {
    let mut out = Outcome::new("simulate");
    let mut clock = Clock::start();
    let grid = cfg.build_grid()?;
    let traj = run_solver(cfg, &grid)?;
    clock.lap("evolve");
    checkpoint::save(&traj, &dir.join(CHECKPOINT_FILE))?;
    out.artifacts.push(CHECKPOINT_FILE.into());
    let p = traj.provenance();
    let v = &cfg.verify;
    let rep = &mut out.report;
    rep.tables.push(norms_table(&traj, false)?);
    rep.checks.push(initial_mass(&traj));
    rep.checks.push(Check::at_most("mass_drift", p.mass_drift, v.mass_tolerance, "max_t |M(t) − M(0)| / M(0)"));
    rep.checks.push(Check::at_most("energy_drift", p.energy_drift, v.energy_tolerance, "max_t |E(t) − E(0)| / E(0)"));
    let times = traj.times();
    if times.len() >= 2 {
        let (t0, t1) = (times[0], times[times.len() - 1]);
        let res = duhamel_residual(&traj, t0, t1)?;
        rep.checks.push(Check::at_most("duhamel_residual", res, v.duhamel_tolerance, format!("relative Duhamel residual over [{t0}, {t1}]")));
    }
    out.notes.push(format!("{} steps of {:?} splitting, {} recorded states", p.steps, cfg.solver.scheme, traj.len()));
    clock.lap("report");
    Ok(clock.finish(out))
}

pub fn diagnose(cfg: &Config, checkpoint_path: &Path) -> Result<Outcome> {
    let mut out = Outcome::new("diagnose");
    let mut clock = Clock::start();
    let traj = checkpoint::load(checkpoint_path)?;
    clock.lap("load");
    let eps = cfg.epsilon;
    let n_list = &cfg.verify.n_list;
    let rep = &mut out.report;
    rep.tables.push(norms_table(&traj, true)?);
    rep.checks.push(initial_mass(&traj));
    let s = s_norm(&traj, eps)?;
    rep.checks.push(Check::info("s_norm", s.total, format!("weighted part {:.6e}, mass part {:.6e}", s.weighted, s.mass_sup)));

    let q = n_list.par_iter().map(|&n| q_functional(&traj, n, eps)).collect::<Result<Vec<_>>>()?;
    let mut qt = Table::new("q_functional", &["N", "eps", "Q"]);
    for (n, v) in n_list.iter().zip(q) {
        qt.push(vec![(*n).into(), eps.into(), v.into()]);
    }
    rep.tables.push(qt);

    let decay = high_freq_s_decay(&traj, n_list, eps)?;
    let cols = ["s_norm_high", "mass_high_sup", "s_norm_low_scaled", "s_norm_high_weighted"];
    let mut header = vec!["N", "eps"];
    header.extend(cols);
    let mut st = Table::new("s_decay", &header);
    let columns: Vec<Vec<f64>> = cols.iter().map(|c| decay.column(c)).collect();
    for (i, n) in n_list.iter().enumerate() {
        let mut row: Vec<Cell> = vec![(*n).into(), eps.into()];
        row.extend(columns.iter().map(|c| Cell::from(c[i])));
        st.push(row);
    }
    rep.tables.push(st);
    let invalid = decay.entries.iter().filter(|e| !(e.value.is_finite() && e.value >= 0.0)).count();
    rep.checks.push(Check::at_most("s_decay_entries_invalid", invalid as f64, 0.0, "non-finite or negative norms in the S-decay table"));
    clock.lap("norms");

    let prof = concentration_profile(&traj, &cfg.verify.eta_grid)?;
    let mut ct = Table::new("concentration", &["eta", "C", "C_spatial", "C_spectral"]);
    for i in 0..prof.eta_grid.len() {
        ct.push(vec![prof.eta_grid[i].into(), prof.c_of_eta[i].into(), prof.c_spatial[i].into(), prof.c_spectral[i].into()]);
    }
    rep.tables.push(ct);
    let mut nt = Table::new("frequency_scale", &["t", "N"]);
    for (t, n) in prof.times.iter().zip(&prof.n_of_t) {
        nt.push(vec![(*t).into(), (*n).into()]);
    }
    rep.tables.push(nt);
    clock.lap("concentration");
    out.notes.push(format!("checkpoint {} holds {} states of `{}`", checkpoint_path.display(), traj.len(), traj.provenance().initial_data));
    Ok(clock.finish(out))
}

pub fn verify_weights(cfg: &Config) -> Result<Outcome> {
    let mut out = Outcome::new("verify-weights");
    let mut clock = Clock::start();
    let v = &cfg.verify;
    let r_grid = log_grid(v.weights_log_r.0, v.weights_log_r.1, v.weights_r_count);
    let mut frontier = Table::new("frontier", &["n", "eps", "neg_bilap_a_min", "hessian_min", "delta_a_min", "pass"]);
    let mut bounds: Option<Table> = None;
    for &n in &v.weights_dimensions {
        for &eps in &v.weights_epsilons {
            let mut r = verify_pointwise_bounds(eps, n, &r_grid)?;
            let mins: Vec<Cell> = BOUND_NAMES.iter().map(|k| Cell::from(r.check(k).map_or(f64::NAN, |c| c.value))).collect();
            let mut row: Vec<Cell> = vec![n.into(), eps.into()];
            row.extend(mins);
            row.push(if r.passed() { "PASS" } else { "FAIL" }.into());
            frontier.push(row);
            let table = r.tables.remove(0);
            match bounds.as_mut() {
                Some(b) => b.rows.extend(table.rows),
                None => bounds = Some(table),
            }
            out.report.merge(&format!("n{n}_eps{eps}."), r);
        }
    }
    out.report.tables.push(frontier);
    out.report.tables.extend(bounds);
    clock.lap("scan");
    Ok(clock.finish(out))
}

pub fn verify_morawetz(cfg: &Config, checkpoint_path: Option<&Path>) -> Result<Outcome> {
    let mut out = Outcome::new("verify-morawetz");
    let mut clock = Clock::start();
    let traj = match checkpoint_path {
        Some(p) => {
            out.notes.push(format!("trajectory from checkpoint {}", p.display()));
            checkpoint::load(p)?
        }
        None => run_solver(cfg, &cfg.build_grid()?)?,
    };
    clock.lap("trajectory");
    let eps = cfg.epsilon;
    out.report.merge("", verify_monotonicity(&traj, eps)?);
    let n_cut = cfg.verify.morawetz_cutoff;
    if n_cut > 0.0 {
        let lo = MultiplierSymbol::lt(n_cut);
        let low: Vec<RadialField> = traj.states().iter().map(|s| apply_multiplier(s, &lo)).collect();
        let forcing: Vec<RadialField> = traj.states().iter().map(|s| commutator(s, n_cut)).collect();
        let phi = Trajectory::from_states(traj.times().to_vec(), low, &format!("P_<{n_cut} u"))?;
        let g = Trajectory::from_states(traj.times().to_vec(), forcing, "P_<N F(u) − F(P_<N u)")?;
        out.report.merge("localized_", verify_monotonicity_forced(&phi, Some(&g), eps)?);
        out.notes.push(format!("localized check at N = {n_cut}"));
    }
    clock.lap("morawetz");
    Ok(clock.finish(out))
}

/// Worst |ratio(λ)/ratio(1) − 1| over members laid out as orbits of three.
fn orbit_residual(ratios: &[f64]) -> f64 {
    ratios.chunks(3).flat_map(|c| [(c[0] / c[1] - 1.0).abs(), (c[2] / c[1] - 1.0).abs()]).fold(0.0, f64::max)
}

fn push_ratio(rep: &mut DiagnosticsReport, r: &RatioReport, notes: &mut Vec<String>) {
    rep.tables.push(r.to_table());
    rep.checks.push(Check::info(&format!("{}_sup_ratio", r.check), r.sup_ratio, "empirical constant over the family"));
    notes.extend(r.notes.iter().map(|n| format!("{}: {n}", r.check)));
}

pub fn verify_appendix(cfg: &Config) -> Result<Outcome> {
    let mut out = Outcome::new("verify-appendix");
    let mut clock = Clock::start();
    let v = &cfg.verify;
    let n = cfg.dimension;
    let eps = cfg.epsilon;
    let runs = |s: &str| v.appendix_suites.iter().any(|x| x == s);
    let orbit = v.family_kind == FamilyKind::DilationOrbit;
    let needs_family = runs("bilinear") || runs("hls") || runs("sobolev");
    let (fields, pairs) = if needs_family {
        let grid = cfg.grid_in(n, v.appendix_grid.0, v.appendix_grid.1)?;
        let fam = random_radial_family(&grid, cfg.seed, v.family_count, v.family_kind)?;
        let profiles: Vec<Profile> = fam.profiles();
        // Orbits pair base j with base j+1 at the same dilation.
        let shift = if orbit && profiles.len() > 3 { 3 } else { 1 };
        let pairs: Vec<(Profile, Profile)> =
            (0..profiles.len()).map(|j| (profiles[j].clone(), profiles[(j + shift) % profiles.len()].clone())).collect();
        let fields: Vec<RadialField> = fam.members.into_iter().map(|m| m.field).collect();
        (fields, pairs)
    } else {
        (Vec::new(), Vec::new())
    };
    clock.lap("family");
    let log = LogGrid::standard();
    let rep = &mut out.report;
    let invariance = |rep: &mut DiagnosticsReport, r: &RatioReport, bound: f64| {
        if orbit {
            let res = orbit_residual(&r.ratios());
            rep.checks.push(Check::at_most(&format!("{}_invariance", r.check), res, bound, "max |ratio(λ)/ratio(1) − 1| over dilation orbits"));
        }
    };
    if runs("bilinear") {
        let [p, q, a, b] = v.bilinear;
        let r = check_bilinear(&pairs, &BilinearParams::new(n, p, q, a, b, v.bilinear_regime), &log)?;
        push_ratio(rep, &r, &mut out.notes);
        invariance(rep, &r, v.bilinear_invariance);
        clock.lap("bilinear");
    }
    if runs("hls") {
        let r = check_hls(&pairs, &v.hls, &log)?;
        push_ratio(rep, &r, &mut out.notes);
        invariance(rep, &r, v.hls_invariance);
        clock.lap("hls");
    }
    if runs("sobolev") {
        let first = check_radial_sobolev(&fields, &SobolevParams::first_embedding(n, eps))?;
        push_ratio(rep, &first, &mut out.notes);
        invariance(rep, &first, v.sobolev_invariance);
        let mut dual = check_radial_sobolev(&fields, &SobolevParams::dual_embedding(n, eps))?;
        dual.check = "radial_sobolev_dual".into();
        push_ratio(rep, &dual, &mut out.notes);
        clock.lap("sobolev");
    }
    if runs("uncertainty") {
        let spec = GridSpec { dimension: n, max_radius: v.uncertainty_grid.0, node_count: v.uncertainty_grid.1, scheme: cfg.grid.scheme };
        let probe = Profile::gaussian(1.0, 1.0);
        let (alpha, p) = v.uncertainty;
        let ns = &v.uncertainty_n_list;
        let matched = uncertainty_sweep(&probe, spec, alpha, p, ns, ProbeMode::ScaleMatched)?;
        let fixed = uncertainty_sweep(&probe, spec, alpha, p, ns, ProbeMode::Fixed)?;
        for r in [&matched, &fixed] {
            let mut t = r.to_table();
            t.header.insert(1, "N".into());
            for (row, n_cut) in t.rows.iter_mut().zip(ns) {
                row.insert(1, (*n_cut).into());
            }
            if let Some(last) = t.rows.last_mut() {
                last.insert(1, "".into());
            }
            rep.tables.push(t);
        }
        let r = matched.ratios();
        let spread = r.iter().copied().fold(0.0, f64::max) / r.iter().copied().fold(f64::INFINITY, f64::min);
        rep.checks.push(Check::at_most("uncertainty_spread", spread, v.uncertainty_spread, "max/min of the scale-matched ratios over N"));
        if ns.len() >= 2 {
            let slope = top_decade_slope(ns, &r).abs();
            rep.checks.push(Check::at_most("uncertainty_slope", slope, v.uncertainty_slope, "|d log ratio / d log N| over the top decade, scale-matched"));
            let fixed_slope = top_decade_slope(ns, &fixed.ratios());
            rep.checks.push(Check::info("uncertainty_fixed_slope", fixed_slope, "the same probe for every N; its mass leaves the band"));
        }
        clock.lap("uncertainty");
    }
    Ok(clock.finish(out))
}

pub fn verify_strichartz(cfg: &Config) -> Result<Outcome> {
    let mut out = Outcome::new("verify-strichartz");
    let mut clock = Clock::start();
    let v = &cfg.verify;
    let n = cfg.dimension;
    let eps = cfg.epsilon;
    let runs = |s: &str| v.strichartz_suites.iter().any(|x| x == s);
    if runs("saturation") {
        let grid = cfg.grid_in(n, v.strichartz_grid.0, v.strichartz_grid.1)?;
        let w = v.saturation_width;
        let u0 = RadialField::from_real_fn(grid, |r| (-(r / w).powi(2)).exp());
        let r = strichartz_saturation(&u0, &v.strichartz_horizons, v.strichartz_points, eps)?;
        let mut t = r.to_table();
        t.header.insert(1, "T".into());
        for (row, h) in t.rows.iter_mut().zip(&v.strichartz_horizons) {
            row.insert(1, (*h).into());
        }
        if let Some(last) = t.rows.last_mut() {
            last.insert(1, "".into());
        }
        out.report.tables.push(t);
        let ratios = r.ratios();
        if ratios.len() >= 2 {
            let k = ratios.len();
            let growth = ratios[k - 1] / ratios[k - 2] - 1.0;
            let (a, b) = (v.strichartz_horizons[k - 2], v.strichartz_horizons[k - 1]);
            out.report.checks.push(Check::at_most("saturation_growth", growth, v.saturation_growth, format!("relative ratio growth from T = {a} to T = {b}")));
        }
        let aliasing = r.notes.iter().filter(|n| n.starts_with("aliasing")).count();
        out.report.checks.push(Check::at_most("saturation_aliasing", aliasing as f64, 0.0, "free-flow aliasing warnings"));
        out.notes.extend(r.notes.iter().map(|x| format!("strichartz_saturation: {x}")));
        clock.lap("saturation");
    }
    if runs("forced") {
        let grid = cfg.grid_in(n, v.forced_grid.0, v.forced_grid.1)?;
        let fam = random_radial_family(&grid, cfg.seed, v.forced_profiles, FamilyKind::BandLimited)?;
        let k = v.forced_times.max(2);
        let times: Vec<f64> = (0..k).map(|i| i as f64 / (k - 1) as f64).collect();
        let zero = RadialField::zeros(grid.clone());
        let samples = fam
            .members
            .par_iter()
            .map(|m| -> Result<(f64, f64)> {
                // G(t) = sin²(πt)·h on [0, 1].
                let states = times.iter().map(|t| m.field.scale((std::f64::consts::PI * t).sin().powi(2).into())).collect();
                let g = Trajectory::from_states(times.clone(), states, "sin²(πt) h")?;
                let s = check_weighted_strichartz(&zero, Some(&g), &times, eps)?.samples[0];
                Ok((s.lhs, s.rhs))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut r = RatioReport::new("strichartz_forced", &[("n", n as f64), ("eps", eps)]);
        for (lhs, rhs) in samples {
            r.push(lhs, rhs);
        }
        let ratios = r.ratios();
        let spread = ratios.iter().copied().fold(0.0, f64::max) / ratios.iter().copied().fold(f64::INFINITY, f64::min);
        push_ratio(&mut out.report, &r, &mut out.notes);
        out.report.checks.push(Check::at_most("strichartz_forced_spread", spread, v.forced_spread, "max/min of the forced ratios over the profiles"));
        clock.lap("forced");
    }
    if runs("nonlinear") {
        let u0 = cfg.data.on_grid(&cfg.build_grid()?)?;
        let k = v.nonlinear_times.max(2);
        let times: Vec<f64> = (0..k).map(|i| i as f64 / (k - 1) as f64).collect();
        let states = times.iter().map(|&t| free_propagate(&u0, t)).collect();
        let u = Trajectory::from_states(times, states, "free flow of the initial data")?;
        for variant in [NonlinearVariant::Basic, NonlinearVariant::Refined1, NonlinearVariant::Refined2] {
            let r = check_nonlinear_estimates(&u, &u, variant, eps)?;
            push_ratio(&mut out.report, &r, &mut out.notes);
            clock.lap(variant.name());
        }
    }
    Ok(clock.finish(out))
}

pub fn sweep(cfg: &Config) -> Result<Outcome> {
    let mut out = Outcome::new("sweep");
    let mut clock = Clock::start();
    let entries: Vec<(usize, f64)> =
        cfg.sweep_dimensions.iter().flat_map(|&n| cfg.sweep_epsilons.iter().map(move |&e| (n, e))).collect();
    let results = entries
        .par_iter()
        .map(|&(n, eps)| -> Result<(Trajectory, DiagnosticsReport, f64)> {
            let grid = Arc::new(RadialGrid::new(GridSpec { dimension: n, ..cfg.grid })?);
            let traj = run_solver(cfg, &grid)?;
            let rep = verify_monotonicity(&traj, eps)?;
            let s = s_norm(&traj, eps)?.total;
            Ok((traj, rep, s))
        })
        .collect::<Result<Vec<_>>>()?;
    clock.lap("entries");
    let mut summary = Table::new(
        "sweep",
        &["n", "eps", "mass_drift", "energy_drift", "s_norm", "fd_vs_production", "functional_bound", "morawetz_ratio", "status"],
    );
    let mut groups: Option<Table> = None;
    let v = &cfg.verify;
    for ((n, eps), (traj, mut rep, s)) in entries.iter().zip(results) {
        let p = traj.provenance();
        rep.checks.push(Check::at_most("mass_drift", p.mass_drift, v.mass_tolerance, "max_t |M(t) − M(0)| / M(0)"));
        rep.checks.push(Check::at_most("energy_drift", p.energy_drift, v.energy_tolerance, "max_t |E(t) − E(0)| / E(0)"));
        let value = |name: &str| Cell::from(rep.check(name).map_or(f64::NAN, |c| c.value));
        summary.push(vec![
            (*n).into(),
            (*eps).into(),
            p.mass_drift.into(),
            p.energy_drift.into(),
            s.into(),
            value("fd_vs_production"),
            value("functional_bound"),
            value("morawetz_ratio"),
            if rep.passed() { "PASS" } else { "FAIL" }.into(),
        ]);
        let mut t = rep.tables.remove(0);
        t.header.splice(0..0, ["n".to_string(), "eps".to_string()]);
        for row in &mut t.rows {
            row.splice(0..0, [Cell::from(*n), Cell::from(*eps)]);
        }
        match groups.as_mut() {
            Some(g) => g.rows.extend(t.rows),
            None => {
                t.name = "sweep_morawetz".into();
                groups = Some(t);
            }
        }
        out.report.merge(&format!("n{n}_eps{eps}."), rep);
    }
    out.report.tables.insert(0, summary);
    out.report.tables.extend(groups);
    out.notes.push(format!("{} entries over dimensions {:?} and exponents {:?}", entries.len(), cfg.sweep_dimensions, cfg.sweep_epsilons));
    clock.lap("report");
    Ok(clock.finish(out))
}
