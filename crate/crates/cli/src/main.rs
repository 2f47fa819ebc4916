mod commands;
mod config;
mod output;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use config::{Config, Entries, Origin};
use output::{emit_report, Outcome};

/// Radial NLS simulator and verification suites.
///
/// Exit status: 0 when every check passes, 1 when any check fails, 2 on
/// usage, configuration, I/O or numerical errors.
#[derive(Debug, Parser)]
#[command(name = "radnls", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Configuration file with `block.key = value` lines.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory (overrides output.dir).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true)]
    workers: Option<String>,
    #[arg(long, global = true)]
    dimension: Option<String>,
    /// Weight exponent, or `conservative` for n^-10.
    #[arg(long, global = true)]
    epsilon: Option<String>,
    /// Override any configuration key; repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evolve the configured data, write a checkpoint and a conservation report.
    Simulate,
    /// Norms, Q over the N-list, S-decay and concentration of a checkpoint.
    Diagnose {
        /// Defaults to trajectory.ckpt in the output directory.
        #[arg(long, value_name = "PATH")]
        checkpoint: Option<PathBuf>,
    },
    /// Pointwise positivity of the Morawetz weight over (n, eps) pairs.
    VerifyWeights,
    /// Morawetz monotonicity on a fresh run or a checkpoint.
    VerifyMorawetz {
        #[arg(long, value_name = "PATH")]
        checkpoint: Option<PathBuf>,
    },
    /// Bilinear, HLS, radial Sobolev and uncertainty checkers over a seeded family.
    VerifyAppendix,
    /// Weighted Strichartz saturation, forced estimate and nonlinear estimates.
    VerifyStrichartz,
    /// Simulation and Morawetz checks over sweep.dimensions × sweep.epsilons.
    Sweep,
}

fn fail(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("radnls: {message}");
    ExitCode::from(2)
}

fn load_config(cli: &Cli) -> Result<Config, String> {
    let mut entries = Entries::default();
    if let Some(path) = &cli.config {
        let text = fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        entries.parse(&text).map_err(|e| format!("config {}, {e}", path.display()))?;
    }
    for assignment in &cli.set {
        entries.apply_override(assignment).map_err(|e| format!("config error at {e}"))?;
    }
    let flags = [
        ("output.dir", "--out", &cli.out),
        ("seed", "--seed", &cli.seed),
        ("workers", "--workers", &cli.workers),
        ("dimension", "--dimension", &cli.dimension),
        ("epsilon", "--epsilon", &cli.epsilon),
    ];
    for (key, flag, value) in flags {
        if let Some(v) = value {
            entries.set(key, v, Origin::Flag(format!("{flag} {v}"))).map_err(|e| format!("config error at {e}"))?;
        }
    }
    Config::from_entries(&entries).map_err(|e| match (&e.origin, &cli.config) {
        (Origin::Line(_), Some(path)) => format!("config {}, {e}", path.display()),
        _ => format!("config error at {e}"),
    })
}

fn run(cli: &Cli, cfg: &Config) -> radnls::Result<Outcome> {
    let dir = &cfg.output_dir;
    let checkpoint = |given: &Option<PathBuf>| given.clone().unwrap_or_else(|| dir.join(commands::CHECKPOINT_FILE));
    match &cli.command {
        Command::Simulate => commands::simulate(cfg, dir),
        Command::Diagnose { checkpoint: c } => commands::diagnose(cfg, &checkpoint(c)),
        Command::VerifyWeights => commands::verify_weights(cfg),
        Command::VerifyMorawetz { checkpoint: c } => commands::verify_morawetz(cfg, c.as_deref()),
        Command::VerifyAppendix => commands::verify_appendix(cfg),
        Command::VerifyStrichartz => commands::verify_strichartz(cfg),
        Command::Sweep => commands::sweep(cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cfg = match load_config(&cli) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cfg.workers).build_global() {
        return fail(format!("cannot start the worker pool: {e}"));
    }
    if let Err(e) = fs::create_dir_all(&cfg.output_dir) {
        return fail(format!("cannot create {}: {e}", cfg.output_dir.display()));
    }
    let start = Instant::now();
    let mut outcome = match run(&cli, &cfg) {
        Ok(o) => o,
        Err(e) => return fail(e),
    };
    outcome.timings.push(("total".into(), start.elapsed().as_secs_f64()));
    let files = match emit_report(&outcome, &cfg, &cfg.output_dir) {
        Ok(f) => f,
        Err(e) => return fail(format!("cannot write reports to {}: {e}", cfg.output_dir.display())),
    };
    let report = &outcome.report;
    for c in &report.checks {
        if c.relation.is_empty() {
            println!("{:<4} {} = {:.6e}", c.status, c.name, c.value);
        } else {
            println!("{:<4} {} = {:.6e} {} {:.6e}", c.status, c.name, c.value, c.relation, c.bound);
        }
    }
    let failed = report.failures().count();
    println!(
        "{}: {} checks, {failed} failed; {} files in {}",
        outcome.command,
        report.checks.len(),
        files.len() + outcome.artifacts.len(),
        cfg.output_dir.display()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
