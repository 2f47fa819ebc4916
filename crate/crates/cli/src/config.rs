//! Flat `block.key = value` configuration.
//!
//! Lines are `key = value`; `#` starts a comment; blank lines are skipped.
//! Every key has a default, so an empty file is a complete configuration.
//! Values given on the command line (`--set key=value` and the dedicated
//! flags) override the file. Unknown keys and malformed values are errors
//! that name the line they came from.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use radnls::grid::{build_grid, GridScheme, GridSpec, RadialGrid};
use radnls::lab::{band_noise, FamilyKind, HlsParams, Regime};
use radnls::solver::{SolverConfig, SplitScheme};
use radnls::RadialField;

/// (key, default, meaning).
pub const KEYS: &[(&str, &str, &str)] = &[
    ("dimension", "3", "spatial dimension n >= 3"),
    ("epsilon", "0.01", "weight exponent in (0, 1), or `conservative` for n^-10"),
    ("seed", "0", "seed for random families and band-limited data"),
    ("workers", "0", "worker threads; 0 uses every core"),
    ("grid.radius", "20", "truncation radius R"),
    ("grid.nodes", "512", "node count J"),
    ("grid.scheme", "bessel_zeros", "bessel_zeros | uniform"),
    ("solver.dt", "1e-3", "time step"),
    ("solver.t_end", "0.5", "final time"),
    ("solver.record_stride", "1", "record every k-th step"),
    ("solver.scheme", "strang", "strang | lie"),
    ("solver.dealias", "false", "zero the top third of modes after each step"),
    ("solver.boundary_mass_tolerance", "1e-6", "abort when the boundary layer holds more mass than this share"),
    ("data.profile", "gaussian", "gaussian | ring | band_limited"),
    ("data.amplitude", "2", "peak amplitude (gaussian, ring) or L2 norm (band_limited)"),
    ("data.width", "1", "w in A e^{-r^2/w^2} (gaussian) or A e^{-(r-r0)^2/w^2} (ring)"),
    ("data.center", "2", "ring radius r0"),
    ("data.band", "1,3", "frequency band lo,hi of band_limited data"),
    ("verify.mass_tolerance", "1e-6", "relative mass drift bound"),
    ("verify.energy_tolerance", "1e-4", "relative energy drift bound"),
    ("verify.duhamel_tolerance", "1e-4", "relative Duhamel residual bound"),
    ("verify.n_list", "2^-8..2^8", "frequencies N for Q_I and the S-decay table"),
    ("verify.eta_grid", "0.5,0.2,0.1,0.05,0.02,0.01", "absolute mass thresholds for C(eta)"),
    ("verify.weights_dimensions", "", "dimensions for verify-weights; empty uses `dimension`"),
    ("verify.weights_epsilons", "", "exponents for verify-weights; empty uses `epsilon`"),
    ("verify.weights_log_r_min", "-3", "log10 of the smallest radius scanned"),
    ("verify.weights_log_r_max", "3", "log10 of the largest radius scanned"),
    ("verify.weights_r_count", "2001", "radii scanned"),
    ("verify.morawetz_cutoff", "0", "N > 0 also checks P_{<N}u with the commutator forcing"),
    ("verify.appendix_suites", "bilinear,hls,sobolev,uncertainty", "appendix checkers to run"),
    ("verify.family_kind", "dilation_orbit", "gaussian_mix | radial_bumps | band_limited | dilation_orbit"),
    ("verify.family_count", "10", "family size (dilation_orbit draws three members per base)"),
    ("verify.appendix_radius", "192", "grid radius for the appendix families"),
    ("verify.appendix_nodes", "8192", "grid nodes for the appendix families"),
    ("verify.bilinear", "2,2,-1,-2", "p,q,alpha,beta of the bilinear bound"),
    ("verify.bilinear_regime", "x_small", "x_small | y_small"),
    ("verify.hls", "1.5,1.5,1,0,0", "p,q,s,alpha,beta of the weighted HLS bound"),
    ("verify.bilinear_invariance", "1e-6", "dilation residual bound, bilinear"),
    ("verify.sobolev_invariance", "1e-5", "dilation residual bound, radial Sobolev"),
    ("verify.hls_invariance", "1e-4", "dilation residual bound, HLS"),
    ("verify.uncertainty", "0.5,2", "alpha,p of the uncertainty bound"),
    ("verify.uncertainty_n_list", "2^-4..2^10", "frequencies of the uncertainty sweep"),
    ("verify.uncertainty_radius", "40", "probe grid radius at N = 1"),
    ("verify.uncertainty_nodes", "1024", "probe grid nodes"),
    ("verify.uncertainty_spread", "10", "bound on max/min of the scale-matched ratios"),
    ("verify.uncertainty_slope", "0.05", "bound on |top-decade slope| of the scale-matched ratios"),
    ("verify.strichartz_suites", "saturation,forced,nonlinear", "weighted Strichartz checkers to run"),
    ("verify.strichartz_radius", "1200", "grid radius for the saturation run"),
    ("verify.strichartz_nodes", "4096", "grid nodes for the saturation run"),
    ("verify.saturation_width", "1.4142135623730951", "w of the free probe e^{-r^2/w^2} in the saturation run"),
    ("verify.strichartz_horizons", "1,10,100", "horizons T of the saturation run"),
    ("verify.strichartz_points", "400", "stretched times per horizon"),
    ("verify.saturation_growth", "0.05", "bound on the ratio growth between the last two horizons"),
    ("verify.forced_profiles", "10", "band-limited forcing profiles"),
    ("verify.forced_radius", "40", "grid radius for the forced runs"),
    ("verify.forced_nodes", "1024", "grid nodes for the forced runs"),
    ("verify.forced_times", "101", "recorded times of the forced runs on [0, 1]"),
    ("verify.forced_spread", "10", "bound on max/min of the forced ratios"),
    ("verify.nonlinear_times", "11", "recorded times of the free flow on [0, 1] for the nonlinear estimates"),
    ("sweep.dimensions", "3,4,5", "dimensions of the sweep"),
    ("sweep.epsilons", "0.01,0.05", "exponents of the sweep"),
    ("output.dir", "out", "output directory"),
    ("output.formats", "csv,json", "any of csv, json"),
];

/// Where a value came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Default,
    Line(usize),
    Flag(String),
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Default => f.write_str("default"),
            Origin::Line(n) => write!(f, "line {n}"),
            Origin::Flag(flag) => f.write_str(flag),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub origin: Origin,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.origin, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn error(origin: &Origin, message: impl Into<String>) -> ConfigError {
    ConfigError { origin: origin.clone(), message: message.into() }
}

/// Raw values by key, before typing.
#[derive(Debug, Clone)]
pub struct Entries {
    values: BTreeMap<String, (String, Origin)>,
}

impl Default for Entries {
    fn default() -> Self {
        let values = KEYS.iter().map(|(k, d, _)| (k.to_string(), (d.to_string(), Origin::Default))).collect();
        Self { values }
    }
}

impl Entries {
    pub fn set(&mut self, key: &str, value: &str, origin: Origin) -> Result<(), ConfigError> {
        let Some(slot) = self.values.get_mut(key) else {
            let hint = KEYS.iter().map(|k| k.0).find(|k| k.rsplit('.').next() == key.rsplit('.').next());
            let hint = hint.map(|h| format!(" (did you mean `{h}`?)")).unwrap_or_default();
            return Err(error(&origin, format!("unknown key `{key}`{hint}")));
        };
        *slot = (value.to_string(), origin);
        Ok(())
    }

    /// Applies the lines of a config file.
    pub fn parse(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let origin = Origin::Line(i + 1);
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(error(&origin, format!("expected `key = value`, found `{line}`")));
            };
            let key = key.trim();
            if key.is_empty() {
                return Err(error(&origin, "missing key before `=`"));
            }
            self.set(key, value.trim(), origin)?;
        }
        Ok(())
    }

    /// Applies one `key=value` override.
    pub fn apply_override(&mut self, assignment: &str) -> Result<(), ConfigError> {
        let origin = Origin::Flag(format!("--set {assignment}"));
        let Some((key, value)) = assignment.split_once('=') else {
            return Err(error(&origin, "expected key=value"));
        };
        self.set(key.trim(), value.trim(), origin)
    }

    fn raw(&self, key: &str) -> (&str, &Origin) {
        let (v, o) = self.values.get(key).unwrap_or_else(|| panic!("`{key}` is not a registered key"));
        (v.as_str(), o)
    }

    fn get<T: FromStr>(&self, key: &str, what: &str) -> Result<T, ConfigError>
    where
        T::Err: fmt::Display,
    {
        let (v, o) = self.raw(key);
        v.parse::<T>().map_err(|e| error(o, format!("{key}: expected {what}, got `{v}` ({e})")))
    }

    fn list<T: FromStr>(&self, key: &str, what: &str) -> Result<Vec<T>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        let (v, o) = self.raw(key);
        if v.trim().is_empty() {
            return Ok(Vec::new());
        }
        v.split(',')
            .map(|item| item.trim().parse::<T>().map_err(|e| error(o, format!("{key}: expected a list of {what}, got `{item}` ({e})"))))
            .collect()
    }

    /// Comma-separated numbers, or `2^a..2^b` for the dyadic range.
    fn frequencies(&self, key: &str) -> Result<Vec<f64>, ConfigError> {
        let (v, o) = self.raw(key);
        if let Some((a, b)) = v.split_once("..") {
            let exponent = |s: &str| {
                s.trim()
                    .strip_prefix("2^")
                    .and_then(|e| e.parse::<i32>().ok())
                    .ok_or_else(|| error(o, format!("{key}: range ends must look like 2^k, got `{s}`")))
            };
            let (lo, hi) = (exponent(a)?, exponent(b)?);
            if lo > hi {
                return Err(error(o, format!("{key}: empty range {v}")));
            }
            return Ok((lo..=hi).map(|k| 2f64.powi(k)).collect());
        }
        let out: Vec<f64> = self.list(key, "numbers")?;
        if let Some(x) = out.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
            return Err(error(o, format!("{key}: frequencies must be positive, got {x}")));
        }
        Ok(out)
    }

    fn fail<T>(&self, key: &str, message: impl fmt::Display) -> Result<T, ConfigError> {
        Err(error(self.raw(key).1, format!("{key}: {message}")))
    }

    fn positive(&self, key: &str) -> Result<f64, ConfigError> {
        let v: f64 = self.get(key, "a number")?;
        if v > 0.0 && v.is_finite() { Ok(v) } else { self.fail(key, format!("must be positive, got {v}")) }
    }

    fn count(&self, key: &str) -> Result<usize, ConfigError> {
        let v: usize = self.get(key, "a non-negative integer")?;
        if v > 0 { Ok(v) } else { self.fail(key, "must be at least 1") }
    }

    fn tuple<const K: usize>(&self, key: &str, names: &str) -> Result<[f64; K], ConfigError> {
        let v: Vec<f64> = self.list(key, "numbers")?;
        v.try_into().or_else(|v: Vec<f64>| self.fail(key, format!("expected {K} values {names}, got {}", v.len())))
    }

    fn suites(&self, key: &str, known: &[&str]) -> Result<Vec<String>, ConfigError> {
        let v: Vec<String> = self.list(key, "names")?;
        if let Some(s) = v.iter().find(|s| !known.contains(&s.as_str())) {
            return self.fail(key, format!("unknown suite `{s}` (expected any of {})", known.join(", ")));
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DataProfile {
    /// A e^{−r²/w²}.
    Gaussian { amplitude: f64, width: f64 },
    /// A (e^{−(r−r₀)²/w²} + e^{−(r+r₀)²/w²}), smooth at the origin.
    Ring { amplitude: f64, width: f64, center: f64 },
    /// Seeded band-limited noise with ‖u‖₂ = `mass_norm`.
    BandLimited { mass_norm: f64, band: (f64, f64), seed: u64 },
}

impl DataProfile {
    pub fn describe(&self) -> String {
        match self {
            DataProfile::Gaussian { amplitude, width } => format!("gaussian(amplitude={amplitude}, width={width})"),
            DataProfile::Ring { amplitude, width, center } => {
                format!("ring(center={center}, width={width}, amplitude={amplitude})")
            }
            DataProfile::BandLimited { mass_norm, band, seed } => {
                format!("band_limited(seed={seed}, band=[{}, {}], l2_norm={mass_norm})", band.0, band.1)
            }
        }
    }

    pub fn on_grid(&self, grid: &Arc<RadialGrid>) -> radnls::Result<RadialField> {
        Ok(match *self {
            DataProfile::Gaussian { amplitude, width } => {
                RadialField::from_real_fn(grid.clone(), |r| amplitude * (-(r / width).powi(2)).exp())
            }
            DataProfile::Ring { amplitude, width, center } => RadialField::from_real_fn(grid.clone(), |r| {
                amplitude * ((-((r - center) / width).powi(2)).exp() + (-((r + center) / width).powi(2)).exp())
            }),
            DataProfile::BandLimited { mass_norm, band, seed } => band_noise(grid, seed, band, mass_norm)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verify {
    pub mass_tolerance: f64,
    pub energy_tolerance: f64,
    pub duhamel_tolerance: f64,
    pub n_list: Vec<f64>,
    pub eta_grid: Vec<f64>,
    pub weights_dimensions: Vec<usize>,
    pub weights_epsilons: Vec<f64>,
    pub weights_log_r: (f64, f64),
    pub weights_r_count: usize,
    pub morawetz_cutoff: f64,
    pub appendix_suites: Vec<String>,
    pub family_kind: FamilyKind,
    pub family_count: usize,
    pub appendix_grid: (f64, usize),
    pub bilinear: [f64; 4],
    pub bilinear_regime: Regime,
    pub hls: HlsParams,
    pub bilinear_invariance: f64,
    pub sobolev_invariance: f64,
    pub hls_invariance: f64,
    pub uncertainty: (f64, f64),
    pub uncertainty_n_list: Vec<f64>,
    pub uncertainty_grid: (f64, usize),
    pub uncertainty_spread: f64,
    pub uncertainty_slope: f64,
    pub strichartz_suites: Vec<String>,
    pub strichartz_grid: (f64, usize),
    pub saturation_width: f64,
    pub strichartz_horizons: Vec<f64>,
    pub strichartz_points: usize,
    pub saturation_growth: f64,
    pub forced_profiles: usize,
    pub forced_grid: (f64, usize),
    pub forced_times: usize,
    pub forced_spread: f64,
    pub nonlinear_times: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub dimension: usize,
    pub epsilon: f64,
    pub seed: u64,
    pub workers: usize,
    pub grid: GridSpec,
    pub solver: SolverConfig,
    pub data: DataProfile,
    pub verify: Verify,
    pub sweep_dimensions: Vec<usize>,
    pub sweep_epsilons: Vec<f64>,
    pub output_dir: PathBuf,
    pub csv: bool,
    pub json: bool,
    echo: BTreeMap<String, String>,
}

fn check_dimension(entries: &Entries, key: &str, n: usize) -> Result<usize, ConfigError> {
    if n >= 3 { Ok(n) } else { entries.fail(key, format!("the solver requires n >= 3 (got n = {n})")) }
}

fn check_eps(entries: &Entries, key: &str, eps: f64) -> Result<f64, ConfigError> {
    if eps > 0.0 && eps < 1.0 { Ok(eps) } else { entries.fail(key, format!("epsilon must lie in (0, 1), got {eps}")) }
}

impl Config {
    /// Types and validates every entry.
    pub fn from_entries(e: &Entries) -> Result<Self, ConfigError> {
        let dimension = check_dimension(e, "dimension", e.get("dimension", "an integer")?)?;
        let epsilon = match e.raw("epsilon").0 {
            "conservative" => (dimension as f64).powi(-10),
            _ => check_eps(e, "epsilon", e.get("epsilon", "a number or `conservative`")?)?,
        };
        let seed: u64 = e.get("seed", "a non-negative integer")?;
        let grid = GridSpec {
            dimension,
            max_radius: e.positive("grid.radius")?,
            node_count: e.count("grid.nodes")?,
            scheme: e.get::<GridScheme>("grid.scheme", "a grid scheme")?,
        };
        let solver = SolverConfig {
            dt: e.positive("solver.dt")?,
            t_end: e.positive("solver.t_end")?,
            record_stride: e.count("solver.record_stride")?,
            scheme: e.get::<SplitScheme>("solver.scheme", "a splitting scheme")?,
            dealias: e.get("solver.dealias", "true or false")?,
            boundary_mass_tolerance: e.positive("solver.boundary_mass_tolerance")?,
            ..SolverConfig::default()
        };
        let amplitude = e.positive("data.amplitude")?;
        let width = e.positive("data.width")?;
        let data = match e.raw("data.profile").0 {
            "gaussian" => DataProfile::Gaussian { amplitude, width },
            "ring" => DataProfile::Ring { amplitude, width, center: e.positive("data.center")? },
            "band_limited" => {
                let [lo, hi] = e.tuple::<2>("data.band", "lo,hi")?;
                if !(lo >= 0.0 && hi > lo) {
                    return e.fail("data.band", format!("need 0 <= lo < hi, got [{lo}, {hi}]"));
                }
                DataProfile::BandLimited { mass_norm: amplitude, band: (lo, hi), seed }
            }
            other => return e.fail("data.profile", format!("unknown profile `{other}` (expected gaussian, ring or band_limited)")),
        };
        let mut weights_dimensions: Vec<usize> = e.list("verify.weights_dimensions", "integers")?;
        if weights_dimensions.is_empty() {
            weights_dimensions.push(dimension);
        }
        for &n in &weights_dimensions {
            check_dimension(e, "verify.weights_dimensions", n)?;
        }
        let mut weights_epsilons: Vec<f64> = e.list("verify.weights_epsilons", "numbers")?;
        if weights_epsilons.is_empty() {
            weights_epsilons.push(epsilon);
        }
        for &x in &weights_epsilons {
            check_eps(e, "verify.weights_epsilons", x)?;
        }
        let weights_log_r = (e.get("verify.weights_log_r_min", "a number")?, e.get("verify.weights_log_r_max", "a number")?);
        if !(weights_log_r.0 < weights_log_r.1) {
            return e.fail("verify.weights_log_r_max", "must exceed verify.weights_log_r_min");
        }
        let [hp, hq, hs, ha, hb] = e.tuple::<5>("verify.hls", "p,q,s,alpha,beta")?;
        let [ua, up] = e.tuple::<2>("verify.uncertainty", "alpha,p")?;
        let horizons = e.list::<f64>("verify.strichartz_horizons", "numbers")?;
        if horizons.is_empty() || horizons.iter().any(|t| !(*t > 0.0)) || horizons.windows(2).any(|w| w[1] <= w[0]) {
            return e.fail("verify.strichartz_horizons", "need positive, strictly increasing horizons");
        }
        let verify = Verify {
            mass_tolerance: e.positive("verify.mass_tolerance")?,
            energy_tolerance: e.positive("verify.energy_tolerance")?,
            duhamel_tolerance: e.positive("verify.duhamel_tolerance")?,
            n_list: e.frequencies("verify.n_list")?,
            eta_grid: e.list("verify.eta_grid", "numbers")?,
            weights_dimensions,
            weights_epsilons,
            weights_log_r,
            weights_r_count: e.count("verify.weights_r_count")?,
            morawetz_cutoff: e.get("verify.morawetz_cutoff", "a number")?,
            appendix_suites: e.suites("verify.appendix_suites", &["bilinear", "hls", "sobolev", "uncertainty"])?,
            family_kind: e.get("verify.family_kind", "a family kind")?,
            family_count: e.count("verify.family_count")?,
            appendix_grid: (e.positive("verify.appendix_radius")?, e.count("verify.appendix_nodes")?),
            bilinear: e.tuple::<4>("verify.bilinear", "p,q,alpha,beta")?,
            bilinear_regime: match e.raw("verify.bilinear_regime").0 {
                "x_small" => Regime::XSmall,
                "y_small" => Regime::YSmall,
                other => return e.fail("verify.bilinear_regime", format!("expected x_small or y_small, got `{other}`")),
            },
            hls: HlsParams { n: dimension, p: hp, q: hq, s: hs, alpha: ha, beta: hb },
            bilinear_invariance: e.positive("verify.bilinear_invariance")?,
            sobolev_invariance: e.positive("verify.sobolev_invariance")?,
            hls_invariance: e.positive("verify.hls_invariance")?,
            uncertainty: (ua, up),
            uncertainty_n_list: e.frequencies("verify.uncertainty_n_list")?,
            uncertainty_grid: (e.positive("verify.uncertainty_radius")?, e.count("verify.uncertainty_nodes")?),
            uncertainty_spread: e.positive("verify.uncertainty_spread")?,
            uncertainty_slope: e.positive("verify.uncertainty_slope")?,
            strichartz_suites: e.suites("verify.strichartz_suites", &["saturation", "forced", "nonlinear"])?,
            strichartz_grid: (e.positive("verify.strichartz_radius")?, e.count("verify.strichartz_nodes")?),
            saturation_width: e.positive("verify.saturation_width")?,
            strichartz_horizons: horizons,
            strichartz_points: e.count("verify.strichartz_points")?,
            saturation_growth: e.positive("verify.saturation_growth")?,
            forced_profiles: e.count("verify.forced_profiles")?,
            forced_grid: (e.positive("verify.forced_radius")?, e.count("verify.forced_nodes")?),
            forced_times: e.count("verify.forced_times")?,
            forced_spread: e.positive("verify.forced_spread")?,
            nonlinear_times: e.count("verify.nonlinear_times")?,
        };
        if let Some(x) = verify.eta_grid.iter().find(|x| !(**x > 0.0)) {
            return e.fail("verify.eta_grid", format!("thresholds must be positive, got {x}"));
        }
        let sweep_dimensions: Vec<usize> = e.list("sweep.dimensions", "integers")?;
        for &n in &sweep_dimensions {
            check_dimension(e, "sweep.dimensions", n)?;
        }
        let sweep_epsilons: Vec<f64> = e.list("sweep.epsilons", "numbers")?;
        for &x in &sweep_epsilons {
            check_eps(e, "sweep.epsilons", x)?;
        }
        let formats: Vec<String> = e.list("output.formats", "names")?;
        if let Some(f) = formats.iter().find(|f| *f != "csv" && *f != "json") {
            return e.fail("output.formats", format!("unknown format `{f}` (expected csv or json)"));
        }
        let mut echo: BTreeMap<String, String> = e.values.iter().map(|(k, (v, _))| (k.clone(), v.clone())).collect();
        echo.insert("epsilon".into(), format!("{epsilon:e}"));
        echo.insert("verify.weights_dimensions".into(), join(&verify.weights_dimensions));
        echo.insert("verify.weights_epsilons".into(), join(&verify.weights_epsilons));
        Ok(Self {
            dimension,
            epsilon,
            seed,
            workers: e.get("workers", "a non-negative integer")?,
            grid,
            solver,
            data,
            verify,
            sweep_dimensions,
            sweep_epsilons,
            output_dir: PathBuf::from(e.raw("output.dir").0),
            csv: formats.iter().any(|f| f == "csv"),
            json: formats.iter().any(|f| f == "json"),
            echo,
        })
    }

    #[cfg(test)]
    pub fn from_text(text: &str) -> Result<Self, ConfigError> {
        let mut e = Entries::default();
        e.parse(text)?;
        Self::from_entries(&e)
    }

    /// The effective value of every key.
    pub fn echo(&self) -> &BTreeMap<String, String> {
        &self.echo
    }

    pub fn build_grid(&self) -> radnls::Result<Arc<RadialGrid>> {
        Ok(Arc::new(RadialGrid::new(self.grid)?))
    }

    pub fn grid_in(&self, n: usize, radius: f64, nodes: usize) -> radnls::Result<Arc<RadialGrid>> {
        build_grid(n, radius, nodes, self.grid.scheme)
    }
}

fn join<T: fmt::Display>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}
