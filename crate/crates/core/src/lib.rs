//! Radial pseudospectral simulation of the defocusing mass-critical NLS
//! iu_t + Δu = |u|^{4/n}u in ℝⁿ (n ≥ 3), with diagnostics, Morawetz
//! machinery and numerical checks of weighted inequalities.

pub mod checkpoint;
pub mod diagnostics;
pub mod error;
pub mod field;
pub mod grid;
pub mod lab;
pub mod morawetz;
pub mod quad;
pub mod report;
pub mod riesz;
pub mod special;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
pub use field::{integrate, weighted_lp_norm, RadialField};
pub use grid::{build_grid, GridScheme, GridSpec, RadialGrid};
pub use num_complex::Complex64;
