//! ‖|x|^α Tf‖_p ≲ ‖|x|^α f‖_p for Hörmander–Mikhlin multipliers T,
//! 1 < p < ∞ and −n/p < α < n − n/p, uniformly in the frequency N.

use serde::{Deserialize, Serialize};

use super::{collect_samples, RatioReport};
use crate::error::{Error, Result};
use crate::field::{weighted_lp_norm, RadialField};
use crate::spectral::{apply_multiplier, MultiplierSymbol};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MultiplierKind {
    /// P_{<N}.
    Low,
    /// P_N.
    Band,
    /// P_{≥N}.
    High,
    /// N^{−s}|∇|^s P_{<N}.
    LowRiesz(f64),
    /// N^s|∇|^{−s} P_{≥N}.
    HighRiesz(f64),
}

impl MultiplierKind {
    pub fn symbol(self, n_cut: f64) -> MultiplierSymbol {
        match self {
            MultiplierKind::Low => MultiplierSymbol::lt(n_cut),
            MultiplierKind::Band => MultiplierSymbol::band(n_cut),
            MultiplierKind::High => MultiplierSymbol::ge(n_cut),
            MultiplierKind::LowRiesz(s) => MultiplierSymbol::riesz_low(n_cut, s),
            MultiplierKind::HighRiesz(s) => MultiplierSymbol::riesz_high(n_cut, s),
        }
    }
}

/// One sample per (field, N) pair, fields outermost; the report's sup is the
/// empirical constant over the whole sweep.
pub fn check_weighted_multiplier(
    fields: &[RadialField],
    kind: MultiplierKind,
    n_list: &[f64],
    p: f64,
    alpha: f64,
) -> Result<RatioReport> {
    let n = fields.first().map_or(3, |f| f.grid().dimension()) as f64;
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::Hypothesis(format!("1 < p < ∞ fails (p = {p})")));
    }
    if !(alpha > -n / p && alpha < n - n / p) {
        return Err(Error::Hypothesis(format!("−n/p < α < n − n/p fails (α = {alpha}, n/p = {})", n / p)));
    }
    let mut report = RatioReport::new("weighted_multiplier", &[("n", n), ("p", p), ("alpha", alpha)]);
    let symbols: Vec<MultiplierSymbol> = n_list.iter().map(|&m| kind.symbol(m)).collect();
    if let Some(s) = symbols.iter().find(|s| !s.hormander_mikhlin()) {
        report.note(format!("symbol {:?} is not tagged as a Hörmander–Mikhlin multiplier", s.kind()));
    }
    let k = n_list.len();
    collect_samples(&mut report, fields.len() * k, |i| {
        let f = &fields[i / k];
        if f.is_zero() {
            return Ok((0.0, 0.0));
        }
        let tf = apply_multiplier(f, &symbols[i % k]);
        Ok((weighted_lp_norm(&tf, p, alpha)?, weighted_lp_norm(f, p, alpha)?))
    })?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, GridScheme};

    #[test]
    fn projections_are_bounded_with_weights() {
        let g = build_grid(3, 30.0, 512, GridScheme::BesselZeros).unwrap();
        let f = RadialField::from_real_fn(g, |r| (-r * r).exp() * (1.0 + r));
        let ns = [0.25, 1.0, 4.0];
        for kind in [MultiplierKind::Low, MultiplierKind::Band, MultiplierKind::High, MultiplierKind::LowRiesz(0.5)] {
            let r = check_weighted_multiplier(std::slice::from_ref(&f), kind, &ns, 2.0, 0.7).unwrap();
            assert!(r.sup_ratio.is_finite() && r.sup_ratio < 10.0, "{kind:?}: {}", r.sup_ratio);
        }
        assert!(check_weighted_multiplier(&[f], MultiplierKind::Low, &ns, 2.0, 1.5).is_err());
    }
}
