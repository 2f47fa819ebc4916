use std::f64::consts::PI;
use std::sync::Arc;

use proptest::prelude::*;
use radnls::diagnostics::mass;
use radnls::lab::{check_bilinear, BilinearParams, LogGrid, Profile, Regime};
use radnls::morawetz::{morawetz_functional, weight_eval};
use radnls::spectral::{apply_multiplier, free_propagate, gradient_radial, hankel_forward, hankel_inverse, MultiplierSymbol};
use radnls::{build_grid, Complex64, GridScheme, RadialField, RadialGrid};

fn grid(n: usize) -> Arc<RadialGrid> {
    build_grid(n, 20.0, 256, GridScheme::BesselZeros).unwrap()
}

fn mixture(n: usize, terms: &[(f64, f64, f64)]) -> RadialField {
    let terms = terms.to_vec();
    RadialField::from_fn(grid(n), move |r| {
        terms.iter().map(|&(a, phase, w)| Complex64::from_polar(a, phase) * (-r * r / (2.0 * w * w)).exp()).sum()
    })
}

fn terms() -> impl Strategy<Value = Vec<(f64, f64, f64)>> {
    prop::collection::vec((0.2..2.0f64, 0.0..2.0 * PI, 0.5..2.0f64), 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hankel_round_trip_and_plancherel(n in 3usize..7, t in terms()) {
        let f = mixture(n, &t);
        let spec = hankel_forward(&f).unwrap();
        let back = hankel_inverse(&spec);
        prop_assert!(back.sub(&f).unwrap().l2_norm() <= 1e-8 * f.l2_norm());
        let expected = (2.0 * PI).powi(n as i32) * mass(&f);
        prop_assert!((spec.energy() - expected).abs() <= 1e-6 * expected);
    }

    #[test]
    fn projections_split_the_identity(t in terms(), big_n in 0.1..8.0f64) {
        let f = mixture(3, &t);
        let low = apply_multiplier(&f, &MultiplierSymbol::lt(big_n));
        let high = apply_multiplier(&f, &MultiplierSymbol::ge(big_n));
        prop_assert!(low.add(&high).unwrap().sub(&f).unwrap().l2_norm() <= 1e-10 * f.l2_norm());
    }

    #[test]
    fn free_flow_is_a_unitary_group(t in terms(), t1 in -0.3..0.3f64, t2 in -0.3..0.3f64) {
        let f = mixture(3, &t);
        let twice = free_propagate(&free_propagate(&f, t1), t2);
        let once = free_propagate(&f, t1 + t2);
        prop_assert!(twice.sub(&once).unwrap().l2_norm() <= 1e-10 * f.l2_norm());
        prop_assert!((mass(&once) - mass(&f)).abs() <= 1e-10 * mass(&f));
    }

    #[test]
    fn morawetz_functional_obeys_cauchy_schwarz(t in terms(), kappa in -2.0..2.0f64, eps in 0.001..0.1f64) {
        let f = mixture(3, &t).map(|r, v| v * Complex64::from_polar(1.0, kappa * r * r / 2.0));
        let bound = 2.0 * f.l2_norm() * gradient_radial(&f).l2_norm();
        prop_assert!(morawetz_functional(&f, eps).abs() <= bound * (1.0 + 1e-10));
    }

    #[test]
    fn weight_laplacian_identity(r in 1e-3..1e3f64, eps in 0.001..0.5f64, n in 3usize..10) {
        let w = weight_eval(r, eps, n);
        let lap = w.a_double_prime + (n as f64 - 1.0) * w.a_prime / r;
        prop_assert!((w.delta_a - lap).abs() <= 1e-8 * w.delta_a.abs().max(1.0 / r));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn bilinear_ratio_is_dilation_invariant(s1 in 0.5..2.0f64, s2 in 0.5..2.0f64, lambda in 0.25..4.0f64) {
        let params = BilinearParams::new(3, 2.0, 2.0, -1.0, -2.0, Regime::XSmall);
        let f = Profile::gaussian(1.0, s1);
        let g = Profile::gaussian(1.0, s2);
        let grid = LogGrid::standard();
        let base = check_bilinear(&[(f.clone(), g.clone())], &params, &grid).unwrap().sup_ratio;
        let dilated = check_bilinear(&[(f.dilate(lambda, 3), g.dilate(lambda, 3))], &params, &grid).unwrap().sup_ratio;
        prop_assert!((base - dilated).abs() <= 1e-6 * base);
    }
}
