//! Radial Fourier multiplier symbols and the Littlewood–Paley bump.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

/// ψ(x) = e^{−1/x} for x > 0, zero otherwise.
fn psi(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// The radial bump φ: equal to 1 on [0, 1], 0 on [2, ∞), smooth in between.
pub fn bump(rho: f64) -> f64 {
    if rho <= 1.0 {
        1.0
    } else if rho >= 2.0 {
        0.0
    } else {
        let a = psi(2.0 - rho);
        a / (a + psi(rho - 1.0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "parameter", rename_all = "snake_case")]
pub enum SymbolKind {
    /// φ(ρ/N): P_{≤N}.
    DyadicLe(f64),
    /// φ(ρ/N) − φ(2ρ/N): P_N.
    DyadicBand(f64),
    /// 1 − φ(ρ/N): P_{>N}.
    DyadicGt(f64),
    /// ρ^s: |∇|^s.
    FracPower(f64),
    RieszComposite(String),
    /// e^{−itρ²}: e^{itΔ}.
    FreeFlow(f64),
    Custom(String),
}

type Evaluator = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// A radial symbol m(ρ) with metadata. `hormander_mikhlin` records whether
/// the symbol is claimed to satisfy |∂^k m(ρ)| ≲ ρ^{−k}.
#[derive(Clone)]
pub struct MultiplierSymbol {
    kind: SymbolKind,
    eval: Evaluator,
    hormander_mikhlin: bool,
}

impl fmt::Debug for MultiplierSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiplierSymbol")
            .field("kind", &self.kind)
            .field("hormander_mikhlin", &self.hormander_mikhlin)
            .finish()
    }
}

impl fmt::Display for MultiplierSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SymbolKind::DyadicLe(n) => write!(f, "P_<={n}"),
            SymbolKind::DyadicBand(n) => write!(f, "P_{n}"),
            SymbolKind::DyadicGt(n) => write!(f, "P_>{n}"),
            SymbolKind::FracPower(s) => write!(f, "|D|^{s}"),
            SymbolKind::RieszComposite(d) | SymbolKind::Custom(d) => f.write_str(d),
            SymbolKind::FreeFlow(t) => write!(f, "exp(it{t}Laplacian)"),
        }
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

impl MultiplierSymbol {
    /// A symbol from an arbitrary evaluator.
    pub fn custom<F>(name: impl Into<String>, hormander_mikhlin: bool, eval: F) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        Self { kind: SymbolKind::Custom(name.into()), eval: Arc::new(eval), hormander_mikhlin }
    }

    /// A named composite of Riesz-type factors with an explicit regularity claim.
    pub fn riesz_composite<F>(descriptor: impl Into<String>, hormander_mikhlin: bool, eval: F) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        Self { kind: SymbolKind::RieszComposite(descriptor.into()), eval: Arc::new(eval), hormander_mikhlin }
    }

    pub fn identity() -> Self {
        Self::custom("identity", true, |_| real(1.0))
    }

    /// P_{≤N}.
    pub fn le(n: f64) -> Self {
        Self { kind: SymbolKind::DyadicLe(n), eval: Arc::new(move |r| real(bump(r / n))), hormander_mikhlin: true }
    }

    /// P_{<N}, taken as P_{≤N/2}.
    pub fn lt(n: f64) -> Self {
        Self::le(n / 2.0)
    }

    /// P_N = P_{≤N} − P_{≤N/2}.
    pub fn band(n: f64) -> Self {
        Self {
            kind: SymbolKind::DyadicBand(n),
            eval: Arc::new(move |r| real(bump(r / n) - bump(2.0 * r / n))),
            hormander_mikhlin: true,
        }
    }

    /// P_{>N}.
    pub fn gt(n: f64) -> Self {
        Self { kind: SymbolKind::DyadicGt(n), eval: Arc::new(move |r| real(1.0 - bump(r / n))), hormander_mikhlin: true }
    }

    /// P_{≥N}, taken as P_{>N/2} so that P_{<N} + P_{≥N} = 1.
    pub fn ge(n: f64) -> Self {
        Self::gt(n / 2.0)
    }

    /// P_{M<·≤N} = P_{≤N} − P_{≤M}.
    pub fn between(m: f64, n: f64) -> Self {
        Self::custom(format!("P_({m},{n}]"), true, move |r| real(bump(r / n) - bump(r / m)))
    }

    /// |∇|^s.
    pub fn frac_power(s: f64) -> Self {
        Self {
            kind: SymbolKind::FracPower(s),
            eval: Arc::new(move |r| real(if r == 0.0 && s <= 0.0 { 0.0 } else { r.powf(s) })),
            hormander_mikhlin: s == 0.0,
        }
    }

    /// N^{−s}|∇|^s P_{<N}, uniformly Hörmander–Mikhlin for s > 0.
    pub fn riesz_low(n: f64, s: f64) -> Self {
        Self::riesz_composite(format!("N^-{s}|D|^{s}P_<{n}"), s >= 0.0, move |r| {
            real((r / n).powf(s) * bump(2.0 * r / n))
        })
    }

    /// N^{s}|∇|^{−s} P_{≥N}, uniformly Hörmander–Mikhlin for s > 0.
    pub fn riesz_high(n: f64, s: f64) -> Self {
        Self::riesz_composite(format!("N^{s}|D|^-{s}P_>={n}"), s >= 0.0, move |r| {
            if r == 0.0 {
                real(0.0)
            } else {
                real((n / r).powf(s) * (1.0 - bump(2.0 * r / n)))
            }
        })
    }

    /// e^{−itρ²}, the symbol of e^{itΔ}.
    pub fn free_flow(t: f64) -> Self {
        Self {
            kind: SymbolKind::FreeFlow(t),
            eval: Arc::new(move |r| Complex64::from_polar(1.0, -t * r * r)),
            hormander_mikhlin: false,
        }
    }

    /// The product symbol m₁·m₂ (apply `other`, then `self`).
    pub fn compose(&self, other: &MultiplierSymbol) -> Self {
        let (a, b) = (self.eval.clone(), other.eval.clone());
        Self {
            kind: SymbolKind::RieszComposite(format!("{self}*{other}")),
            eval: Arc::new(move |r| a(r) * b(r)),
            hormander_mikhlin: self.hormander_mikhlin && other.hormander_mikhlin,
        }
    }

    pub fn kind(&self) -> &SymbolKind {
        &self.kind
    }

    pub fn hormander_mikhlin(&self) -> bool {
        self.hormander_mikhlin
    }

    pub fn eval(&self, rho: f64) -> Complex64 {
        (self.eval)(rho)
    }
}

/// Dyadic frequencies 2^lo, …, 2^hi.
pub fn dyadic_range(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(|k| 2f64.powi(k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_support_and_monotonicity() {
        assert_eq!(bump(0.0), 1.0);
        assert_eq!(bump(1.0), 1.0);
        assert_eq!(bump(2.0), 0.0);
        assert!((bump(1.5) - 0.5).abs() < 1e-15);
        let mut prev = 1.0;
        for k in 0..=1000 {
            let v = bump(1.0 + k as f64 / 1000.0);
            assert!(v <= prev);
            prev = v;
        }
    }

    #[test]
    fn low_and_high_pieces_sum_to_one() {
        for n in [0.25, 1.0, 8.0] {
            let (lo, hi) = (MultiplierSymbol::le(n), MultiplierSymbol::gt(n));
            let (lt, ge) = (MultiplierSymbol::lt(n), MultiplierSymbol::ge(n));
            for k in 0..200 {
                let r = k as f64 * 0.05 * n;
                assert_eq!((lo.eval(r) + hi.eval(r)).re, 1.0);
                assert_eq!((lt.eval(r) + ge.eval(r)).re, 1.0);
            }
        }
    }

    #[test]
    fn free_flow_is_unimodular() {
        let m = MultiplierSymbol::free_flow(3.7);
        for k in 0..100 {
            assert!((m.eval(k as f64 * 0.37).norm() - 1.0).abs() < 1e-15);
        }
        assert!(!m.hormander_mikhlin());
    }
}
