//! Quadrature building blocks: Gauss–Legendre rules, a globally adaptive
//! integrator, and product-integration weights for ∫ g(r) r^c dr on radial
//! node sets, where g is smooth and even in r.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Gauss–Legendre nodes and weights on [−1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1);
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        let m = order as f64;
        for i in 0..order.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (m + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(order, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(order, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[order - 1 - i] = x;
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Shared 16-point rule.
    pub fn g16() -> &'static GaussLegendre {
        static RULE: OnceLock<GaussLegendre> = OnceLock::new();
        RULE.get_or_init(|| GaussLegendre::new(16))
    }

    fn g12() -> &'static GaussLegendre {
        static RULE: OnceLock<GaussLegendre> = OnceLock::new();
        RULE.get_or_init(|| GaussLegendre::new(12))
    }

    fn g24() -> &'static GaussLegendre {
        static RULE: OnceLock<GaussLegendre> = OnceLock::new();
        RULE.get_or_init(|| GaussLegendre::new(24))
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights mapped to [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

fn legendre(order: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=order {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = order as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn segment<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Segment {
    let coarse = GaussLegendre::g12().integrate(&mut *f, a, b);
    let fine = GaussLegendre::g24().integrate(&mut *f, a, b);
    Segment {
        a,
        b,
        value: fine,
        error: (fine - coarse).abs(),
    }
}

/// Globally adaptive Gauss–Legendre integration (24-point rule with a
/// 12-point error estimate), bisecting the worst segment until the summed
/// error estimate drops below max(abs_tol, rel_tol·|I|).
pub fn adaptive<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Integral {
    adaptive_limited(&mut f, a, b, abs_tol, rel_tol, 4000)
}

pub fn adaptive_limited<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_segments: usize,
) -> Integral {
    if a == b {
        return Integral { value: 0.0, error: 0.0, converged: true };
    }
    let mut heap = BinaryHeap::new();
    let first = segment(f, a, b);
    let (mut value, mut error) = (first.value, first.error);
    heap.push(first);
    while error > abs_tol.max(rel_tol * value.abs()) {
        if heap.len() >= max_segments {
            return Integral { value, error, converged: false };
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            return Integral { value, error, converged: false };
        }
        let left = segment(f, worst.a, mid);
        let right = segment(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed the drift of the running totals.
    let value = heap.iter().map(|s| s.value).sum();
    let error = heap.iter().map(|s| s.error).sum();
    Integral { value, error, converged: true }
}

const STENCIL: usize = 5;

/// Local five-point interpolation stencils over the cells of a radial node
/// set on [0, R]. Cell i contains node i and is bounded by the midpoints to
/// its neighbours (0 and R at the ends). Stencils reach across the origin
/// through mirror nodes −r_k, so integrands are assumed even in r.
#[derive(Debug, Clone)]
pub struct RadialStencil {
    edges: Vec<f64>,
    cells: Vec<[(usize, f64); STENCIL]>,
}

impl RadialStencil {
    pub fn new(nodes: &[f64], max_radius: f64) -> Self {
        let j = nodes.len();
        assert!(j >= STENCIL + 1, "need at least six nodes");
        let mut edges = Vec::with_capacity(j + 1);
        edges.push(0.0);
        for w in nodes.windows(2) {
            edges.push(0.5 * (w[0] + w[1]));
        }
        edges.push(max_radius);
        let cells = (0..j)
            .map(|i| {
                let start = (i as i64 - 2).min(j as i64 - STENCIL as i64);
                let mut st = [(0usize, 0.0f64); STENCIL];
                for (m, slot) in st.iter_mut().enumerate() {
                    let k = start + m as i64;
                    *slot = if k >= 0 {
                        (k as usize, nodes[k as usize])
                    } else {
                        let mirror = (-k - 1) as usize;
                        (mirror, -nodes[mirror])
                    };
                }
                st
            })
            .collect();
        Self { edges, cells }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    /// Index of the cell containing x (clamped to the node range).
    pub fn cell_of(&self, x: f64) -> usize {
        let pos = self.edges.partition_point(|&e| e <= x);
        pos.saturating_sub(1).min(self.cells.len() - 1)
    }

    fn basis(&self, cell: usize, x: f64) -> [f64; STENCIL] {
        let st = &self.cells[cell];
        let mut out = [1.0; STENCIL];
        for m in 0..STENCIL {
            for l in 0..STENCIL {
                if l != m {
                    out[m] *= (x - st[l].1) / (st[m].1 - st[l].1);
                }
            }
        }
        out
    }

    /// Local interpolant of even nodal data at x ∈ [0, R].
    pub fn interpolate(&self, values: &[f64], x: f64) -> f64 {
        let cell = self.cell_of(x.abs());
        let b = self.basis(cell, x.abs());
        self.cells[cell]
            .iter()
            .zip(b)
            .map(|(&(k, _), l)| values[k] * l)
            .sum()
    }

    // ∫_lo^hi L_m(r) r^c dr for each stencil member of `cell`.
    fn basis_moments(&self, cell: usize, lo: f64, hi: f64, c: f64) -> [f64; STENCIL] {
        let mut out = [0.0; STENCIL];
        if hi <= lo {
            return out;
        }
        if cell == 0 {
            // Exact monomial moments so that r^c may be singular at 0.
            let s = self.edges[1];
            let st = &self.cells[0];
            for m in 0..STENCIL {
                let coeffs = lagrange_coefficients(st, m, s);
                let mut acc = 0.0;
                for (k, ck) in coeffs.iter().enumerate() {
                    let e = k as f64 + c + 1.0;
                    acc += ck * ((hi / s).powf(e) - (lo / s).powf(e)) / e;
                }
                out[m] = acc * s.powf(c + 1.0);
            }
        } else {
            for (x, w) in GaussLegendre::g16().mapped(lo, hi) {
                let b = self.basis(cell, x);
                let wx = w * x.powf(c);
                for m in 0..STENCIL {
                    out[m] += wx * b[m];
                }
            }
        }
        out
    }

    /// Weights w_j with Σ w_j g(r_j) ≈ ∫_0^R g(r) r^c dr; requires c > −1.
    pub fn weights(&self, c: f64) -> Vec<f64> {
        assert!(c > -1.0, "r^{c} is not integrable at the origin");
        let mut w = vec![0.0; self.cells.len()];
        for cell in 0..self.cells.len() {
            let mom = self.basis_moments(cell, self.edges[cell], self.edges[cell + 1], c);
            for (m, &(k, _)) in self.cells[cell].iter().enumerate() {
                w[k] += mom[m];
            }
        }
        w
    }

    /// Cumulative integral Φ(x) = ∫_0^x g(r) r^c dr of the local interpolant.
    pub fn cumulative<'a>(&'a self, values: &'a [f64], c: f64) -> Cumulative<'a> {
        assert!(c > -1.0, "r^{c} is not integrable at the origin");
        let mut prefix = Vec::with_capacity(self.cells.len() + 1);
        prefix.push(0.0);
        let mut acc = 0.0;
        for cell in 0..self.cells.len() {
            acc += self.cell_integral(values, cell, self.edges[cell], self.edges[cell + 1], c);
            prefix.push(acc);
        }
        Cumulative { stencil: self, values, c, prefix }
    }

    fn cell_integral(&self, values: &[f64], cell: usize, lo: f64, hi: f64, c: f64) -> f64 {
        let mom = self.basis_moments(cell, lo, hi, c);
        self.cells[cell]
            .iter()
            .zip(mom)
            .map(|(&(k, _), m)| values[k] * m)
            .sum()
    }
}

fn lagrange_coefficients(st: &[(usize, f64); STENCIL], m: usize, scale: f64) -> [f64; STENCIL] {
    let mut poly = [0.0; STENCIL];
    poly[0] = 1.0;
    let mut degree = 0;
    let xm = st[m].1 / scale;
    let mut denom = 1.0;
    for (l, &(_, pos)) in st.iter().enumerate() {
        if l == m {
            continue;
        }
        let xl = pos / scale;
        denom *= xm - xl;
        for k in (0..=degree + 1).rev() {
            let shifted = if k > 0 { poly[k - 1] } else { 0.0 };
            poly[k] = shifted - xl * poly[k];
        }
        degree += 1;
    }
    poly.map(|p| p / denom)
}

/// Running integral of interpolated nodal data; see [`RadialStencil::cumulative`].
pub struct Cumulative<'a> {
    stencil: &'a RadialStencil,
    values: &'a [f64],
    c: f64,
    prefix: Vec<f64>,
}

impl Cumulative<'_> {
    pub fn total(&self) -> f64 {
        *self.prefix.last().expect("non-empty")
    }

    pub fn at(&self, x: f64) -> f64 {
        let edges = &self.stencil.edges;
        if x <= 0.0 {
            return 0.0;
        }
        if x >= *edges.last().expect("non-empty") {
            return self.total();
        }
        let cell = self.stencil.cell_of(x);
        self.prefix[cell] + self.stencil.cell_integral(self.values, cell, edges[cell], x, self.c)
    }
}

/// Bisection for the x ∈ [lo, hi] where a non-decreasing g crosses `target`.
pub fn bisect_increasing<F: Fn(f64) -> f64>(g: F, target: f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let rule = GaussLegendre::new(10);
        let v = rule.integrate(|x| x.powi(18) + 3.0 * x.powi(5), -1.0, 1.0);
        assert!((v - 2.0 / 19.0).abs() < 1e-15);
        let w: f64 = rule.weights().iter().sum();
        assert!((w - 2.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        let r = adaptive(|x| 1.0 / x.sqrt(), 0.0, 1.0, 1e-12, 1e-12);
        assert!(r.converged);
        assert!((r.value - 2.0).abs() < 1e-10);
        let g = adaptive(|x| (-x * x).exp(), 0.0, 10.0, 1e-14, 1e-14);
        assert!((g.value - PI.sqrt() / 2.0).abs() < 1e-13);
    }

    #[test]
    fn product_weights_are_exact_on_low_powers() {
        let j = 200;
        let h = 1.0 / j as f64;
        let nodes: Vec<f64> = (0..j).map(|i| (i as f64 + 0.5) * h).collect();
        let st = RadialStencil::new(&nodes, 1.0);
        for c in [0.0, 1.0, 2.0, 0.5, -0.7, 4.0] {
            let w = st.weights(c);
            assert!(w.iter().all(|&x| x > 0.0));
            let total: f64 = w.iter().sum();
            assert!((total - 1.0 / (c + 1.0)).abs() < 1e-12, "c = {c}: {total}");
            let even: f64 = w.iter().zip(&nodes).map(|(w, r)| w * r * r).sum();
            assert!((even - 1.0 / (c + 3.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn cumulative_matches_closed_form() {
        let j = 400;
        let rmax = 8.0;
        let h = rmax / j as f64;
        let nodes: Vec<f64> = (0..j).map(|i| (i as f64 + 0.5) * h).collect();
        let values: Vec<f64> = nodes.iter().map(|r| (-r * r).exp()).collect();
        let st = RadialStencil::new(&nodes, rmax);
        let cum = st.cumulative(&values, 1.0);
        for x in [0.01f64, 0.3, 1.0, 2.5] {
            let exact = 0.5 * (1.0 - (-x * x).exp());
            assert!((cum.at(x) - exact).abs() < 1e-9, "x = {x}");
        }
        assert!((st.interpolate(&values, 0.77) - (-0.77f64 * 0.77).exp()).abs() < 1e-8);
    }
}
