//! Precomputed transform kernels for one grid.
//!
//! Every grid represents fields by the Fourier–Bessel series
//! f(r) = Σ_k c_k r^{−ν} J_ν(ρ_k r) with ρ_k = j_{ν,k}/R, and spectral values
//! f̂_k = s_k c_k where s_k = (2π)^{n/2} ρ_k^ν / v_k. On Bessel-zero grids the
//! forward map inverts the collocation exactly (a DST-I when n = 3); on
//! uniform grids it is the quadrature of the continuous Hankel transform.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::grid::{GridScheme, RadialGrid};
use crate::special::{bessel_j, bessel_j_scaled};

pub(crate) struct TransformPlan {
    kernel: Kernel,
    /// s_k, mapping series coefficients to spectral values.
    scale: Vec<f64>,
    nu: f64,
    dual: Vec<f64>,
}

enum Kernel {
    Sine(SineKernel),
    Dense(DenseKernel),
}

struct SineKernel {
    fft: Arc<dyn Fft<f64>>,
    len: usize,
    h: f64,
    max_radius: f64,
    nodes: Vec<f64>,
}

struct DenseKernel {
    len: usize,
    forward: Vec<f64>,
    inverse: Vec<f64>,
    derivative: Vec<f64>,
}

fn matvec(m: &[f64], len: usize, x: &[Complex64]) -> Vec<Complex64> {
    let row = |i: usize| -> Complex64 {
        let r = &m[i * len..(i + 1) * len];
        let (mut re, mut im) = (0.0, 0.0);
        for (a, v) in r.iter().zip(x) {
            re += a * v.re;
            im += a * v.im;
        }
        Complex64::new(re, im)
    };
    if len >= 384 {
        (0..len).into_par_iter().map(row).collect()
    } else {
        (0..len).map(row).collect()
    }
}

impl SineKernel {
    // X_k = Σ_{j=1}^{J} x_j sin(π j k/(J+1)), k = 1..J.
    fn dst1(&self, x: &[Complex64]) -> Vec<Complex64> {
        let m = 2 * (self.len + 1);
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for (j, &v) in x.iter().enumerate() {
            buf[j + 1] = v;
            buf[m - j - 1] = -v;
        }
        self.fft.process(&mut buf);
        (1..=self.len).map(|k| buf[k] * Complex64::new(0.0, 0.5)).collect()
    }

    // C_j = Σ_{k=1}^{J} b_k cos(π j k/(J+1)), j = 1..J.
    fn cosine_sum(&self, b: &[Complex64]) -> Vec<Complex64> {
        let m = 2 * (self.len + 1);
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for (k, &v) in b.iter().enumerate() {
            buf[k + 1] = v;
            buf[m - k - 1] = v;
        }
        self.fft.process(&mut buf);
        (1..=self.len).map(|j| buf[j] * 0.5).collect()
    }
}

impl TransformPlan {
    pub(crate) fn new(grid: &RadialGrid) -> Self {
        let n = grid.dimension();
        let nu = grid.order();
        let len = grid.len();
        let dual = grid.dual_nodes().to_vec();
        let c = (2.0 * PI).powf(n as f64 / 2.0);
        let scale: Vec<f64> = dual.iter().zip(grid.dual_weights()).map(|(p, v)| c * p.powf(nu) / v).collect();
        let kernel = if n == 3 && grid.scheme() == GridScheme::BesselZeros {
            let fft = FftPlanner::new().plan_fft_forward(2 * (len + 1));
            Kernel::Sine(SineKernel {
                fft,
                len,
                h: grid.max_radius() / (len + 1) as f64,
                max_radius: grid.max_radius(),
                nodes: grid.nodes().to_vec(),
            })
        } else {
            Kernel::Dense(DenseKernel::new(grid, &scale))
        };
        Self { kernel, scale, nu, dual }
    }

    pub(crate) fn forward(&self, f: &[Complex64]) -> Vec<Complex64> {
        match &self.kernel {
            Kernel::Sine(k) => {
                let x: Vec<Complex64> = f.iter().zip(&k.nodes).map(|(v, r)| v * r).collect();
                let c = 4.0 * PI * k.h;
                k.dst1(&x).into_iter().zip(&self.dual).map(|(v, p)| v * (c / p)).collect()
            }
            Kernel::Dense(d) => matvec(&d.forward, d.len, f),
        }
    }

    pub(crate) fn inverse(&self, spec: &[Complex64]) -> Vec<Complex64> {
        match &self.kernel {
            Kernel::Sine(k) => {
                let y: Vec<Complex64> = spec.iter().zip(&self.dual).map(|(v, p)| v * p).collect();
                let c = 1.0 / (2.0 * PI * k.max_radius);
                k.dst1(&y).into_iter().zip(&k.nodes).map(|(v, r)| v * (c / r)).collect()
            }
            Kernel::Dense(d) => matvec(&d.inverse, d.len, spec),
        }
    }

    /// ∂_r of the series with the given spectral values, at the nodes.
    pub(crate) fn derivative(&self, spec: &[Complex64]) -> Vec<Complex64> {
        match &self.kernel {
            Kernel::Sine(k) => {
                let c = 1.0 / (2.0 * PI * k.max_radius);
                let y: Vec<Complex64> = spec.iter().zip(&self.dual).map(|(v, p)| v * p).collect();
                let s = k.dst1(&y);
                let y2: Vec<Complex64> = y.iter().zip(&self.dual).map(|(v, p)| v * p).collect();
                let ds = k.cosine_sum(&y2);
                s.into_iter()
                    .zip(ds)
                    .zip(&k.nodes)
                    .map(|((s, ds), r)| (ds / *r - s / (r * r)) * c)
                    .collect()
            }
            Kernel::Dense(d) => matvec(&d.derivative, d.len, spec),
        }
    }

    /// Series coefficients c_k = f̂_k / s_k.
    pub(crate) fn coefficients(&self, spec: &[Complex64]) -> Vec<Complex64> {
        spec.iter().zip(&self.scale).map(|(v, s)| v / s).collect()
    }

    /// The series at an arbitrary radius r ∈ [0, R].
    pub(crate) fn evaluate(&self, coeffs: &[Complex64], r: f64) -> Complex64 {
        let nu = self.nu;
        coeffs
            .iter()
            .zip(&self.dual)
            .map(|(a, p)| a * (p.powf(nu) * bessel_j_scaled(nu, p * r)))
            .sum()
    }

    pub(crate) fn dual(&self) -> &[f64] {
        &self.dual
    }
}

impl DenseKernel {
    fn new(grid: &RadialGrid, scale: &[f64]) -> Self {
        let len = grid.len();
        let nu = grid.order();
        let n = grid.dimension();
        let r = grid.nodes();
        let rho = grid.dual_nodes();
        // basis[j][k] = r_j^{−ν} J_ν(ρ_k r_j), dbasis[j][k] = ∂_r of the same.
        let rows: Vec<(Vec<f64>, Vec<f64>)> = (0..len)
            .into_par_iter()
            .map(|j| {
                let mut b = Vec::with_capacity(len);
                let mut d = Vec::with_capacity(len);
                for &p in rho {
                    let x = p * r[j];
                    b.push(p.powf(nu) * bessel_j_scaled(nu, x));
                    d.push(-p.powf(nu + 2.0) * r[j] * bessel_j_scaled(nu + 1.0, x));
                }
                (b, d)
            })
            .collect();
        let mut inverse = vec![0.0; len * len];
        let mut derivative = vec![0.0; len * len];
        for (j, (b, d)) in rows.iter().enumerate() {
            for k in 0..len {
                inverse[j * len + k] = b[k] / scale[k];
                derivative[j * len + k] = d[k] / scale[k];
            }
        }
        let forward = match grid.scheme() {
            GridScheme::BesselZeros => {
                // Factor out the row scaling r_j^{−ν}: only the well-conditioned
                // kernel J_ν(ρ_k r_j) goes through the LU.
                let kernel = DMatrix::from_fn(len, len, |j, k| bessel_j(nu, rho[k] * r[j]));
                let inv = kernel.lu().try_inverse().expect("Bessel collocation matrix is invertible");
                let mut fw = vec![0.0; len * len];
                for k in 0..len {
                    for j in 0..len {
                        fw[k * len + j] = scale[k] * inv[(k, j)] * r[j].powf(nu);
                    }
                }
                fw
            }
            GridScheme::Uniform => {
                let c = (2.0 * PI).powf(n as f64 / 2.0);
                let w = grid.weights();
                let mut fw = vec![0.0; len * len];
                fw.par_chunks_mut(len).enumerate().for_each(|(k, row)| {
                    for j in 0..len {
                        row[j] = c * w[j] * bessel_j_scaled(nu, rho[k] * r[j]);
                    }
                });
                fw
            }
        };
        Self { len, forward, inverse, derivative }
    }
}
