//! Bessel functions of integer and half-integer order, their zeros, and a few
//! gamma-function closed forms used for radial measures.

use std::f64::consts::PI;

/// Γ(k/2) for a positive integer k, exact up to rounding.
pub fn gamma_half(k: usize) -> f64 {
    assert!(k > 0, "gamma_half needs k >= 1");
    let (mut g, mut x) = if k % 2 == 0 { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
    let target = k as f64 / 2.0;
    while x < target - 0.25 {
        g *= x;
        x += 1.0;
    }
    g
}

/// Surface area ω_{n−1} = 2π^{n/2}/Γ(n/2) of the unit sphere in ℝⁿ.
pub fn sphere_area(n: usize) -> f64 {
    2.0 * PI.powf(n as f64 / 2.0) / gamma_half(n)
}

fn order_kind(nu: f64) -> i64 {
    let twice = (2.0 * nu).round();
    assert!(
        (2.0 * nu - twice).abs() < 1e-12 && twice >= -1.0,
        "Bessel order {nu} must be a non-negative integer or half-integer"
    );
    twice as i64
}

/// J_ν(x) for x ≥ 0 and ν ∈ {−½, 0, ½, 1, …}.
pub fn bessel_j(nu: f64, x: f64) -> f64 {
    assert!(x >= 0.0, "bessel_j is only implemented for x >= 0");
    let twice = order_kind(nu);
    if twice % 2 == 0 {
        integer_order(twice / 2, x)
    } else {
        half_integer_order(twice, x)
    }
}

/// x^{−ν} J_ν(x), continuous at x = 0 where it equals 1/(2^ν Γ(ν+1)).
pub fn bessel_j_scaled(nu: f64, x: f64) -> f64 {
    if x < 0.5 {
        let q = -0.25 * x * x;
        let lead = 1.0 / (2f64.powf(nu) * gamma_half((2.0 * nu + 2.0).round() as usize));
        let mut term = lead;
        let mut sum = lead;
        for k in 1..40 {
            term *= q / (k as f64 * (nu + k as f64));
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        bessel_j(nu, x) / x.powf(nu)
    }
}

// Large-argument Hankel expansion; accurate to rounding for x >= 25 and ν <= 8.
fn hankel_asymptotic(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let (mut p, mut q) = (1.0, 0.0);
    let mut term = 1.0f64;
    let mut last = f64::INFINITY;
    for k in 1..80 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        if term.abs() > last {
            break;
        }
        last = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - (0.5 * nu + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

fn integer_order(m: i64, x: f64) -> f64 {
    if x == 0.0 {
        return if m == 0 { 1.0 } else { 0.0 };
    }
    if x >= 25.0 {
        let j0 = hankel_asymptotic(0.0, x);
        if m == 0 {
            return j0;
        }
        let mut j1 = hankel_asymptotic(1.0, x);
        if (m as f64) < x {
            let mut prev = j0;
            for k in 1..m {
                let next = 2.0 * k as f64 / x * j1 - prev;
                prev = j1;
                j1 = next;
            }
            return j1;
        }
    }
    // Miller's backward recurrence normalized by J_0 + 2 Σ J_{2k} = 1.
    let top = {
        let t = (1.5 * x.max(m as f64) + m as f64 + 40.0).ceil() as i64;
        t + (t % 2)
    };
    let (mut above, mut cur) = (0.0f64, 1e-30f64);
    let mut norm = 0.0;
    let mut target = 0.0;
    for k in (1..=top).rev() {
        // cur holds the unnormalized J_k.
        if k == m {
            target = cur;
        }
        if k % 2 == 0 {
            norm += 2.0 * cur;
        }
        let below = 2.0 * k as f64 / x * cur - above;
        above = cur;
        cur = below;
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            above *= 1e-250;
            norm *= 1e-250;
            target *= 1e-250;
        }
    }
    norm += cur;
    if m == 0 {
        target = cur;
    }
    target / norm
}

fn half_integer_order(twice: i64, x: f64) -> f64 {
    let nu = twice as f64 / 2.0;
    if x == 0.0 {
        return if twice == -1 { f64::INFINITY } else { 0.0 };
    }
    let c = (2.0 / (PI * x)).sqrt();
    let jm = c * x.cos();
    let jp = c * x.sin();
    if twice == -1 {
        return jm;
    }
    if twice == 1 {
        return jp;
    }
    if x > nu {
        let (mut prev, mut cur) = (jm, jp);
        let mut order = 0.5;
        while order < nu - 0.25 {
            let next = 2.0 * order / x * cur - prev;
            prev = cur;
            cur = next;
            order += 1.0;
        }
        return cur;
    }
    // Backward recurrence, normalized against both J_{±1/2} so that a zero of
    // either one cannot spoil the scale.
    let top = (x.max(nu) + 40.0).ceil() + 0.5;
    let (mut above, mut cur) = (0.0f64, 1e-30f64);
    let mut order = top;
    let mut target = 0.0;
    let mut at_half = 0.0;
    while order > -0.25 {
        if (order - nu).abs() < 0.25 {
            target = cur;
        }
        if (order - 0.5).abs() < 0.25 {
            at_half = cur;
        }
        let below = 2.0 * order / x * cur - above;
        above = cur;
        cur = below;
        order -= 1.0;
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            above *= 1e-250;
            target *= 1e-250;
            at_half *= 1e-250;
        }
    }
    let at_minus = cur;
    let scale = (at_half * jp + at_minus * jm) / (at_half * at_half + at_minus * at_minus);
    target * scale
}

/// The first `count` positive zeros of J_ν.
pub fn bessel_zeros(nu: f64, count: usize) -> Vec<f64> {
    let twice = order_kind(nu);
    if twice == 1 {
        return (1..=count).map(|k| k as f64 * PI).collect();
    }
    if twice == -1 {
        return (1..=count).map(|k| (k as f64 - 0.5) * PI).collect();
    }
    let mut zeros = Vec::with_capacity(count);
    let step = 0.2;
    let mut a = nu.max(step);
    let mut fa = bessel_j(nu, a);
    while zeros.len() < count {
        let b = a + step;
        let fb = bessel_j(nu, b);
        if fa == 0.0 {
            zeros.push(a);
        } else if fa * fb < 0.0 {
            zeros.push(refine_zero(nu, a, b, fa));
        }
        a = b;
        fa = fb;
    }
    zeros
}

fn refine_zero(nu: f64, mut lo: f64, mut hi: f64, flo: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = bessel_j(nu, mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
