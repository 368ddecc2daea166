//! Closed-form reference implementations shared by the integration tests.
//!
//! These avoid the library's recurrences: Legendre functions come from the
//! explicit Rodrigues sum, θ-derivatives from a complex step, and radial
//! polynomials from the explicit Jacobi sum.

#![allow(dead_code)]

use calderon_core::Complex64;
use std::f64::consts::PI;

fn factorial(n: u64) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Generalised binomial `C(x, k)` for real `x`.
fn binomial_real(x: f64, k: u64) -> f64 {
    (0..k).map(|j| (x - j as f64) / (j + 1) as f64).product()
}

/// `N (-1)^m sin^m θ · d^m/dx^m P_ℓ(x)|_{x = cos θ}` for `m ≥ 0`, analytic in θ.
pub fn theta_part(ell: u64, m: u64, theta: Complex64) -> Complex64 {
    let x = theta.cos();
    let s = theta.sin();
    let mut deriv = Complex64::default();
    for j in 0..=ell / 2 {
        let power = ell - 2 * j;
        if power < m {
            continue;
        }
        let c = (-1f64).powi(j as i32) * binomial(ell, j) * binomial(2 * ell - 2 * j, ell) / 2f64.powi(ell as i32);
        let falling: f64 = (0..m).map(|i| (power - i) as f64).product();
        deriv += x.powu((power - m) as u32) * (c * falling);
    }
    let norm = ((2 * ell + 1) as f64 / (4.0 * PI) * factorial(ell - m) / factorial(ell + m)).sqrt();
    deriv * s.powu(m as u32) * (norm * (-1f64).powi(m as i32))
}

/// `Y_ℓ^m(θ, φ)` with the Condon–Shortley phase.
pub fn sph(ell: u64, m: i64, theta: f64, phi: f64) -> Complex64 {
    let am = m.unsigned_abs();
    let t = theta_part(ell, am, Complex64::new(theta, 0.0)).re;
    let y = Complex64::from_polar(t, am as f64 * phi);
    if m < 0 {
        y.conj() * (-1f64).powi(am as i32)
    } else {
        y
    }
}

/// Surface gradient `(∂_θ Y, (1/sin θ) ∂_φ Y)`; θ-derivative by complex step.
pub fn sph_grad(ell: u64, m: i64, theta: f64, phi: f64) -> (Complex64, Complex64) {
    let am = m.unsigned_abs();
    let h = 1e-30;
    let dt = theta_part(ell, am, Complex64::new(theta, h)).im / h;
    let t = theta_part(ell, am, Complex64::new(theta, 0.0)).re;
    let e = Complex64::from_polar(1.0, am as f64 * phi);
    let (gt, gp) = (e * dt, e * Complex64::new(0.0, am as f64) * (t / theta.sin()));
    if m < 0 {
        let sign = (-1f64).powi(am as i32);
        (gt.conj() * sign, gp.conj() * sign)
    } else {
        (gt, gp)
    }
}

/// `√(2ℓ+4k+3) r^ℓ P_k^{(0, ℓ+1/2)}(2r² - 1)` from the explicit Jacobi sum.
pub fn radial(ell: u64, k: u64, r: f64) -> f64 {
    let beta = ell as f64 + 0.5;
    let r2 = r * r;
    let jacobi: f64 = (0..=k)
        .map(|s| binomial(k, s) * binomial_real(k as f64 + beta, s) * (r2 - 1.0).powi(s as i32) * r2.powi((k - s) as i32))
        .sum();
    ((2 * ell + 4 * k + 3) as f64).sqrt() * r.powi(ell as i32) * jacobi
}

/// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration on the three-term recurrence.
pub fn gauss(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for j in 2..=n {
                    let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// Product rule on the sphere: `(θ, φ, w)` exact for degree < 2·n_theta in cos θ and |m| < n_phi.
pub fn sphere_rule(n_theta: usize, n_phi: usize) -> Vec<(f64, f64, f64)> {
    let g = gauss(n_theta);
    let dphi = 2.0 * PI / n_phi as f64;
    g.iter()
        .flat_map(|&(x, w)| (0..n_phi).map(move |p| (x.acos(), p as f64 * dphi, w * dphi)))
        .collect()
}

/// Relative difference scaled by `max(1, |b|)`.
pub fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}
