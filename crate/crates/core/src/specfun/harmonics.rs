use num_complex::Complex64;

use super::legendre::NormalizedLegendre;
use crate::error::{Error, Result};

/// Minimum `sin θ` at which surface gradients are evaluated.
pub const POLE_GUARD: f64 = 1e-12;

/// Degree/order pair `(ℓ, m)` with `|m| ≤ ℓ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SphIndex {
    ell: u32,
    m: i32,
}

impl SphIndex {
    pub fn new(ell: u32, m: i32) -> Result<Self> {
        if m.unsigned_abs() > ell {
            return Err(Error::Index(format!("|m| = {} exceeds ell = {ell}", m.unsigned_abs())));
        }
        Ok(Self { ell, m })
    }

    pub fn ell(self) -> u32 {
        self.ell
    }

    pub fn m(self) -> i32 {
        self.m
    }
}

/// Flat position of `(ℓ, m)` in an array holding all orders of all degrees `≤ ℓmax`.
#[inline]
pub fn lm_index(ell: usize, m: i64) -> usize {
    ((ell * ell + ell) as i64 + m) as usize
}

/// Number of `(ℓ, m)` pairs with `ℓ ≤ lmax`.
#[inline]
pub fn lm_count(lmax: usize) -> usize {
    (lmax + 1) * (lmax + 1)
}

#[inline]
fn parity(m: i64) -> f64 {
    if m.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Complex spherical harmonic `Y_ℓ^m(θ, φ)`.
///
/// Negative orders use `Y_ℓ^{-m} = (-1)^m conj(Y_ℓ^m)`.
pub fn sph_harm(idx: SphIndex, theta: f64, phi: f64) -> Complex64 {
    let ell = idx.ell as usize;
    let am = idx.m.unsigned_abs() as usize;
    let p = NormalizedLegendre::new(ell, theta.cos());
    let y = Complex64::from_polar(p.get(ell, am), am as f64 * phi);
    if idx.m < 0 {
        y.conj() * parity(am as i64)
    } else {
        y
    }
}

/// Surface gradient of `Y_ℓ^m` as `(∂_θ Y, (1/sin θ) ∂_φ Y)`.
pub fn sph_harm_surface_grad(idx: SphIndex, theta: f64, phi: f64) -> Result<(Complex64, Complex64)> {
    sph_harm_surface_grad_with_guard(idx, theta, phi, POLE_GUARD)
}

pub fn sph_harm_surface_grad_with_guard(
    idx: SphIndex,
    theta: f64,
    phi: f64,
    guard: f64,
) -> Result<(Complex64, Complex64)> {
    let sin_theta = theta.sin();
    if sin_theta.abs() < guard {
        return Err(Error::PoleProximity { sin_theta, guard });
    }
    let ell = idx.ell as usize;
    let table = NormalizedLegendre::new(ell, theta.cos());
    let (dt, dp) = grad_nonneg(&table, ell, idx.m.unsigned_abs() as usize, theta.cos(), sin_theta, phi);
    if idx.m < 0 {
        let sign = parity(idx.m as i64);
        Ok((dt.conj() * sign, dp.conj() * sign))
    } else {
        Ok((dt, dp))
    }
}

fn grad_nonneg(
    p: &NormalizedLegendre,
    ell: usize,
    m: usize,
    x: f64,
    s: f64,
    phi: f64,
) -> (Complex64, Complex64) {
    let e = Complex64::from_polar(1.0, m as f64 * phi);
    let lf = ell as f64;
    let mf = m as f64;
    // (1-x²) dP/dx = (ℓ+m) P_{ℓ-1}^m - ℓ x P_ℓ^m, rewritten for the orthonormal table.
    let lower = if ell > m {
        ((2.0 * lf + 1.0) / (2.0 * lf - 1.0) * (lf * lf - mf * mf)).sqrt() * p.get(ell - 1, m)
    } else {
        0.0
    };
    let d_theta = (lf * x * p.get(ell, m) - lower) / s;
    let y = p.get(ell, m);
    (e * d_theta, e * Complex64::new(0.0, mf * y / s))
}

/// All harmonics `Y_ℓ^m` and their surface gradients at one direction, for `ℓ ≤ lmax`.
///
/// Entries are laid out by [`lm_index`].
#[derive(Debug, Clone)]
pub struct HarmonicTable {
    pub lmax: usize,
    pub values: Vec<Complex64>,
    /// `(∂_θ Y, (1/sin θ) ∂_φ Y)`; empty unless requested.
    pub grads: Vec<(Complex64, Complex64)>,
}

impl HarmonicTable {
    pub fn new(lmax: usize, theta: f64, phi: f64) -> Self {
        Self::build(lmax, theta, phi, false).expect("no gradients requested")
    }

    pub fn with_gradients(lmax: usize, theta: f64, phi: f64) -> Result<Self> {
        Self::build(lmax, theta, phi, true)
    }

    fn build(lmax: usize, theta: f64, phi: f64, want_grads: bool) -> Result<Self> {
        let x = theta.cos();
        let s = theta.sin();
        if want_grads && s.abs() < POLE_GUARD {
            return Err(Error::PoleProximity { sin_theta: s, guard: POLE_GUARD });
        }
        let p = NormalizedLegendre::new(lmax, x);
        let n = lm_count(lmax);
        let mut values = vec![Complex64::default(); n];
        let mut grads = if want_grads { vec![Default::default(); n] } else { Vec::new() };
        for ell in 0..=lmax {
            for m in 0..=ell {
                let y = Complex64::from_polar(p.get(ell, m), m as f64 * phi);
                let sign = parity(m as i64);
                values[lm_index(ell, m as i64)] = y;
                values[lm_index(ell, -(m as i64))] = y.conj() * sign;
                if want_grads {
                    let (a, b) = grad_nonneg(&p, ell, m, x, s, phi);
                    grads[lm_index(ell, m as i64)] = (a, b);
                    grads[lm_index(ell, -(m as i64))] = (a.conj() * sign, b.conj() * sign);
                }
            }
        }
        Ok(Self { lmax, values, grads })
    }

    #[inline]
    pub fn y(&self, ell: usize, m: i64) -> Complex64 {
        self.values[lm_index(ell, m)]
    }

    #[inline]
    pub fn grad(&self, ell: usize, m: i64) -> (Complex64, Complex64) {
        self.grads[lm_index(ell, m)]
    }
}

/// Bilinear (non-conjugating) dot product of two surface gradients.
#[inline]
pub fn grad_dot(a: (Complex64, Complex64), b: (Complex64, Complex64)) -> Complex64 {
    a.0 * b.0 + a.1 * b.1
}
