use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Associated Legendre function `P_ℓ^m(x)` including the Condon–Shortley
/// phase `(-1)^m`, by upward recurrence in `ℓ` from the closed-form `P_m^m`.
pub fn assoc_legendre(ell: u32, m: u32, x: f64) -> Result<f64> {
    if m > ell {
        return Err(Error::Domain(format!("order m={m} exceeds degree ell={ell}")));
    }
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("|x| = {} > 1", x.abs())));
    }
    let s = (1.0 - x * x).sqrt();
    // P_m^m = (-1)^m (2m-1)!! s^m
    let mut pmm = 1.0;
    for j in 1..=m {
        pmm *= -((2 * j - 1) as f64) * s;
    }
    if ell == m {
        return Ok(pmm);
    }
    let mut prev = pmm;
    let mut cur = x * (2 * m + 1) as f64 * pmm;
    for l in (m + 2)..=ell {
        let next = (x * (2 * l - 1) as f64 * cur - (l + m - 1) as f64 * prev) / (l - m) as f64;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Table of orthonormalised associated Legendre values
/// `√((2ℓ+1)/(4π) (ℓ-m)!/(ℓ+m)!) P_ℓ^m(x)` for `0 ≤ m ≤ ℓ ≤ lmax`.
///
/// These are `Y_ℓ^m(θ, 0)` for `x = cos θ`. Computed with the normalised
/// recurrence so no factorial ratios are ever formed.
#[derive(Debug, Clone)]
pub struct NormalizedLegendre {
    lmax: usize,
    values: Vec<f64>,
}

#[inline]
pub(crate) fn tri_index(ell: usize, m: usize) -> usize {
    ell * (ell + 1) / 2 + m
}

impl NormalizedLegendre {
    pub fn new(lmax: usize, x: f64) -> Self {
        let mut values = vec![0.0; tri_index(lmax, lmax) + 1];
        let s = (1.0 - x * x).max(0.0).sqrt();
        let mut pmm = 1.0 / (4.0 * PI).sqrt();
        for m in 0..=lmax {
            if m > 0 {
                let mf = m as f64;
                pmm *= -((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * s;
            }
            values[tri_index(m, m)] = pmm;
            if m == lmax {
                break;
            }
            let mut prev = pmm;
            let mut cur = (2.0 * m as f64 + 3.0).sqrt() * x * pmm;
            values[tri_index(m + 1, m)] = cur;
            for l in (m + 2)..=lmax {
                let lf = l as f64;
                let mf = m as f64;
                let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
                let b = (((lf - 1.0).powi(2) - mf * mf) / (4.0 * (lf - 1.0).powi(2) - 1.0)).sqrt();
                let next = a * (x * cur - b * prev);
                prev = cur;
                cur = next;
                values[tri_index(l, m)] = cur;
            }
        }
        Self { lmax, values }
    }

    pub fn lmax(&self) -> usize {
        self.lmax
    }

    /// Value for `0 ≤ m ≤ ℓ ≤ lmax`; zero when `m > ℓ`.
    #[inline]
    pub fn get(&self, ell: usize, m: usize) -> f64 {
        if m > ell {
            0.0
        } else {
            self.values[tri_index(ell, m)]
        }
    }
}
