use crate::error::{Error, Result};

fn check_radius(r: f64) -> Result<()> {
    if (0.0..=1.0).contains(&r) {
        Ok(())
    } else {
        Err(Error::Domain(format!("radius {r} outside [0, 1]")))
    }
}

/// Jacobi `P_n^{(0, β)}(x)` for `n = 0..=kmax`.
fn jacobi_zero_alpha(kmax: usize, beta: f64, x: f64, out: &mut [f64]) {
    out[0] = 1.0;
    if kmax == 0 {
        return;
    }
    out[1] = 1.0 + 0.5 * (beta + 2.0) * (x - 1.0);
    let b2 = beta * beta;
    for n in 2..=kmax {
        let nf = n as f64;
        let s = 2.0 * nf + beta;
        let a1 = 2.0 * nf * (nf + beta) * (s - 2.0);
        let a2 = (s - 1.0) * -b2;
        let a3 = (s - 2.0) * (s - 1.0) * s;
        let a4 = 2.0 * (nf - 1.0) * (nf + beta - 1.0) * s;
        out[n] = ((a2 + a3 * x) * out[n - 1] - a4 * out[n - 2]) / a1;
    }
}

/// 3D radial Zernike polynomial `R_ℓ^k(r)` of degree `ℓ + 2k`.
///
/// Evaluated as `√(2ℓ+4k+3) r^ℓ P_k^{(0, ℓ+1/2)}(2r² - 1)`, which equals the
/// explicit alternating sum (see [`radial_coefficients`]) but avoids its
/// cancellation at large `k`.
pub fn radial_zernike(ell: usize, k: usize, r: f64) -> Result<f64> {
    check_radius(r)?;
    let mut p = vec![0.0; k + 1];
    jacobi_zero_alpha(k, ell as f64 + 0.5, 2.0 * r * r - 1.0, &mut p);
    Ok(((2 * ell + 4 * k + 3) as f64).sqrt() * r.powi(ell as i32) * p[k])
}

/// Generalised binomial `C(n + 1/2, k)` as a product of `k` factors.
fn half_binomial(n: usize, k: usize) -> f64 {
    let x = n as f64 + 0.5;
    (0..k).fold(1.0, |acc, j| acc * (x - j as f64) / (j + 1) as f64)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// Monomial coefficients of `R_ℓ^k`: entry `j` multiplies `r^{ℓ+2j}`.
pub fn radial_coefficients(ell: usize, k: usize) -> Vec<f64> {
    let norm = ((2 * ell + 4 * k + 3) as f64).sqrt();
    let mut b = vec![0.0; k + 1];
    for s in 0..=k {
        let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
        b[k - s] = norm * sign * binomial(k, s) * half_binomial(ell + 2 * k - s, k);
    }
    b
}

/// `R_ℓ^k(r)` for every `ℓ ≤ lmax`, `k ≤ kmax` at one radius.
#[derive(Debug, Clone)]
pub struct RadialTable {
    kmax: usize,
    values: Vec<f64>,
}

impl RadialTable {
    pub fn new(lmax: usize, kmax: usize, r: f64) -> Result<Self> {
        check_radius(r)?;
        let mut values = vec![0.0; (lmax + 1) * (kmax + 1)];
        let x = 2.0 * r * r - 1.0;
        let mut rl = 1.0;
        for ell in 0..=lmax {
            let row = &mut values[ell * (kmax + 1)..(ell + 1) * (kmax + 1)];
            jacobi_zero_alpha(kmax, ell as f64 + 0.5, x, row);
            for (k, v) in row.iter_mut().enumerate() {
                *v *= ((2 * ell + 4 * k + 3) as f64).sqrt() * rl;
            }
            rl *= r;
        }
        Ok(Self { kmax, values })
    }

    #[inline]
    pub fn get(&self, ell: usize, k: usize) -> f64 {
        self.values[ell * (self.kmax + 1) + k]
    }
}

/// Rising factorial `(x)_n`.
pub(crate) fn pochhammer(x: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, j| acc * (x + j as f64))
}

/// Coefficient of `R_ℓ^q` in the expansion of `r^{ℓ+2p}`, i.e. `⟨r^{ℓ+2p}, R_ℓ^q⟩_{r²}`.
pub fn chi(ell: usize, p: usize, q: usize) -> Result<f64> {
    if q > p {
        return Err(Error::Index(format!("chi requires q <= p, got q={q}, p={p}")));
    }
    let l = ell as f64;
    let num = ((2 * ell + 4 * q + 3) as f64).sqrt() * pochhammer((p - q + 1) as f64, q);
    let den = (2.0 * l + 2.0 * p as f64 + 3.0) * pochhammer(l + p as f64 + 2.5, q);
    Ok(num / den)
}
