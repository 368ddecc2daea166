//! Wigner 3j symbols and Gaunt coefficients in exact arithmetic.
//!
//! A 3j symbol is `±√P · S` with `P` and `S` rational (Racah's single-sum
//! formula), so its square is an exact rational. Gaunt coefficients combine
//! two such squares before a single final square root and division by
//! `√(4π)`, giving values correct to a couple of ulps.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default largest degree accepted by the exact 3j evaluation.
pub const DEFAULT_DEGREE_CAP: u32 = 128;

/// Three `(ℓ_j, m_j)` columns with `|m_j| ≤ ℓ_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TripleIndex {
    pub ell: [u32; 3],
    pub m: [i32; 3],
}

impl TripleIndex {
    pub fn new(ell: [u32; 3], m: [i32; 3]) -> Result<Self> {
        for j in 0..3 {
            if m[j].unsigned_abs() > ell[j] {
                return Err(Error::Index(format!(
                    "column {j}: |m| = {} exceeds ell = {}",
                    m[j].unsigned_abs(),
                    ell[j]
                )));
            }
        }
        Ok(Self { ell, m })
    }

    /// Column permutation `perm`, so that column `j` of the result is column `perm[j]` of `self`.
    pub fn permuted(&self, perm: [usize; 3]) -> Self {
        Self {
            ell: [self.ell[perm[0]], self.ell[perm[1]], self.ell[perm[2]]],
            m: [self.m[perm[0]], self.m[perm[1]], self.m[perm[2]]],
        }
    }

    /// Same degrees with all orders zero.
    pub fn zero_orders(&self) -> Self {
        Self { ell: self.ell, m: [0; 3] }
    }

    fn triangle(&self) -> bool {
        let [a, b, c] = self.ell.map(i64::from);
        (a - b).abs() <= c && c <= a + b
    }
}

/// Selection rules for a nonzero Gaunt coefficient: triangle condition,
/// vanishing order sum and even degree sum.
pub fn gaunt_selection(idx: &TripleIndex) -> bool {
    idx.triangle() && idx.m.iter().map(|&m| i64::from(m)).sum::<i64>() == 0 && idx.ell.iter().sum::<u32>() % 2 == 0
}

/// A 3j symbol held as `sign · √square`.
#[derive(Debug, Clone, PartialEq)]
pub struct Wigner3jExact {
    pub sign: i8,
    pub square: BigRational,
}

impl Wigner3jExact {
    fn zero() -> Self {
        Self { sign: 0, square: BigRational::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            return 0.0;
        }
        f64::from(self.sign) * ratio_to_f64(&self.square).sqrt()
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn factorials() -> &'static [BigInt] {
    static TABLE: OnceLock<Vec<BigInt>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = 3 * DEFAULT_DEGREE_CAP as usize + 2;
        let mut v = Vec::with_capacity(n + 1);
        let mut f = BigInt::one();
        v.push(f.clone());
        for i in 1..=n {
            f *= i;
            v.push(f.clone());
        }
        v
    })
}

fn fact(n: i64) -> BigInt {
    let table = factorials();
    match table.get(n as usize) {
        Some(f) => f.clone(),
        None => (1..=n).fold(BigInt::one(), |acc, i| acc * i),
    }
}

/// Exact 3j symbol with the default degree cap.
pub fn wigner3j_exact(idx: &TripleIndex) -> Result<Wigner3jExact> {
    wigner3j_exact_capped(idx, DEFAULT_DEGREE_CAP)
}

pub fn wigner3j_exact_capped(idx: &TripleIndex, cap: u32) -> Result<Wigner3jExact> {
    if let Some(&degree) = idx.ell.iter().find(|&&l| l > cap) {
        return Err(Error::DegreeOverflow { degree, cap });
    }
    let [j1, j2, j3] = idx.ell.map(i64::from);
    let [m1, m2, m3] = idx.m.map(i64::from);
    if m1 + m2 + m3 != 0 || !idx.triangle() || m1.abs() > j1 || m2.abs() > j2 || m3.abs() > j3 {
        return Ok(Wigner3jExact::zero());
    }

    let tmin = 0.max(j2 - j3 - m1).max(j1 - j3 + m2);
    let tmax = (j1 + j2 - j3).min(j1 - m1).min(j2 + m2);
    let mut sum = BigRational::zero();
    for t in tmin..=tmax {
        let den = fact(t)
            * fact(j3 - j2 + t + m1)
            * fact(j3 - j1 + t - m2)
            * fact(j1 + j2 - j3 - t)
            * fact(j1 - t - m1)
            * fact(j2 - t + m2);
        let term = BigRational::new(BigInt::one(), den);
        if t % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return Ok(Wigner3jExact::zero());
    }

    let triangle = BigRational::new(
        fact(j1 + j2 - j3) * fact(j1 - j2 + j3) * fact(-j1 + j2 + j3),
        fact(j1 + j2 + j3 + 1),
    );
    let moments = fact(j1 + m1) * fact(j1 - m1) * fact(j2 + m2) * fact(j2 - m2) * fact(j3 + m3) * fact(j3 - m3);
    let square = triangle * BigRational::from_integer(moments) * &sum * &sum;

    let phase: i8 = if (j1 - j2 - m3).rem_euclid(2) == 0 { 1 } else { -1 };
    let sign = if sum.is_negative() { -phase } else { phase };
    Ok(Wigner3jExact { sign, square })
}

/// Wigner 3j symbol as a float.
pub fn wigner3j(idx: &TripleIndex) -> Result<f64> {
    Ok(wigner3j_exact(idx)?.to_f64())
}

/// Gaunt coefficient `∫ Y_{ℓ1}^{m1} Y_{ℓ2}^{m2} Y_{ℓ3}^{m3} dS`.
///
/// Exactly `0.0` whenever [`gaunt_selection`] fails.
pub fn gaunt(idx: &TripleIndex) -> Result<f64> {
    gaunt_capped(idx, DEFAULT_DEGREE_CAP)
}

pub fn gaunt_capped(idx: &TripleIndex, cap: u32) -> Result<f64> {
    if let Some(&degree) = idx.ell.iter().find(|&&l| l > cap) {
        return Err(Error::DegreeOverflow { degree, cap });
    }
    if !gaunt_selection(idx) {
        return Ok(0.0);
    }
    let parity = wigner3j_exact_capped(&idx.zero_orders(), cap)?;
    let coupling = wigner3j_exact_capped(idx, cap)?;
    if parity.is_zero() || coupling.is_zero() {
        return Ok(0.0);
    }
    let dims: u64 = idx.ell.iter().map(|&l| 2 * u64::from(l) + 1).product();
    let square = BigRational::from_integer(BigInt::from(dims)) * parity.square * coupling.square;
    let sign = f64::from(parity.sign * coupling.sign);
    Ok(sign * ratio_to_f64(&square).sqrt() / (4.0 * PI).sqrt())
}
