use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::specfun::{gaunt, TripleIndex};
use crate::zernike::{chi, pochhammer};

#[inline]
fn sign_m_plus_one(m: i64) -> f64 {
    if (m + 1).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `τ_{ℓ,ℓ'}^k = (ℓ+2k+2-ℓ')(ℓ+2k+3+ℓ') / (2(k+1)(ℓ+k+1))`.
pub fn tau(ell: usize, ell_prime: usize, k: usize) -> f64 {
    let (l, lp, k) = (ell as f64, ell_prime as f64, k as f64);
    (l + 2.0 * k + 2.0 - lp) * (l + 2.0 * k + 3.0 + lp) / (2.0 * (k + 1.0) * (l + k + 1.0))
}

/// `τ` before simplification: one plus the surface-gradient eigenvalue
/// combination divided by `(k+1)(ℓ+k+1)`.
pub fn tau_unsimplified(ell: usize, ell_prime: usize, k: usize) -> f64 {
    let (l, lp, k) = (ell as f64, ell_prime as f64, k as f64);
    let a = k + 1.0;
    let b = l + k + 1.0;
    1.0 + (a * (a + 1.0) + b * (b + 1.0) - lp * (lp + 1.0)) / (2.0 * a * b)
}

fn stage_gaunt(ell: usize, s: usize, k: usize, m: i64) -> Result<f64> {
    let idx = TripleIndex::new(
        [(k + 1) as u32, (ell + k + 1) as u32, (ell + 2 * s) as u32],
        [0, -m as i32, m as i32],
    )?;
    gaunt(&idx)
}

fn check_order(ell: usize, m: i64) -> Result<()> {
    if m.unsigned_abs() as usize > ell {
        return Err(Error::Index(format!("|m| = {} exceeds ell = {ell}", m.unsigned_abs())));
    }
    Ok(())
}

/// `D_{ℓ,s}^{k,m} = (-1)^{m+1} τ_{ℓ,ℓ+2s}^k G_{k+1,ℓ+k+1,ℓ+2s}^{0,-m,m}`.
pub fn big_d(ell: usize, s: usize, k: usize, m: i64) -> Result<f64> {
    check_order(ell, m)?;
    if s > k {
        return Err(Error::Index(format!("D requires s <= k, got s={s}, k={k}")));
    }
    Ok(sign_m_plus_one(m) * tau(ell, ell + 2 * s, k) * stage_gaunt(ell, s, k, m)?)
}

/// The Gaunt-free part of `Q_{ℓ,s}^{k,m,q}`, including the sign `(-1)^{m+1}`.
fn q_prefactor(ell: usize, s: usize, k: usize, m: i64, q: usize) -> f64 {
    let num = ((2 * ell + 4 * q + 4 * s + 3) as f64).sqrt()
        * (k - s + 1) as f64
        * pochhammer((k - q - s + 1) as f64, q);
    let den = ((k + 1) * (ell + k + 1)) as f64 * pochhammer((ell + k + s) as f64 + 2.5, q);
    sign_m_plus_one(m) * num / den
}

fn check_q(ell: usize, s: usize, k: usize, m: i64, q: usize) -> Result<()> {
    check_order(ell, m)?;
    if s > k || q > k - s {
        return Err(Error::Index(format!("Q requires q <= k - s, got q={q}, s={s}, k={k}")));
    }
    Ok(())
}

/// `Q_{ℓ,s}^{k,m,q}` in closed form.
pub fn big_q(ell: usize, s: usize, k: usize, m: i64, q: usize) -> Result<f64> {
    check_q(ell, s, k, m, q)?;
    Ok(q_prefactor(ell, s, k, m, q) * stage_gaunt(ell, s, k, m)?)
}

/// `Q_{ℓ,s}^{k,m,q}` as the product `χ_{ℓ+2s}^{k-s,q} D_{ℓ,s}^{k,m}`.
pub fn big_q_factored(ell: usize, s: usize, k: usize, m: i64, q: usize) -> Result<f64> {
    check_q(ell, s, k, m, q)?;
    Ok(chi(ell + 2 * s, k - s, q)? * big_d(ell, s, k, m)?)
}

/// Every `Q_{ℓ,s}^{k,m,q}` of one stage `k` for `ℓ ≤ lmax`, computed once.
///
/// Layout per `(ℓ, m)`: `s` outer, `q = 0..=k-s` inner.
#[derive(Debug, Clone)]
pub struct StageConstants {
    k: usize,
    lmax: usize,
    values: Vec<Vec<f64>>,
}

impl StageConstants {
    pub fn new(k: usize, lmax: usize) -> Result<Self> {
        let per_lm = (k + 1) * (k + 2) / 2;
        let values = (0..(lmax + 1) * (lmax + 1))
            .into_par_iter()
            .map(|flat| {
                let ell = (flat as f64).sqrt() as usize;
                let ell = if (ell + 1) * (ell + 1) <= flat { ell + 1 } else { ell };
                let m = flat as i64 - (ell * ell + ell) as i64;
                let mut row = Vec::with_capacity(per_lm);
                for s in 0..=k {
                    let g = stage_gaunt(ell, s, k, m)?;
                    for q in 0..=(k - s) {
                        row.push(q_prefactor(ell, s, k, m, q) * g);
                    }
                }
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { k, lmax, values })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn lmax(&self) -> usize {
        self.lmax
    }

    #[inline]
    pub fn q(&self, ell: usize, m: i64, s: usize, q: usize) -> f64 {
        let row = &self.values[crate::specfun::lm_index(ell, m)];
        // offset of block s: Σ_{s'<s} (k - s' + 1)
        let offset = s * (self.k + 1) - s * (s.saturating_sub(1)) / 2;
        row[offset + q]
    }

    /// The divisor `Q_{ℓ,0}^{k,m,k}`.
    #[inline]
    pub fn divisor(&self, ell: usize, m: i64) -> f64 {
        self.q(ell, m, 0, self.k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn tau_examples() {
        assert_eq!(tau(0, 0, 0), 3.0);
        for ell in 0..10 {
            for k in 0..6 {
                assert_eq!(tau(ell, ell + 2 * k + 2, k), 0.0);
            }
        }
    }

    #[test]
    fn d_sign_for_zero_order() {
        for (ell, s, k) in [(0, 0, 0), (3, 1, 2), (5, 2, 4)] {
            let g = stage_gaunt(ell, s, k, 0).unwrap();
            assert_eq!(big_d(ell, s, k, 0).unwrap(), -tau(ell, ell + 2 * s, k) * g);
        }
    }

    #[test]
    fn d_nonzero_at_s_zero() {
        for ell in 0..=12 {
            for k in 0..=6 {
                for m in -(ell as i64)..=ell as i64 {
                    assert!(big_d(ell, 0, k, m).unwrap() != 0.0, "{ell} {k} {m}");
                }
            }
        }
    }

    #[test]
    fn index_errors() {
        assert!(big_q(2, 1, 2, 0, 2).is_err());
        assert!(big_q(2, 3, 2, 0, 0).is_err());
        assert!(big_q(1, 0, 2, 2, 0).is_err());
        assert!(big_d(1, 2, 1, 0).is_err());
    }

    #[test]
    fn stage_table_matches_direct() {
        let t = StageConstants::new(3, 5).unwrap();
        for ell in 0..=5 {
            for m in -(ell as i64)..=ell as i64 {
                for s in 0..=3 {
                    for q in 0..=(3 - s) {
                        assert_eq!(t.q(ell, m, s, q), big_q(ell, s, 3, m, q).unwrap());
                    }
                }
                assert_eq!(t.divisor(ell, m), big_q(ell, 0, 3, m, 3).unwrap());
            }
        }
    }

    proptest! {
        #[test]
        fn tau_forms_agree(ell in 0usize..40, lp in 0usize..60, k in 0usize..12) {
            let a = tau(ell, lp, k);
            let b = tau_unsimplified(ell, lp, k);
            prop_assert!((a - b).abs() <= 1e-13 * a.abs().max(1.0));
        }

        #[test]
        fn q_closed_form_equals_factored(ell in 0usize..16, k in 0usize..8, s_frac in 0.0f64..1.0, q_frac in 0.0f64..1.0, m_frac in -1.0f64..1.0) {
            let s = ((k + 1) as f64 * s_frac) as usize;
            let s = s.min(k);
            let q = (((k - s + 1) as f64 * q_frac) as usize).min(k - s);
            let m = (m_frac * ell as f64).round() as i64;
            let a = big_q(ell, s, k, m, q).unwrap();
            let b = big_q_factored(ell, s, k, m, q).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300) + 1e-300, "{} vs {}", a, b);
        }
    }
}
