use num_complex::Complex64;
use rayon::prelude::*;

use super::MeasurementSet;
use crate::error::Result;
use crate::recon::StageConstants;
use crate::specfun::lm_index;
use crate::zernike::CoefficientField;

/// Exact measurements of a coefficient field for `k ≤ caps.len() - 1`, `ℓ ≤ caps[k]`:
///
/// `M(k,ℓ,m) = Σ_{q=0}^{k} Σ_{s=0}^{k-q} Q_{ℓ,s}^{k,m,q} c_{ℓ+2s}^{q,m}`.
///
/// The sum is finite, so the result carries only rounding error. Coefficients
/// outside the field's bounds are zero if the field is certified and an
/// [`Error::IncompleteSupport`](crate::Error::IncompleteSupport) otherwise.
pub fn forward_measure(c: &CoefficientField, caps: &[usize]) -> Result<MeasurementSet> {
    let mut out = MeasurementSet::zeros(caps);
    for (k, &cap) in caps.iter().enumerate() {
        let consts = StageConstants::new(k, cap)?;
        let row: Vec<Complex64> = (0..(cap + 1) * (cap + 1))
            .into_par_iter()
            .map(|flat| {
                let ell = (flat as f64).sqrt() as usize;
                let ell = if (ell + 1) * (ell + 1) <= flat { ell + 1 } else { ell };
                let m = flat as i64 - (ell * ell + ell) as i64;
                let mut acc = Complex64::default();
                for q in 0..=k {
                    for s in 0..=(k - q) {
                        let coeff = c.coefficient(q, ell + 2 * s, m)?;
                        acc += coeff * consts.q(ell, m, s, q);
                    }
                }
                Ok(acc)
            })
            .collect::<Vec<Result<Complex64>>>()
            .into_iter()
            .collect::<Result<_>>()?;
        debug_assert_eq!(row.len(), lm_index(cap, cap as i64) + 1);
        out.row_mut(k).copy_from_slice(&row);
    }
    Ok(out)
}
