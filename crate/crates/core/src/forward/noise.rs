use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::MeasurementSet;
use crate::error::{Error, Result};

/// Relative tolerance under which a set counts as conjugate-symmetric.
const SYMMETRY_TOL: f64 = 1e-12;

/// Adds complex Gaussian noise with `E|z|² = (level · rms)²` to every entry.
///
/// Deterministic in `seed`. A set that already satisfies
/// `M(k,ℓ,-m) = (-1)^m conj(M(k,ℓ,m))` keeps that symmetry: only `m ≥ 0`
/// entries are drawn (real noise for `m = 0`) and negative orders are mirrored.
pub fn add_noise(ms: &MeasurementSet, relative_level: f64, seed: u64) -> Result<MeasurementSet> {
    if relative_level < 0.0 || !relative_level.is_finite() {
        return Err(Error::Domain(format!("noise level must be a finite non-negative number, got {relative_level}")));
    }
    let rms = ms.rms();
    let sigma = relative_level * rms;
    if sigma == 0.0 {
        return Ok(ms.clone());
    }
    let symmetric = ms.conjugate_symmetry_defect() <= SYMMETRY_TOL * rms;
    let component = Normal::new(0.0, sigma / 2f64.sqrt()).expect("finite positive deviation");
    let real_only = Normal::new(0.0, sigma).expect("finite positive deviation");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = ms.clone();

    let keys: Vec<(usize, usize, i64)> = ms.iter().map(|(k, l, m, _)| (k, l, m)).collect();
    for (k, ell, m) in keys {
        let v = ms.get(k, ell, m).expect("key taken from the set");
        if !symmetric {
            let z = Complex64::new(component.sample(&mut rng), component.sample(&mut rng));
            out.set(k, ell, m, v + z)?;
        } else if m == 0 {
            let noisy = Complex64::new(v.re + real_only.sample(&mut rng), v.im);
            out.set(k, ell, 0, noisy)?;
        } else if m > 0 {
            let z = Complex64::new(component.sample(&mut rng), component.sample(&mut rng));
            let noisy = v + z;
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            out.set(k, ell, m, noisy)?;
            out.set(k, ell, -m, noisy.conj() * sign)?;
        }
    }
    Ok(out)
}
