use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{Entry, SpectralRows};

/// Linearised boundary data `M(k, ℓ, m) = ⟨(Fη) Y_{k+1}^0, Y_{ℓ+k+1}^m⟩`.
///
/// Row `k` holds every `(ℓ, m)` with `ℓ ≤ caps[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSet {
    rows: SpectralRows,
}

#[derive(Serialize, Deserialize)]
struct MeasurementDocument {
    #[serde(rename = "K")]
    k_max: i64,
    entries: Vec<Entry>,
}

impl MeasurementSet {
    pub fn zeros(caps: &[usize]) -> Self {
        Self { rows: SpectralRows::zeros(caps) }
    }

    /// Largest stored `k`, `None` when empty.
    pub fn kmax(&self) -> Option<usize> {
        self.rows.rows().checked_sub(1)
    }

    pub fn caps(&self) -> &[usize] {
        self.rows.caps()
    }

    pub fn contains(&self, k: usize, ell: usize, m: i64) -> bool {
        self.rows.contains(k, ell, m)
    }

    pub fn get(&self, k: usize, ell: usize, m: i64) -> Option<Complex64> {
        self.rows.get(k, ell, m)
    }

    pub fn set(&mut self, k: usize, ell: usize, m: i64, value: Complex64) -> Result<()> {
        self.rows.set(k, ell, m, value)
    }

    pub(crate) fn row_mut(&mut self, k: usize) -> &mut [Complex64] {
        self.rows.row_mut(k)
    }

    /// `(k, ℓ, m, value)` in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, i64, Complex64)> + '_ {
        self.rows.iter()
    }

    pub fn values_mut(&mut self) -> impl Iterator<Item = &mut Complex64> {
        self.rows.values_mut()
    }

    pub fn len(&self) -> usize {
        self.rows.caps().iter().map(|&l| (l + 1) * (l + 1)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Root mean square of all stored values.
    pub fn rms(&self) -> f64 {
        let n = self.len();
        if n == 0 {
            return 0.0;
        }
        (self.iter().map(|(.., v)| v.norm_sqr()).sum::<f64>() / n as f64).sqrt()
    }

    /// Data restricted to the per-`k` caps given (clipped to what is stored).
    pub fn restricted(&self, caps: &[usize]) -> Self {
        Self { rows: self.rows.restricted(caps) }
    }

    /// The first `kmax + 1` rows.
    pub fn truncated(&self, kmax: usize) -> Self {
        let caps: Vec<usize> = self.caps().iter().take(kmax + 1).copied().collect();
        self.restricted(&caps)
    }

    pub fn axpy(&self, lambda: Complex64, other: &Self) -> Result<Self> {
        Ok(Self { rows: self.rows.axpy(lambda, &other.rows)? })
    }

    /// Largest violation of `M(k,ℓ,-m) = (-1)^m conj(M(k,ℓ,m))`; zero for real perturbations.
    pub fn conjugate_symmetry_defect(&self) -> f64 {
        self.rows.conjugate_symmetry_defect()
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.caps() != other.caps() {
            return Err(Error::Index(format!(
                "shape mismatch: {:?} vs {:?}",
                self.caps(),
                other.caps()
            )));
        }
        Ok(self
            .iter()
            .zip(other.iter())
            .map(|((.., a), (.., b))| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// JSON `{"K", "entries"}` with entries sorted by `(k, ℓ, m)`.
    pub fn to_json(&self) -> Result<String> {
        crate::json::to_string(&MeasurementDocument {
            k_max: self.kmax().map_or(-1, |k| k as i64),
            entries: self.rows.entries(),
        })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: MeasurementDocument = crate::json::from_str(s)?;
        if doc.k_max < 0 && doc.entries.is_empty() {
            return Ok(Self::zeros(&[]));
        }
        Ok(Self { rows: SpectralRows::from_entries(doc.k_max, &doc.entries)? })
    }
}
