use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{Entry, SpectralRows};

/// Index `(k, ℓ, m)` of the ball basis function `ψ_ℓ^{k,m}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ZernikeIndex {
    pub k: usize,
    pub ell: usize,
    pub m: i64,
}

impl ZernikeIndex {
    pub fn new(k: usize, ell: usize, m: i64) -> Result<Self> {
        if m.unsigned_abs() as usize > ell {
            return Err(Error::Index(format!("|m| = {} exceeds ell = {ell}", m.unsigned_abs())));
        }
        Ok(Self { k, ell, m })
    }
}

/// Coefficients `c_ℓ^{k,m}` of a perturbation in the ball basis.
///
/// Stored densely: row `k` holds every `(ℓ, m)` with `ℓ ≤ caps[k]`. When the
/// field is *certified* the indices outside those bounds are exact zeros;
/// otherwise (a quadrature projection of a function with infinite expansion)
/// they are unknown, and consumers that need them must fail.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientField {
    rows: SpectralRows,
    certified: bool,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct FieldDocument {
    pub kmax: i64,
    pub entries: Vec<Entry>,
}

impl CoefficientField {
    /// All-zero certified field with degree cap `caps[k]` for `k = 0..caps.len()`.
    pub fn zeros(caps: &[usize]) -> Self {
        Self { rows: SpectralRows::zeros(caps), certified: true }
    }

    /// Certified field holding a single unit coefficient.
    pub fn basis(idx: ZernikeIndex) -> Self {
        let mut caps = vec![0; idx.k + 1];
        caps[idx.k] = idx.ell;
        let mut f = Self::zeros(&caps);
        f.rows
            .set(idx.k, idx.ell, idx.m, Complex64::new(1.0, 0.0))
            .expect("index lies within its own bounds");
        f
    }

    /// Largest stored radial index, `None` for a field with no rows.
    pub fn kmax(&self) -> Option<usize> {
        self.rows.rows().checked_sub(1)
    }

    pub fn caps(&self) -> &[usize] {
        self.rows.caps()
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    pub fn with_certified(mut self, certified: bool) -> Self {
        self.certified = certified;
        self
    }

    pub fn contains(&self, k: usize, ell: usize, m: i64) -> bool {
        self.rows.contains(k, ell, m)
    }

    /// Stored value, `None` outside the bounds.
    pub fn get(&self, k: usize, ell: usize, m: i64) -> Option<Complex64> {
        self.rows.get(k, ell, m)
    }

    /// Value with the certified-zero convention applied.
    pub fn coefficient(&self, k: usize, ell: usize, m: i64) -> Result<Complex64> {
        match self.rows.get(k, ell, m) {
            Some(v) => Ok(v),
            None if self.certified => Ok(Complex64::default()),
            None => Err(Error::IncompleteSupport { k, ell, m }),
        }
    }

    pub fn set(&mut self, k: usize, ell: usize, m: i64, value: Complex64) -> Result<()> {
        self.rows.set(k, ell, m, value)
    }

    pub fn iter(&self) -> impl Iterator<Item = (ZernikeIndex, Complex64)> + '_ {
        self.rows.iter().map(|(k, ell, m, v)| (ZernikeIndex { k, ell, m }, v))
    }

    pub fn values_mut(&mut self) -> impl Iterator<Item = &mut Complex64> {
        self.rows.values_mut()
    }

    pub(crate) fn row(&self, k: usize) -> &[Complex64] {
        self.rows.row(k)
    }

    pub(crate) fn row_mut(&mut self, k: usize) -> &mut [Complex64] {
        self.rows.row_mut(k)
    }

    pub fn len(&self) -> usize {
        self.rows.caps().iter().map(|&l| (l + 1) * (l + 1)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `Σ_{ℓ,m} |c_ℓ^{k,m}|²`, the squared L² norm of the projection `η_k`.
    pub fn norm_sq_k(&self, k: usize) -> f64 {
        if k >= self.rows.rows() {
            return 0.0;
        }
        self.rows.row(k).iter().map(|c| c.norm_sqr()).sum()
    }

    /// `self + λ·other`; both fields must share bounds.
    pub fn axpy(&self, lambda: Complex64, other: &Self) -> Result<Self> {
        Ok(Self {
            rows: self.rows.axpy(lambda, &other.rows)?,
            certified: self.certified && other.certified,
        })
    }

    /// Largest violation of `c_ℓ^{k,-m} = (-1)^m conj(c_ℓ^{k,m})`, zero for a real-valued η.
    pub fn conjugate_symmetry_defect(&self) -> f64 {
        self.rows.conjugate_symmetry_defect()
    }

    /// Sub-field on the given per-`k` caps (clipped to the stored bounds).
    pub fn restricted(&self, caps: &[usize]) -> Self {
        Self { rows: self.rows.restricted(caps), certified: self.certified }
    }

    /// Largest `|a - b|` over the union of both supports (missing entries count as zero).
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let a = self.iter().map(|(i, v)| (v - other.get(i.k, i.ell, i.m).unwrap_or_default()).norm());
        let b = other
            .iter()
            .filter(|(i, _)| !self.contains(i.k, i.ell, i.m))
            .map(|(_, v)| v.norm());
        a.chain(b).fold(0.0, f64::max)
    }

    /// JSON document `{"kmax", "entries"}`, entries sorted by `(k, ℓ, m)`.
    pub fn to_json(&self) -> Result<String> {
        crate::json::to_string(&self.document())
    }

    pub(crate) fn document(&self) -> FieldDocument {
        FieldDocument {
            kmax: self.kmax().map_or(-1, |k| k as i64),
            entries: self.rows.entries(),
        }
    }

    /// Parses a field document. The file is taken to be the whole field, so the result is certified.
    pub fn from_json(s: &str) -> Result<Self> {
        let doc: FieldDocument = crate::json::from_str(s)?;
        Self::from_document(doc)
    }

    pub(crate) fn from_document(doc: FieldDocument) -> Result<Self> {
        if doc.kmax < 0 && doc.entries.is_empty() {
            return Ok(Self::zeros(&[]));
        }
        Ok(Self { rows: SpectralRows::from_entries(doc.kmax, &doc.entries)?, certified: true })
    }
}
