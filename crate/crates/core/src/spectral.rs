//! Dense storage for complex values indexed by `(k, ℓ, m)` with a per-`k` degree cap.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{lm_count, lm_index};

#[derive(Debug, Clone, PartialEq, Default)]
pub(crate) struct SpectralRows {
    caps: Vec<usize>,
    data: Vec<Vec<Complex64>>,
}

/// One `(k, ℓ, m)` value in the JSON documents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub k: usize,
    pub ell: usize,
    pub m: i64,
    pub re: f64,
    pub im: f64,
}

impl SpectralRows {
    pub fn zeros(caps: &[usize]) -> Self {
        Self {
            caps: caps.to_vec(),
            data: caps.iter().map(|&l| vec![Complex64::default(); lm_count(l)]).collect(),
        }
    }

    pub fn caps(&self) -> &[usize] {
        &self.caps
    }

    pub fn rows(&self) -> usize {
        self.caps.len()
    }

    #[inline]
    pub fn contains(&self, k: usize, ell: usize, m: i64) -> bool {
        k < self.caps.len() && ell <= self.caps[k] && m.unsigned_abs() as usize <= ell
    }

    #[inline]
    pub fn get(&self, k: usize, ell: usize, m: i64) -> Option<Complex64> {
        self.contains(k, ell, m).then(|| self.data[k][lm_index(ell, m)])
    }

    pub fn set(&mut self, k: usize, ell: usize, m: i64, value: Complex64) -> Result<()> {
        if !self.contains(k, ell, m) {
            return Err(Error::Index(format!(
                "(k={k}, ell={ell}, m={m}) lies outside the stored bounds {:?}",
                self.caps
            )));
        }
        self.data[k][lm_index(ell, m)] = value;
        Ok(())
    }

    pub fn row(&self, k: usize) -> &[Complex64] {
        &self.data[k]
    }

    pub fn row_mut(&mut self, k: usize) -> &mut [Complex64] {
        &mut self.data[k]
    }

    /// All stored values in `(k, ℓ, m)` lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, i64, Complex64)> + '_ {
        self.caps.iter().enumerate().flat_map(move |(k, &cap)| {
            (0..=cap).flat_map(move |ell| {
                (-(ell as i64)..=ell as i64).map(move |m| (k, ell, m, self.data[k][lm_index(ell, m)]))
            })
        })
    }

    pub fn values_mut(&mut self) -> impl Iterator<Item = &mut Complex64> {
        self.data.iter_mut().flatten()
    }

    pub fn entries(&self) -> Vec<Entry> {
        self.iter()
            .map(|(k, ell, m, v)| Entry { k, ell, m, re: v.re, im: v.im })
            .collect()
    }

    /// Rebuilds dense rows from a sparse entry list; row `k`'s cap is its largest listed degree.
    pub fn from_entries(kmax: i64, entries: &[Entry]) -> Result<Self> {
        if kmax < 0 {
            return Err(Error::Format(format!("negative kmax {kmax}")));
        }
        let kmax = kmax as usize;
        let mut caps = vec![0usize; kmax + 1];
        for e in entries {
            if e.k > kmax {
                return Err(Error::Format(format!("entry k={} exceeds kmax={kmax}", e.k)));
            }
            if e.m.unsigned_abs() as usize > e.ell {
                return Err(Error::Format(format!("entry (ell={}, m={}) has |m| > ell", e.ell, e.m)));
            }
            caps[e.k] = caps[e.k].max(e.ell);
        }
        let mut rows = Self::zeros(&caps);
        for e in entries {
            rows.set(e.k, e.ell, e.m, Complex64::new(e.re, e.im))?;
        }
        Ok(rows)
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.caps == other.caps
    }

    /// `self + λ·other` on a common shape.
    pub fn axpy(&self, lambda: Complex64, other: &Self) -> Result<Self> {
        if !self.same_shape(other) {
            return Err(Error::Index(format!(
                "shape mismatch: {:?} vs {:?}",
                self.caps, other.caps
            )));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().flatten().zip(other.data.iter().flatten()) {
            *a += lambda * b;
        }
        Ok(out)
    }

    /// Largest `|v(k,ℓ,-m) - (-1)^m conj(v(k,ℓ,m))|` over stored pairs.
    pub fn conjugate_symmetry_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (k, &cap) in self.caps.iter().enumerate() {
            for ell in 0..=cap {
                for m in 0..=ell as i64 {
                    let a = self.data[k][lm_index(ell, m)];
                    let b = self.data[k][lm_index(ell, -m)];
                    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                    worst = worst.max((b - a.conj() * sign).norm());
                }
            }
        }
        worst
    }

    /// Copy restricted to the first `rows` rows and to degree caps `caps` (clipped to stored bounds).
    pub fn restricted(&self, caps: &[usize]) -> Self {
        let caps: Vec<usize> = caps
            .iter()
            .enumerate()
            .take(self.caps.len())
            .map(|(k, &c)| c.min(self.caps[k]))
            .collect();
        let mut out = Self::zeros(&caps);
        for (k, &cap) in caps.iter().enumerate() {
            let n = lm_count(cap);
            out.data[k][..n].copy_from_slice(&self.data[k][..n]);
        }
        out
    }
}
