use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-stage degree caps `ℓ_0, …, ℓ_K`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TruncationSchedule {
    caps: Vec<usize>,
}

/// A stage pair `q < k` for which stage `q` does not reach the degrees stage `k` depends on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleViolation {
    pub q: usize,
    pub k: usize,
    pub required: usize,
    pub actual: usize,
}

impl fmt::Display for ScheduleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "stage q={} must reach ell >= {} for stage k={}, but its cap is {}",
            self.q, self.required, self.k, self.actual
        )
    }
}

impl TruncationSchedule {
    pub fn new(caps: Vec<usize>) -> Result<Self> {
        if caps.is_empty() {
            return Err(Error::Domain("a truncation schedule needs at least one stage".into()));
        }
        Ok(Self { caps })
    }

    /// `ℓ_k = ℓ_0 - step·k` for `k = 0..=kmax`.
    pub fn linear(l0: usize, step: usize, kmax: usize) -> Result<Self> {
        let caps = (0..=kmax)
            .map(|k| {
                l0.checked_sub(step * k)
                    .ok_or_else(|| Error::Domain(format!("cap for k={k} would be negative")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(caps)
    }

    pub fn caps(&self) -> &[usize] {
        &self.caps
    }

    pub fn kmax(&self) -> usize {
        self.caps.len() - 1
    }

    /// First `kmax + 1` stages.
    pub fn truncated(&self, kmax: usize) -> Self {
        Self { caps: self.caps[..=kmax.min(self.kmax())].to_vec() }
    }

    pub fn is_feasible(&self) -> bool {
        validate_schedule(self).is_empty()
    }
}

impl FromStr for TruncationSchedule {
    type Err = Error;

    /// Comma-separated caps, e.g. `"16,11,7,5,3"`.
    fn from_str(s: &str) -> Result<Self> {
        let caps = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Domain(format!("bad schedule entry {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(caps)
    }
}

impl fmt::Display for TruncationSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.caps.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// Pairs `q < k` with `ℓ_q < ℓ_k + 2(k - q)`.
///
/// Stage `k` reads `c_{ℓ+2s}^{q,m}` for `s ≤ k - q`, so every earlier stage
/// must reach `ℓ_k + 2(k - q)`.
pub fn validate_schedule(schedule: &TruncationSchedule) -> Vec<ScheduleViolation> {
    let caps = schedule.caps();
    let mut out = Vec::new();
    for k in 1..caps.len() {
        for q in 0..k {
            let required = caps[k] + 2 * (k - q);
            if caps[q] < required {
                out.push(ScheduleViolation { q, k, required, actual: caps[q] });
            }
        }
    }
    out
}
