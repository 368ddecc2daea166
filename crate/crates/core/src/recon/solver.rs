use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::constants::StageConstants;
use super::schedule::{validate_schedule, TruncationSchedule};
use crate::error::{Error, Result};
use crate::forward::MeasurementSet;
use crate::specfun::lm_index;
use crate::zernike::{CoefficientField, FieldDocument};

/// Smallest admissible `|Q_{ℓ,0}^{k,m,k}|`. The divisor is provably nonzero,
/// so anything below this means the constants are wrong.
pub const DIVISOR_TRIPWIRE: f64 = 1e-14;

/// Processing order of the `(ℓ, m)` coefficients inside one stage.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum StageOrder {
    /// Highest degree first.
    #[default]
    DegreeDescending,
    DegreeAscending,
    /// Explicit permutation of the flat `(ℓ, m)` positions, applied to every stage
    /// (entries beyond a stage's size are skipped, missing ones appended).
    Custom(Vec<usize>),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReconOptions {
    /// Substitute zero for dependencies an infeasible schedule does not provide,
    /// instead of failing. The report is then flagged as regularised.
    pub zero_fill: bool,
    pub order: StageOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StageDiagnostics {
    pub k: usize,
    /// Largest `|Σ_{q<k} Σ_s Q c|` subtracted from a measurement in this stage.
    pub max_inner_sum_magnitude: f64,
}

/// Output of [`reconstruct`].
#[derive(Debug, Clone, PartialEq)]
pub struct ReconReport {
    pub recovered: CoefficientField,
    pub schedule: TruncationSchedule,
    /// Smallest `|Q_{ℓ,0}^{k,m,k}|` divided by.
    pub min_divisor: f64,
    pub stages: Vec<StageDiagnostics>,
    /// Set when zero-fill substituted missing dependencies.
    pub regularised: bool,
}

#[derive(Serialize, Deserialize)]
struct Diagnostics {
    min_divisor: f64,
    schedule: Vec<usize>,
    stages: Vec<StageDiagnostics>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    regularised: bool,
}

#[derive(Serialize, Deserialize)]
struct ReportDocument {
    #[serde(flatten)]
    field: FieldDocument,
    diagnostics: Diagnostics,
}

impl ReconReport {
    /// Coefficient-field JSON plus a `"diagnostics"` object.
    pub fn to_json(&self) -> Result<String> {
        crate::json::to_string(&ReportDocument {
            field: self.recovered.document(),
            diagnostics: Diagnostics {
                min_divisor: self.min_divisor,
                schedule: self.schedule.caps().to_vec(),
                stages: self.stages.clone(),
                regularised: self.regularised,
            },
        })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: ReportDocument = crate::json::from_str(s)?;
        let schedule = TruncationSchedule::new(doc.diagnostics.schedule)?;
        let mut recovered = CoefficientField::from_document(doc.field)?;
        // Rows are rebuilt from the listed entries; pad to the schedule's bounds.
        if recovered.caps() != schedule.caps() {
            let mut padded = CoefficientField::zeros(schedule.caps());
            for (i, v) in recovered.iter() {
                padded.set(i.k, i.ell, i.m, v)?;
            }
            recovered = padded;
        }
        Ok(Self {
            recovered,
            schedule,
            min_divisor: doc.diagnostics.min_divisor,
            stages: doc.diagnostics.stages,
            regularised: doc.diagnostics.regularised,
        })
    }
}

fn stage_positions(cap: usize, order: &StageOrder) -> Vec<usize> {
    let n = (cap + 1) * (cap + 1);
    match order {
        StageOrder::DegreeAscending => (0..n).collect(),
        StageOrder::DegreeDescending => (0..=cap)
            .rev()
            .flat_map(|ell| (-(ell as i64)..=ell as i64).map(move |m| lm_index(ell, m)))
            .collect(),
        StageOrder::Custom(perm) => {
            let mut seen = vec![false; n];
            let mut out: Vec<usize> = perm
                .iter()
                .copied()
                .filter(|&p| p < n && !std::mem::replace(&mut seen[p], true))
                .collect();
            out.extend((0..n).filter(|&p| !seen[p]));
            out
        }
    }
}

fn split_flat(flat: usize) -> (usize, i64) {
    let ell = (flat as f64).sqrt() as usize;
    let ell = if (ell + 1) * (ell + 1) <= flat { ell + 1 } else { ell };
    (ell, flat as i64 - (ell * ell + ell) as i64)
}

/// Recovers `c_ℓ^{k,m}` for `k ≤ K`, `ℓ ≤ ℓ_k` by forward substitution:
///
/// `c_ℓ^{k,m} = (M(k,ℓ,m) - Σ_{q<k} Σ_{s=0}^{k-q} Q_{ℓ,s}^{k,m,q} c_{ℓ+2s}^{q,m}) / Q_{ℓ,0}^{k,m,k}`.
///
/// Fails on an infeasible schedule, on the first missing measurement in
/// `(k, ℓ, m)` order, and on a divisor below [`DIVISOR_TRIPWIRE`].
pub fn reconstruct(ms: &MeasurementSet, schedule: &TruncationSchedule) -> Result<ReconReport> {
    reconstruct_with(ms, schedule, &ReconOptions::default())
}

pub fn reconstruct_with(ms: &MeasurementSet, schedule: &TruncationSchedule, opts: &ReconOptions) -> Result<ReconReport> {
    let violations = validate_schedule(schedule);
    if !violations.is_empty() && !opts.zero_fill {
        return Err(Error::InfeasibleSchedule(violations));
    }
    for (k, &cap) in schedule.caps().iter().enumerate() {
        for ell in 0..=cap {
            for m in -(ell as i64)..=ell as i64 {
                if !ms.contains(k, ell, m) {
                    return Err(Error::MissingMeasurement { k, ell, m });
                }
            }
        }
    }

    let caps = schedule.caps();
    let mut recovered = CoefficientField::zeros(caps);
    let mut stages = Vec::with_capacity(caps.len());
    let mut min_divisor = f64::INFINITY;

    for (k, &cap) in caps.iter().enumerate() {
        let consts = StageConstants::new(k, cap)?;
        let positions = stage_positions(cap, &opts.order);
        let previous = &recovered;
        let solved: Vec<(usize, Complex64, f64, f64)> = positions
            .par_iter()
            .map(|&flat| {
                let (ell, m) = split_flat(flat);
                let mut inner = Complex64::default();
                for q in 0..k {
                    for s in 0..=(k - q) {
                        // Infeasible dependencies only survive validation in zero-fill mode.
                        if let Some(c) = previous.get(q, ell + 2 * s, m) {
                            inner += c * consts.q(ell, m, s, q);
                        }
                    }
                }
                let divisor = consts.divisor(ell, m);
                if divisor.abs() < DIVISOR_TRIPWIRE {
                    return Err(Error::DivisorUnderflow {
                        k,
                        ell,
                        m,
                        value: divisor.abs(),
                        threshold: DIVISOR_TRIPWIRE,
                    });
                }
                let data = ms.get(k, ell, m).expect("presence checked above");
                Ok((flat, (data - inner) / divisor, inner.norm(), divisor.abs()))
            })
            .collect::<Vec<Result<_>>>()
            .into_iter()
            .collect::<Result<_>>()?;

        let mut max_inner: f64 = 0.0;
        let row = recovered.row_mut(k);
        for (flat, c, inner, div) in solved {
            row[flat] = c;
            max_inner = max_inner.max(inner);
            min_divisor = min_divisor.min(div);
        }
        stages.push(StageDiagnostics { k, max_inner_sum_magnitude: max_inner });
    }

    Ok(ReconReport {
        recovered,
        schedule: schedule.clone(),
        min_divisor,
        stages,
        regularised: !violations.is_empty(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::forward_measure;

    fn sample_field(caps: &[usize], seed: u64) -> CoefficientField {
        let mut f = CoefficientField::zeros(caps);
        let mut x = seed as f64 + 0.5;
        for v in f.values_mut() {
            x = (x * 12.9898).sin() * 43758.5453;
            let a = x.fract();
            x = (x * 78.233).sin() * 12345.678;
            *v = Complex64::new(a, x.fract());
        }
        f
    }

    #[test]
    fn stage_zero_is_a_plain_division() {
        let caps = [4];
        let c = sample_field(&caps, 3);
        let ms = forward_measure(&c, &caps).unwrap();
        let rep = reconstruct(&ms, &TruncationSchedule::new(vec![4]).unwrap()).unwrap();
        for ell in 0..=4 {
            for m in -(ell as i64)..=ell as i64 {
                let q = super::super::big_q(ell, 0, 0, m, 0).unwrap();
                let want = ms.get(0, ell, m).unwrap() / q;
                assert_eq!(rep.recovered.get(0, ell, m).unwrap(), want);
            }
        }
        assert_eq!(rep.stages[0].max_inner_sum_magnitude, 0.0);
    }

    #[test]
    fn missing_measurement_named() {
        let ms = MeasurementSet::zeros(&[3, 1]);
        let s = TruncationSchedule::new(vec![4, 2]).unwrap();
        assert_eq!(
            reconstruct(&ms, &s).unwrap_err(),
            Error::MissingMeasurement { k: 0, ell: 4, m: -4 }
        );
        let ms = MeasurementSet::zeros(&[4, 2]);
        let s = TruncationSchedule::new(vec![4, 2, 0]).unwrap();
        assert_eq!(
            reconstruct(&ms, &s).unwrap_err(),
            Error::MissingMeasurement { k: 2, ell: 0, m: 0 }
        );
    }

    #[test]
    fn infeasible_schedule_rejected_unless_zero_fill() {
        let ms = MeasurementSet::zeros(&[4, 4]);
        let s = TruncationSchedule::new(vec![4, 4]).unwrap();
        assert!(matches!(reconstruct(&ms, &s), Err(Error::InfeasibleSchedule(v)) if v.len() == 1));
        let opts = ReconOptions { zero_fill: true, ..Default::default() };
        let rep = reconstruct_with(&ms, &s, &opts).unwrap();
        assert!(rep.regularised);
    }

    #[test]
    fn processing_order_does_not_change_bits() {
        let caps = [8, 6, 4];
        let c = sample_field(&caps, 11);
        let ms = forward_measure(&c, &caps).unwrap();
        let s = TruncationSchedule::new(caps.to_vec()).unwrap();
        let base = reconstruct(&ms, &s).unwrap();
        let asc = reconstruct_with(&ms, &s, &ReconOptions { order: StageOrder::DegreeAscending, ..Default::default() }).unwrap();
        let perm: Vec<usize> = (0..81).map(|i| (i * 37) % 81).collect();
        let custom = reconstruct_with(&ms, &s, &ReconOptions { order: StageOrder::Custom(perm), ..Default::default() }).unwrap();
        assert_eq!(base, asc);
        assert_eq!(base, custom);
    }

    #[test]
    fn report_json_round_trip() {
        let caps = [3, 1];
        let c = sample_field(&caps, 5);
        let ms = forward_measure(&c, &caps).unwrap();
        let rep = reconstruct(&ms, &TruncationSchedule::new(caps.to_vec()).unwrap()).unwrap();
        let s = rep.to_json().unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["kmax"], 1);
        assert!(v["diagnostics"]["min_divisor"].as_f64().unwrap() > 0.0);
        assert_eq!(v["diagnostics"]["schedule"], serde_json::json!([3, 1]));
        assert_eq!(v["diagnostics"]["stages"][1]["k"], 1);
        assert!(v["diagnostics"].get("regularised").is_none());
        assert_eq!(ReconReport::from_json(&s).unwrap(), rep);
    }
}
