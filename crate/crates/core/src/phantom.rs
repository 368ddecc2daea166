//! Synthetic perturbations for driving the pipeline.

use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::BallPoint;
use crate::zernike::{psi_eval, ZernikeIndex};

/// A named perturbation `η` on the unit ball.
#[derive(Debug, Clone, PartialEq)]
pub enum PhantomSpec {
    /// `η(x) = exp(-a |x - c|²)`.
    Gaussian { center: [f64; 3], sharpness: f64 },
    /// A single basis function `ψ_ℓ^{k,m}` (complex-valued for `m ≠ 0`).
    Basis(ZernikeIndex),
    Zero,
}

impl PhantomSpec {
    /// The localised Gaussian `exp(-50 |x - (0, 0.3, 0)|²)`.
    pub fn default_gaussian() -> Self {
        Self::Gaussian { center: [0.0, 0.3, 0.0], sharpness: 50.0 }
    }

    pub fn gaussian(center: [f64; 3], sharpness: f64) -> Result<Self> {
        let p = Self::Gaussian { center, sharpness };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if let Self::Gaussian { center, sharpness } = self {
            let r2: f64 = center.iter().map(|c| c * c).sum();
            if !center.iter().all(|c| c.is_finite()) || r2 > 1.0 {
                return Err(Error::Phantom(format!("gaussian center {center:?} lies outside the unit ball")));
            }
            if !sharpness.is_finite() || *sharpness < 0.0 {
                return Err(Error::Phantom(format!("gaussian sharpness must be finite and >= 0, got {sharpness}")));
            }
        }
        Ok(())
    }

    pub fn is_real(&self) -> bool {
        match self {
            Self::Basis(idx) => idx.m == 0,
            _ => true,
        }
    }

    pub fn eval(&self, p: BallPoint) -> Complex64 {
        match self {
            Self::Gaussian { center, sharpness } => {
                let x = p.to_cartesian();
                let d2: f64 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
                Complex64::new((-sharpness * d2).exp(), 0.0)
            }
            Self::Basis(idx) => psi_eval(*idx, p).unwrap_or_default(),
            Self::Zero => Complex64::default(),
        }
    }
}

impl FromStr for PhantomSpec {
    type Err = Error;

    /// `zero`, `gaussian`, `gaussian:x,y,z,a` or `basis:k,ell,m`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let nums = |n: usize| -> Result<Vec<f64>> {
            let v = args
                .split(',')
                .map(|t| t.trim().parse::<f64>().map_err(|e| Error::Phantom(format!("{t:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            if v.len() != n {
                return Err(Error::Phantom(format!("{name} expects {n} parameters, got {}", v.len())));
            }
            Ok(v)
        };
        match name.trim() {
            "zero" if args.is_empty() => Ok(Self::Zero),
            "gaussian" if args.is_empty() => Ok(Self::default_gaussian()),
            "gaussian" => {
                let v = nums(4)?;
                Self::gaussian([v[0], v[1], v[2]], v[3])
            }
            "basis" => {
                let v = nums(3)?;
                if v.iter().any(|x| x.fract() != 0.0) || v[0] < 0.0 || v[1] < 0.0 {
                    return Err(Error::Phantom(format!("basis indices must be integers, got {args}")));
                }
                Ok(Self::Basis(ZernikeIndex::new(v[0] as usize, v[1] as usize, v[2] as i64)?))
            }
            other => Err(Error::Phantom(format!("unknown phantom {other:?}"))),
        }
    }
}
