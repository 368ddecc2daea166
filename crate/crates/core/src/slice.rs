//! Planar sampling of a coefficient field for plotting.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::quadrature::BallPoint;
use crate::zernike::{synthesize, CoefficientField, SynthesisMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// The plane `axis = offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plane {
    pub normal: Axis,
    pub offset: f64,
}

impl Default for Plane {
    fn default() -> Self {
        Self { normal: Axis::Z, offset: 0.0 }
    }
}

impl FromStr for Plane {
    type Err = Error;

    /// `"z=0"`, `"x=-0.25"`, ...
    fn from_str(s: &str) -> Result<Self> {
        let (axis, value) = s
            .split_once('=')
            .ok_or_else(|| Error::Domain(format!("plane must look like z=0, got {s:?}")))?;
        let normal = match axis.trim() {
            "x" | "X" => Axis::X,
            "y" | "Y" => Axis::Y,
            "z" | "Z" => Axis::Z,
            other => return Err(Error::Domain(format!("unknown axis {other:?}"))),
        };
        let offset: f64 = value
            .trim()
            .parse()
            .map_err(|e| Error::Domain(format!("bad plane offset {value:?}: {e}")))?;
        if !offset.is_finite() {
            return Err(Error::Domain(format!("plane offset must be finite, got {offset}")));
        }
        Ok(Self { normal, offset })
    }
}

impl Plane {
    fn point(&self, u: f64, v: f64) -> [f64; 3] {
        match self.normal {
            Axis::Z => [u, v, self.offset],
            Axis::Y => [u, self.offset, v],
            Axis::X => [self.offset, u, v],
        }
    }
}

/// Samples on an `n × n` grid spanning `[-1, 1]²` in the plane, row-major.
///
/// Points outside the closed unit ball carry no value.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSlice {
    pub plane: Plane,
    pub resolution: usize,
    pub coords: Vec<[f64; 3]>,
    pub values: Vec<Option<f64>>,
}

impl GridSlice {
    /// Real part of the synthesized field (or of the partial sum in `mode`) on the grid.
    pub fn sample(field: &CoefficientField, mode: SynthesisMode, plane: Plane, resolution: usize) -> Result<Self> {
        if resolution == 0 {
            return Err(Error::Domain("slice resolution must be positive".into()));
        }
        let axis = |i: usize| {
            if resolution == 1 {
                0.0
            } else {
                -1.0 + 2.0 * i as f64 / (resolution - 1) as f64
            }
        };
        let coords: Vec<[f64; 3]> = (0..resolution)
            .flat_map(|j| (0..resolution).map(move |i| (i, j)))
            .map(|(i, j)| plane.point(axis(i), axis(j)))
            .collect();
        let inside: Vec<usize> = coords
            .iter()
            .enumerate()
            .filter(|(_, c)| c.iter().map(|x| x * x).sum::<f64>() <= 1.0)
            .map(|(i, _)| i)
            .collect();
        let points: Vec<BallPoint> = inside
            .iter()
            .map(|&i| {
                let [x, y, z] = coords[i];
                let mut p = BallPoint::from_cartesian(x, y, z);
                p.r = p.r.min(1.0);
                p
            })
            .collect();
        let vals = synthesize(field, &points, mode)?;
        let mut values = vec![None; coords.len()];
        for (&i, v) in inside.iter().zip(vals) {
            values[i] = Some(v.re);
        }
        Ok(Self { plane, resolution, coords, values })
    }

    /// CSV with header `x,y,z,value`; outside points leave `value` empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,z,value\n");
        for (c, v) in self.coords.iter().zip(&self.values) {
            let _ = write!(out, "{:.16e},{:.16e},{:.16e},", c[0], c[1], c[2]);
            if let Some(v) = v {
                let _ = write!(out, "{v:.16e}");
            }
            out.push('\n');
        }
        out
    }
}
