//! Linearised measurement data `⟨(Fη) Y_{k+1}^0, Y_{ℓ+k+1}^m⟩`.
//!
//! Two independent routes: the exact finite series in the Zernike
//! coefficients, and ball quadrature of the bilinear form for any evaluable
//! perturbation.

mod measurement;
mod noise;
mod oracle;
mod series;

pub use measurement::MeasurementSet;
pub use noise::add_noise;
pub use oracle::{forward_measure_quadrature, forward_measure_quadrature_set, OracleForm};
pub use series::forward_measure;
