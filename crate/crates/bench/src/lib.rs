//! Shared inputs for the criterion benchmarks.

use calderon_core::{BallQuadrature, CoefficientField, Complex64};

/// Deterministic dense field with unit-scale entries.
pub fn dense_field(caps: &[usize]) -> CoefficientField {
    let mut c = CoefficientField::zeros(caps);
    for (i, v) in c.values_mut().enumerate() {
        let t = i as f64;
        *v = Complex64::new((0.7 * t).sin() + 1.1, (1.3 * t).cos());
    }
    c
}

/// Ball quadrature small enough for a benchmark iteration.
pub fn bench_quadrature() -> BallQuadrature {
    BallQuadrature::new(24, 32, 64).expect("positive orders")
}
