//! Exact direct reconstruction for the linearised Calderón problem in the unit ball.
//!
//! A conductivity perturbation `η` is expanded in the orthonormal 3D Zernike
//! basis `ψ_ℓ^{k,m} = R_ℓ^k(r) Y_ℓ^m(θ, φ)`. The linearised boundary data
//! `⟨(Fη) Y_{k+1}^0, Y_{ℓ+k+1}^m⟩` are triangular in the radial index `k`, so
//! the coefficients are recovered stage by stage with a forward substitution.
//!
//! * [`specfun`]: Legendre functions, spherical harmonics, 3j and Gaunt coefficients.
//! * [`zernike`]: radial polynomials, the ball basis, coefficient fields, projection.
//! * [`forward`]: exact series measurements and an independent quadrature oracle.
//! * [`recon`]: the reconstruction constants, truncation schedules and the solver.

pub mod error;
pub mod forward;
pub mod json;
pub mod phantom;
pub mod quadrature;
pub mod recon;
pub mod selftest;
pub mod slice;
mod spectral;
pub mod specfun;
pub mod zernike;

pub use error::{Error, Result};
pub use forward::{
    add_noise, forward_measure, forward_measure_quadrature, forward_measure_quadrature_set, MeasurementSet,
    OracleForm,
};
pub use phantom::PhantomSpec;
pub use spectral::Entry;
pub use quadrature::{BallPoint, BallQuadrature, SphereQuadrature};
pub use recon::{
    big_d, big_q, reconstruct, reconstruct_with, tau, validate_schedule, ReconOptions, ReconReport,
    ScheduleViolation, TruncationSchedule,
};
pub use slice::{GridSlice, Plane};
pub use zernike::{chi, project, psi_eval, radial_zernike, synthesize, CoefficientField, SynthesisMode, ZernikeIndex};

pub use num_complex::Complex64;
