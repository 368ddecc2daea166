//! Associated Legendre functions, complex spherical harmonics with surface
//! gradients, Wigner 3j symbols and Gaunt coefficients.

mod harmonics;
mod legendre;
mod wigner;

pub use harmonics::{
    grad_dot, lm_count, lm_index, sph_harm, sph_harm_surface_grad, sph_harm_surface_grad_with_guard,
    HarmonicTable, SphIndex, POLE_GUARD,
};
pub use legendre::{assoc_legendre, NormalizedLegendre};
pub use wigner::{
    gaunt, gaunt_capped, gaunt_selection, wigner3j, wigner3j_exact, wigner3j_exact_capped, TripleIndex,
    Wigner3jExact, DEFAULT_DEGREE_CAP,
};
