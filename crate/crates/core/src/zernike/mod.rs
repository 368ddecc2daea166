//! The 3D Zernike basis of `L²(B)`: radial polynomials, the monomial
//! expansion coefficients `χ`, coefficient fields, projection and synthesis.

mod field;
mod radial;
mod transform;

pub use field::{CoefficientField, ZernikeIndex};
pub(crate) use field::FieldDocument;
pub use radial::{chi, radial_coefficients, radial_zernike, RadialTable};
pub(crate) use radial::pochhammer;
pub use transform::{l2_distance, project, psi_eval, synthesize, synthesize_on_quadrature, SynthesisMode};
