//! Planes of polynomials read as Fuchsian equations: the determinant equation,
//! singular points with their exponents and Schubert indices, and the two-point special form.

pub mod equation;
pub mod profile;
pub mod special;

pub use equation::{equation_from_plane, strip_common_factor};
pub use profile::{exponents_at, profile, FuchsProfile, InfinityPoint, SingularPoint};
pub use special::{hypergeometric_case, special_form_check, HypergeometricCase, SpecialFormVerdict};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FuchsError {
    #[error("basis is linearly dependent")]
    DependentBasis,
}
