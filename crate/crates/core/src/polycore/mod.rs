//! Univariate polynomial algebra over exact and multiprecision domains.

pub mod linalg;
pub mod marked;
pub mod poly;
pub mod resultant;
pub mod roots;
pub mod scalar;
pub mod wronskian;

pub use marked::{rel_discriminant, rel_resultant, split_marked, MarkedPoints, MarkedSplit};
pub use poly::{ExactPoly, GaussPoly, NumPoly, Poly};
pub use resultant::{discriminant, resultant};
pub use roots::roots;
pub use scalar::{GaussRational, Scalar, MIN_PRECISION};
pub use wronskian::{monic_wronskian, wronskian, wronskian_any, AnyPoly};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PolyError {
    #[error("empty basis")]
    EmptyBasis,
    #[error("basis is linearly dependent (Wronskian vanishes)")]
    DependentBasis,
    #[error("basis mixes exact and numeric coefficients")]
    MixedDomain,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("precision {0} bits is below the minimum of 53")]
    Precision(u32),
    #[error("root finder did not converge (worst scaled residual {worst_residual:e})")]
    NoConvergence { worst_residual: f64 },
    #[error("marked points must be nonempty and pairwise distinct")]
    BadMarkedPoints,
}
