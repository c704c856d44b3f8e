//! From a critical point to its flag of Wronskians, its differential operator and its plane of polynomials.

pub mod flag;
pub mod operator;
pub mod plane;
pub mod verify;

pub use flag::{flag_from_orbit, flag_from_point, residue_identity_defect, WronskianFlag};
pub use operator::{operator_from_flag, LinearOperator, OperatorDigest};
pub use plane::{iterated_integral_plane, kernel_plane, rank_tolerance, PPlane, PlaneDigest, RANK_GAP};
pub use verify::{
    check_tolerance, reconstruct_exact, reconstruct_orbit, reconstruct_point, verify_membership, Check, Checks,
    ReconstructionReport,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReconstructError {
    #[error("point does not match the problem's level counts")]
    Shape,
    #[error("marked points are not representable in this coefficient domain")]
    Domain,
    #[error("repeated root {0}")]
    NonSimpleRoot(String),
    #[error("root {0} is shared with a neighbouring Wronskian")]
    SharedRoot(String),
    #[error("nonzero residue {value:e} at {root} (level {level})")]
    Residue { level: usize, root: String, value: f64 },
    #[error("polynomial kernel has dimension {found}, expected {expected}")]
    KernelDimension { expected: usize, found: usize },
    #[error("numeric rank gap {0:e} is below the required 1e6")]
    RankGap(f64),
    #[error("basis is linearly dependent")]
    DependentBasis,
}
