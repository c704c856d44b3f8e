//! Master functions of `sl_p` Gaudin type and their critical points.

pub mod function;
pub mod problem;
pub mod solver;

pub use function::{
    bethe_jacobian, bethe_residuals, is_admissible, master_log_value, master_value, residual_norm, sep_tol,
    Admissibility, BethePoint, MasterValue, NumPoint,
};
pub use problem::SchubertProblem;
pub use solver::{generic_points, rationalize_point, refine_orbit, solve_bethe, Budget, CriticalOrbit, SolveOutcome};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MasterError {
    #[error("order p = {0} must be at least 2")]
    Order(usize),
    #[error(transparent)]
    Schubert(crate::schubert::SchubertError),
    #[error("{indices} indices given for {points} marked points (need n + 1)")]
    IndexCount { points: usize, indices: usize },
    #[error("index at z_{point} has w_p != 0 (base point)")]
    BasePoint { point: usize },
    #[error("codimensions add up to {total}, but dim G_p(Poly_d) = {dim}")]
    Codimension { total: usize, dim: usize },
    #[error("level count k_{i} = {value} is negative")]
    NegativeLevel { i: usize, value: i64 },
    #[error("exponent condition 2m_j(i) - m_j(i-1) - m_j(i+1) <= 0 fails at z_{point}, i = {i}")]
    Exponent { point: usize, i: usize },
    #[error("degrees {0:?} are not strictly increasing up to d")]
    Degrees(Vec<usize>),
    #[error("level counts must have p - 1 = {expected} entries, got {got}")]
    LevelLength { expected: usize, got: usize },
    #[error("special form: {0}")]
    SpecialForm(String),
    #[error("group sizes {got:?} do not match k = {expected:?}")]
    GroupSizes { expected: Vec<usize>, got: Vec<usize> },
    #[error("marked points are not representable in this coefficient domain")]
    Domain,
    #[error("exact collision {0}")]
    Collision(String),
}
