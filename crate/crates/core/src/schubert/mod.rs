//! Schubert calculus in `G_p(Poly_d)` and the matching `sl_p` weight bookkeeping.

pub mod index;
pub mod lr;
pub mod weights;

pub use index::{GrassmannBox, SchubertIndex};
pub use lr::{intersection_number, lr_coefficient, lr_product, Intersection, LrExpansion};
pub use weights::{
    dim_singular, dominant_weight_check, index_of_weight, weight_of_index, LevelCounts, WeightVector, CARTAN,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchubertError {
    #[error("Schubert indices live in different boxes: {0} vs {1}")]
    BoxMismatch(GrassmannBox, GrassmannBox),
    #[error("{0:?} is not a Schubert index in {1}")]
    NotAnIndex(Vec<usize>, GrassmannBox),
    #[error("invalid Grassmannian box p={p}, d={d} (need 1 <= p <= d+1)")]
    BadBox { p: usize, d: usize },
    #[error("weight {a:?} with |w|={size} does not give an index in {bx}")]
    BoxOverflow { a: Vec<usize>, size: usize, bx: GrassmannBox },
}
