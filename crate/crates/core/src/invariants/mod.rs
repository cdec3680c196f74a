//! Tensor invariants from Young symmetrizers, and the degree arithmetic that
//! constrains invariants of `C^3 ⊗ Λ^2 C^s`.

mod degrees;
mod filling;
mod symmetrizer;

pub use degrees::allowed_invariant_degrees;
pub use filling::{column_determinant_product, ColumnDeterminants, DetFactor, FillingPair};
pub use symmetrizer::{
    filling_search, symmetrize_by_expansion, young_symmetrize, young_symmetrize_eval, CandidateSource,
    Evaluation, Invariant, SearchHit,
};
