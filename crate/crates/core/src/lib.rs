//! Exact computations with finitely presented nilpotent Lie algebras over the
//! rationals: free Lie algebras in the Lyndon basis, graded nilpotent
//! quotients, the Baker–Campbell–Hausdorff group law, Chevalley–Eilenberg
//! cohomology with cup and Massey products, and the relation-degree and
//! weight criteria built on top of them.
//!
//! All arithmetic is arbitrary-precision rational; nothing here uses floating
//! point.

pub mod assoc;
pub mod bch;
pub mod cohomology;
pub mod error;
pub mod free_lie;
pub mod linalg;
pub mod nilpotent;
pub mod obstruction;

pub use error::{Error, Result};
pub use free_lie::{lyndon_basis, witt_dim, BracketWord, Expr, FreeLieAlgebra, Generator, LieElement, Word};
pub use linalg::Q;
pub use nilpotent::{lcs_dims, minimal_relation_degrees, nilpotent_quotient, GradedQuotient, LiePresentation};

/// Resource caps. Exceeding any of them is reported as an error rather than
/// attempted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest class cap accepted for a presentation.
    pub max_class: usize,
    /// Largest class for Baker–Campbell–Hausdorff expansions.
    pub max_bch_class: usize,
    /// Largest algebra dimension for full cohomology computations.
    pub max_cohomology_dim: usize,
    /// Largest number of generator weight assignments searched.
    pub max_weight_assignments: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_class: 10, max_bch_class: 8, max_cohomology_dim: 20, max_weight_assignments: 1 << 20 }
    }
}

impl Limits {
    /// Default caps with both class limits replaced by `max_class`.
    pub fn with_max_class(max_class: usize) -> Self {
        Limits { max_class, max_bch_class: max_class, ..Limits::default() }
    }
}
