//! Finite-scale verification toolkit for inverse semigroup actions.
//!
//! The crate models finite inverse semigroups, their actions on finite
//! (possibly non-Hausdorff) topological spaces and on finite-dimensional
//! C*-algebras, the groupoids of germs of such actions, and the algebraic
//! crossed product `A ⋊ S` together with its conditional expectation and
//! induced representations.
//!
//! Combinatorial predicates are decided exactly. Analytic statements are
//! checked numerically with explicit tolerances (see [`tol`]).

pub mod act;
pub mod corpus;
pub mod error;
pub mod fdalg;
pub mod gpdalg;
pub mod isg;
pub mod json;
pub mod linalg;
pub mod topo;
pub mod xprod;

pub use error::{Error, Result};

/// Default tolerances.
pub mod tol {
    /// Entrywise tolerance for matrix identities.
    pub const EXACT: f64 = 1e-10;
    /// Tolerance for eigenvalue and rank decisions.
    pub const SPECTRAL: f64 = 1e-9;
    /// Gram eigenvalues above this are kept as genuine directions.
    pub const GRAM_KEEP: f64 = 1e-8;
    /// Gram eigenvalues below this are treated as exact null directions.
    pub const GRAM_NULL: f64 = 1e-12;
}
