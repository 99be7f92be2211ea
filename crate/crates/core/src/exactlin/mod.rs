//! Exact linear algebra over the rationals.
//!
//! Dense matrices carry sheaf structure maps, which are tiny. Boundary
//! matrices of chain complexes are large and sparse and live in [`sparse`].

mod matrix;
mod rational;
pub mod sparse;
mod subspace;

pub use matrix::{exterior_power_matrix, kernel_basis, rref, rref_with_pivots, Matrix};
pub use rational::{format_rational, parse_rational, q, Rational};
pub use sparse::{SparseMatrix, SparseVec};
pub use subspace::Subspace;
pub(crate) use subspace::unit;
