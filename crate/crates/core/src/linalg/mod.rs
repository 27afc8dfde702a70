//! Exact linear algebra over `Z` and `Q`.

mod lattice;
mod matrix;
mod subspace;

pub use lattice::{hermite_normal_form, integer_kernel, primitive_integer_vector, saturate, Lattice};
pub use matrix::{integral_charpoly, IntMatrix, RatMatrix};
pub(crate) use matrix::sign_i8;
pub use subspace::{max_invariant_subspace, restrict_operator, Subspace};
