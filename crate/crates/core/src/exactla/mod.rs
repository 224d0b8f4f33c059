//! Exact linear algebra over prime fields and the rationals.
//!
//! Dense matrices, canonical reduced echelon forms (leftmost pivot first),
//! null spaces, linear solving, and subspace/quotient/subquotient helpers.
//! Every result is deterministic: identical inputs produce identical output.

mod field;
mod matrix;
mod multimod;
mod subspace;

pub use field::{GroundField, Scalar, MAX_PRIME};
pub use matrix::{Echelon, Matrix};
pub use subspace::{Convention, Quotient, Subquotient, Subspace};
