//! Postnikov extensions of connective DG algebras.
//!
//! The crate computes Postnikov truncations, trivial square-zero
//! extensions, Hochschild cohomology, k-invariants obtained by homotopy
//! transfer, and the set of extensions of type `(M, n)` up to equivalence,
//! counted as orbits of `Aut(M)` on `HH^{n+2}(A, M)`. A separate module
//! checks the Blakers–Massey connectivity estimate for pushouts of
//! semifree algebras.

pub mod error;
pub mod algebras;
pub mod blakers;
mod caps;
pub mod complexes;
pub mod dga;
pub mod exactla;
pub mod hochschild;
pub mod moduli;

pub use caps::Caps;
pub use error::{Error, ErrorClass, Result};
