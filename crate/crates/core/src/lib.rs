//! Canonical commutation relations on Krein spaces.
//!
//! * [`algebra`] is an exact symbolic engine over ℚ(i, √2): operator words in
//!   `a`, `a⁺`, `J`, normal ordering, and the action on formal basis vectors of
//!   the Fock, anti-Fock and Λ-case representations.
//! * [`krein`] holds the finite-dimensional indefinite-metric structure.
//! * [`matrix_rep`] builds truncated matrix realizations and the `(P̃, Q̃)` pair.
//! * [`weyl`] exponentiates, checks the Weyl relation, and builds the unitary
//!   intertwiner to the Schrödinger pair.

pub mod algebra;
pub mod error;
pub mod krein;
pub mod linalg;
pub mod matrix_rep;
pub mod precise;
pub mod scalar;
pub mod weyl;

pub use error::{Error, Result};
pub use scalar::ExactScalar;
