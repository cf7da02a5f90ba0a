//! Exact symbolic kernel for connection matrices over polynomial coordinate
//! rings: curvature and gauge transformations, Chern-Weil forms, the
//! Chern-Simons transgression, constructive Poincare primitives, logarithmic
//! residues, and Newton/Chern classes of residue matrices.
//!
//! All arithmetic is exact (arbitrary-precision rationals); every value is
//! immutable and every operation is a pure function, so results are
//! deterministic and freely shareable across threads.

pub mod error;
pub mod exterior;
pub mod frontend;
pub mod generate;
pub mod homotopy;
pub mod invariants;
pub mod logres;
pub mod matform;
pub mod scalar;
pub mod selftest;
pub mod transgression;

pub use error::{Error, Result};
