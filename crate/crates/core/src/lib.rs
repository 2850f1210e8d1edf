//! Exact-arithmetic homological algebra over `Z`, `Q`, prime fields and graded
//! polynomial rings: complexes and their homotopy theory, diagram categories with
//! pointwise Kan extensions, truncated projective/injective resolutions with
//! certified windows, homotopy (co)limits, torsion and completion functors built
//! from Koszul complexes, and group (co)homology with the Lyndon-Hochschild-Serre
//! spectral sequence.
//!
//! Everything is computed with exact arithmetic (arbitrary-precision integers and
//! rationals); no floating point is used anywhere.

pub mod complexes;
pub mod diagrams;
pub mod error;
pub mod exactalg;
pub mod resolve;
pub mod smallcat;

pub use error::Error;

/// Convenience result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
