//! Exact linear algebra: coefficient rings, matrices, Smith/Gauss normal forms,
//! finitely presented modules and graded-slice reduction.

pub mod graded;
pub mod matrix;
pub mod presentation;
pub mod ring;
pub mod snf;

pub use graded::{graded_slice, monomials_of_degree};
pub use matrix::Matrix;
pub use presentation::{homology_at, ModulePresentation, NormalForm};
pub use ring::{CoeffRing, Poly, Scalar};
pub use snf::{smith_normal_form, SnfResult};
