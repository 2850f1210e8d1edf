//! Bounded cochain complexes of finitely presented modules and their homotopy
//! theory: chain maps, homotopies, cones, cylinders, Hom and tensor complexes,
//! lifting through quasi-isomorphisms, and rectification of homotopy
//! commutative squares.

mod chainmap;
mod complex;
mod homtensor;
mod random;
mod rectify;

pub use chainmap::{ChainMap, ConeData, CylinderData, Homotopy};
pub use complex::{Complex, HomologyData};
pub use homtensor::{
    hom_complex, homotopic, lift_through_quasi_iso, null_homotopy, tensor_complex, HomComplex,
    LiftData, TensorComplex,
};
pub use random::{random_bounded_free_complex, random_chain_map, random_matrix};
pub use rectify::{rectify_square, RectifiedSquare};
