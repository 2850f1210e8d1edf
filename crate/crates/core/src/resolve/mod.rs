//! Resolutions of diagrams of complexes and the derived functors built from
//! them: derived Kan extensions, homotopy (co)limits, (co)cartesian square
//! detection, the derivator axiom checks, and rectification of homotopy
//! commutative squares.

pub mod axioms;
pub mod cartesian;
pub mod cells;
pub mod coresolution;
pub mod derived;
pub mod generators;
pub mod lifting;
pub(crate) mod random;
pub mod rectify;
pub mod resolution;
pub mod stability;
pub mod zinjective;

pub use axioms::{
    adjunction_suite, base_change_suite, check_adjunction_triangles, check_coproduct_decomposition,
    check_injective_restriction, check_pointwise_detection, check_projective_restriction,
    coproduct_suite, detection_suite, rectification_suite, restriction_suite, CheckOutcome,
    SuiteReport,
};
pub use cartesian::{
    cone_agreement, derivator_cone, is_bicartesian, is_cartesian, is_cocartesian,
    pullback_comparison, pushout_comparison, span_extension_square,
};
pub use cells::{CellBasis, CocellBasis};
pub use coresolution::{coresolve_diagram, Coresolution};
pub use derived::{
    beck_chevalley_check, derived_lan, derived_ran, hocolim, holim, pointwise_lan_formula,
    pointwise_ran_formula, DerivedLan, DerivedRan, FormulaCheck,
};
pub use generators::{covering_generators, separating_functionals};
pub use lifting::{extend_cocells, lift_cells, ExtendData, LiftData};
pub use rectify::{rectify_square, RectifiedSquare};
pub use resolution::{resolve_diagram, Resolution};
pub use stability::{stability_suite, StabilityReport};
pub use zinjective::{
    divisible_coresolution, DivisibleComplex, DivisibleCoresolution, DivisibleModule,
    DivisibleNormalForm,
};
