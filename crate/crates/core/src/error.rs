use thiserror::Error;

/// Errors raised by the algebra engine. Variants mirror the failure modes of the
/// public operations: malformed input data, unsupported ring/functor combinations,
/// and verdicts that cannot be certified within the requested bounds.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("unsupported ring: {0}")]
    UnsupportedRing(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("not a complex: {0}")]
    NotAComplex(String),
    #[error("not a chain map: {0}")]
    NotAChainMap(String),
    #[error("not a homotopy: {0}")]
    NotAHomotopy(String),
    #[error("not a category: {0}")]
    NotACategory(String),
    #[error("not a functor: {0}")]
    NotAFunctor(String),
    #[error("unknown object: {0}")]
    UnknownObject(String),
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("subgroup is not normal: {0}")]
    NotNormal(String),
    #[error("module is not free: {0}")]
    NotFree(String),
    #[error("incompatible data: {0}")]
    NotCompatible(String),
    #[error("square does not commute up to the given homotopy: {0}")]
    NotHomotopyCommutative(String),
    #[error("window exceeded: {0}")]
    WindowExceeded(String),
    #[error("prime outside the implemented residue-field catalogue: {0}")]
    UnsupportedPrime(String),
    #[error("undetermined within the computed stages: {0}")]
    Undetermined(String),
    #[error("result is not finitely generated over the base ring: {0}")]
    NonFinitelyGenerated(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("parse error: {0}")]
    Parse(String),
}
