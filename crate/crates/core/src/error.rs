use thiserror::Error;

/// Errors raised by the lattice, cone and resolution algorithms.
///
/// Messages carry the offending object in its `Display` form so that the
/// command-line front end can report them verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("the zero vector has no primitive form")]
    ZeroVector,

    #[error("vectors are linearly dependent: {0}")]
    LinearlyDependent(String),

    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("cone is not pointed: {0}")]
    NotPointed(String),

    #[error("multiplicity undefined for the non-simplicial cone {0}")]
    NotSimplicial(String),

    #[error("cones #{first} and #{second} do not intersect in a common face")]
    IncompatibleCones { first: usize, second: usize },

    #[error("{0} lies outside the support of the fan")]
    OutsideSupport(String),

    #[error("{0} is not primitive")]
    NotPrimitive(String),

    #[error("cone {0} is not Q-Gorenstein")]
    NotQGorenstein(String),

    #[error("support function has no linear representative on cone {0}")]
    NotQCartier(String),

    #[error("refinement does not have the same support as {0}")]
    SupportMismatch(String),

    #[error("invalid continued fraction input p = {p}, q = {q}")]
    InvalidFraction { p: String, q: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("out of scope: {0}")]
    OutOfScope(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
