use thiserror::Error;

/// Errors raised by the engine.
///
/// Relation violations and comparison mismatches are returned as data, not
/// as errors; everything here indicates malformed input or a broken
/// internal invariant.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("differentials do not compose to zero (d_out * d_in has {nonzero} nonzero entries)")]
    CompositionNotZero { nonzero: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("vector is not a cocycle of the complex")]
    NotACocycle,

    #[error("induced product is not well defined on cohomology: {0}")]
    InducedProductIllDefined(String),

    #[error("unknown object `{0}`")]
    UnknownObject(String),

    #[error("morphisms are not composable: {0}")]
    NotComposable(String),

    #[error("morphism is not closed under m1")]
    NotClosed,

    #[error("invalid twisted complex: {0}")]
    InvalidTwistedComplex(String),

    #[error("unsupported dimension n = {0}")]
    UnsupportedDimension(usize),

    #[error("sign data violates the arity-3 A-infinity relation for n = {0}")]
    SignInconsistency(usize),

    #[error("sublattice does not have finite index")]
    NotFiniteIndex,

    #[error("window of length {len} is too small; need at least {needed}")]
    WindowTooSmall { len: usize, needed: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
