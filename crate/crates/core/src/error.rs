use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input that cannot be interpreted at all (bad keys, unknown symbols, parse failures).
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("configuration failed validation: {0}")]
    Invalid(String),

    #[error("union of components must be nonempty")]
    EmptyUnion,

    #[error("union must be a proper subset of the components")]
    FullUnion,

    #[error("intersection undefined: every argument has a nonzero bundle part")]
    UndefinedIntersection,

    #[error("expected {expected} classes, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("zero polynomial has no isolated roots")]
    ZeroPolynomial,

    #[error("dual graph is not connected")]
    Disconnected,

    #[error("dual graph is not a tree")]
    NotTree,

    #[error("no canonical class designated")]
    NoCanonical,

    #[error("edge {edge:?}: {reason}")]
    EdgeHypothesis { edge: (usize, usize), reason: String },

    #[error("too many components for exhaustive search: {0} (limit {1})")]
    TooManyComponents(usize, usize),

    #[error("constraint system infeasible: {0}")]
    Infeasible(String),

    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
}

impl Error {
    /// True for failures caused by unmet mathematical hypotheses rather than bad input.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::NotTree
                | Error::Disconnected
                | Error::NoCanonical
                | Error::EdgeHypothesis { .. }
                | Error::EmptyUnion
                | Error::FullUnion
                | Error::TooManyComponents(..)
                | Error::Infeasible(_)
                | Error::Hypothesis(_)
        )
    }
}
