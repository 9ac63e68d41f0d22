use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("context mismatch: genus {left_genus}/N={left_n} vs genus {right_genus}/N={right_n}")]
    ContextMismatch {
        left_genus: usize,
        left_n: usize,
        right_genus: usize,
        right_n: usize,
    },
    #[error("basis index {index} out of range for genus {genus}")]
    BasisOutOfRange { index: usize, genus: usize },
    #[error("invalid genus {0}")]
    InvalidGenus(usize),
    #[error("element is not homogeneous of degree one")]
    NotDegreeOne,
    #[error("element has a nonzero constant term")]
    NonzeroConstant,
    #[error("element does not have constant term one")]
    ConstantNotOne,
    #[error("element is not a Lie element (degree {degree} fails the Dynkin test)")]
    NotLie { degree: usize },
    #[error("element is not invariant under cyclic rotation in degree {degree}")]
    NotCyclicInvariant { degree: usize },
    #[error("twist parameter h={h} out of range for genus {genus}")]
    TwistOutOfRange { h: usize, genus: usize },
    #[error("automorphism has no recorded twist factorization")]
    NoFactorization,
    #[error("automorphism does not fix the boundary word")]
    NotBoundaryPreserving,
    #[error("automorphism is not invertible on homology")]
    NotInvertibleOnHomology,
    #[error("derivation exponential did not terminate within {terms} terms")]
    NonTermination { terms: usize },
    #[error("expansion is not symplectic: {0}")]
    NotSymplectic(String),
    #[error("inconsistent triangular system at degree {degree}")]
    InconsistentSystem { degree: usize },
    #[error("requested truncation {requested} exceeds trusted truncation {trusted} of fixture `{fixture}`")]
    FixtureDegreeExceeded {
        fixture: String,
        requested: usize,
        trusted: usize,
    },
    #[error("fixture `{0}` is not available in this genus")]
    FixtureUnavailable(String),
    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("json error: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
