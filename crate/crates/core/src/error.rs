use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("malformed expression: {0}")]
    MalformedExpression(String),

    #[error("invalid generator set: {0}")]
    InvalidGenerators(String),

    #[error("operands belong to different free Lie algebras")]
    MismatchedAlgebras,

    #[error("operands belong to different quotients")]
    MismatchedQuotients,

    #[error("class {requested} exceeds the hard limit {limit}")]
    ClassLimitExceeded { requested: usize, limit: usize },

    #[error("algebra dimension {dim} exceeds the cohomology cap {cap}")]
    DimensionCapExceeded { dim: usize, cap: usize },

    #[error("weight search space of {size} assignments exceeds the cap {cap}")]
    SearchCapExceeded { size: u128, cap: u128 },

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("not a Lie element: word `{0}` is not Lyndon at its leading position")]
    NotLie(String),

    #[error("degree mismatch: expected a degree-{expected} class, found degree {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("cochain is not closed")]
    NotCocycle,

    #[error("map is not a Lie homomorphism: {0}")]
    NotHomomorphism(String),

    #[error("lattice basis does not span the quotient: {0}")]
    NonSpanningLattice(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True for failures caused by a configured resource cap rather than bad input.
    pub fn is_resource_cap(&self) -> bool {
        matches!(
            self,
            Error::ClassLimitExceeded { .. }
                | Error::DimensionCapExceeded { .. }
                | Error::SearchCapExceeded { .. }
        )
    }
}
