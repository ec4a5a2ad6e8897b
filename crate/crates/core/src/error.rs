use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero vector has no primitive direction")]
    ZeroVector,
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("input spans no nonzero subspace")]
    EmptySpan,
    #[error("sublattice is not saturated")]
    NotSaturated,
    #[error("vectors are not linearly independent")]
    NotIndependent,
    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(i128),
    #[error("vector lies in the fiber lattice")]
    InFiber,
    #[error("degenerate hull: affine dimension {affine_dim} in ambient dimension {ambient}")]
    DegenerateHull { affine_dim: usize, ambient: usize },
    #[error("origin is not an interior point")]
    OriginNotInterior,
    #[error("polytope is not Fano")]
    NotFano,
    #[error("not a primitive generating set: {0}")]
    NotPgs(String),
    #[error("not a Mori fiber structure: {0}")]
    NotMori(String),
    #[error("polytope is not in class {0}")]
    NotInClass(String),
    #[error("open-problem instance: {0}")]
    OpenProblem(String),
    #[error("no frozen base sequence for {0}")]
    MissingBaseSequence(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable machine-readable name of the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ZeroVector => "zero_vector",
            Error::Overflow => "overflow",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::UnsupportedDimension(_) => "unsupported_dimension",
            Error::EmptySpan => "empty_span",
            Error::NotSaturated => "not_saturated",
            Error::NotIndependent => "not_independent",
            Error::NotUnimodular(_) => "not_unimodular",
            Error::InFiber => "in_fiber",
            Error::DegenerateHull { .. } => "degenerate_hull",
            Error::OriginNotInterior => "origin_not_interior",
            Error::NotFano => "not_fano",
            Error::NotPgs(_) => "not_pgs",
            Error::NotMori(_) => "not_mori",
            Error::NotInClass(_) => "not_in_class",
            Error::OpenProblem(_) => "open_problem",
            Error::MissingBaseSequence(_) => "missing_base_sequence",
            Error::InvalidInput(_) => "invalid_input",
        }
    }
}
