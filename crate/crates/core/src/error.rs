use thiserror::Error;

/// Everything that can go wrong inside the library.
///
/// Variants map one-to-one onto the machine-readable codes returned by
/// [`Error::code`], which the command-line front end prints on stderr.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix has index greater than one")]
    IndexTooLarge,
    #[error("operation requires a nonzero matrix")]
    ZeroMatrix,
    #[error("matrix is singular")]
    Singular,
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),
    #[error("invalid Jordan specification: {0}")]
    InvalidSpec(String),
    #[error("candidate eigenvalues account for {found} of {expected} dimensions")]
    IncompleteSpectrum { found: usize, expected: usize },
    #[error("zero is not allowed as an eigenvalue here")]
    ZeroEigenvalue,
    #[error("similarity check failed: {0}")]
    SimilarityMismatch(String),
    #[error("matrix does not have the commutant block structure")]
    NotInCommutant,
    #[error("matrix is not an idempotent commuting with the Jordan form")]
    NotInDelta,
    #[error("matrix is not an idempotent commuting with the core block")]
    NotInTau,
    #[error("matrix is not a predecessor under the sharp order")]
    NotAPredecessor,
    #[error("projectors do not commute")]
    NonCommuting,
    #[error("some eigenvalue has more than one Jordan block")]
    MultiplicityExceedsOne,
    #[error("the K factor is singular")]
    SingularK,
    #[error("no eigenvalue has three or more Jordan blocks")]
    NoEligibleEigenvalue,
    #[error("precondition violated: {0}")]
    PrecondViolated(String),
    #[error("matrix is not EP")]
    NotEp,
    #[error("W block is not a projector")]
    WNotProjector,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("singularity mismatch: {0}")]
    SingularityMismatch(String),
    #[error("not supported: {0}")]
    NotSupported(String),
    #[error("enumeration needs {needed} candidates, cap is {cap}")]
    BudgetExceeded { needed: u128, cap: u128 },
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable snake-case identifier for the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ShapeMismatch(_) => "shape_mismatch",
            Error::NotSquare { .. } => "not_square",
            Error::IndexTooLarge => "index_too_large",
            Error::ZeroMatrix => "zero_matrix",
            Error::Singular => "singular",
            Error::InvalidTolerance(_) => "invalid_tolerance",
            Error::InvalidSpec(_) => "invalid_spec",
            Error::IncompleteSpectrum { .. } => "incomplete_spectrum",
            Error::ZeroEigenvalue => "zero_eigenvalue",
            Error::SimilarityMismatch(_) => "similarity_mismatch",
            Error::NotInCommutant => "not_in_commutant",
            Error::NotInDelta => "not_in_delta",
            Error::NotInTau => "not_in_tau",
            Error::NotAPredecessor => "not_a_predecessor",
            Error::NonCommuting => "non_commuting",
            Error::MultiplicityExceedsOne => "multiplicity_exceeds_one",
            Error::SingularK => "singular_k",
            Error::NoEligibleEigenvalue => "no_eligible_eigenvalue",
            Error::PrecondViolated(_) => "precondition_violated",
            Error::NotEp => "not_ep",
            Error::WNotProjector => "w_not_projector",
            Error::HypothesisViolated(_) => "hypothesis_violated",
            Error::SingularityMismatch(_) => "singularity_mismatch",
            Error::NotSupported(_) => "not_supported",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
