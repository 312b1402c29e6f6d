use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("x^{degree} - {radicand} is reducible over Q ({radicand} is a perfect {prime}-th power)")]
    Irreducibility { radicand: u64, degree: u32, prime: u32 },

    #[error("invalid field descriptor: {0}")]
    InvalidField(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("field descriptor mismatch: {left} vs {right}")]
    DescriptorMismatch { left: String, right: String },

    #[error("zero polynomial has no component gcd")]
    ZeroPolynomial,

    #[error("dilation must exceed 1, got {0}")]
    InvalidLambda(String),

    #[error("nested-interval construction failed at step {step}: {detail}")]
    ConstructionFailure { step: usize, detail: String },

    #[error("grid step {step} is coarser than min|m_j|/8 = {limit}")]
    GridTooCoarse { step: f64, limit: f64 },

    #[error("cascade iteration diverged at iteration {iteration} (residual {residual})")]
    Divergence { iteration: usize, residual: f64 },

    #[error("cycle product {product} differs from lambda^{length}")]
    CycleInconsistency { product: String, length: usize },

    #[error("direction matrix has rank {rank} < dimension {dim}")]
    RankDeficient { rank: usize, dim: usize },

    #[error("no admissible probe vectors with sup-norm <= {bound}")]
    ProbeExhaustion { bound: i64 },

    #[error("root isolation failed: {0}")]
    RootIsolationFailure(String),

    #[error("mask has non-rational translation {0}")]
    NonRationalTranslations(String),

    #[error("direction matrix entry {0} is not an integer")]
    NonIntegerMatrix(String),

    #[error("zero column at index {0}")]
    ZeroColumn(usize),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable reason code.
    pub fn reason(&self) -> &'static str {
        match self {
            Error::Irreducibility { .. } => "irreducibility",
            Error::InvalidField(_) => "invalid_field",
            Error::DivisionByZero => "division_by_zero",
            Error::DescriptorMismatch { .. } => "descriptor_mismatch",
            Error::ZeroPolynomial => "zero_polynomial",
            Error::InvalidLambda(_) => "invalid_lambda",
            Error::ConstructionFailure { .. } => "construction_failure",
            Error::GridTooCoarse { .. } => "grid_too_coarse",
            Error::Divergence { .. } => "divergence",
            Error::CycleInconsistency { .. } => "cycle_inconsistency",
            Error::RankDeficient { .. } => "rank_deficient",
            Error::ProbeExhaustion { .. } => "probe_exhaustion",
            Error::RootIsolationFailure(_) => "root_isolation_failure",
            Error::NonRationalTranslations(_) => "non_rational_translations",
            Error::NonIntegerMatrix(_) => "non_integer_matrix",
            Error::ZeroColumn(_) => "zero_column",
            Error::Precondition(_) => "precondition",
            Error::Parse(_) => "parse",
            Error::Internal(_) => "internal",
        }
    }

    /// True for failures that indicate a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::ConstructionFailure { .. } | Error::CycleInconsistency { .. } | Error::Internal(_))
    }
}
