use thiserror::Error;

/// Errors raised by group, representation and bundle operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid group descriptor `{name}`: {reason}")]
    InvalidDescriptor { name: String, reason: String },

    #[error("matrix fails membership in `{group}` (residual {residual:e})")]
    MembershipViolation { group: String, residual: f64 },

    #[error("matrix does not lie in the span of the `{group}` algebra basis (residual {residual:e})")]
    SpanViolation { group: String, residual: f64 },

    #[error("domain mismatch: expected `{expected}`, found `{found}`")]
    DomainMismatch { expected: String, found: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point is off the `{manifold}` manifold (residual {residual:e})")]
    ManifoldViolation { manifold: String, residual: f64 },

    #[error("vector is not tangent to `{manifold}` at its base (residual {residual:e})")]
    TangencyViolation { manifold: String, residual: f64 },

    #[error("element is not in the subgroup star `{subgroup}*` (residual {residual:e})")]
    SubgroupViolation { subgroup: String, residual: f64 },

    #[error("section of `{space}` returned a representative outside the coset: {reason}")]
    SectionFailure { space: String, reason: String },

    #[error("coset label is outside the chart of `{space}`: {reason}")]
    ChartViolation { space: String, reason: String },

    #[error("operation needs a generator-backed section")]
    GeneratorRequired,

    #[error("unknown catalog entry `{0}`")]
    UnknownExample(String),

    #[error("unknown group `{0}`")]
    UnknownGroup(String),

    #[error("representation `{id}` is not available on `{domain}`")]
    UnknownRepresentation { id: String, domain: String },

    #[error("unknown section generator `{0}`")]
    UnknownGenerator(String),
}

impl Error {
    /// Stable machine-readable code used in JSON error payloads.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidDescriptor { .. } => "InvalidDescriptor",
            Error::MembershipViolation { .. } => "MembershipViolation",
            Error::SpanViolation { .. } => "SpanViolation",
            Error::DomainMismatch { .. } => "DomainMismatch",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::ManifoldViolation { .. } => "ManifoldViolation",
            Error::TangencyViolation { .. } => "TangencyViolation",
            Error::SubgroupViolation { .. } => "SubgroupViolation",
            Error::SectionFailure { .. } => "SectionFailure",
            Error::ChartViolation { .. } => "ChartViolation",
            Error::GeneratorRequired => "GeneratorRequired",
            Error::UnknownExample(_) => "UnknownExample",
            Error::UnknownGroup(_) => "UnknownGroup",
            Error::UnknownRepresentation { .. } => "UnknownRepresentation",
            Error::UnknownGenerator(_) => "UnknownGenerator",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
