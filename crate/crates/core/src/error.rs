use num_bigint::BigInt;
use thiserror::Error;

/// Every failure the library can report.
///
/// Variant names double as machine-readable diagnostic codes (see [`Error::code`]);
/// the CLI prints them verbatim so that scripts can match on them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("multivectors live in exterior algebras of different rank ({left} vs {right})")]
    RankMismatch { left: u32, right: u32 },

    #[error("rank {0} exceeds the supported maximum of 64 generators")]
    RankTooLarge(u32),

    #[error("linear map produced a non-integral coefficient on generators {generators:?}")]
    NonIntegralResult { generators: Vec<u32> },

    #[error("coefficient {coefficient} on generators {generators:?} is not divisible by {divisor}")]
    NonDivisible {
        mask: u64,
        generators: Vec<u32>,
        coefficient: BigInt,
        divisor: BigInt,
    },

    #[error("division by zero")]
    DivisionByZero,

    #[error("class has a nonzero degree-0 component, so its exponential does not terminate")]
    NotNilpotent,

    #[error("class has a component of top degree {0}; divided star powers need positive-dimensional support")]
    NotPositiveDimensional(u32),

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("polarization matrix is not alternating")]
    NotAlternating,

    #[error("polarization matrix is singular")]
    SingularPolarization,

    #[error("complex structure does not square to -1")]
    ComplexStructureInvalid,

    #[error("Riemann relation violated: {0}")]
    RiemannRelationViolated(String),

    #[error("polarization type {0} is not a divisor chain of positive integers")]
    InvalidType(String),

    #[error("homomorphism is not an isogeny (determinant zero or non-square)")]
    NotIsogeny,

    #[error("homomorphism matrix does not commute with the complex structures")]
    NotHolomorphic,

    #[error("operation requires a principal polarization")]
    NotPrincipal,

    #[error("variety has no complex structure")]
    NoComplexStructure,

    #[error("class is not homogeneous")]
    NotHomogeneous,

    #[error("generator {0} is not a Hodge class of the requested degree")]
    NotHodge(usize),

    #[error("Fourier image of a Hodge class is not Hodge: {0}")]
    ImageNotInHodge(String),

    #[error("vector does not lie in the lattice")]
    NotInLattice,

    #[error("unknown check `{0}`")]
    UnknownCheck(String),

    #[error("unsupported parameters for `{check}`: {reason}")]
    UnsupportedParams { check: String, reason: String },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable identifier of the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::RankMismatch { .. } => "RankMismatch",
            Error::RankTooLarge(_) => "RankTooLarge",
            Error::NonIntegralResult { .. } => "NonIntegralResult",
            Error::NonDivisible { .. } => "NonDivisible",
            Error::DivisionByZero => "DivisionByZero",
            Error::NotNilpotent => "NotNilpotent",
            Error::NotPositiveDimensional(_) => "NotPositiveDimensional",
            Error::NotSymmetric => "NotSymmetric",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::NotAlternating => "NotAlternating",
            Error::SingularPolarization => "SingularPolarization",
            Error::ComplexStructureInvalid => "ComplexStructureInvalid",
            Error::RiemannRelationViolated(_) => "RiemannRelationViolated",
            Error::InvalidType(_) => "InvalidType",
            Error::NotIsogeny => "NotIsogeny",
            Error::NotHolomorphic => "NotHolomorphic",
            Error::NotPrincipal => "NotPrincipal",
            Error::NoComplexStructure => "NoComplexStructure",
            Error::NotHomogeneous => "NotHomogeneous",
            Error::NotHodge(_) => "NotHodge",
            Error::ImageNotInHodge(_) => "ImageNotInHodge",
            Error::NotInLattice => "NotInLattice",
            Error::UnknownCheck(_) => "UnknownCheck",
            Error::UnsupportedParams { .. } => "UnsupportedParams",
            Error::Parse(_) => "Parse",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
