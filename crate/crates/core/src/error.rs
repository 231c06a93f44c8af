use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid Cartan type: {0}")]
    InvalidType(String),
    #[error("index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("weight has length {got}, expected {expected}")]
    WeightLength { got: usize, expected: usize },
    #[error("weight {0} is not dominant")]
    NotDominant(String),
    #[error("word {0} is not reduced")]
    NotReduced(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("empty parabolic index set")]
    EmptyParabolic,
    #[error("support of the weight does not match the parabolic")]
    SupportMismatch,
    #[error("word does not represent the minimal coset representative")]
    WrongCosetWord,
    #[error("fundamental weight {node} of {ctype} is not minuscule")]
    NotMinuscule { ctype: String, node: usize },
    #[error("weight multiplicity {0} > 1 in a minuscule module")]
    MultiplicityTooLarge(usize),
    #[error("module dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: u128, cap: usize },
    #[error("f-word has equal adjacent generators")]
    AdjacentEqual,
    #[error("valuation of the zero polynomial")]
    ZeroPolynomial,
    #[error("found {found} distinct valuations, expected {expected}")]
    ValuationCount { found: usize, expected: usize },
    #[error("ambient dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("polytope has non-integral vertices")]
    NonIntegral,
    #[error("lattice enumeration limited to dimension {cap}, got {dim}")]
    LatticeDimensionCap { dim: usize, cap: usize },
    #[error("empty point set")]
    EmptyPointSet,
    #[error("degree formula produced a non-integral value {0}")]
    NonIntegralDegree(String),
    #[error("scale cap exceeded: {0}")]
    ScaleCap(String),
}

pub type Result<T> = std::result::Result<T, Error>;
