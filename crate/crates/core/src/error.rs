use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("element encoding {enc} out of range for q = {q}")]
    ElementOutOfRange { enc: u64, q: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("field has no proper subfield")]
    NoProperSubfield,
    #[error("subfield of degree {0} is not a proper subfield")]
    NotProperSubfield(u32),
    #[error("dilation by zero")]
    ZeroDilation,
    #[error("zero in denominator set")]
    ZeroInDenominator,
    #[error("zero in set where it is not allowed")]
    ZeroInSet,
    #[error("zero in sum set A+B")]
    ZeroInSumset,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("oracle input too large: {0}")]
    OracleTooLarge(String),
    #[error("enumeration of {0} elements exceeds the exhaustive cap")]
    EnumerationTooLarge(u64),
    #[error("at least two points required")]
    TooFewPoints,
    #[error("integer overflow in exact count")]
    Overflow,
    #[error("weights sum to {sum}, below K = {k}")]
    WeightSumBelowK { sum: u64, k: u64 },
    #[error("non-positive weight")]
    NonPositiveWeight,
    #[error("empty pair graph")]
    EmptyGraph,
    #[error("set must contain at least two distinct elements")]
    DegenerateX,
    #[error("claim chain degenerate: {0}")]
    ChainDegenerate(String),
    #[error("unknown claim id: {0}")]
    UnknownClaim(String),
    #[error("unknown lemma id: {0}")]
    UnknownLemma(String),
    #[error("hypothesis cannot be checked: {0}")]
    HypothesisUncheckable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
