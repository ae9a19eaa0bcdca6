use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed permutation: {0}")]
    MalformedPermutation(String),
    #[error("landmarks are undefined for permutations of length {0}")]
    UndefinedLandmarks(usize),
    #[error("digit variants are only defined for collapsed permutations")]
    VariantUndefined,
    #[error("derived word is undefined for the word 0")]
    DerivedWordUndefined,
    #[error("word is not fixed by the supremum of its shifts: {word} (sup is {sup})")]
    SupNotFixed { word: String, sup: String },
    #[error("malformed word literal: {0}")]
    MalformedWord(String),
    #[error("malformed base: {0}")]
    MalformedBeta(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("floor of beta*x straddles {straddled} after {bits} bits of precision")]
    UndecidableAtPrecision { straddled: BigInt, bits: u32 },
    #[error("ordinal pattern undefined: {0}")]
    PatternUndefined(String),
    #[error("search inconclusive: {0}")]
    SearchInconclusive(String),
    #[error("degenerate expansion: {0}")]
    DegenerateExpansion(String),
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable machine-readable reason tag.
    pub fn reason(&self) -> &'static str {
        match self {
            Error::MalformedPermutation(_) => "malformed-permutation",
            Error::UndefinedLandmarks(_) => "undefined-landmarks",
            Error::VariantUndefined => "variant-undefined",
            Error::DerivedWordUndefined => "derived-word-undefined",
            Error::SupNotFixed { .. } => "sup-not-fixed",
            Error::MalformedWord(_) => "malformed-word",
            Error::MalformedBeta(_) => "malformed-beta",
            Error::Resource(_) => "resource",
            Error::UndecidableAtPrecision { .. } => "undecidable-at-precision",
            Error::PatternUndefined(_) => "pattern-undefined",
            Error::SearchInconclusive(_) => "search-inconclusive",
            Error::DegenerateExpansion(_) => "degenerate-expansion",
            Error::ConstructionFailed(_) => "construction-failed",
            Error::InvalidArgument(_) => "invalid-argument",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
