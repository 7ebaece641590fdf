use alloc::string::String;

/// Errors raised by the scoring and induction routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("duplicate document id `{0}`")]
    DuplicateDocument(String),
    #[error("degenerate probability: P(t,f) = 1 makes the NPMI denominator zero")]
    DegenerateProbability,
    #[error("invalid count input: {0}")]
    InvalidCounts(&'static str),
    #[error("empty substitute sample for `{0}`")]
    EmptySample(String),
    #[error("substitute record targets `{found}` but expected `{expected}`")]
    TargetMismatch { expected: String, found: String },
    #[error("partition does not cover the network: {0}")]
    InvalidPartition(&'static str),
    #[error("resolution undefined: {0}")]
    UndefinedResolution(&'static str),
    #[error("`{0}` has no induced senses")]
    NoSenses(String),
    #[error("assignment references unknown document `{0}`")]
    UnknownDocument(String),
    #[error("empty document `{0}`")]
    EmptyDocument(String),
    #[error("empty lexicon")]
    EmptyLexicon,
    #[error("threshold grid needs at least two increasing points")]
    InvalidGrid,
    #[error("need at least two usable pairs, found {0}")]
    TooFewPairs(usize),
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("subfield `{0}` has no citation vector")]
    MissingVector(String),
    #[error("unknown subfield label `{0}`")]
    UnknownSubfield(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
