use thiserror::Error;

/// Every failure the engine can report. Variant names double as the error
/// codes surfaced by the JSON service.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands live in different quadratic fields: sqrt({0}) vs sqrt({1})")]
    MixedRadicand(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("radicand {0} is not square-free or is below 2")]
    BadRadicand(u64),
    #[error("continued fraction entry dropped below 1")]
    EntryUnderflow,
    #[error("continued fraction entry does not fit in 64 bits")]
    EntryOverflow,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("k must be at least 1")]
    KZero,
    #[error("brute-force enumeration is limited to k <= {0}")]
    TooLarge(u64),
    #[error("invalid lattice path: {0}")]
    InvalidPath(String),
    #[error("seed classes are not compatible with the recursion: {0}")]
    SeedIncompatible(String),
    #[error("not a quasi-perfect class: {0}")]
    NotQuasiPerfect(String),
    #[error("square root leaves the current quadratic field")]
    RadicandExplosion,
    #[error("ray from the anchor meets no edge")]
    NoIntersection,
    #[error("ray from the anchor passes through a vertex")]
    AmbiguousHit,
    #[error("mutation matrix is not unimodular")]
    NonUnimodular,
    #[error("polygon is no longer strictly convex")]
    ConvexityLost,
    #[error("polygon invariant broken: {0}")]
    InvariantBroken(String),
    #[error("unknown vertex label '{0}'")]
    UnknownLabel(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("step {step}: {source}")]
    AtStep { step: usize, source: Box<Error> },
}

impl Error {
    /// Short machine-readable name, e.g. `NoIntersection`.
    pub fn code(&self) -> &'static str {
        match self {
            Error::MixedRadicand(..) => "MixedRadicand",
            Error::DivisionByZero => "DivisionByZero",
            Error::BadRadicand(_) => "BadRadicand",
            Error::EntryUnderflow => "EntryUnderflow",
            Error::EntryOverflow => "EntryOverflow",
            Error::Precondition(_) => "Precondition",
            Error::KZero => "KZero",
            Error::TooLarge(_) => "TooLarge",
            Error::InvalidPath(_) => "InvalidPath",
            Error::SeedIncompatible(_) => "SeedIncompatible",
            Error::NotQuasiPerfect(_) => "NotQuasiPerfect",
            Error::RadicandExplosion => "RadicandExplosion",
            Error::NoIntersection => "NoIntersection",
            Error::AmbiguousHit => "AmbiguousHit",
            Error::NonUnimodular => "NonUnimodular",
            Error::ConvexityLost => "ConvexityLost",
            Error::InvariantBroken(_) => "InvariantBroken",
            Error::UnknownLabel(_) => "UnknownLabel",
            Error::Parse(_) => "Parse",
            Error::AtStep { source, .. } => source.code(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
