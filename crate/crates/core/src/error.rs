//! Crate-wide error type. Every fallible operation reports one of these
//! variants; `Error::name` gives the stable machine-readable tag.

use thiserror::Error;

use crate::presentation::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("words must be non-empty")]
    EmptyWord,

    #[error("alphabet must contain at least one letter")]
    EmptyAlphabet,

    #[error("letter x{letter} out of range for alphabet of size {alphabet_size}")]
    LetterOutOfRange { letter: usize, alphabet_size: usize },

    #[error("relation {index} duplicates an earlier relation (up to swapping sides)")]
    DuplicateRelation { index: usize },

    #[error("relation {index} has equal sides")]
    TrivialRelation { index: usize },

    #[error("offset {offset} does not fit a length-{needed} subword of a length-{len} word")]
    OffsetOutOfRange {
        offset: usize,
        needed: usize,
        len: usize,
    },

    #[error("relation {relation} is not applicable at offset {offset}")]
    SubwordMismatch { relation: usize, offset: usize },

    #[error("relation index {relation} out of range ({count} relations)")]
    RelationOutOfRange { relation: usize, count: usize },

    #[error("cell {index} does not apply; running word was {word}")]
    ChainBreak { index: usize, word: Word },

    #[error("bottom word of the first diagram differs from the top word of the second")]
    BoundaryMismatch,

    #[error("operands are defined over different presentations")]
    PresentationMismatch,

    #[error("slot {slot} out of range for {n} strands")]
    SlotOutOfRange { slot: usize, n: usize },

    #[error("braid is not pure: endpoint permutation is not the identity")]
    NotPure,

    #[error("strand counts differ: {left} vs {right}")]
    StrandCountMismatch { left: usize, right: usize },

    #[error("diagram must have top and bottom x1...xn over the planar presentation")]
    WrongBaseWord,

    #[error("vertex budget of {budget} exceeded; the complex may be infinite")]
    VertexBudgetExceeded { budget: usize },

    #[error("dimension {dim} out of range (complex has top dimension {max})")]
    DimensionOutOfRange { dim: usize, max: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable name of the variant, e.g. `"VertexBudgetExceeded"`.
    pub fn name(&self) -> &'static str {
        match self {
            Error::EmptyWord => "EmptyWord",
            Error::EmptyAlphabet => "EmptyAlphabet",
            Error::LetterOutOfRange { .. } => "LetterOutOfRange",
            Error::DuplicateRelation { .. } => "DuplicateRelation",
            Error::TrivialRelation { .. } => "TrivialRelation",
            Error::OffsetOutOfRange { .. } => "OffsetOutOfRange",
            Error::SubwordMismatch { .. } => "SubwordMismatch",
            Error::RelationOutOfRange { .. } => "RelationOutOfRange",
            Error::ChainBreak { .. } => "ChainBreak",
            Error::BoundaryMismatch => "BoundaryMismatch",
            Error::PresentationMismatch => "PresentationMismatch",
            Error::SlotOutOfRange { .. } => "SlotOutOfRange",
            Error::NotPure => "NotPure",
            Error::StrandCountMismatch { .. } => "StrandCountMismatch",
            Error::WrongBaseWord => "WrongBaseWord",
            Error::VertexBudgetExceeded { .. } => "VertexBudgetExceeded",
            Error::DimensionOutOfRange { .. } => "DimensionOutOfRange",
            Error::Parse(_) => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
