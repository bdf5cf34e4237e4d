use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid letter {letter:?} at position {position}")]
    InvalidLetter { letter: char, position: usize },

    #[error("letter {letter} is not allowed in this group")]
    AlphabetViolation { letter: char },

    #[error("relator index must be non-negative, got {0}")]
    NegativeRelatorIndex(i64),

    #[error("level must be at least 1, got {0}")]
    InvalidLevel(i64),

    #[error("level mismatch: {left} vs {right}")]
    LevelMismatch { left: u32, right: u32 },

    #[error("retraction pair ({i}, {j}) is closer than the level {level}")]
    RetractionNotDefined { i: i64, j: i64, level: u32 },

    #[error("ambient ball too small: {0}")]
    AmbientTooSmall(String),

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("edge {edge} is not an a-edge of face {face}")]
    EdgeNotInFace { edge: usize, face: usize },

    #[error("band is not an annulus")]
    NotAnnulus,

    #[error("degenerate annulus: {0}")]
    DegenerateAnnulus(String),

    #[error("boundary does not parse as a push-out loop: {0}")]
    BoundaryParse(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
