use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Two series with different truncation orders were combined.
    #[error("cutoff mismatch: {0} vs {1}")]
    CutoffMismatch(u32, u32),

    /// A series that must be a unit (constant term 1) was not.
    #[error("series is not a unit: constant term is {0}")]
    NotAUnit(String),

    /// A coefficient was requested beyond the truncation order.
    #[error("coefficient ({p},{q}) lies beyond cutoff {cutoff}")]
    BeyondCutoff { p: u32, q: u32, cutoff: u32 },

    /// A wall direction must be a primitive lattice vector.
    #[error("direction ({0},{1}) is not primitive or not admissible")]
    BadDirection(u32, u32),

    /// Exchange parameters must be positive.
    #[error("exchange parameters must be positive, got b={0} c={1}")]
    BadParameters(u32, u32),

    /// The diagram failed a consistency check that should hold by construction.
    #[error("inconsistent diagram at (b,c)=({b},{c}), degree {degree}: {detail}")]
    Inconsistent {
        b: u32,
        c: u32,
        degree: u32,
        detail: String,
    },

    /// An exact linear solve found no (unique) solution.
    #[error("linear system unsolvable: rank {rank} of {rows}x{cols}{}", if *inconsistent { ", inconsistent" } else { "" })]
    Singular {
        rows: usize,
        cols: usize,
        rank: usize,
        inconsistent: bool,
    },

    /// A fitted polynomial failed validation against held-out samples.
    #[error("fit for tau({i},{j}) failed validation: {detail}")]
    FitInvalid { i: u32, j: u32, detail: String },

    /// Text decoding failed.
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    /// Bad command-line or programmatic usage.
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
