//! Growth of free group automorphisms.
//!
//! Exact word arithmetic in free groups of finite rank, iteration of
//! automorphisms on elements and conjugacy classes, classification of the
//! resulting length growth as `lambda^p * p^m`, the recursive growth-type
//! calculus on lamination posets, explicit automorphism families realising
//! extremal invariants, and executable checks of the inequality systems
//! relating the invariants `(e, d, s, rk Fix)` of an automorphism of `F_n`.

pub mod aut;
pub mod families;
pub mod fold;
pub mod growth;
pub mod invariants;
pub mod lamination;
pub mod matrix;
pub mod poly;
pub mod report;
pub mod sweep;
pub mod word;

pub use aut::Automorphism;
pub use growth::{GrowthType, Lambda, LengthSequence, Provenance, Subject};
pub use word::{Alphabet, CyclicWord, Letter, Word};

use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum Error {
    #[error("generator index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: u32, rank: u32 },
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: u32, right: u32 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not a basis image: abelianized determinant is {det}, expected +/-1")]
    NotAnAutomorphism { det: i64 },
    #[error("the trivial word has no growth type")]
    TrivialSubject,
    #[error("cancellation certificate is not valid for this subject")]
    InvalidCertificate,
    #[error("zero transition matrix has no dominant eigenvalue")]
    ZeroMatrix,
    #[error("lamination order contains a cycle through {0:?}")]
    PosetCycle(String),
    #[error("need at least {need} usable terms, got {got}{}", if *.truncated { " (length cap hit)" } else { "" })]
    InsufficientData {
        need: usize,
        got: usize,
        truncated: bool,
    },
    #[error("length sequence is not eventually monotone; refusing to classify")]
    NonMonotone,
    #[error("(e, d) = ({e}, {d}) is not admissible for rank {n}")]
    Inadmissible { n: u32, e: u32, d: u32 },
    #[error("chain bound only applies when s >= 1")]
    NoChain,
    #[error("({e}, {d}) for rank {n} needs a geometric block with no explicit basis images; not constructible here")]
    UnsupportedRegion { n: u32, e: u32, d: u32 },
    #[error("bounded search exceeded its resource cap ({0})")]
    ResourceCap(String),
    #[error("invalid parameter: {0}")]
    BadParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
