//! Exact combinatorics of matchings in edge-colored complete graphs.
//!
//! The crate revolves around one question: when does an edge coloring of `K_n`
//! with many colors force a *rainbow matching* (pairwise-disjoint edges with
//! pairwise-distinct colors), and what does a coloring that avoids one look
//! like? The pieces:
//!
//! * [`graph`]: plain graphs, complete edge-colored graphs, file formats.
//! * [`matching`]: maximum matching (blossom), Gallai-Edmonds decomposition,
//!   Berge deficiency witnesses, bipartite Hall matchings.
//! * [`rainbow`]: exact maximum rainbow matching via branch and bound.
//! * [`detect`]: monochromatic clique and monochromatic join detectors, and
//!   the combined stability verdict.
//! * [`extremal`]: closed-form extremal counts, color thresholds, the tight
//!   constructions, and the exact-integer inequality auditor.
//! * [`harness`]: small-case brute-force oracles and randomized probes.
//!
//! Everything is deterministic: fixed iteration orders, seedable RNG with
//! per-trial substreams, and node-count search budgets.

pub(crate) mod bits;
pub mod detect;
pub mod extremal;
pub mod graph;
pub mod harness;
pub mod matching;
pub mod rainbow;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    /// The instance exceeds a documented small-case limit.
    #[error("instance too large: {what} supports {limit}, got {got}")]
    TooLarge {
        what: &'static str,
        limit: usize,
        got: usize,
    },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("empty vertex subset")]
    EmptySubset,
}

/// Errors from reading the `cg 1` / `g 1` document formats.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("line {line}: vertex id {id} out of range for n = {n}")]
    VertexOutOfRange { line: usize, id: usize, n: usize },
    #[error("line {line}: pair ({u}, {v}) listed twice")]
    DuplicatePair { line: usize, u: usize, v: usize },
    #[error("incomplete coloring: {missing} of {expected} pairs missing")]
    Incomplete { missing: usize, expected: usize },
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParams(msg.into())
}
