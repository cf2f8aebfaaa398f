//! Exact-arithmetic toolkit for range sums of polynomials over prime
//! fields: explicit constructions, exhaustive searches up to affine
//! equivalence, and empirical audits of the character-sum bounds that
//! govern them.

pub mod charsum;
pub mod constructions;
pub mod directions;
pub mod fp;
pub mod manifest;
pub mod parse;
pub mod poly;
pub mod profile;
pub mod search;

use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum Error {
    /// A value outside the operation's domain (bad modulus, zero inverse, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed polynomial expression, with byte position.
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// A precondition on inputs was violated.
    #[error("usage error: {0}")]
    Usage(String),

    /// An enumeration exceeded its candidate budget.
    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
