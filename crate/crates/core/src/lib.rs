//! Engine for partizan games under the misère play convention.
//!
//! The crate is organized around an append-only [`Store`] of hash-consed
//! game forms. On top of the kernel sit:
//!
//! - [`deadend`]: the absolute order on Left dead-ends, their canonical
//!   forms, and the lattice of dead-end values by birthday;
//! - [`universe`]: universe descriptors with membership tests, truncation
//!   test sets, and strongness oracles;
//! - [`compare`]: the universe-relative order `>=` and equivalence on
//!   augmented games;
//! - [`simplest`]: reduction to the unique augmented simplest form;
//! - [`ruleset`]: Domineering and Clobber board evaluation;
//! - [`census`]: day-n tree enumeration and distinct-value counts;
//! - [`notation`]: the text syntax for game forms.

pub mod census;
pub mod compare;
pub mod deadend;
pub mod notation;
pub mod ruleset;
pub mod simplest;
pub mod store;
pub mod universe;

pub use compare::{compare, equiv, geq, Comparison};
pub use store::{GameId, Limits, Outcome, OutcomePair, Player, Store};
pub use universe::Universe;

use std::fmt;

/// Errors reported by fallible engine operations.
///
/// Kernel operations (interning, sums, outcomes) are total and do not
/// appear here; errors arise from malformed text, inputs outside an
/// operation's domain, or configured resource bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Text input could not be parsed; `pos` is a byte offset.
    Parse { pos: usize, message: String },
    /// The operation is defined only on ordinary games (no tombstones).
    TombstonedInput { op: &'static str },
    /// The operation requires a Left dead-end.
    NotALeftDeadEnd { op: &'static str },
    /// The operation rejects the empty game.
    EmptyGame { op: &'static str },
    /// The universe cannot support the requested computation.
    UnsupportedUniverse { message: String },
    /// A configured size or depth bound was exceeded.
    BoundExceeded { message: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse { pos, message } => write!(f, "parse error at {}: {}", pos, message),
            Error::TombstonedInput { op } => {
                write!(f, "{}: input must be an ordinary game (no tombstones)", op)
            }
            Error::NotALeftDeadEnd { op } => write!(f, "{}: input must be a Left dead-end", op),
            Error::EmptyGame { op } => write!(f, "{}: the empty game is not a valid input", op),
            Error::UnsupportedUniverse { message } => write!(f, "unsupported universe: {}", message),
            Error::BoundExceeded { message } => write!(f, "bound exceeded: {}", message),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
