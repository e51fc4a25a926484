//! Exact computation with quadratic forms over Q, Q(t), and the rational
//! function field of the real closure: Witt classes, signatures as step
//! functions on the real spectrum, second residues, unramified sections over
//! opens of the line, and an integer-lattice spectral-sequence engine for the
//! associated filtration arguments.

pub mod error;
pub mod exact;
pub mod forms;
pub mod homology;
pub mod residues;
pub mod signatures;
pub mod spectrum;

pub use error::{Error, Result};
