//! Difference `d` ascent sequences and the structures they encode.
//!
//! Five families of combinatorial objects, all counted by the same numbers
//! for fixed `n` and `d`:
//!
//! * [`sequences`]: `d`-ascent sequences,
//! * [`permutations`]: difference `d` permutations, with the bijection
//!   [`permutations::phi`],
//! * [`posets`]: difference `d` factorial posets, with the bijection
//!   [`posets::psi`],
//! * [`matrices`]: Fishburn matrices and column-restricted matrices, with the
//!   bijections [`matrices::theta`] and [`matrices::theta_bar`].
//!
//! [`oracle`] holds slow, independent re-implementations of every predicate
//! and [`verify`] runs the exhaustive cross-checks used by the CLI and the
//! acceptance suite.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod io;
pub mod matrices;
pub mod oracle;
pub mod permutations;
pub mod posets;
pub mod sequences;
pub mod verify;

pub use error::{Error, Result};
pub use matrices::TriMatrix;
pub use permutations::{BivincularPattern, Permutation};
pub use posets::FactorialPoset;
pub use sequences::DSequence;
