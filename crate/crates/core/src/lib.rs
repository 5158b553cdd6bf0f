//! Block languages as bitmaps.
//!
//! A block language collects words of one fixed length `ell` over a
//! `k`-symbol alphabet, and is fully described by a bit string of length
//! `k^ell` recording membership of every word in lexicographic order. This
//! crate provides:
//!
//! - the bitmap representation with word ranking, segments and quotients
//!   ([`bitmap`]);
//! - conversions between bitmaps and provably minimal deterministic and
//!   nondeterministic automata ([`synthesis`], [`automaton`]);
//! - an exact solver for the NP-complete minimal-cover (set-basis) problem
//!   that drives NFA minimization ([`cover`]);
//! - language operations at the bitmap or automaton level: Boolean
//!   combinations, reversal by perfect shuffles, word edits, concatenation,
//!   star, plus, stencil and complement ([`ops`]);
//! - generators for the witness families that attain the worst-case state
//!   complexities, and checkers comparing constructions against the
//!   closed-form bounds ([`witness`], [`bounds`]).

pub mod automaton;
pub mod bitmap;
pub mod bits;
pub mod bounds;
pub mod cover;
mod error;
pub mod ops;
pub mod synthesis;
pub mod witness;

pub use error::{Error, Result};
