//! Exact binary expansions of quadratic irrationals and finite-`N`
//! verification of the pair-counting identities and digit-count bounds
//! built on them.
//!
//! The pipeline for one radicand `d`:
//!
//! 1. [`digits::expand_sqrt`] computes `⌊√d·2^N⌋` exactly.
//! 2. [`spectrum`] counts ordered pairs of ones, `r(n)`, by direct
//!    enumeration or by one packed big-integer squaring.
//! 3. [`tailfn`] derives the integer tail values `T(R)`.
//! 4. [`bounds`], [`parity`] and [`forcing`] evaluate each inequality in
//!    exact rational arithmetic and return [`BoundReport`]s.

pub mod bounds;
pub mod cache;
pub mod constants;
pub mod digits;
pub mod error;
pub mod forcing;
pub mod isqrt;
pub mod parity;
pub mod report;
pub mod spectrum;
pub mod suite;
pub mod tailfn;

pub use bounds::{BoundReport, Direction, IntervalPartition};
pub use digits::{expand_sqrt, DigitProfile, DigitSequence};
pub use error::{Error, Result};
pub use parity::ParityCounts;
pub use spectrum::{Convolution, RSequence};
pub use suite::Analysis;
pub use tailfn::TSequence;
