//! Computational laboratory for oscillating weight sequences, polynomial-phase
//! exponential sums, and affine dynamics on `T^d x F`.
//!
//! The crate is organized around an exact-arithmetic core: rationals on the
//! circle, integer/rational polynomials, and integer matrices. On top of that
//! sit weight-sequence generators, exponential-sum kernels with exact and
//! floating backends, empirical oscillation testing, zero-entropy
//! certification of affine maps, and weighted multiple ergodic averages with
//! an exact phase-polynomial reduction.

pub mod averages;
pub mod dynamics;
pub mod error;
pub mod exact;
pub mod limits;
pub mod oscillation;
pub mod sequences;
pub mod sums;

pub use error::Error;

/// Crate result alias used throughout.
pub type Result<T> = std::result::Result<T, Error>;
