//! Resource caps.
//!
//! The caps keep binomial expansions, matrix powers, and orbit tables
//! tractable. They bound user-supplied inputs at the validation boundary;
//! derived intermediates (doubled automorphisms, expanded phase polynomials)
//! are not re-checked against them.

/// Maximum degree of user-supplied polynomials.
pub const DEGREE_CAP: usize = 12;

/// Maximum torus dimension of user-supplied matrices and group specs.
pub const DIMENSION_CAP: usize = 8;

/// Maximum sequence length any generator will materialize (`~1e8` complex
/// values would already be 2 GiB with the sieve scratch).
pub const SEQUENCE_CAP: usize = 1 << 26;

/// Cap on the working precision of the power-sequence accumulator, in bits.
pub const PRECISION_CAP_BITS: u64 = 1_000_000;

/// Cap on `|F|` for bijectivity checks by enumeration of the finite part.
pub const FINITE_ENUM_CAP: u64 = 1_000_000;

/// Orbit steps walked while looking for the return to the base point.
pub const ORBIT_WALK_CAP: u64 = 1 << 18;

/// Largest exponent for which a sequential orbit walk is attempted; beyond
/// this every needed power is computed by repeated squaring.
pub const ORBIT_TABLE_CAP: u64 = 10_000_000;

/// Operation budget for brute-force uniformity-norm evaluation (`N^(k+1)`).
pub const GOWERS_BUDGET: u128 = 1_000_000_000;

/// Block length for deterministic chunked summation.
pub const SUM_BLOCK: usize = 1 << 14;

/// Multiplier bound in the certificate search for the exponent `nu`.
pub const CERT_SEARCH_MULTIPLIER_CAP: u64 = 16;
