//! Exact arithmetic foundation: rationals on the circle, integer and
//! rational polynomials, integer matrices, and cyclotomic factorization.

mod cyclotomic;
mod matrix;
mod poly;
mod rational;

pub use cyclotomic::{cyclotomic, cyclotomic_factor, euler_phi, CyclotomicFactorization};
pub use matrix::IntMatrix;
pub use poly::{binom_poly, poly_shift_scale, validate_nat_poly, IntPoly, RationalPoly};
pub use rational::UnitRational;
