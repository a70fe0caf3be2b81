use serde::Serialize;

use super::IntPoly;

/// Euler totient by trial-division factorization; the arguments here stay
/// tiny (bounded by twice the square of a matrix dimension).
pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1);
    let mut n = n;
    let mut phi = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

/// The `n`-th cyclotomic polynomial, via exact division of `x^n - 1` by the
/// cyclotomic polynomials of the proper divisors of `n`.
pub fn cyclotomic(n: u64) -> IntPoly {
    assert!(n >= 1);
    let mut quotient = IntPoly::x_pow_minus_one(n as usize);
    for d in divisors(n) {
        if d == n {
            continue;
        }
        quotient = quotient
            .div_exact_monic(&cyclotomic(d))
            .expect("x^n - 1 is divisible by each cyclotomic of a divisor");
    }
    quotient
}

/// Result of trial division by cyclotomic polynomials.
///
/// When `complete` the product of the listed factors reconstructs the input
/// exactly; otherwise `cofactor` carries the part with no cyclotomic divisor
/// left (incompleteness is data, not an error).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclotomicFactorization {
    /// `(order, multiplicity)` pairs, ascending order.
    pub factors: Vec<(u64, u32)>,
    pub complete: bool,
    #[serde(serialize_with = "serialize_poly_string")]
    pub cofactor: IntPoly,
}

fn serialize_poly_string<S: serde::Serializer>(
    p: &IntPoly,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(p)
}

impl CyclotomicFactorization {
    /// Multiplies the recorded factors back together (times the cofactor).
    pub fn reconstruct(&self) -> IntPoly {
        let mut acc = self.cofactor.clone();
        for &(order, mult) in &self.factors {
            let phi = cyclotomic(order);
            for _ in 0..mult {
                acc = acc.mul(&phi);
            }
        }
        acc
    }
}

/// Trial-divides a monic polynomial by every cyclotomic polynomial that
/// could divide it — all orders `n` with `phi(n) <= deg p`, which forces
/// `n <= 2 deg(p)^2` since `phi(n) >= sqrt(n/2)`.
pub fn cyclotomic_factor(p: &IntPoly) -> CyclotomicFactorization {
    assert!(p.is_monic(), "input must be monic");
    let deg = p.degree() as u64;
    let mut remaining = p.clone();
    let mut factors = Vec::new();
    if deg >= 1 {
        let bound = 2 * deg * deg + 1;
        for n in 1..=bound {
            if euler_phi(n) > deg {
                continue;
            }
            let phi = cyclotomic(n);
            let mut mult = 0u32;
            while let Some(q) = remaining.div_exact_monic(&phi) {
                remaining = q;
                mult += 1;
            }
            if mult > 0 {
                factors.push((n, mult));
            }
        }
    }
    let complete = remaining == IntPoly::one();
    CyclotomicFactorization {
        factors,
        complete,
        cofactor: remaining,
    }
}
