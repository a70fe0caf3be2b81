use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{parse_rational, rational_string};
use super::UnitRational;
use crate::{Error, Result};

/// Polynomial with big-integer coefficients, stored by ascending degree.
/// The trailing coefficient is nonzero unless the polynomial is zero.
#[derive(Clone, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    /// Builds from ascending coefficients, trimming trailing zeros.
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        IntPoly {
            coeffs: vec![BigInt::one()],
        }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    /// `x^n - 1`.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[0] = -BigInt::one();
        coeffs[n] = BigInt::one();
        Self::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the convention that constants (including zero) have
    /// degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        Self::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - other.coeff(i));
        }
        Self::new(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Exact division by a monic divisor. Returns `None` when the remainder
    /// is nonzero.
    pub fn div_exact_monic(&self, divisor: &Self) -> Option<Self> {
        assert!(divisor.is_monic(), "divisor must be monic");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.coeffs.len() < divisor.coeffs.len() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let dd = divisor.coeffs.len() - 1;
        let qlen = rem.len() - dd;
        let mut quot = vec![BigInt::zero(); qlen];
        for i in (0..qlen).rev() {
            let c = std::mem::replace(&mut rem[i + dd], BigInt::zero());
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().take(dd).enumerate() {
                rem[i + j] -= &c * d;
            }
            quot[i] = c;
        }
        if rem.iter().all(|c| c.is_zero()) {
            Some(Self::new(quot))
        } else {
            None
        }
    }

    /// Horner evaluation at an integer point.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_u64(&self, x: u64) -> BigInt {
        self.eval(&BigInt::from(x))
    }

    /// Substitutes `x <- a*m + b`, returning the polynomial in `m`.
    pub fn compose_linear(&self, a: &BigInt, b: &BigInt) -> Self {
        // Horner over polynomial coefficients: acc <- acc*(a m + b) + c_k.
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            let shifted: Vec<BigInt> = {
                // acc * (a m + b)
                let by_b = acc.scale(b);
                let mut by_a = vec![BigInt::zero()];
                by_a.extend(acc.coeffs.iter().map(|q| q * a));
                Self::new(by_a).add(&by_b).coeffs
            };
            acc = Self::new(shifted).add(&Self::constant(c.clone()));
        }
        acc
    }

    pub fn to_rational(&self) -> RationalPoly {
        RationalPoly::new(
            self.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            }
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if i == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for IntPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let strings = Vec::<String>::deserialize(deserializer)?;
        let mut coeffs = Vec::with_capacity(strings.len());
        for s in &strings {
            coeffs.push(
                s.trim()
                    .parse::<BigInt>()
                    .map_err(|_| de::Error::custom(format!("bad integer coefficient {s:?}")))?,
            );
        }
        Ok(IntPoly::new(coeffs))
    }
}

/// Polynomial with exact rational coefficients, ascending degree, trailing
/// coefficient nonzero unless zero.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalPoly {
    coeffs: Vec<BigRational>,
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn zero() -> Self {
        RationalPoly { coeffs: vec![] }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        Self::new(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn eval(&self, x: &BigInt) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * BigRational::from_integer(x.clone()) + c;
        }
        acc
    }

    /// Evaluates at a nonnegative integer and reduces mod 1.
    pub fn eval_unit(&self, n: u64) -> UnitRational {
        UnitRational::from_rational(self.eval(&BigInt::from(n)))
    }

    /// Coefficients as `f64` (ascending). Lossy; used to hand an exact phase
    /// to the floating backend.
    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(0.0))
            .collect()
    }

    /// Parses a comma-separated ascending coefficient list of `"p/q"` terms.
    pub fn parse_list(s: &str) -> Result<Self> {
        let mut coeffs = Vec::new();
        for part in s.split(',') {
            coeffs.push(parse_rational(part)?);
        }
        Ok(Self::new(coeffs))
    }
}

impl fmt::Debug for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(rational_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl Serialize for RationalPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&rational_string(c))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for RationalPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let strings = Vec::<String>::deserialize(deserializer)?;
        let mut coeffs = Vec::with_capacity(strings.len());
        for s in &strings {
            coeffs.push(parse_rational(s).map_err(de::Error::custom)?);
        }
        Ok(RationalPoly::new(coeffs))
    }
}

/// Expands the binomial coefficient `C(q(m), j)` as a polynomial in `m` with
/// exact rational coefficients: `q(m)(q(m)-1)...(q(m)-j+1) / j!`.
///
/// The degree is `j * deg(q)` (empty product for `j = 0`).
pub fn binom_poly(q: &IntPoly, j: u32) -> RationalPoly {
    let mut num = RationalPoly::constant(BigRational::one());
    let qr = q.to_rational();
    let mut factorial = BigInt::one();
    for i in 0..j {
        let shifted = qr.add(&RationalPoly::constant(BigRational::from_integer(
            -BigInt::from(i),
        )));
        num = num.mul(&shifted);
        factorial *= BigInt::from(i + 1);
    }
    num.scale(&BigRational::new(BigInt::one(), factorial))
}

/// Rewrites `q(m*nu + r)` as `q'(m)*nu + r'` with `0 <= r' < nu` and `q'`
/// an integer polynomial of the same degree as `q`.
///
/// Returns `Error::Integrality` if the divided coefficients fail to be
/// integers, which cannot happen for integer `q`; the check guards the
/// implementation, not the data.
pub fn poly_shift_scale(q: &IntPoly, nu: u64, r: u64) -> Result<(IntPoly, u64)> {
    assert!(nu >= 1, "nu must be positive");
    assert!(r < nu, "residue out of range");
    let nu_big = BigInt::from(nu);
    let composed = q.compose_linear(&nu_big, &BigInt::from(r));
    let r_prime = q.eval_u64(r).mod_floor(&nu_big);
    let mut coeffs = Vec::with_capacity(composed.coeffs().len());
    for (i, c) in composed.coeffs().iter().enumerate() {
        let adjusted = if i == 0 { c - &r_prime } else { c.clone() };
        let (quot, rem) = adjusted.div_rem(&nu_big);
        if !rem.is_zero() {
            return Err(Error::Integrality(format!(
                "coefficient {adjusted} of m^{i} not divisible by {nu}"
            )));
        }
        coeffs.push(quot);
    }
    let q_prime = IntPoly::new(coeffs);
    if !q.is_zero() && q_prime.degree() != q.degree() {
        return Err(Error::Integrality(format!(
            "degree changed from {} to {}",
            q.degree(),
            q_prime.degree()
        )));
    }
    let r_prime = u64::try_from(r_prime).expect("residue fits u64");
    Ok((q_prime, r_prime))
}

/// Decides whether `q(n) >= 0` for every integer `n >= 0`.
///
/// Constants are checked directly; otherwise the leading coefficient must be
/// positive and `q` is evaluated at every integer in `[0, B]` where `B` is
/// the Cauchy root bound, beyond which no sign change is possible.
pub fn validate_nat_poly(q: &IntPoly) -> bool {
    if q.is_zero() {
        return true;
    }
    if q.degree() == 0 {
        return !q.coeff(0).is_negative();
    }
    let lead = q.leading();
    if lead.is_negative() {
        return false;
    }
    let max_abs = q
        .coeffs()
        .iter()
        .take(q.degree())
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(BigInt::zero);
    // B = 1 + ceil(max |a_i| / a_d)
    let bound = BigInt::one() + (&max_abs + &lead - BigInt::one()).div_floor(&lead);
    let mut n = BigInt::zero();
    while n <= bound {
        if q.eval(&n).is_negative() {
            return false;
        }
        n += 1;
    }
    true
}
