use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Exact point of the circle `R/Z`: a reduced fraction in `[0, 1)`.
///
/// Every constructor normalizes mod 1, so equality is plain field equality
/// and the representation is canonical.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct UnitRational(BigRational);

impl UnitRational {
    pub fn zero() -> Self {
        UnitRational(BigRational::zero())
    }

    /// Builds `numer/denom` reduced into `[0, 1)`. Panics on a zero
    /// denominator.
    pub fn new(numer: BigInt, denom: BigInt) -> Self {
        assert!(!denom.is_zero(), "zero denominator");
        Self::from_rational(BigRational::new(numer, denom))
    }

    /// Reduces an arbitrary rational mod 1.
    pub fn from_rational(r: BigRational) -> Self {
        let f = r.floor();
        UnitRational(r - f)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_rational(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_rational(&self.0 - &other.0)
    }

    pub fn neg(&self) -> Self {
        Self::from_rational(-self.0.clone())
    }

    /// `k * x mod 1` without growing intermediates: `(k * numer) mod denom`.
    pub fn scale(&self, k: &BigInt) -> Self {
        let den = self.denom().clone();
        let num = (k * self.numer()).mod_floor(&den);
        UnitRational(BigRational::new(num, den))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(0.0)
    }

    /// Parses `"p/q"`, a bare integer `"p"`, or a decimal like `"0.375"`,
    /// reducing mod 1. Decimals are snapped to the exact dyadic value of
    /// their nearest double.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains('.') {
            let x: f64 = s
                .parse()
                .map_err(|_| Error::BadInput(format!("bad decimal {s:?}")))?;
            return Self::from_f64_exact(x);
        }
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let numer: BigInt = num
            .parse()
            .map_err(|_| Error::BadInput(format!("bad rational numerator {num:?}")))?;
        let denom: BigInt = den
            .parse()
            .map_err(|_| Error::BadInput(format!("bad rational denominator {den:?}")))?;
        if denom.is_zero() {
            return Err(Error::BadInput(format!("zero denominator in {s:?}")));
        }
        Ok(Self::new(numer, denom))
    }

    /// Exact conversion of a finite `f64` (every double is dyadic).
    pub fn from_f64_exact(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::BadInput(format!("non-finite value {x}")));
        }
        let r = BigRational::from_float(x)
            .ok_or_else(|| Error::BadInput(format!("unrepresentable value {x}")))?;
        Ok(Self::from_rational(r))
    }
}

impl Hash for UnitRational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.numer().hash(state);
        self.0.denom().hash(state);
    }
}

impl fmt::Display for UnitRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for UnitRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for UnitRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for UnitRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        UnitRational::parse(&s).map_err(de::Error::custom)
    }
}

/// Formats an arbitrary rational as `"p/q"`.
pub(crate) fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"p/q"` or `"p"` into an arbitrary (not mod-1) rational.
pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let numer: BigInt = num
        .parse()
        .map_err(|_| Error::BadInput(format!("bad rational {s:?}")))?;
    let denom: BigInt = den
        .parse()
        .map_err(|_| Error::BadInput(format!("bad rational {s:?}")))?;
    if denom.is_zero() {
        return Err(Error::BadInput(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(numer, denom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn ur(n: i64, d: i64) -> UnitRational {
        UnitRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn normalizes_into_unit_interval() {
        assert_eq!(ur(16, 3), ur(1, 3));
        assert_eq!(ur(-1, 3), ur(2, 3));
        assert_eq!(ur(7, 7), UnitRational::zero());
        assert_eq!(ur(-9, 4), ur(3, 4));
    }

    #[test]
    fn reduced_representation() {
        let x = ur(6, 8);
        assert_eq!(x.numer(), &BigInt::from(3));
        assert_eq!(x.denom(), &BigInt::from(4));
        assert!(ur(5, 5).numer().is_zero());
        assert!(ur(5, 5).denom().is_one());
    }

    #[test]
    fn arithmetic_mod_one() {
        assert_eq!(ur(2, 3).add(&ur(2, 3)), ur(1, 3));
        assert_eq!(ur(1, 4).sub(&ur(1, 2)), ur(3, 4));
        assert_eq!(ur(1, 3).neg(), ur(2, 3));
        assert_eq!(ur(1, 3).scale(&BigInt::from(5)), ur(2, 3));
        assert_eq!(ur(1, 3).scale(&BigInt::from(-1)), ur(2, 3));
    }

    #[test]
    fn parse_and_display_round_trip() {
        let x = UnitRational::parse("285/14").unwrap();
        assert_eq!(x, ur(5, 14));
        assert_eq!(x.to_string(), "5/14");
        assert_eq!(UnitRational::parse("3").unwrap(), UnitRational::zero());
        assert!(UnitRational::parse("1/0").is_err());
        assert!(UnitRational::parse("x/2").is_err());
    }

    #[test]
    fn dyadic_from_f64() {
        assert_eq!(UnitRational::from_f64_exact(0.375).unwrap(), ur(3, 8));
        assert_eq!(UnitRational::from_f64_exact(2.25).unwrap(), ur(1, 4));
    }
}
