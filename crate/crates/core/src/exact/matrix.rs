use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::SerializeSeq;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use super::IntPoly;

/// Square matrix with big-integer entries, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(dim: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(entries.len(), dim * dim, "entries must fill a {dim}x{dim} matrix");
        IntMatrix { dim, entries }
    }

    pub fn from_i64(dim: usize, entries: &[i64]) -> Self {
        Self::new(dim, entries.iter().map(|&e| BigInt::from(e)).collect())
    }

    pub fn from_rows(rows: &[Vec<BigInt>]) -> Self {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            assert_eq!(row.len(), dim, "rows must form a square matrix");
            entries.extend(row.iter().cloned());
        }
        IntMatrix { dim, entries }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = BigInt::one();
        }
        m
    }

    pub fn zero(dim: usize) -> Self {
        IntMatrix {
            dim,
            entries: vec![BigInt::zero(); dim * dim],
        }
    }

    /// Companion matrix of a monic polynomial: characteristic polynomial of
    /// the result is the input.
    pub fn companion(p: &IntPoly) -> Self {
        assert!(p.is_monic() && p.degree() >= 1, "companion needs a monic nonconstant");
        let d = p.degree();
        let mut m = Self::zero(d);
        for i in 1..d {
            m.entries[i * d + (i - 1)] = BigInt::one();
        }
        for i in 0..d {
            m.entries[i * d + (d - 1)] = -p.coeff(i);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &BigInt {
        &self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self == &Self::identity(self.dim)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        IntMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        IntMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * &other.entries[k * n + j];
                }
            }
        }
        IntMatrix { dim: n, entries: out }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        IntMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * k).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.dim);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn trace(&self) -> BigInt {
        (0..self.dim)
            .map(|i| self.entries[i * self.dim + i].clone())
            .sum()
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.dim);
        let n = self.dim;
        (0..n)
            .map(|i| (0..n).map(|j| &self.entries[i * n + j] * &v[j]).sum())
            .collect()
    }

    /// Characteristic polynomial `det(xI - A)` by the Faddeev-LeVerrier
    /// recurrence. Every division is by the step index and provably exact;
    /// exactness is asserted.
    pub fn char_poly(&self) -> IntPoly {
        let n = self.dim;
        if n == 0 {
            return IntPoly::one();
        }
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut m = Self::identity(n);
        for k in 1..=n {
            let am = self.mul(&m);
            let t = am.trace();
            let kk = BigInt::from(k);
            let (c, rem) = num_integer::Integer::div_rem(&-t, &kk);
            assert!(rem.is_zero(), "Faddeev-LeVerrier division must be exact");
            m = am.add(&Self::identity(n).scale(&c));
            coeffs[n - k] = c;
        }
        IntPoly::new(coeffs)
    }

    /// Exact determinant, read off the characteristic polynomial:
    /// `det(A) = (-1)^n * p(0)`.
    pub fn det(&self) -> BigInt {
        let p0 = self.char_poly().coeff(0);
        if self.dim.is_multiple_of(2) {
            p0
        } else {
            -p0
        }
    }

    /// Evaluates an integer polynomial at this matrix.
    pub fn eval_poly(&self, p: &IntPoly) -> Self {
        let mut acc = Self::zero(self.dim);
        for c in p.coeffs().iter().rev() {
            acc = self.mul(&acc).add(&Self::identity(self.dim).scale(c));
        }
        acc
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.dim))?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|j| self.get(i, j).to_string()).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(deserializer)?;
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in &rows {
            if row.len() != dim {
                return Err(de::Error::custom(format!(
                    "matrix row has {} entries, expected {dim}",
                    row.len()
                )));
            }
            for s in row {
                entries.push(
                    s.trim()
                        .parse::<BigInt>()
                        .map_err(|_| de::Error::custom(format!("bad integer entry {s:?}")))?,
                );
            }
        }
        Ok(IntMatrix::new(dim, entries))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn char_poly_known_matrices() {
        let unipotent = IntMatrix::from_i64(2, &[1, 1, 0, 1]);
        assert_eq!(unipotent.char_poly(), IntPoly::from_i64(&[1, -2, 1]));

        let rotation = IntMatrix::from_i64(2, &[0, -1, 1, 0]);
        assert_eq!(rotation.char_poly(), IntPoly::from_i64(&[1, 0, 1]));

        let anosov = IntMatrix::from_i64(2, &[2, 1, 1, 1]);
        assert_eq!(anosov.char_poly(), IntPoly::from_i64(&[1, -3, 1]));
    }

    #[test]
    fn determinants() {
        assert_eq!(IntMatrix::from_i64(2, &[2, 1, 1, 1]).det(), BigInt::one());
        assert_eq!(
            IntMatrix::from_i64(2, &[2, 0, 0, 3]).det(),
            BigInt::from(6)
        );
        assert_eq!(
            IntMatrix::from_i64(3, &[0, 0, 1, 1, 0, 1, 0, 1, 0]).det(),
            BigInt::one()
        );
        assert_eq!(
            IntMatrix::from_i64(1, &[-7]).det(),
            BigInt::from(-7)
        );
    }

    #[test]
    fn companion_inverts_char_poly() {
        let p = IntPoly::from_i64(&[-1, -1, 0, 1]); // x^3 - x - 1
        assert_eq!(IntMatrix::companion(&p).char_poly(), p);
        let phi12 = IntPoly::from_i64(&[1, 0, -1, 0, 1]); // x^4 - x^2 + 1
        assert_eq!(IntMatrix::companion(&phi12).char_poly(), phi12);
    }

    #[test]
    fn power_by_squaring() {
        let shear = IntMatrix::from_i64(2, &[1, 1, 0, 1]);
        let p17 = shear.pow(17);
        assert_eq!(p17.get(0, 1), &BigInt::from(17));
        assert!(shear.pow(0).is_identity());
    }

    #[test]
    fn cayley_hamilton_randomized() {
        // deterministic LCG over entries in [-3, 3]
        let mut state = 0x12345678u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % 7) as i64 - 3
        };
        for dim in 1..=4usize {
            for _ in 0..25 {
                let entries: Vec<i64> = (0..dim * dim).map(|_| next()).collect();
                let a = IntMatrix::from_i64(dim, &entries);
                let p = a.char_poly();
                assert!(a.eval_poly(&p).is_zero(), "Cayley-Hamilton failed for {a:?}");
            }
        }
    }

    #[test]
    fn serde_matrix_round_trip() {
        let a = IntMatrix::from_i64(2, &[1, -1, 0, 7]);
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"[["1","-1"],["0","7"]]"#);
        assert_eq!(serde_json::from_str::<IntMatrix>(&json).unwrap(), a);
    }
}
