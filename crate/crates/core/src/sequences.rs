//! Weight-sequence generators.
//!
//! Every sequence carries its generator descriptor as provenance; rebuilding
//! from the descriptor reproduces the values bit for bit, on any platform.
//! The pseudo-random generator is pinned to ChaCha with 8 rounds
//! (`rand_chacha` 0.3) seeded through `seed_from_u64` — never a platform
//! default.

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::limits::{PRECISION_CAP_BITS, SEQUENCE_CAP};
use crate::{Error, Result};

const TAU: f64 = std::f64::consts::TAU;

/// Generator descriptor: enough to regenerate a sequence exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratorSpec {
    /// Moebius function values; index 0 is 0 by convention.
    Mobius { n: usize },
    /// I.i.d. signs from seeded ChaCha8 (stand-in for a random subnormal
    /// sequence; the provenance records exactly what it is).
    Rademacher { n: usize, seed: u64 },
    /// Complex weights in the unit disk from seeded ChaCha8.
    RandomComplex { n: usize, seed: u64 },
    /// `exp(2 pi i (beta^n mod 1))` with the fractional parts computed in
    /// extended precision.
    BetaPower { beta: f64, n: usize },
    /// `exp(2 pi i n alpha)`.
    LinearPhase { alpha: f64, n: usize },
    /// Constant complex value.
    Constant { re: f64, im: f64, n: usize },
    /// `parent[a*m + b]`.
    Subsequence {
        a: usize,
        b: usize,
        parent: Box<GeneratorSpec>,
    },
    /// Values loaded from a data file; regeneration means re-reading it.
    External { descriptor: String },
}

impl GeneratorSpec {
    /// Materializes the sequence described by this spec.
    pub fn build(&self) -> Result<WeightSequence> {
        match self {
            GeneratorSpec::Mobius { n } => mobius(*n),
            GeneratorSpec::Rademacher { n, seed } => rademacher(*n, *seed),
            GeneratorSpec::RandomComplex { n, seed } => random_complex(*n, *seed),
            GeneratorSpec::BetaPower { beta, n } => beta_power(*beta, *n),
            GeneratorSpec::LinearPhase { alpha, n } => Ok(linear_phase(*alpha, *n)),
            GeneratorSpec::Constant { re, im, n } => Ok(constant(Complex64::new(*re, *im), *n)),
            GeneratorSpec::Subsequence { a, b, parent } => {
                let built = parent.build()?;
                arithmetic_subsequence(&built, *a, *b)
            }
            GeneratorSpec::External { descriptor } => Err(Error::BadInput(format!(
                "external sequence {descriptor:?} rebuilds by re-reading its file"
            ))),
        }
    }
}

/// A finite complex weight sequence `(c_n)`, `n = 0..N-1`, with provenance.
#[derive(Clone, Debug)]
pub struct WeightSequence {
    values: Vec<Complex64>,
    provenance: GeneratorSpec,
    sup_norm_bound: f64,
}

impl WeightSequence {
    /// Wraps raw values under a stated sup-norm bound, asserting the bound
    /// element by element.
    pub fn from_values(values: Vec<Complex64>, provenance: GeneratorSpec, bound: f64) -> Self {
        for (i, v) in values.iter().enumerate() {
            assert!(
                v.norm() <= bound + 1e-12,
                "value {v} at index {i} exceeds sup-norm bound {bound}"
            );
        }
        WeightSequence {
            values,
            provenance,
            sup_norm_bound: bound,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, n: usize) -> Complex64 {
        self.values[n]
    }

    pub fn provenance(&self) -> &GeneratorSpec {
        &self.provenance
    }

    pub fn sup_norm_bound(&self) -> f64 {
        self.sup_norm_bound
    }
}

fn check_capacity(n: usize) -> Result<()> {
    if n > SEQUENCE_CAP {
        return Err(Error::Capacity(format!(
            "sequence length {n} exceeds cap {SEQUENCE_CAP}"
        )));
    }
    Ok(())
}

/// Smallest-prime-factor linear sieve for the Moebius function on `[0, n)`.
/// `values[0] = 0` by convention so averages over `n = 0..N-1` need no
/// special casing.
pub fn mobius(n: usize) -> Result<WeightSequence> {
    if n == 0 {
        return Err(Error::Length("mobius needs n >= 1".into()));
    }
    check_capacity(n)?;
    let mu = mobius_values(n);
    let values = mu.iter().map(|&m| Complex64::new(m as f64, 0.0)).collect();
    Ok(WeightSequence::from_values(
        values,
        GeneratorSpec::Mobius { n },
        1.0,
    ))
}

/// Raw Moebius values on `[0, n)` (index 0 is 0), linear sieve.
pub fn mobius_values(n: usize) -> Vec<i8> {
    let mut mu = vec![0i8; n];
    if n > 1 {
        mu[1] = 1;
    }
    let mut primes: Vec<usize> = Vec::new();
    let mut spf = vec![0usize; n]; // smallest prime factor, 0 = prime/unset
    for i in 2..n {
        if spf[i] == 0 {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            match i.checked_mul(p) {
                Some(ip) if ip < n => {
                    spf[ip] = p;
                    if i % p == 0 {
                        mu[ip] = 0;
                        break;
                    } else {
                        mu[ip] = -mu[i];
                    }
                }
                _ => break,
            }
        }
    }
    mu
}

/// I.i.d. uniform signs from ChaCha8; the low bit of each 64-bit draw picks
/// the sign.
pub fn rademacher(n: usize, seed: u64) -> Result<WeightSequence> {
    if n == 0 {
        return Err(Error::Length("rademacher needs n >= 1".into()));
    }
    check_capacity(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..n)
        .map(|_| {
            let sign = if rng.next_u64() & 1 == 0 { 1.0 } else { -1.0 };
            Complex64::new(sign, 0.0)
        })
        .collect();
    Ok(WeightSequence::from_values(
        values,
        GeneratorSpec::Rademacher { n, seed },
        1.0,
    ))
}

/// Complex weights with radius and angle uniform from seeded ChaCha8; a
/// reproducible source of "random complex weights" for verification runs.
pub fn random_complex(n: usize, seed: u64) -> Result<WeightSequence> {
    if n == 0 {
        return Err(Error::Length("random_complex needs n >= 1".into()));
    }
    check_capacity(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e3779b97f4a7c15);
    let values = (0..n)
        .map(|_| {
            let angle = TAU * unit_f64(rng.next_u64());
            let radius = unit_f64(rng.next_u64());
            Complex64::from_polar(radius, angle)
        })
        .collect();
    Ok(WeightSequence::from_values(
        values,
        GeneratorSpec::RandomComplex { n, seed },
        1.0,
    ))
}

fn unit_f64(word: u64) -> f64 {
    (word >> 11) as f64 / (1u64 << 53) as f64
}

/// `exp(2 pi i (beta^n mod 1))` for `beta > 1`.
///
/// A double is a dyadic rational, so powers of the input are computed in
/// fixed point with `n * ceil(log2 beta) + 64` fractional bits; the single
/// truncation per multiply leaves at least 50 correct fractional bits at the
/// last term. Exceeding the precision cap is a `Precision` error.
pub fn beta_power(beta: f64, n: usize) -> Result<WeightSequence> {
    if !beta.is_finite() || beta <= 1.0 {
        return Err(Error::BadInput(format!(
            "beta must be finite and > 1, got {beta}"
        )));
    }
    if n == 0 {
        return Err(Error::Length("beta_power needs n >= 1".into()));
    }
    check_capacity(n)?;
    let frac_bits = beta_power_precision(beta, n)?;
    let fracs = beta_power_fracs(beta, n, frac_bits);
    let values = fracs
        .iter()
        .map(|&f| Complex64::from_polar(1.0, TAU * f))
        .collect();
    Ok(WeightSequence::from_values(
        values,
        GeneratorSpec::BetaPower { beta, n },
        1.0,
    ))
}

/// Required fixed-point precision in fractional bits, checked against the cap.
pub fn beta_power_precision(beta: f64, n: usize) -> Result<u64> {
    let mut log2_ceil = 1u64;
    while log2_ceil < 1100 && 2f64.powi(log2_ceil as i32) < beta {
        log2_ceil += 1;
    }
    let needed = (n as u64)
        .checked_mul(log2_ceil)
        .and_then(|b| b.checked_add(64))
        .ok_or_else(|| Error::Precision("precision requirement overflowed".into()))?;
    if needed > PRECISION_CAP_BITS {
        return Err(Error::Precision(format!(
            "beta_power needs {needed} bits of working precision, cap is {PRECISION_CAP_BITS}"
        )));
    }
    Ok(needed)
}

/// Fractional parts of `beta^n` as `f64`, via fixed-point big-integer powers.
pub fn beta_power_fracs(beta: f64, n: usize, frac_bits: u64) -> Vec<f64> {
    // exact dyadic decomposition: beta = mantissa * 2^exp2
    let bits = beta.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    let raw_mant = bits & ((1u64 << 52) - 1);
    let (mantissa, exp2) = if raw_exp == 0 {
        (raw_mant, -1074i64)
    } else {
        (raw_mant | (1u64 << 52), raw_exp - 1075)
    };
    let shift = frac_bits as i64 + exp2;
    assert!(shift >= 0, "beta > 1 guarantees a nonnegative shift");
    let beta_fixed = BigUint::from(mantissa) << (shift as u64);

    let mask = (BigUint::one() << frac_bits) - BigUint::one();
    let mut out = Vec::with_capacity(n);
    out.push(0.0); // beta^0 = 1, fractional part 0
    let mut acc = beta_fixed.clone();
    for _ in 1..n {
        out.push(frac_to_f64(&acc, &mask, frac_bits));
        acc = (acc * &beta_fixed) >> frac_bits;
    }
    out
}

fn frac_to_f64(fixed: &BigUint, mask: &BigUint, frac_bits: u64) -> f64 {
    let frac = fixed & mask;
    // top 64 fractional bits are plenty for a double
    let top = (frac >> (frac_bits - 64)).to_u64().unwrap_or(0);
    top as f64 / 2f64.powi(64)
}

/// `exp(2 pi i n alpha)`.
pub fn linear_phase(alpha: f64, n: usize) -> WeightSequence {
    let values = (0..n)
        .map(|i| Complex64::from_polar(1.0, TAU * (i as f64 * alpha).rem_euclid(1.0)))
        .collect();
    WeightSequence::from_values(values, GeneratorSpec::LinearPhase { alpha, n }, 1.0)
}

/// Constant sequence.
pub fn constant(z: Complex64, n: usize) -> WeightSequence {
    WeightSequence::from_values(
        vec![z; n],
        GeneratorSpec::Constant {
            re: z.re,
            im: z.im,
            n,
        },
        z.norm().max(1.0),
    )
}

/// `result[m] = c[a*m + b]`, for every `m` with `a*m + b < len(c)`.
pub fn arithmetic_subsequence(c: &WeightSequence, a: usize, b: usize) -> Result<WeightSequence> {
    if a == 0 {
        return Err(Error::BadInput("subsequence stride a must be >= 1".into()));
    }
    if b >= c.len() {
        return Err(Error::Length(format!(
            "offset {b} out of range for sequence of length {}",
            c.len()
        )));
    }
    let values: Vec<Complex64> = (b..c.len()).step_by(a).map(|i| c.values[i]).collect();
    Ok(WeightSequence::from_values(
        values,
        GeneratorSpec::Subsequence {
            a,
            b,
            parent: Box::new(c.provenance.clone()),
        },
        c.sup_norm_bound,
    ))
}

/// Checks the sieve against the defining divisor-sum identity
/// `sum_{d | n} mu(d) = [n = 1]`, computed without factoring anything.
pub fn mobius_divisor_sum_oracle(limit: usize) -> Vec<i64> {
    // mu(n) = [n = 1] - sum_{d | n, d < n} mu(d), filled by sieving multiples
    let mut mu = vec![0i64; limit];
    if limit > 1 {
        mu[1] = 1;
    }
    for d in 1..limit {
        if mu[d] == 0 {
            continue;
        }
        let mut m = 2 * d;
        while m < limit {
            mu[m] -= mu[d];
            m += d;
        }
    }
    mu
}
