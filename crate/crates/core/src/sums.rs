//! Polynomial phases mod 1 and weighted exponential sums.
//!
//! Sums are stored `1/N`-normalized. Summation always follows the same
//! fixed-shape tree — pairwise within 2^14-element blocks, pairwise over the
//! ordered block results — so results are bitwise identical at any thread
//! count.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::exact::{RationalPoly, UnitRational};
use crate::limits::SUM_BLOCK;
use crate::sequences::WeightSequence;
use crate::{Error, Result};

const TAU: f64 = std::f64::consts::TAU;

/// Which arithmetic carried the phase evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Exact,
    Float,
}

/// A real polynomial phase, evaluated mod 1.
///
/// The exact variant refuses nothing at evaluation time; the float variant
/// carries plain doubles and reports an accumulated error bound. Irrational
/// coefficients exist only in the float variant — there is no silent
/// rounding into exact mode.
#[derive(Clone, Debug)]
pub enum PhasePoly {
    Exact(RationalPoly),
    Float(Vec<f64>),
}

impl PhasePoly {
    pub fn zero() -> Self {
        PhasePoly::Exact(RationalPoly::zero())
    }

    pub fn backend(&self) -> Backend {
        match self {
            PhasePoly::Exact(_) => Backend::Exact,
            PhasePoly::Float(_) => Backend::Float,
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            PhasePoly::Exact(p) => p.degree(),
            PhasePoly::Float(c) => c.len().saturating_sub(1),
        }
    }

    /// Adds `(num/den) * x` to the phase, staying in the same backend.
    pub fn add_linear_term(&self, num: i64, den: u64) -> Self {
        match self {
            PhasePoly::Exact(p) => {
                let term = RationalPoly::new(vec![
                    BigRational::zero(),
                    BigRational::new(BigInt::from(num), BigInt::from(den)),
                ]);
                PhasePoly::Exact(p.add(&term))
            }
            PhasePoly::Float(c) => {
                let mut c = c.clone();
                if c.len() < 2 {
                    c.resize(2, 0.0);
                }
                c[1] += num as f64 / den as f64;
                PhasePoly::Float(c)
            }
        }
    }

    /// Phase at integer `n`, in `[0, 1)`, with an error bound (zero for the
    /// exact backend up to the final conversion to double).
    pub fn eval(&self, n: u64) -> (f64, f64) {
        match self {
            PhasePoly::Exact(p) => (p.eval_unit(n).to_f64(), f64::EPSILON),
            PhasePoly::Float(coeffs) => float_phase_eval(coeffs, n),
        }
    }

    /// Exact phase at integer `n`; `None` for the float backend.
    pub fn eval_exact(&self, n: u64) -> Option<UnitRational> {
        match self {
            PhasePoly::Exact(p) => Some(p.eval_unit(n)),
            PhasePoly::Float(_) => None,
        }
    }
}

/// Compensated Horner with a mod-1 reduction per step.
///
/// Each multiply is split exactly with an FMA; the fractional reduction of
/// the high part is exact, and the residuals are fed back in. The surviving
/// error is the input error amplified by `n` per remaining step, which the
/// returned bound tracks honestly.
fn float_phase_eval(coeffs: &[f64], n: u64) -> (f64, f64) {
    if coeffs.is_empty() {
        return (0.0, 0.0);
    }
    let x = n as f64;
    let mut acc = 0.0f64;
    let mut err = 0.0f64;
    for c in coeffs.iter().rev() {
        let hi = acc * x;
        let lo = acc.mul_add(x, -hi); // exact residual of the product
        let s = hi + c;
        let s_err = two_sum_err(hi, *c, s);
        let reduced = s - s.floor(); // exact: operands within a factor of two
        acc = reduced + (lo + s_err);
        err = err * x + 4.0 * f64::EPSILON;
        acc -= acc.floor();
    }
    (acc.rem_euclid(1.0), err)
}

fn two_sum_err(a: f64, b: f64, s: f64) -> f64 {
    let bb = s - a;
    (a - (s - bb)) + (b - bb)
}

/// Result of one normalized weighted sum.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SumResult {
    pub n: usize,
    pub re: f64,
    pub im: f64,
    pub backend: Backend,
    /// Accumulated phase error bound, float backend only.
    pub max_phase_error: Option<f64>,
}

impl SumResult {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn modulus(&self) -> f64 {
        self.value().norm()
    }
}

/// Sum over a geometric or explicit grid of lengths.
#[derive(Clone, Debug, Serialize)]
pub struct SumProfile {
    pub grid: Vec<usize>,
    pub results: Vec<SumResult>,
}

impl SumProfile {
    pub fn new(grid: Vec<usize>, results: Vec<SumResult>) -> Self {
        assert!(
            grid.windows(2).all(|w| w[0] < w[1]),
            "grid must be strictly increasing"
        );
        assert_eq!(grid.len(), results.len());
        SumProfile { grid, results }
    }
}

/// Deterministic pairwise sum of a slice (recursive halving).
pub fn pairwise_sum(terms: &[Complex64]) -> Complex64 {
    match terms.len() {
        0 => Complex64::zero(),
        1 => terms[0],
        2 => terms[0] + terms[1],
        len => {
            let mid = len / 2;
            pairwise_sum(&terms[..mid]) + pairwise_sum(&terms[mid..])
        }
    }
}

/// Fixed-shape chunked sum: pairwise inside each 2^14 block, computed in
/// parallel, then pairwise over block results in index order. The result is
/// independent of the thread count.
pub fn blocked_sum<F>(n: usize, term: F) -> Complex64
where
    F: Fn(usize) -> Complex64 + Sync,
{
    if n == 0 {
        return Complex64::zero();
    }
    let blocks: Vec<Complex64> = (0..n.div_ceil(SUM_BLOCK))
        .into_par_iter()
        .map(|b| {
            let lo = b * SUM_BLOCK;
            let hi = (lo + SUM_BLOCK).min(n);
            let terms: Vec<Complex64> = (lo..hi).map(&term).collect();
            pairwise_sum(&terms)
        })
        .collect();
    pairwise_sum(&blocks)
}

fn check_len(c: &WeightSequence, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Length("sum needs n >= 1".into()));
    }
    if n > c.len() {
        return Err(Error::Length(format!(
            "requested {n} terms from a sequence of length {}",
            c.len()
        )));
    }
    Ok(())
}

/// `(1/N) sum_{n<N} c_n exp(2 pi i P(n))`.
pub fn weighted_sum(c: &WeightSequence, phase: &PhasePoly, n: usize) -> Result<SumResult> {
    check_len(c, n)?;
    let values = c.values();
    let worst_err = std::sync::atomic::AtomicU64::new(0);
    let total = blocked_sum(n, |i| {
        let (p, e) = phase.eval(i as u64);
        worst_err.fetch_max(e.to_bits(), std::sync::atomic::Ordering::Relaxed);
        values[i] * Complex64::from_polar(1.0, TAU * p)
    });
    let value = total / n as f64;
    let max_phase_error = match phase.backend() {
        Backend::Exact => None,
        Backend::Float => Some(f64::from_bits(
            worst_err.load(std::sync::atomic::Ordering::Relaxed),
        )),
    };
    let mean_abs = blocked_sum(n, |i| Complex64::new(values[i].norm(), 0.0)).re / n as f64;
    assert!(
        value.norm() <= mean_abs + 1e-9,
        "normalized sum {} exceeds mean modulus {}",
        value.norm(),
        mean_abs
    );
    Ok(SumResult {
        n,
        re: value.re,
        im: value.im,
        backend: phase.backend(),
        max_phase_error,
    })
}

/// Per-residue-class partial sums: entry `j` holds
/// `(1/N) sum over n < N with n = j (mod p)` of the same terms, so the `p`
/// entries add up to the full normalized sum.
pub fn residue_sums(
    c: &WeightSequence,
    phase: &PhasePoly,
    p: u64,
    n: usize,
) -> Result<Vec<Complex64>> {
    if p < 2 {
        return Err(Error::BadInput(format!("residue modulus must be >= 2, got {p}")));
    }
    check_len(c, n)?;
    let values = c.values();
    let mut out = Vec::with_capacity(p as usize);
    for j in 0..p {
        let count = if (j as usize) < n {
            (n - 1 - j as usize) / p as usize + 1
        } else {
            0
        };
        let sum = blocked_sum(count, |m| {
            let idx = m * p as usize + j as usize;
            let (ph, _) = phase.eval(idx as u64);
            values[idx] * Complex64::from_polar(1.0, TAU * ph)
        });
        out.push(sum / n as f64);
    }
    Ok(out)
}

/// The twisted sum `S_N^u`: the same weighted sum with phase `P + (u/p) x`.
/// `u = 0` recovers the plain sum.
pub fn twisted_sum(
    c: &WeightSequence,
    phase: &PhasePoly,
    p: u64,
    u: u64,
    n: usize,
) -> Result<SumResult> {
    if u >= p {
        return Err(Error::BadInput(format!("twist {u} out of range for modulus {p}")));
    }
    let twisted = phase.add_linear_term(u as i64, p);
    weighted_sum(c, &twisted, n)
}
