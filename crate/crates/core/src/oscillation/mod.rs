//! Empirical oscillation-order testing and exact verification of the
//! residue-decomposition identities behind arithmetic-subsequence
//! oscillation.

mod gowers;

pub use gowers::{gowers_norm, gowers_norm_auto, GowersMethod, GowersResult};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::sequences::{arithmetic_subsequence, WeightSequence};
use crate::sums::{residue_sums, twisted_sum, weighted_sum, PhasePoly};
use crate::{Error, Result};

const TAU: f64 = std::f64::consts::TAU;

/// How test phases are drawn: an exhaustive rational grid with denominator
/// `grid_denominator` on each non-constant coefficient, plus `random_count`
/// phases with coefficients uniform in `[0, 1)` from a seeded stream.
///
/// The constant coefficient is pinned to zero throughout: it rotates every
/// term by the same unit complex number and cannot change `|S_N|`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseSampler {
    pub degree: usize,
    pub grid_denominator: u64,
    pub random_count: usize,
    pub seed: u64,
}

impl PhaseSampler {
    /// Default sampler for order `d`: denominator 8 grid up to degree 2,
    /// shrinking for higher degrees to keep the grid size in check.
    pub fn default_for_order(d: usize, seed: u64) -> Self {
        let grid_denominator = match d {
            0..=2 => 8,
            3 => 4,
            _ => 2,
        };
        PhaseSampler {
            degree: d,
            grid_denominator: grid_denominator as u64,
            random_count: 128,
            seed,
        }
    }

    /// The full deterministic phase list: grid phases in lexicographic
    /// order, then the random draws.
    pub fn phases(&self) -> Vec<Vec<f64>> {
        let d = self.degree;
        let q = self.grid_denominator.max(1);
        let mut out = Vec::new();
        // odometer over (a_1 .. a_d), each in {0, 1/q, .., (q-1)/q}
        let mut idx = vec![0u64; d];
        loop {
            let mut coeffs = vec![0.0f64; d + 1];
            for (i, &t) in idx.iter().enumerate() {
                coeffs[i + 1] = t as f64 / q as f64;
            }
            out.push(coeffs);
            let mut pos = 0;
            loop {
                if pos == d {
                    idx.clear();
                    break;
                }
                idx[pos] += 1;
                if idx[pos] < q {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if idx.is_empty() {
                break;
            }
        }
        use rand_core::{RngCore, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(self.seed);
        for _ in 0..self.random_count {
            let mut coeffs = vec![0.0f64; d + 1];
            for c in coeffs.iter_mut().skip(1) {
                *c = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
            }
            out.push(coeffs);
        }
        out
    }
}

/// Worst sampled sum at one grid length.
#[derive(Clone, Debug, Serialize)]
pub struct WorstCase {
    pub n: usize,
    pub worst_modulus: f64,
    /// Coefficients (ascending) of the phase attaining the worst modulus.
    pub worst_phase: Vec<f64>,
}

/// Outcome of an empirical order test. `consistent` means "consistent with
/// oscillation of this order at the sampled scales" — never a claim about
/// the limit.
#[derive(Clone, Debug, Serialize)]
pub struct OscillationReport {
    pub order_tested: usize,
    pub tau: f64,
    pub sampler: PhaseSampler,
    pub per_n: Vec<WorstCase>,
    pub verdict: Verdict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Consistent,
    Inconsistent,
}

/// Runs the sampled worst-case sum at each grid length.
///
/// Consistent iff the worst modulus at the largest length is below `tau`
/// and the worst-modulus sequence is non-increasing within slack `2 tau`
/// across the last three grid points.
pub fn test_order(
    c: &WeightSequence,
    d: usize,
    grid: &[usize],
    sampler: &PhaseSampler,
    tau: f64,
) -> Result<OscillationReport> {
    if d < 1 {
        return Err(Error::BadInput("order must be >= 1".into()));
    }
    if grid.is_empty() || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadInput("grid must be non-empty and strictly increasing".into()));
    }
    let phases = sampler.phases();
    let mut per_n = Vec::with_capacity(grid.len());
    for &n in grid {
        let sums: Vec<f64> = phases
            .par_iter()
            .map(|coeffs| {
                let p = PhasePoly::Float(coeffs.clone());
                weighted_sum(c, &p, n).map(|s| s.modulus())
            })
            .collect::<Result<_>>()?;
        // first index attaining the maximum keeps the report deterministic
        let (worst_idx, worst) = sums
            .iter()
            .enumerate()
            .fold((0usize, f64::MIN), |(bi, bv), (i, &v)| {
                if v > bv {
                    (i, v)
                } else {
                    (bi, bv)
                }
            });
        per_n.push(WorstCase {
            n,
            worst_modulus: worst,
            worst_phase: phases[worst_idx].clone(),
        });
    }
    let last = per_n.last().expect("grid non-empty");
    let mut consistent = last.worst_modulus < tau;
    let tail = per_n.iter().rev().take(3).collect::<Vec<_>>();
    for pair in tail.windows(2) {
        // tail is reversed: pair[0] is the later grid point
        if pair[0].worst_modulus > pair[1].worst_modulus + 2.0 * tau {
            consistent = false;
        }
    }
    Ok(OscillationReport {
        order_tested: d,
        tau,
        sampler: sampler.clone(),
        per_n,
        verdict: if consistent {
            Verdict::Consistent
        } else {
            Verdict::Inconsistent
        },
    })
}

/// Residuals of the residue-class decomposition, the twisted expansion, and
/// the roots-of-unity reconstruction, all on the same normalized sums.
#[derive(Clone, Debug, Serialize)]
pub struct PoVerification {
    pub p: u64,
    pub n: usize,
    pub decomposition: f64,
    pub twist: Vec<f64>,
    pub reconstruction: f64,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Verifies, at finite `N`, the three identities that reduce a sum over an
/// arithmetic progression to twisted full sums:
///
/// * decomposition: `S_N = sum_j S_{N,j}`;
/// * twist expansion: `S_N^u = sum_j w^{ju} S_{N,j}`, `w = e^{2 pi i/p}`;
/// * reconstruction: `S_{N,0} = (1/p) sum_{u=0}^{p-1} S_N^u`.
///
/// The reconstruction averages over all of `u = 0..p-1`; dropping `u = 0`
/// would break the underlying algebra.
pub fn verify_po(c: &WeightSequence, p: u64, phase: &PhasePoly, n: usize) -> Result<PoVerification> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let full = weighted_sum(c, phase, n)?.value();
    let parts = residue_sums(c, phase, p, n)?;
    let twisted: Vec<Complex64> = (0..p)
        .map(|u| twisted_sum(c, phase, p, u, n).map(|s| s.value()))
        .collect::<Result<_>>()?;

    let decomposition = (full - parts.iter().sum::<Complex64>()).norm();
    let twist = (0..p as usize)
        .map(|u| {
            let mut rhs = Complex64::new(0.0, 0.0);
            for (j, part) in parts.iter().enumerate() {
                let w = Complex64::from_polar(1.0, TAU * ((j as u64 * u as u64) % p) as f64 / p as f64);
                rhs += w * part;
            }
            (twisted[u] - rhs).norm()
        })
        .collect();
    let reconstruction =
        (parts[0] - twisted.iter().sum::<Complex64>() / p as f64).norm();
    Ok(PoVerification {
        p,
        n,
        decomposition,
        twist,
        reconstruction,
    })
}

/// Order reports for a sequence and all of its stride-`a` subsequences,
/// side by side.
#[derive(Clone, Debug, Serialize)]
pub struct SubsequenceReports {
    pub parent: OscillationReport,
    pub children: Vec<OscillationReport>,
}

/// Runs `test_order` on `c` and on every `(c_{am+b})`, `b = 0..a-1`.
pub fn test_subsequences(
    c: &WeightSequence,
    a: usize,
    d: usize,
    grid: &[usize],
    sampler: &PhaseSampler,
    tau: f64,
) -> Result<SubsequenceReports> {
    if a < 2 {
        return Err(Error::BadInput("stride must be >= 2".into()));
    }
    let parent = test_order(c, d, grid, sampler, tau)?;
    let mut children = Vec::with_capacity(a);
    for b in 0..a {
        let sub = arithmetic_subsequence(c, a, b)?;
        let child_grid: Vec<usize> = grid
            .iter()
            .map(|&n| (n / a).min(sub.len()))
            .filter(|&n| n >= 1)
            .collect();
        let mut dedup = child_grid.clone();
        dedup.dedup();
        children.push(test_order(&sub, d, &dedup, sampler, tau)?);
    }
    Ok(SubsequenceReports { parent, children })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::RationalPoly;
    use crate::sequences;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    #[test]
    fn sampler_is_deterministic_and_counts_match() {
        let s = PhaseSampler::default_for_order(2, 9);
        let a = s.phases();
        let b = s.phases();
        assert_eq!(a, b);
        assert_eq!(a.len(), 64 + 128); // 8^2 grid + 128 random
        assert!(a.iter().all(|c| c.len() == 3 && c[0] == 0.0));
    }

    #[test]
    fn constant_sequence_is_inconsistent_at_order_one() {
        let c = sequences::constant(num_complex::Complex64::new(1.0, 0.0), 4096);
        let sampler = PhaseSampler::default_for_order(1, 1);
        let report = test_order(&c, 1, &[512, 1024, 2048, 4096], &sampler, 0.05).unwrap();
        assert_eq!(report.verdict, Verdict::Inconsistent);
        // the zero phase in the grid attains |S| = 1
        assert!(report.per_n.last().unwrap().worst_modulus > 0.99);
    }

    #[test]
    fn matched_linear_phase_is_caught_by_the_grid() {
        let c = sequences::linear_phase(0.625, 4096);
        let sampler = PhaseSampler::default_for_order(1, 1);
        let report = test_order(&c, 1, &[1024, 2048, 4096], &sampler, 0.05).unwrap();
        assert_eq!(report.verdict, Verdict::Inconsistent);
        // caught by coefficient 3/8 = 1 - 0.625
        let worst = &report.per_n.last().unwrap().worst_phase;
        assert!((worst[1] - 0.375).abs() < 1e-12);
    }

    #[test]
    fn rademacher_consistent_at_order_two() {
        let c = sequences::rademacher(1 << 16, 1).unwrap();
        let sampler = PhaseSampler {
            degree: 2,
            grid_denominator: 8,
            random_count: 136,
            seed: 1,
        };
        let report = test_order(&c, 2, &[1 << 14, 1 << 15, 1 << 16], &sampler, 0.05).unwrap();
        assert_eq!(report.verdict, Verdict::Consistent);
    }

    #[test]
    fn verdicts_are_reproducible() {
        let c = sequences::rademacher(4096, 17).unwrap();
        let sampler = PhaseSampler::default_for_order(1, 3);
        let a = test_order(&c, 1, &[1024, 2048, 4096], &sampler, 0.08).unwrap();
        let b = test_order(&c, 1, &[1024, 2048, 4096], &sampler, 0.08).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn verify_po_rejects_composites() {
        let c = sequences::rademacher(100, 1).unwrap();
        assert!(matches!(
            verify_po(&c, 6, &PhasePoly::zero(), 100),
            Err(Error::NotPrime(6))
        ));
        assert!(matches!(
            verify_po(&c, 1, &PhasePoly::zero(), 100),
            Err(Error::NotPrime(1))
        ));
    }

    #[test]
    fn verify_po_alternating_example() {
        // p = 2 on (1,-1,1,-1,...), P = 0, N = 8: S_{8,0} = 0.5 and the
        // reconstruction (S_8^0 + S_8^1)/2 = 0.5
        let c = sequences::linear_phase(0.5, 8);
        let v = verify_po(&c, 2, &PhasePoly::zero(), 8).unwrap();
        assert!(v.decomposition < 1e-14);
        assert!(v.reconstruction < 1e-14);
        let parts = residue_sums(&c, &PhasePoly::zero(), 2, 8).unwrap();
        assert!((parts[0].re - 0.5).abs() < 1e-14);
    }

    #[test]
    fn verify_po_mobius_quadratic() {
        let n = 10_000;
        let c = sequences::mobius(n).unwrap();
        let phase = PhasePoly::Exact(RationalPoly::new(vec![
            BigRational::new(BigInt::from(0), BigInt::from(1)),
            BigRational::new(BigInt::from(0), BigInt::from(1)),
            BigRational::new(BigInt::from(1), BigInt::from(7)),
        ]));
        let v = verify_po(&c, 3, &phase, n).unwrap();
        assert!(v.decomposition < 1e-10);
        assert!(v.reconstruction < 1e-10);
        assert!(v.twist.iter().all(|&t| t < 1e-10));
    }

    #[test]
    fn reconstruction_small_primes_random_weights() {
        let c = sequences::random_complex(3000, 23).unwrap();
        let phase = PhasePoly::Exact(RationalPoly::new(vec![
            BigRational::new(BigInt::from(1), BigInt::from(3)),
            BigRational::new(BigInt::from(2), BigInt::from(11)),
            BigRational::new(BigInt::from(5), BigInt::from(13)),
        ]));
        for p in [2u64, 3, 5, 7, 11, 13] {
            let v = verify_po(&c, p, &phase, 3000).unwrap();
            assert!(v.reconstruction < 1e-10, "p={p}: {}", v.reconstruction);
        }
    }

    #[test]
    fn subsequence_reports_structured_counterexample() {
        // c_n = 1 for even n, 0 otherwise: the parent fails at order 1
        // (phase n/2 correlates) and so does the b = 0 child (constant 1).
        let values: Vec<num_complex::Complex64> = (0..2048)
            .map(|n| num_complex::Complex64::new(if n % 2 == 0 { 1.0 } else { 0.0 }, 0.0))
            .collect();
        let c = crate::sequences::WeightSequence::from_values(
            values,
            sequences::GeneratorSpec::Constant { re: 0.0, im: 0.0, n: 2048 },
            1.0,
        );
        let sampler = PhaseSampler::default_for_order(1, 5);
        let reports = test_subsequences(&c, 2, 1, &[512, 1024, 2048], &sampler, 0.05).unwrap();
        assert_eq!(reports.parent.verdict, Verdict::Inconsistent);
        assert_eq!(reports.children[0].verdict, Verdict::Inconsistent);
    }

    #[test]
    fn subsequence_reports_rademacher_consistent() {
        let c = sequences::rademacher(1 << 15, 2).unwrap();
        let sampler = PhaseSampler::default_for_order(1, 2);
        let reports = test_subsequences(&c, 2, 1, &[1 << 13, 1 << 14, 1 << 15], &sampler, 0.06).unwrap();
        assert_eq!(reports.parent.verdict, Verdict::Consistent);
        for child in &reports.children {
            assert_eq!(child.verdict, Verdict::Consistent);
        }
    }
}
