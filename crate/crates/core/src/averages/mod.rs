//! Weighted multiple ergodic averages
//! `(1/N) sum_n c_n prod_s chi_s(T^{q_s(n)} x)` on `T^d x F`, with exact
//! character phases and an orbit evaluator that picks its strategy from the
//! data: a closed rational orbit is indexed modulo its period, moderate
//! exponent ranges are walked once, and anything larger falls back to
//! powering the map exponent by exponent.

mod reduction;

pub use reduction::{phase_reduction, reduction_crosscheck, CharReduction, PhaseReduction, ReductionReport};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::dynamics::{AffineMapSpec, AffinePair, GroupPoint, GroupSpec};
use crate::exact::{validate_nat_poly, IntPoly, UnitRational};
use crate::limits::{ORBIT_TABLE_CAP, ORBIT_WALK_CAP};
use crate::sequences::WeightSequence;
use crate::sums::{blocked_sum, SumProfile, SumResult};
use crate::{Error, Result};

const TAU: f64 = std::f64::consts::TAU;

/// A character of `T^d x F`: integer frequencies on the torus, residue
/// frequencies on the finite part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Character {
    pub torus_freq: Vec<i64>,
    #[serde(default)]
    pub finite_freq: Vec<u64>,
}

impl Character {
    pub fn trivial(group: &GroupSpec) -> Self {
        Character {
            torus_freq: vec![0; group.torus_dim],
            finite_freq: vec![0; group.finite_rank()],
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.torus_freq.iter().all(|&k| k == 0) && self.finite_freq.iter().all(|&t| t == 0)
    }

    pub fn check(&self, group: &GroupSpec) -> Result<()> {
        if self.torus_freq.len() != group.torus_dim
            || self.finite_freq.len() != group.finite_rank()
        {
            return Err(Error::DimensionMismatch(format!(
                "character has shape ({}, {}), group needs ({}, {})",
                self.torus_freq.len(),
                self.finite_freq.len(),
                group.torus_dim,
                group.finite_rank()
            )));
        }
        Ok(())
    }

    /// Exact phase `<k, t> + sum t_i f_i / m_i` mod 1.
    pub fn phase(&self, p: &GroupPoint, group: &GroupSpec) -> UnitRational {
        let mut acc = UnitRational::zero();
        for (k, t) in self.torus_freq.iter().zip(&p.torus) {
            acc = acc.add(&t.scale(&BigInt::from(*k)));
        }
        for ((t, f), m) in self.finite_freq.iter().zip(&p.finite).zip(&group.moduli) {
            acc = acc.add(&UnitRational::new(
                BigInt::from(t * f),
                BigInt::from(*m),
            ));
        }
        acc
    }

    /// Exact phase plus its complex value on the unit circle.
    pub fn eval(&self, p: &GroupPoint, group: &GroupSpec) -> (UnitRational, Complex64) {
        let phase = self.phase(p, group);
        let value = Complex64::from_polar(1.0, TAU * phase.to_f64());
        (phase, value)
    }

    /// Lift to `X x X` acting on the first component.
    pub fn lift_first(&self, group: &GroupSpec) -> Character {
        let mut torus_freq = self.torus_freq.clone();
        torus_freq.resize(2 * group.torus_dim, 0);
        let mut finite_freq = self.finite_freq.clone();
        finite_freq.resize(2 * group.finite_rank(), 0);
        Character {
            torus_freq,
            finite_freq,
        }
    }
}

/// Finite linear combination of products of characters, one factor per
/// orbit coordinate.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrigPoly {
    pub terms: Vec<TrigTerm>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrigTerm {
    pub coefficient_re: f64,
    pub coefficient_im: f64,
    pub characters: Vec<Character>,
}

/// One normalized multiple average.
#[derive(Clone, Debug, Serialize)]
pub struct AverageResult {
    pub n: usize,
    pub re: f64,
    pub im: f64,
    /// Per-residue averages when a residue decomposition was requested.
    pub decomposition: Option<Vec<(f64, f64)>>,
}

impl AverageResult {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn modulus(&self) -> f64 {
        self.value().norm()
    }
}

fn validate_inputs(
    map: &AffineMapSpec,
    x: &GroupPoint,
    chars: &[Character],
    polys: &[IntPoly],
) -> Result<()> {
    x.check(map.group())?;
    if chars.is_empty() || chars.len() != polys.len() {
        return Err(Error::BadInput(format!(
            "need matching nonempty character/polynomial lists, got {} and {}",
            chars.len(),
            polys.len()
        )));
    }
    for chi in chars {
        chi.check(map.group())?;
    }
    for q in polys {
        if q.degree() > crate::limits::DEGREE_CAP {
            return Err(Error::InvalidPolynomial(format!(
                "degree {} exceeds cap {}",
                q.degree(),
                crate::limits::DEGREE_CAP
            )));
        }
        if !validate_nat_poly(q) {
            return Err(Error::InvalidPolynomial(format!(
                "{q} takes negative values on the nonnegative integers"
            )));
        }
    }
    Ok(())
}

/// Per-`(s, n)` character values along the orbit.
///
/// Strategy, in order: detect a closed orbit while walking (rational data
/// on a compact group returns to its start; the period indexes everything),
/// then a single sequential walk when the largest exponent is moderate,
/// then exponent-by-exponent binary powering.
fn orbit_char_values(
    map: &AffineMapSpec,
    x: &GroupPoint,
    chars: &[Character],
    polys: &[IntPoly],
    n_terms: usize,
) -> Result<Vec<Vec<Complex64>>> {
    let group = map.group();
    let ell = chars.len();
    let pair = AffinePair::of(map);

    // walk looking for the return to x, collecting character values
    let mut walk_values: Vec<Vec<Complex64>> = vec![Vec::new(); ell];
    let mut current = x.clone();
    let mut period: Option<u64> = None;
    for step in 0..ORBIT_WALK_CAP {
        for (s, chi) in chars.iter().enumerate() {
            walk_values[s].push(chi.eval(&current, group).1);
        }
        current = pair.apply(&current);
        if current == *x {
            period = Some(step + 1);
            break;
        }
    }

    if let Some(period) = period {
        let mut out = vec![vec![Complex64::zero(); n_terms]; ell];
        for (s, q) in polys.iter().enumerate() {
            let reduced = reduce_poly_mod(q, period);
            for n in 0..n_terms {
                let idx = horner_mod(&reduced, n as u64 % period, period);
                out[s][n] = walk_values[s][idx as usize];
            }
        }
        return Ok(out);
    }

    // exponent table: e[s][n], with the overall maximum
    let mut exponents: Vec<Vec<BigInt>> = Vec::with_capacity(ell);
    let mut max_exp = BigInt::zero();
    for q in polys {
        let row: Vec<BigInt> = (0..n_terms).map(|n| q.eval_u64(n as u64)).collect();
        for e in &row {
            if e > &max_exp {
                max_exp = e.clone();
            }
        }
        exponents.push(row);
    }

    let mut out = vec![vec![Complex64::zero(); n_terms]; ell];
    if max_exp <= BigInt::from(ORBIT_TABLE_CAP) {
        // one sequential walk over the sorted needed exponents
        let mut needed: Vec<(u64, usize, usize)> = Vec::with_capacity(ell * n_terms);
        for (s, row) in exponents.iter().enumerate() {
            for (n, e) in row.iter().enumerate() {
                needed.push((e.to_u64().expect("bounded by the table cap"), s, n));
            }
        }
        needed.sort_unstable();
        let walked = walk_values[0].len() as u64; // same length for every s
        let mut ptr = 0;
        // serve exponents already covered by the closure-detection walk
        while ptr < needed.len() && needed[ptr].0 < walked {
            let (e, s, n) = needed[ptr];
            out[s][n] = walk_values[s][e as usize];
            ptr += 1;
        }
        if ptr < needed.len() {
            // `current` sits at index `walked`; continue walking
            let mut idx = walked;
            loop {
                while ptr < needed.len() && needed[ptr].0 == idx {
                    let (_, s, n) = needed[ptr];
                    out[s][n] = chars[s].eval(&current, group).1;
                    ptr += 1;
                }
                if ptr == needed.len() {
                    break;
                }
                current = pair.apply(&current);
                idx += 1;
            }
        }
        return Ok(out);
    }

    // large sparse exponents: binary powering, deduplicated
    for (s, row) in exponents.iter().enumerate() {
        let mut order: Vec<usize> = (0..n_terms).collect();
        order.sort_unstable_by(|&a, &b| row[a].cmp(&row[b]));
        let mut last: Option<(BigInt, Complex64)> = None;
        for n in order {
            let e = &row[n];
            let value = match &last {
                Some((le, lv)) if le == e => *lv,
                _ => {
                    let point = pair.pow_big(e).apply(x);
                    let v = chars[s].eval(&point, group).1;
                    last = Some((e.clone(), v));
                    v
                }
            };
            out[s][n] = value;
        }
    }
    Ok(out)
}

/// Reduce polynomial coefficients mod `m` (nonnegative residues).
fn reduce_poly_mod(q: &IntPoly, m: u64) -> Vec<u64> {
    let mm = BigInt::from(m);
    q.coeffs()
        .iter()
        .map(|c| c.mod_floor(&mm).to_u64().expect("reduced"))
        .collect()
}

fn horner_mod(coeffs: &[u64], x: u64, m: u64) -> u64 {
    let mut acc: u128 = 0;
    for &c in coeffs.iter().rev() {
        acc = (acc * x as u128 + c as u128) % m as u128;
    }
    acc as u64
}

/// `(1/N) sum_{n<N} c_n prod_s chi_s(T^{q_s(n)} x)`.
pub fn multiple_average(
    c: &WeightSequence,
    map: &AffineMapSpec,
    x: &GroupPoint,
    chars: &[Character],
    polys: &[IntPoly],
    n: usize,
) -> Result<AverageResult> {
    validate_inputs(map, x, chars, polys)?;
    if n == 0 || n > c.len() {
        return Err(Error::Length(format!(
            "requested {n} terms from a sequence of length {}",
            c.len()
        )));
    }
    let orbit = orbit_char_values(map, x, chars, polys, n)?;
    let weights = c.values();
    let total = blocked_sum(n, |i| {
        let mut term = weights[i];
        for row in &orbit {
            term *= row[i];
        }
        term
    });
    let value = total / n as f64;
    let mean_abs = blocked_sum(n, |i| Complex64::new(weights[i].norm(), 0.0)).re / n as f64;
    assert!(
        value.norm() <= mean_abs + 1e-9,
        "average {} exceeds the weight mean {}",
        value.norm(),
        mean_abs
    );
    Ok(AverageResult {
        n,
        re: value.re,
        im: value.im,
        decomposition: None,
    })
}

/// Averages the residue classes `n = m nu + r` separately over `m < m_count`
/// and also returns their combination, which regroups the plain average
/// over `n < m_count * nu`.
pub fn multiple_average_by_residue(
    c: &WeightSequence,
    map: &AffineMapSpec,
    x: &GroupPoint,
    chars: &[Character],
    polys: &[IntPoly],
    nu: u64,
    m_count: usize,
) -> Result<AverageResult> {
    validate_inputs(map, x, chars, polys)?;
    let n = m_count
        .checked_mul(nu as usize)
        .ok_or_else(|| Error::Length("residue average length overflow".into()))?;
    if n == 0 || n > c.len() {
        return Err(Error::Length(format!(
            "requested {n} terms from a sequence of length {}",
            c.len()
        )));
    }
    let orbit = orbit_char_values(map, x, chars, polys, n)?;
    let weights = c.values();
    let mut decomposition = Vec::with_capacity(nu as usize);
    let mut combined = Complex64::zero();
    for r in 0..nu as usize {
        let total = blocked_sum(m_count, |m| {
            let i = m * nu as usize + r;
            let mut term = weights[i];
            for row in &orbit {
                term *= row[i];
            }
            term
        });
        let avg = total / m_count as f64;
        combined += avg;
        decomposition.push((avg.re, avg.im));
    }
    combined /= nu as f64;
    Ok(AverageResult {
        n,
        re: combined.re,
        im: combined.im,
        decomposition: Some(decomposition),
    })
}

/// Linear combination of multiple averages over the terms of a
/// trigonometric polynomial.
pub fn multiple_average_trig(
    c: &WeightSequence,
    map: &AffineMapSpec,
    x: &GroupPoint,
    trig: &TrigPoly,
    polys: &[IntPoly],
    n: usize,
) -> Result<AverageResult> {
    let mut value = Complex64::zero();
    for term in &trig.terms {
        let coeff = Complex64::new(term.coefficient_re, term.coefficient_im);
        let avg = multiple_average(c, map, x, &term.characters, polys, n)?;
        value += coeff * avg.value();
    }
    Ok(AverageResult {
        n,
        re: value.re,
        im: value.im,
        decomposition: None,
    })
}

/// Multiple average at every grid length.
pub fn decay_profile(
    c: &WeightSequence,
    map: &AffineMapSpec,
    x: &GroupPoint,
    chars: &[Character],
    polys: &[IntPoly],
    grid: &[usize],
) -> Result<SumProfile> {
    let mut results = Vec::with_capacity(grid.len());
    for &n in grid {
        let avg = multiple_average(c, map, x, chars, polys, n)?;
        results.push(SumResult {
            n,
            re: avg.re,
            im: avg.im,
            backend: crate::sums::Backend::Exact,
            max_phase_error: None,
        });
    }
    Ok(SumProfile::new(grid.to_vec(), results))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{iterate, torus_map, validate_map};
    use crate::exact::IntMatrix;
    use crate::sequences;

    fn ur(n: i64, d: i64) -> UnitRational {
        UnitRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn skew_shift() -> AffineMapSpec {
        torus_map(
            IntMatrix::from_i64(2, &[1, 0, 1, 1]),
            vec![ur(1, 5), UnitRational::zero()],
        )
        .unwrap()
    }

    fn skew_point() -> GroupPoint {
        GroupPoint {
            torus: vec![ur(1, 7), ur(2, 7)],
            finite: vec![],
        }
    }

    #[test]
    fn character_phase_examples() {
        let group = GroupSpec::torus(2);
        let chi = Character {
            torus_freq: vec![1, 2],
            finite_freq: vec![],
        };
        let x = GroupPoint {
            torus: vec![ur(1, 3), ur(1, 4)],
            finite: vec![],
        };
        assert_eq!(chi.phase(&x, &group), ur(5, 6));

        let trivial = Character::trivial(&group);
        assert!(trivial.phase(&x, &group).is_zero());

        let group = GroupSpec::new(0, vec![3]).unwrap();
        let chi = Character {
            torus_freq: vec![],
            finite_freq: vec![2],
        };
        let f = GroupPoint {
            torus: vec![],
            finite: vec![2],
        };
        assert_eq!(chi.phase(&f, &group), ur(1, 3));
    }

    #[test]
    fn character_phase_is_additive() {
        let group = GroupSpec::new(1, vec![4]).unwrap();
        let chi = Character {
            torus_freq: vec![3],
            finite_freq: vec![2],
        };
        let x = GroupPoint {
            torus: vec![ur(2, 9)],
            finite: vec![3],
        };
        let y = GroupPoint {
            torus: vec![ur(5, 7)],
            finite: vec![2],
        };
        let lhs = chi.phase(&x.add(&y, &group), &group);
        let rhs = chi.phase(&x, &group).add(&chi.phase(&y, &group));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn trivial_character_gives_the_weight_mean() {
        let c = sequences::mobius(10_000).unwrap();
        let map = skew_shift();
        let chars = vec![Character::trivial(map.group())];
        let polys = vec![IntPoly::x()];
        let avg = multiple_average(&c, &map, &skew_point(), &chars, &polys, 10_000).unwrap();
        let mean: Complex64 = c.values().iter().sum::<Complex64>() / 1e4;
        assert!((avg.value() - mean).norm() < 1e-12);
    }

    #[test]
    fn identity_map_constant_weights() {
        let map = torus_map(IntMatrix::identity(1), vec![UnitRational::zero()]).unwrap();
        let c = sequences::constant(Complex64::new(1.0, 0.0), 500);
        let chars = vec![Character {
            torus_freq: vec![3],
            finite_freq: vec![],
        }];
        let avg = multiple_average(
            &c,
            &map,
            &map.group().zero_point(),
            &chars,
            &[IntPoly::x()],
            500,
        )
        .unwrap();
        assert!((avg.value() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn orbit_paths_agree_on_small_cases() {
        // force the three strategies onto the same data and compare against
        // direct exact iteration
        let map = skew_shift();
        let x = skew_point();
        let chars = vec![
            Character {
                torus_freq: vec![1, 0],
                finite_freq: vec![],
            },
            Character {
                torus_freq: vec![0, 1],
                finite_freq: vec![],
            },
        ];
        let polys = vec![IntPoly::x(), IntPoly::from_i64(&[0, 0, 1])];
        let n = 64;
        let values = orbit_char_values(&map, &x, &chars, &polys, n).unwrap();
        for (s, q) in polys.iter().enumerate() {
            for i in 0..n {
                let e = q.eval_u64(i as u64).to_u64().unwrap();
                let point = iterate(&map, &x, e).unwrap();
                let expect = chars[s].eval(&point, map.group()).1;
                assert!(
                    (values[s][i] - expect).norm() < 1e-12,
                    "s={s} n={i}"
                );
            }
        }
    }

    #[test]
    fn invalid_polynomial_is_rejected() {
        let map = skew_shift();
        let c = sequences::constant(Complex64::new(1.0, 0.0), 10);
        let chars = vec![Character::trivial(map.group())];
        let bad = vec![IntPoly::from_i64(&[-5, 1])];
        assert!(matches!(
            multiple_average(&c, &map, &skew_point(), &chars, &bad, 10),
            Err(Error::InvalidPolynomial(_))
        ));
    }

    #[test]
    fn residue_decomposition_regroups_the_average() {
        let c = sequences::mobius(6000).unwrap();
        let map = skew_shift();
        let chars = vec![Character {
            torus_freq: vec![0, 1],
            finite_freq: vec![],
        }];
        let polys = vec![IntPoly::from_i64(&[0, 0, 1])];
        let nu = 3u64;
        let m_count = 2000usize;
        let by_residue =
            multiple_average_by_residue(&c, &map, &skew_point(), &chars, &polys, nu, m_count)
                .unwrap();
        let plain = multiple_average(&c, &map, &skew_point(), &chars, &polys, 6000).unwrap();
        assert!((by_residue.value() - plain.value()).norm() < 1e-13);
        let parts = by_residue.decomposition.unwrap();
        assert_eq!(parts.len(), 3);
        let recombined: Complex64 = parts
            .iter()
            .map(|&(re, im)| Complex64::new(re, im))
            .sum::<Complex64>()
            / 3.0;
        assert!((recombined - plain.value()).norm() < 1e-13);
    }

    #[test]
    fn trig_poly_is_linear() {
        let c = sequences::rademacher(2000, 5).unwrap();
        let map = skew_shift();
        let x = skew_point();
        let polys = vec![IntPoly::x()];
        let chi_a = Character {
            torus_freq: vec![1, 0],
            finite_freq: vec![],
        };
        let chi_b = Character {
            torus_freq: vec![0, 2],
            finite_freq: vec![],
        };
        let trig = TrigPoly {
            terms: vec![
                TrigTerm {
                    coefficient_re: 2.0,
                    coefficient_im: 0.0,
                    characters: vec![chi_a.clone()],
                },
                TrigTerm {
                    coefficient_re: 0.0,
                    coefficient_im: -1.5,
                    characters: vec![chi_b.clone()],
                },
            ],
        };
        let lhs = multiple_average_trig(&c, &map, &x, &trig, &polys, 2000)
            .unwrap()
            .value();
        let a = multiple_average(&c, &map, &x, &[chi_a], &polys, 2000)
            .unwrap()
            .value();
        let b = multiple_average(&c, &map, &x, &[chi_b], &polys, 2000)
            .unwrap()
            .value();
        let rhs = Complex64::new(2.0, 0.0) * a + Complex64::new(0.0, -1.5) * b;
        assert!((lhs - rhs).norm() < 1e-12);

        let empty = TrigPoly { terms: vec![] };
        let zero = multiple_average_trig(&c, &map, &x, &empty, &polys, 2000).unwrap();
        assert_eq!(zero.value(), Complex64::zero());
    }

    #[test]
    fn adversarial_profile_stays_near_one() {
        // weights e^{2 pi i n a} against the rotation by a with q(n) = n and
        // the identity character: phases cancel term by term
        let alpha_num = 3i64;
        let alpha_den = 8i64;
        let alpha = alpha_num as f64 / alpha_den as f64;
        let c = sequences::linear_phase(alpha, 4096);
        let map = torus_map(IntMatrix::identity(1), vec![ur(-alpha_num, alpha_den)]).unwrap();
        let chars = vec![Character {
            torus_freq: vec![1],
            finite_freq: vec![],
        }];
        let profile = decay_profile(
            &c,
            &map,
            &map.group().zero_point(),
            &chars,
            &[IntPoly::x()],
            &[512, 1024, 2048, 4096],
        )
        .unwrap();
        for r in &profile.results {
            assert!(r.modulus() > 0.9, "N={}: {}", r.n, r.modulus());
        }
    }

    #[test]
    fn mixed_group_average_runs() {
        let map = validate_map(
            GroupSpec::new(2, vec![3]).unwrap(),
            IntMatrix::from_i64(2, &[1, 1, 0, 1]),
            vec![UnitRational::zero(), UnitRational::zero()],
            vec![2],
            GroupPoint {
                torus: vec![ur(1, 5), ur(1, 7)],
                finite: vec![1],
            },
        )
        .unwrap();
        let x = GroupPoint {
            torus: vec![ur(1, 2), ur(1, 3)],
            finite: vec![2],
        };
        let c = sequences::mobius(5000).unwrap();
        let chars = vec![Character {
            torus_freq: vec![0, 1],
            finite_freq: vec![1],
        }];
        let avg = multiple_average(&c, &map, &x, &chars, &[IntPoly::x()], 5000).unwrap();
        assert!(avg.modulus() <= 1.0);
    }
}
