//! The doubled automorphism `W(x1, x2) = (L x1 + x2, x2)` on `X x X`, which
//! linearizes the affine map `T x = L x + b` through `(T^n x, b) = W^n(x, b)`,
//! and the binomial expansion of its orbits.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::{AffineMapSpec, AffinePair, Endomorphism, EntropyCert, GroupPoint};
use crate::exact::{IntMatrix, UnitRational};
use crate::{Error, Result};

/// Builds `W` as an affine map on `X x X` with zero translation.
///
/// Block structure on (torus1, torus2, finite1, finite2): the torus block is
/// `[[A, I], [0, I]]`, the finite block `[[B, I], [0, I]]`, and the mixing
/// block keeps `A`'s mixing on the first component.
pub fn build_w(map: &AffineMapSpec) -> AffineMapSpec {
    let group = map.group();
    let doubled = group.doubled();
    let d = group.torus_dim;
    let k = group.finite_rank();
    let a = map.linear();

    let mut torus_entries = vec![BigInt::from(0); 4 * d * d];
    for i in 0..d {
        for j in 0..d {
            torus_entries[i * 2 * d + j] = a.torus_block().get(i, j).clone();
        }
        torus_entries[i * 2 * d + (d + i)] = BigInt::one();
        torus_entries[(d + i) * 2 * d + (d + i)] = BigInt::one();
    }
    let torus = IntMatrix::new(2 * d, torus_entries);

    let mut mixing = vec![UnitRational::zero(); 2 * d * 2 * k];
    for i in 0..d {
        for j in 0..k {
            mixing[i * 2 * k + j] = a.mixing_block()[i * k + j].clone();
        }
    }

    let mut finite = vec![0u64; 4 * k * k];
    for i in 0..k {
        let mi = doubled.moduli[i];
        for j in 0..k {
            finite[i * 2 * k + j] = a.finite_block()[i * k + j];
        }
        finite[i * 2 * k + (k + i)] = 1 % mi;
        finite[(k + i) * 2 * k + (k + i)] = 1 % mi;
    }

    let linear = Endomorphism::from_blocks(doubled.clone(), torus, mixing, finite);
    super::AffineMapSpec {
        linear,
        translation: doubled.zero_point(),
    }
}

/// The base embedding `x -> (x, b)` with `b` the translation of the map.
pub fn embed_base(map: &AffineMapSpec, x: &GroupPoint) -> Result<GroupPoint> {
    x.check(map.group())?;
    let b = map.translation();
    let mut torus = x.torus.clone();
    torus.extend(b.torus.iter().cloned());
    let mut finite = x.finite.clone();
    finite.extend(b.finite.iter().cloned());
    Ok(GroupPoint { torus, finite })
}

/// First component of a point of `X x X`.
pub fn first_component(point: &GroupPoint, d: usize, k: usize) -> GroupPoint {
    GroupPoint {
        torus: point.torus[..d].to_vec(),
        finite: point.finite[..k].to_vec(),
    }
}

/// Exact verification of `(T^n x, b) = W^n(x, b)` for `n = 0..=n_max` at the
/// given points. Every violation (expected: none) is listed.
#[derive(Clone, Debug, Serialize)]
pub struct ConjugationReport {
    pub n_max: u64,
    pub points_checked: usize,
    /// `(point index, n)` pairs where the identity failed.
    pub violations: Vec<(usize, u64)>,
}

pub fn conjugation_check(
    map: &AffineMapSpec,
    points: &[GroupPoint],
    n_max: u64,
) -> Result<ConjugationReport> {
    let w = build_w(map);
    let d = map.group().torus_dim;
    let k = map.group().finite_rank();
    let t_pair = AffinePair::of(map);
    let w_pair = AffinePair::of(&w);
    let mut violations = Vec::new();
    for (idx, x) in points.iter().enumerate() {
        x.check(map.group())?;
        let mut t_orbit = x.clone();
        let mut w_orbit = embed_base(map, x)?;
        for n in 0..=n_max {
            let second = GroupPoint {
                torus: w_orbit.torus[d..].to_vec(),
                finite: w_orbit.finite[k..].to_vec(),
            };
            if first_component(&w_orbit, d, k) != t_orbit || &second != map.translation() {
                violations.push((idx, n));
            }
            t_orbit = t_pair.apply(&t_orbit);
            w_orbit = w_pair.apply(&w_orbit);
        }
    }
    Ok(ConjugationReport {
        n_max,
        points_checked: points.len(),
        violations,
    })
}

/// Precomputed table `y[r][j] = W^r N^j x` for `0 <= r < nu`, `0 <= j <=
/// kappa`; the entries do not depend on the later exponent `m`.
#[derive(Clone, Debug)]
pub struct OrbitTable {
    pub nu: u64,
    pub kappa: u32,
    group: super::GroupSpec,
    rows: Vec<Vec<GroupPoint>>,
}

impl OrbitTable {
    pub fn entry(&self, r: u64, j: u32) -> &GroupPoint {
        &self.rows[r as usize][j as usize]
    }
}

/// Builds the table from the certificate of `W` at base point `x`.
pub fn orbit_table(w: &AffineMapSpec, cert: &EntropyCert, x: &GroupPoint) -> Result<OrbitTable> {
    x.check(w.group())?;
    let mut rows = Vec::with_capacity(cert.nu as usize);
    let mut first = Vec::with_capacity(cert.kappa as usize + 1);
    let mut current = x.clone();
    for j in 0..=cert.kappa {
        first.push(current.clone());
        if j < cert.kappa {
            current = cert.nilpotent.apply(&current);
        }
    }
    rows.push(first);
    for r in 1..cert.nu {
        let prev = &rows[(r - 1) as usize];
        let next: Vec<GroupPoint> = prev.iter().map(|p| w.linear().apply(p)).collect();
        rows.push(next);
    }
    Ok(OrbitTable {
        nu: cert.nu,
        kappa: cert.kappa,
        group: w.group().clone(),
        rows,
    })
}

/// Evaluates `W^(m nu + r) x` from the table as the finite binomial
/// combination `sum_j C(m, j) * y[r][j]`, exactly.
///
/// Valid for `m >= kappa`, where the binomial series truncates at `kappa`.
pub fn binomial_orbit(table: &OrbitTable, m: u64, r: u64) -> Result<GroupPoint> {
    if m < table.kappa as u64 {
        return Err(Error::Precondition(format!(
            "binomial orbit needs m >= kappa = {}, got m = {m}",
            table.kappa
        )));
    }
    if r >= table.nu {
        return Err(Error::Precondition(format!(
            "residue {r} out of range for nu = {}",
            table.nu
        )));
    }
    let group = &table.group;
    let mut acc = group.zero_point();
    let mut binom = BigInt::one();
    for j in 0..=table.kappa {
        if j > 0 {
            // C(m, j) = C(m, j-1) * (m - j + 1) / j, exact at every step
            binom = binom * BigInt::from(m - j as u64 + 1) / BigInt::from(j);
        }
        acc = acc.add(&table.entry(r, j).scale(&binom, group), group);
    }
    Ok(acc)
}
