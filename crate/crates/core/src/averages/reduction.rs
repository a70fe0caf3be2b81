//! Collapse of a multiple orbit-character product to a single polynomial
//! phase, per residue class.
//!
//! Fix the doubled automorphism `W` with certificate `W^nu = I + N`,
//! `N^(kappa+1) = 0`, and a residue `r < nu`. Writing
//! `q_s(m nu + r) = q'_s(m) nu + r'_s`, the orbit point expands binomially
//! as `W^{q_s(m nu + r)} xt = sum_j C(q'_s(m), j) y_{r'_s, j}` over the
//! precomputed table `y_{r,j} = W^r N^j xt`. A character turns the sum into
//! a product of fixed unit complex numbers raised to binomial powers, so
//! the product over `s` is `exp(2 pi i P_r(m))` for the rational polynomial
//!
//! `P_r(m) = sum_s sum_j t_{s,r,j} C(q'_s(m), j)`,
//!
//! where `t_{s,r,j}` is the exact phase of the character at `y_{r'_s, j}`.
//! Everything here is rational, so the crosscheck demands exact equality.

use num_bigint::BigInt;
use serde::Serialize;

use crate::dynamics::{
    build_w, embed_base, entropy_certificate, iterate_big, orbit_table, AffineMapSpec,
    EntropyCert, GroupPoint, OrbitTable,
};
use crate::exact::{binom_poly, poly_shift_scale, validate_nat_poly, IntPoly, RationalPoly, UnitRational};
use crate::{Error, Result};

use super::Character;

/// Reduction data for one character/polynomial pair at a fixed residue.
#[derive(Clone, Debug, Serialize)]
pub struct CharReduction {
    /// `r'_s = q_s(r) mod nu`.
    pub shifted_residue: u64,
    /// `q'_s` with `q_s(m nu + r) = q'_s(m) nu + r'_s`.
    pub shifted_poly: IntPoly,
    /// `t_{s,r,j}` for `j = 0..=kappa`: exact phases of the character at
    /// the orbit-table entries `y_{r'_s, j}`.
    pub phase_table: Vec<UnitRational>,
}

/// The per-residue reduced phase polynomial with its ingredients.
#[derive(Clone, Debug, Serialize)]
pub struct PhaseReduction {
    pub residue: u64,
    pub nu: u64,
    pub kappa: u32,
    pub per_char: Vec<CharReduction>,
    /// `P_r` with exact rational coefficients.
    pub reduced_poly: RationalPoly,
}

impl PhaseReduction {
    /// `P_r(m) mod 1`, exactly.
    pub fn phase_at(&self, m: u64) -> UnitRational {
        UnitRational::from_rational(self.reduced_poly.eval(&BigInt::from(m)))
    }
}

/// Builds the reduction at residue `r` from the doubled map's certificate
/// and orbit table based at `(x, b)`.
pub fn phase_reduction(
    map: &AffineMapSpec,
    w: &AffineMapSpec,
    cert: &EntropyCert,
    table: &OrbitTable,
    chars: &[Character],
    polys: &[IntPoly],
    r: u64,
) -> Result<PhaseReduction> {
    if r >= cert.nu {
        return Err(Error::Precondition(format!(
            "residue {r} out of range for nu = {}",
            cert.nu
        )));
    }
    if chars.len() != polys.len() || chars.is_empty() {
        return Err(Error::BadInput(
            "need matching nonempty character/polynomial lists".into(),
        ));
    }
    let mut per_char = Vec::with_capacity(chars.len());
    let mut reduced = RationalPoly::zero();
    for (chi, q) in chars.iter().zip(polys) {
        if !validate_nat_poly(q) {
            return Err(Error::InvalidPolynomial(format!(
                "{q} takes negative values on the nonnegative integers"
            )));
        }
        let (shifted_poly, shifted_residue) = poly_shift_scale(q, cert.nu, r)?;
        let lifted = chi.lift_first(map.group());
        let mut phase_table = Vec::with_capacity(cert.kappa as usize + 1);
        for j in 0..=cert.kappa {
            let t = lifted.phase(table.entry(shifted_residue, j), w.group());
            reduced = reduced.add(
                &binom_poly(&shifted_poly, j).scale(t.as_rational()),
            );
            phase_table.push(t);
        }
        per_char.push(CharReduction {
            shifted_residue,
            shifted_poly,
            phase_table,
        });
    }
    Ok(PhaseReduction {
        residue: r,
        nu: cert.nu,
        kappa: cert.kappa,
        per_char,
        reduced_poly: reduced,
    })
}

/// Exact comparison of the direct product-of-characters phase against the
/// reduced polynomial, for every residue and `m_count` values of `m`.
#[derive(Clone, Debug, Serialize)]
pub struct ReductionReport {
    pub nu: u64,
    pub kappa: u32,
    /// First `m` checked: the smallest `m >= kappa` with every
    /// `q'_s(m) >= kappa`.
    pub m_start: u64,
    pub m_count: u64,
    pub checked: u64,
    /// `(r, m)` pairs where the phases disagreed (expected none).
    pub violations: Vec<(u64, u64)>,
    pub reductions: Vec<PhaseReduction>,
}

/// Runs the crosscheck on rational data: builds `W`, certifies it, builds
/// the orbit table at `(x, b)`, and demands `UnitRational` equality between
/// the direct orbit phase `sum_s chi_s(W^{q_s(m nu + r)} (x, b))` and
/// `P_r(m) mod 1`.
pub fn reduction_crosscheck(
    map: &AffineMapSpec,
    x: &GroupPoint,
    chars: &[Character],
    polys: &[IntPoly],
    m_count: u64,
) -> Result<ReductionReport> {
    super::validate_inputs(map, x, chars, polys)?;
    let w = build_w(map);
    let cert = entropy_certificate(&w)?;
    let base = embed_base(map, x)?;
    let table = orbit_table(&w, &cert, &base)?;

    let reductions: Vec<PhaseReduction> = (0..cert.nu)
        .map(|r| phase_reduction(map, &w, &cert, &table, chars, polys, r))
        .collect::<Result<_>>()?;

    // Smallest m >= kappa making every shifted polynomial reach kappa. A
    // constant q' below kappa never will; the expansion still holds there
    // because the falling factorial vanishes exactly where the binomial
    // does, so the scan gives up and starts at kappa.
    let kappa_big = BigInt::from(cert.kappa);
    let scan_limit = cert.kappa as u64 + 10_000;
    let mut m_start = cert.kappa as u64;
    'search: while m_start < scan_limit {
        for red in &reductions {
            for cr in &red.per_char {
                if cr.shifted_poly.eval_u64(m_start) < kappa_big {
                    m_start += 1;
                    continue 'search;
                }
            }
        }
        break;
    }
    if m_start == scan_limit {
        m_start = cert.kappa as u64;
    }

    let lifted: Vec<Character> = chars.iter().map(|chi| chi.lift_first(map.group())).collect();
    let mut violations = Vec::new();
    let mut checked = 0u64;
    for red in &reductions {
        let r = red.residue;
        for m in m_start..m_start + m_count {
            // direct side: exact phase of the product over s
            let mut direct = UnitRational::zero();
            for (chi, q) in lifted.iter().zip(polys) {
                let exponent = q.eval(&BigInt::from(m * cert.nu + r));
                let point = iterate_big(&w, &base, &exponent)?;
                direct = direct.add(&chi.phase(&point, w.group()));
            }
            let reduced = red.phase_at(m);
            if direct != reduced {
                violations.push((r, m));
            }
            checked += 1;
        }
    }
    Ok(ReductionReport {
        nu: cert.nu,
        kappa: cert.kappa,
        m_start,
        m_count,
        checked,
        violations,
        reductions,
    })
}
