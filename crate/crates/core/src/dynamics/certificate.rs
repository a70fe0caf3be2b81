//! Zero-entropy certification of affine maps.
//!
//! An affine map on the torus has zero entropy exactly when every eigenvalue
//! of its linear part is a root of unity. Since the torus block has
//! determinant of absolute value 1, its eigenvalues multiply to +-1: if the
//! characteristic polynomial is not a product of cyclotomics, Kronecker's
//! theorem puts some eigenvalue strictly outside the unit circle. The
//! dichotomy is therefore decided entirely by exact cyclotomic trial
//! division — no floating eigenvalues anywhere.

use num_integer::Integer;
use serde::Serialize;

use super::{AffineMapSpec, Endomorphism};
use crate::exact::cyclotomic_factor;
use crate::limits::CERT_SEARCH_MULTIPLIER_CAP;
use crate::{Error, Result};

/// Quasi-unipotence certificate: `L^nu = I + N` with `N^(kappa+1) = 0` and
/// `N^kappa != 0` (`kappa` minimal; `kappa = 0` when `L^nu = I`).
#[derive(Clone, Debug, Serialize)]
pub struct EntropyCert {
    pub nu: u64,
    pub kappa: u32,
    /// `(order, multiplicity)` of the cyclotomic factors of the torus
    /// block's characteristic polynomial.
    pub cyclotomic_orders: Vec<(u64, u32)>,
    #[serde(skip)]
    pub nilpotent: Endomorphism,
}

/// Certifies the linear part of the map.
///
/// `nu` is assembled as lcm(lcm of cyclotomic orders, order of the finite
/// block on `F`). At that exponent the torus block is unipotent and the
/// finite block is the identity, so `N = L^nu - I` is nilpotent with index
/// at most one more than the torus nilpotency index; the search over
/// multiples of `nu` is a guard rail, bounded and auditable.
pub fn entropy_certificate(map: &AffineMapSpec) -> Result<EntropyCert> {
    let linear = map.linear();
    let group = map.group();
    let d = group.torus_dim;
    let k = group.finite_rank();

    let char_poly = linear.torus_block().char_poly();
    let factorization = cyclotomic_factor(&char_poly);
    if !factorization.complete {
        return Err(Error::PositiveEntropy {
            cofactor: factorization.cofactor,
        });
    }
    let nu_torus = factorization
        .factors
        .iter()
        .fold(1u64, |acc, &(order, _)| acc.lcm(&order));

    let nu_finite = finite_block_order(linear, nu_torus)?;
    let nu_base = nu_torus.lcm(&nu_finite);

    let identity = Endomorphism::identity(group);
    let kappa_cap = 2 * (d + k) as u32;
    for multiplier in 1..=CERT_SEARCH_MULTIPLIER_CAP {
        let nu = nu_base
            .checked_mul(multiplier)
            .ok_or_else(|| Error::CertSearchExceeded("exponent overflow".into()))?;
        let power = linear.pow(nu.try_into().map_err(|_| {
            Error::CertSearchExceeded(format!("exponent {nu} too large for the power loop"))
        })?);
        let nilpotent = power.sub(&identity);
        if let Some(kappa) = nilpotency_index(&nilpotent, kappa_cap) {
            return Ok(EntropyCert {
                nu,
                kappa,
                cyclotomic_orders: factorization.factors,
                nilpotent,
            });
        }
    }
    Err(Error::CertSearchExceeded(format!(
        "no nilpotent remainder up to {CERT_SEARCH_MULTIPLIER_CAP} * {nu_base}"
    )))
}

/// Multiplicative order of the finite block acting on `F`, by direct
/// iteration up to the cap `|F| * lcm(moduli) * nu_torus`. Finite groups
/// guarantee termination; the cap converts "eventually" into an auditable
/// bound.
fn finite_block_order(linear: &Endomorphism, nu_torus: u64) -> Result<u64> {
    let group = linear.group();
    if group.finite_rank() == 0 {
        return Ok(1);
    }
    let lcm_moduli = group.moduli.iter().fold(1u64, |acc, m| acc.lcm(m));
    let cap = group
        .finite_order()
        .saturating_mul(lcm_moduli)
        .saturating_mul(nu_torus.max(1));
    let identity = Endomorphism::identity(group);
    let mut power = linear.clone();
    for e in 1..=cap {
        if power.finite_block() == identity.finite_block() {
            return Ok(e);
        }
        power = linear.compose(&power);
    }
    Err(Error::CertSearchExceeded(format!(
        "finite block order exceeds cap {cap}"
    )))
}

/// Minimal `kappa <= cap` with `N^(kappa+1) = 0`, or `None`.
fn nilpotency_index(n: &Endomorphism, cap: u32) -> Option<u32> {
    if n.is_zero() {
        return Some(0);
    }
    let mut power = n.clone();
    for kappa in 1..=cap {
        power = power.compose(n);
        if power.is_zero() {
            return Some(kappa);
        }
    }
    None
}

/// Independent quasi-unipotence oracle used by the test suites: walk the
/// powers `L^e` for `e` up to a bound covering every possible lcm of
/// cyclotomic orders in this dimension, and report the first exponent whose
/// remainder `L^e - I` is nilpotent. Decides the same dichotomy as
/// [`entropy_certificate`] without touching cyclotomic division.
pub fn quasi_unipotent_by_iteration(linear: &Endomorphism, exponent_cap: u64) -> Option<u64> {
    let identity = Endomorphism::identity(linear.group());
    let cap = 2 * (linear.group().torus_dim + linear.group().finite_rank()) as u32;
    let mut power = linear.clone();
    for e in 1..=exponent_cap {
        if nilpotency_index(&power.sub(&identity), cap).is_some() {
            return Some(e);
        }
        power = linear.compose(&power);
    }
    None
}
