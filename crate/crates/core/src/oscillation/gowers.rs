//! Uniformity norms over `Z_N`.

use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use crate::limits::GOWERS_BUDGET;
use crate::{Error, Result};

const TAU: f64 = std::f64::consts::TAU;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GowersMethod {
    /// Direct average of multiplicative derivatives, `N^(k+1)` work.
    Brute,
    /// `k = 2` only: `||f||_{U^2}^4 = sum_xi |fhat(xi)|^4`.
    Fourier,
}

#[derive(Clone, Debug, Serialize)]
pub struct GowersResult {
    pub n: usize,
    pub k: u32,
    pub value: f64,
    pub method: GowersMethod,
}

/// `||f||_{U^k}` over `Z_N` (cyclic convention):
/// `||f||_{U^k}^{2^k} = E_{x, h_1..h_k} prod_{e in {0,1}^k} C^{|e|} f(x + e.h)`
/// with `C` complex conjugation and indices mod `N`.
///
/// The brute method is the defining average and serves as the oracle; the
/// Fourier route is available for `k = 2` via a direct size-`N` transform.
pub fn gowers_norm(f: &[Complex64], k: u32, method: GowersMethod) -> Result<GowersResult> {
    let n = f.len();
    if n < 2 {
        return Err(Error::BadInput("need at least two samples".into()));
    }
    if !(1..=4).contains(&k) {
        return Err(Error::BadInput(format!("k must be in 1..=4, got {k}")));
    }
    let value = match method {
        GowersMethod::Brute => {
            let cost = (n as u128).pow(k + 1);
            if cost > GOWERS_BUDGET {
                return Err(Error::Budget(format!(
                    "brute U^{k} at N={n} costs {cost} > {GOWERS_BUDGET}"
                )));
            }
            brute(f, k)
        }
        GowersMethod::Fourier => {
            if k != 2 {
                return Err(Error::BadInput(
                    "the Fourier identity is available for k = 2 only".into(),
                ));
            }
            fourier_u2(f)
        }
    };
    Ok(GowersResult {
        n,
        k,
        value,
        method,
    })
}

/// Brute method if affordable, otherwise the Fourier route when it exists.
pub fn gowers_norm_auto(f: &[Complex64], k: u32) -> Result<GowersResult> {
    let n = f.len() as u128;
    if n.pow(k + 1) <= GOWERS_BUDGET {
        gowers_norm(f, k, GowersMethod::Brute)
    } else if k == 2 {
        gowers_norm(f, k, GowersMethod::Fourier)
    } else {
        Err(Error::Budget(format!(
            "brute U^{k} at N={} exceeds the budget and no fast path exists",
            f.len()
        )))
    }
}

fn brute(f: &[Complex64], k: u32) -> f64 {
    let n = f.len();
    // odometer over (h_1 .. h_k); x is the innermost loop
    let mut h = vec![0usize; k as usize];
    let mut total = Complex64::zero();
    loop {
        for x in 0..n {
            // product over the 2^k cube corners
            let mut term = Complex64::new(1.0, 0.0);
            for mask in 0..(1u32 << k) {
                let mut idx = x;
                for (bit, &hj) in h.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        idx += hj;
                    }
                }
                let v = f[idx % n];
                term *= if mask.count_ones() % 2 == 1 { v.conj() } else { v };
            }
            total += term;
        }
        // advance the odometer
        let mut pos = 0;
        loop {
            if pos == h.len() {
                let mean = total / (n as f64).powi(k as i32 + 1);
                // the full average is real and nonnegative up to rounding
                return mean.re.max(0.0).powf(1.0 / 2f64.powi(k as i32));
            }
            h[pos] += 1;
            if h[pos] < n {
                break;
            }
            h[pos] = 0;
            pos += 1;
        }
    }
}

fn fourier_u2(f: &[Complex64]) -> f64 {
    let n = f.len();
    // direct transform: fhat(xi) = (1/N) sum_x f(x) e^{-2 pi i x xi / N}
    let mut fourth_moment = 0.0f64;
    for xi in 0..n {
        let mut hat = Complex64::zero();
        for (x, v) in f.iter().enumerate() {
            let angle = -TAU * ((x * xi) % n) as f64 / n as f64;
            hat += v * Complex64::from_polar(1.0, angle);
        }
        hat /= n as f64;
        fourth_moment += hat.norm_sqr() * hat.norm_sqr();
    }
    fourth_moment.powf(0.25)
}
