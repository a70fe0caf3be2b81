//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its elapsed time. Identity criteria run at exact-rational equality; the
//! floating residual criteria pin their tolerances inline.

use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use oscillab_core::averages::{multiple_average, reduction_crosscheck, Character};
use oscillab_core::dynamics::{
    binomial_orbit, build_w, catalog, classification_catalog, conjugation_check, embed_base,
    entropy_certificate, iterate, orbit_table, quasi_unipotent_by_iteration, torus_map,
    validate_map, Endomorphism, GroupPoint, GroupSpec,
};
use oscillab_core::exact::{IntMatrix, IntPoly, RationalPoly, UnitRational};
use oscillab_core::oscillation::{
    gowers_norm, test_order, verify_po, GowersMethod, PhaseSampler, Verdict,
};
use oscillab_core::sequences;
use oscillab_core::sums::PhasePoly;

fn ur(n: i64, d: i64) -> UnitRational {
    UnitRational::new(BigInt::from(n), BigInt::from(d))
}

fn rational_quadratic(a0: (i64, i64), a1: (i64, i64), a2: (i64, i64)) -> PhasePoly {
    PhasePoly::Exact(RationalPoly::new(vec![
        BigRational::new(BigInt::from(a0.0), BigInt::from(a0.1)),
        BigRational::new(BigInt::from(a1.0), BigInt::from(a1.1)),
        BigRational::new(BigInt::from(a2.0), BigInt::from(a2.1)),
    ]))
}

fn skew_shift() -> oscillab_core::dynamics::AffineMapSpec {
    torus_map(
        IntMatrix::from_i64(2, &[1, 0, 1, 1]),
        vec![ur(1, 5), UnitRational::zero()],
    )
    .unwrap()
}

#[test]
fn criterion_1_residue_identity_suite() {
    let start = Instant::now();
    let n = 10_000;
    let weights = sequences::random_complex(n, 1).unwrap();
    let phases = [
        rational_quadratic((0, 1), (1, 3), (1, 7)),
        rational_quadratic((2, 5), (3, 8), (5, 11)),
    ];
    let mut worst: f64 = 0.0;
    for p in [2u64, 3, 5, 7, 11] {
        for phase in &phases {
            let v = verify_po(&weights, p, phase, n).unwrap();
            worst = worst
                .max(v.decomposition)
                .max(v.reconstruction)
                .max(v.twist.iter().cloned().fold(0.0, f64::max));
            assert!(v.decomposition < 1e-10, "p={p} decomposition {}", v.decomposition);
            assert!(v.reconstruction < 1e-10, "p={p} reconstruction {}", v.reconstruction);
            for (u, t) in v.twist.iter().enumerate() {
                assert!(*t < 1e-10, "p={p} twist u={u} residual {t}");
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!(
        "criterion 1 PASS: decomposition/twist/reconstruction residuals < 1e-10 \
         (worst {worst:.2e}) for p in {{2,3,5,7,11}}, N=1e4, in {elapsed:.2?}"
    );
}

#[test]
fn criterion_2_entropy_classification() {
    let start = Instant::now();
    let entries = classification_catalog();
    assert!(entries.len() >= 10, "catalog has {}", entries.len());
    for entry in &entries {
        let map = torus_map(
            entry.matrix.clone(),
            vec![UnitRational::zero(); entry.matrix.dim()],
        )
        .unwrap();
        // independent oracle: bounded power iteration, no cyclotomic division
        let oracle_zero = quasi_unipotent_by_iteration(map.linear(), 5040).is_some();
        assert_eq!(oracle_zero, entry.zero_entropy, "oracle disagrees on {}", entry.name);
        match entropy_certificate(&map) {
            Ok(cert) => {
                assert!(entry.zero_entropy, "{} misclassified as zero entropy", entry.name);
                let nu32: u32 = cert.nu.try_into().unwrap();
                let remainder = map
                    .linear()
                    .pow(nu32)
                    .sub(&Endomorphism::identity(map.group()));
                assert_eq!(remainder, cert.nilpotent, "{}: L^nu - I != N", entry.name);
                assert!(
                    cert.nilpotent.pow(cert.kappa + 1).is_zero(),
                    "{}: N^(kappa+1) != 0",
                    entry.name
                );
                if cert.kappa > 0 {
                    assert!(
                        !cert.nilpotent.pow(cert.kappa).is_zero(),
                        "{}: kappa not minimal",
                        entry.name
                    );
                }
            }
            Err(_) => {
                assert!(!entry.zero_entropy, "{} misclassified as positive entropy", entry.name);
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!(
        "criterion 2 PASS: {} matrices classified with zero oracle disagreements, \
         certificates exact, in {elapsed:.2?}",
        entries.len()
    );
}

#[test]
fn criterion_3_conjugation_identity() {
    let start = Instant::now();
    let rotation = torus_map(IntMatrix::identity(1), vec![ur(1, 3)]).unwrap();
    let skew = skew_shift();
    let mixed = validate_map(
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

    let cases: Vec<(&str, _, Vec<GroupPoint>)> = vec![
        (
            "rotation",
            rotation,
            vec![GroupPoint {
                torus: vec![ur(1, 7)],
                finite: vec![],
            }],
        ),
        (
            "skew_shift",
            skew,
            vec![GroupPoint {
                torus: vec![ur(1, 7), ur(2, 7)],
                finite: vec![],
            }],
        ),
        (
            "torus_with_finite",
            mixed,
            vec![GroupPoint {
                torus: vec![ur(1, 2), ur(1, 3)],
                finite: vec![2],
            }],
        ),
    ];
    for (name, map, points) in &cases {
        let report = conjugation_check(map, points, 1000).unwrap();
        assert!(
            report.violations.is_empty(),
            "{name}: violations {:?}",
            report.violations
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!(
        "criterion 3 PASS: (T^n x, b) = W^n(x, b) exactly for n <= 1000 on \
         rotation, skew shift, and T^2 x Z/3, in {elapsed:.2?}"
    );
}

#[test]
fn criterion_4_binomial_orbit_identity() {
    let start = Instant::now();
    let mut checked = 0u64;
    for entry in catalog() {
        let w = build_w(&entry.map);
        let cert = entropy_certificate(&w).unwrap();
        let base = embed_base(&entry.map, &entry.base_point).unwrap();
        let table = orbit_table(&w, &cert, &base).unwrap();
        for m in cert.kappa as u64..=cert.kappa as u64 + 50 {
            for r in 0..cert.nu {
                let fast = binomial_orbit(&table, m, r).unwrap();
                let direct = iterate(&w, &base, m * cert.nu + r).unwrap();
                assert_eq!(fast, direct, "{}: m={m} r={r}", entry.name);
                checked += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!(
        "criterion 4 PASS: binomial orbit equals direct iteration exactly at \
         {checked} (map, m, r) triples, in {elapsed:.2?}"
    );
}

#[test]
fn criterion_5_reduction_crosscheck() {
    let start = Instant::now();
    let map = skew_shift();
    let x = GroupPoint {
        torus: vec![ur(1, 7), ur(2, 7)],
        finite: vec![],
    };
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
    let report = reduction_crosscheck(&map, &x, &chars, &polys, 200).unwrap();
    assert!(report.violations.is_empty(), "violations: {:?}", report.violations);
    assert_eq!(report.checked, report.nu * 200);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!(
        "criterion 5 PASS: direct character phases equal the reduced polynomial \
         mod 1 as exact rationals at {} (r, m) pairs on the skew shift, in {elapsed:.2?}",
        report.checked
    );
}

#[test]
fn criterion_6_mobius_decay() {
    let start = Instant::now();
    let n_top = 1_000_000;
    let c = sequences::mobius(n_top).unwrap();

    // plain means, cross-checked against an independent divisor-sum sieve
    let oracle = sequences::mobius_divisor_sum_oracle(n_top);
    let mut means = Vec::new();
    for n in [10_000usize, 100_000, 1_000_000] {
        let mean: Complex64 = c.values()[..n].iter().sum::<Complex64>() / n as f64;
        let oracle_mertens: i64 = oracle[..n].iter().sum();
        assert!(
            (mean.re - oracle_mertens as f64 / n as f64).abs() < 1e-12,
            "sieve disagrees with divisor-sum oracle at N={n}"
        );
        means.push(mean.norm());
    }
    assert!(means[0] > means[1] && means[1] > means[2], "means {means:?}");
    assert!(means[2] < 1e-3, "mean at 1e6 is {}", means[2]);

    // weighted multiple ergodic average on the skew shift, q = (n, n^2)
    let map = skew_shift();
    let x = GroupPoint {
        torus: vec![ur(1, 7), ur(2, 7)],
        finite: vec![],
    };
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
    let mut moduli = Vec::new();
    for n in [10_000usize, 100_000, 1_000_000] {
        let avg = multiple_average(&c, &map, &x, &chars, &polys, n).unwrap();
        moduli.push(avg.modulus());
    }
    assert!(
        moduli[0] > moduli[1] && moduli[1] > moduli[2],
        "moduli {moduli:?}"
    );
    assert!(moduli[2] < 0.02, "average at 1e6 is {}", moduli[2]);

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 180.0, "took {elapsed:?}");
    println!(
        "criterion 6 PASS: Mertens means {:?} strictly decreasing (< 1e-3 at 1e6, \
         oracle-checked); skew-shift multiple average moduli {:?} strictly \
         decreasing (< 0.02 at 1e6), in {elapsed:.2?}",
        means, moduli
    );
}

#[test]
fn criterion_7_negative_controls() {
    let start = Instant::now();
    let grid = [1024usize, 2048, 4096];
    let sampler = PhaseSampler::default_for_order(1, 1);

    let constant = sequences::constant(Complex64::new(1.0, 0.0), 4096);
    let report = test_order(&constant, 1, &grid, &sampler, 0.05).unwrap();
    assert_eq!(report.verdict, Verdict::Inconsistent);

    let matched = sequences::linear_phase(0.625, 4096);
    let report = test_order(&matched, 1, &grid, &sampler, 0.05).unwrap();
    assert_eq!(report.verdict, Verdict::Inconsistent);

    // adversarial cancellation: rotation matched against its own weights
    let alpha = 0.375;
    let c = sequences::linear_phase(alpha, 4096);
    let map = torus_map(IntMatrix::identity(1), vec![ur(-3, 8)]).unwrap();
    let chars = vec![Character {
        torus_freq: vec![1],
        finite_freq: vec![],
    }];
    let profile = oscillab_core::averages::decay_profile(
        &c,
        &map,
        &map.group().zero_point(),
        &chars,
        &[IntPoly::x()],
        &[512, 1024, 2048, 4096],
    )
    .unwrap();
    for r in &profile.results {
        assert!(r.modulus() > 0.9, "adversarial profile dipped to {}", r.modulus());
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!(
        "criterion 7 PASS: constant and matched-phase weights ruled inconsistent at d=1; \
         adversarial profile stayed above 0.9, in {elapsed:.2?}"
    );
}

#[test]
fn criterion_8_gowers_norms() {
    let start = Instant::now();
    use rand_core::{RngCore, SeedableRng};

    // brute vs Fourier agreement at N up to 128
    for n in [16usize, 40, 64, 100, 128] {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(n as u64);
        let f: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(if rng.next_u64() & 1 == 0 { 1.0 } else { -1.0 }, 0.0))
            .collect();
        let brute = gowers_norm(&f, 2, GowersMethod::Brute).unwrap().value;
        let fourier = gowers_norm(&f, 2, GowersMethod::Fourier).unwrap().value;
        assert!(
            (brute - fourier).abs() < 1e-10,
            "N={n}: brute {brute} vs fourier {fourier}"
        );
    }

    // monotonicity in k
    for (n, seed) in [(16usize, 1u64), (32, 2), (48, 3), (64, 4)] {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let f: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(if rng.next_u64() & 1 == 0 { 1.0 } else { -1.0 }, 0.0))
            .collect();
        let u1 = gowers_norm(&f, 1, GowersMethod::Brute).unwrap().value;
        let u2 = gowers_norm(&f, 2, GowersMethod::Brute).unwrap().value;
        let u3 = gowers_norm(&f, 3, GowersMethod::Brute).unwrap().value;
        assert!(u1 <= u2 + 1e-12 && u2 <= u3 + 1e-12, "N={n}: {u1} {u2} {u3}");
    }

    // modulation invariance
    let n = 96;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
    let f: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(if rng.next_u64() & 1 == 0 { 1.0 } else { -1.0 }, 0.0))
        .collect();
    let base = gowers_norm(&f, 2, GowersMethod::Fourier).unwrap().value;
    for a in [1usize, 11, 40] {
        let g: Vec<Complex64> = f
            .iter()
            .enumerate()
            .map(|(x, v)| {
                v * Complex64::from_polar(
                    1.0,
                    std::f64::consts::TAU * (a * x % n) as f64 / n as f64,
                )
            })
            .collect();
        let modulated = gowers_norm(&g, 2, GowersMethod::Fourier).unwrap().value;
        assert!((base - modulated).abs() < 1e-12, "a={a}");
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!(
        "criterion 8 PASS: brute/Fourier U^2 agree to 1e-10 (N <= 128), U^k monotone in k, \
         modulation invariance to 1e-12, in {elapsed:.2?}"
    );
}
