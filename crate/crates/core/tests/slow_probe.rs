//! Long-running checks, excluded from the default run. Execute with
//! `cargo test -p oscillab-core --test slow_probe -- --ignored --nocapture`.

use oscillab_core::oscillation::{test_subsequences, PhaseSampler, Verdict};
use oscillab_core::sequences;

/// Stride-3 subsequences of the Moebius sequence stay consistent with
/// order-1 oscillation at the million-sample scale (about 20 s optimized).
#[test]
#[ignore]
fn mobius_stride_three_subsequences_consistent_at_scale() {
    let c = sequences::mobius(1_000_000).unwrap();
    let sampler = PhaseSampler::default_for_order(1, 1);
    let reports =
        test_subsequences(&c, 3, 1, &[250_000, 500_000, 1_000_000], &sampler, 0.02).unwrap();
    assert_eq!(reports.parent.verdict, Verdict::Consistent);
    for (b, child) in reports.children.iter().enumerate() {
        assert_eq!(child.verdict, Verdict::Consistent, "child b={b}");
    }
    // observed worst moduli on first run: parent 0.0015, children <= 0.0035
    assert!(reports.parent.per_n.last().unwrap().worst_modulus < 0.01);
}
