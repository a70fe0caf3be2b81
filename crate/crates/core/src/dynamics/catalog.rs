//! Named example maps and matrices shared by the test and acceptance
//! suites.

use num_bigint::BigInt;

use super::{torus_map, validate_map, AffineMapSpec, GroupPoint, GroupSpec};
use crate::exact::{IntMatrix, IntPoly, UnitRational};

fn ur(n: i64, d: i64) -> UnitRational {
    UnitRational::new(BigInt::from(n), BigInt::from(d))
}

/// A zero-entropy affine map together with a rational base point on which
/// orbit machinery is exercised.
pub struct CatalogEntry {
    pub name: &'static str,
    pub map: AffineMapSpec,
    pub base_point: GroupPoint,
}

/// Zero-entropy example maps: rotations, skew shifts, finite-order torus
/// blocks, and a mixed torus-finite system.
pub fn catalog() -> Vec<CatalogEntry> {
    let mut out = Vec::new();

    out.push(CatalogEntry {
        name: "rotation_third",
        map: torus_map(IntMatrix::identity(1), vec![ur(1, 3)]).unwrap(),
        base_point: GroupPoint {
            torus: vec![ur(1, 7)],
            finite: vec![],
        },
    });

    out.push(CatalogEntry {
        name: "rotation_fifth",
        map: torus_map(IntMatrix::identity(1), vec![ur(1, 5)]).unwrap(),
        base_point: GroupPoint {
            torus: vec![ur(2, 7)],
            finite: vec![],
        },
    });

    out.push(CatalogEntry {
        name: "skew_shift",
        map: torus_map(
            IntMatrix::from_i64(2, &[1, 0, 1, 1]),
            vec![ur(1, 5), UnitRational::zero()],
        )
        .unwrap(),
        base_point: GroupPoint {
            torus: vec![ur(1, 7), ur(2, 7)],
            finite: vec![],
        },
    });

    out.push(CatalogEntry {
        name: "quarter_turn",
        map: torus_map(IntMatrix::from_i64(2, &[0, -1, 1, 0]), vec![ur(1, 3), ur(1, 4)]).unwrap(),
        base_point: GroupPoint {
            torus: vec![ur(1, 7), ur(3, 7)],
            finite: vec![],
        },
    });

    out.push(CatalogEntry {
        name: "sixth_order",
        map: torus_map(IntMatrix::from_i64(2, &[0, -1, 1, 1]), vec![ur(1, 2), ur(1, 3)]).unwrap(),
        base_point: GroupPoint {
            torus: vec![ur(1, 5), ur(2, 5)],
            finite: vec![],
        },
    });

    out.push(CatalogEntry {
        name: "unipotent_three",
        map: torus_map(
            IntMatrix::from_i64(3, &[1, 1, 0, 0, 1, 1, 0, 0, 1]),
            vec![ur(1, 2), ur(1, 3), ur(1, 5)],
        )
        .unwrap(),
        base_point: GroupPoint {
            torus: vec![ur(1, 7), ur(2, 7), ur(3, 7)],
            finite: vec![],
        },
    });

    out.push(CatalogEntry {
        name: "torus_with_finite",
        map: validate_map(
            GroupSpec::new(2, vec![3]).unwrap(),
            IntMatrix::from_i64(2, &[1, 1, 0, 1]),
            vec![UnitRational::zero(), UnitRational::zero()],
            vec![2],
            GroupPoint {
                torus: vec![ur(1, 5), ur(1, 7)],
                finite: vec![1],
            },
        )
        .unwrap(),
        base_point: GroupPoint {
            torus: vec![ur(1, 2), ur(1, 3)],
            finite: vec![2],
        },
    });

    out
}

/// A matrix with its expected classification for the entropy dichotomy.
pub struct ClassEntry {
    pub name: &'static str,
    pub matrix: IntMatrix,
    pub zero_entropy: bool,
}

/// Classification battery: unipotent, finite-order, and companion matrices
/// on the zero-entropy side; hyperbolic and non-cyclotomic companions on
/// the positive side.
pub fn classification_catalog() -> Vec<ClassEntry> {
    vec![
        ClassEntry {
            name: "identity_2",
            matrix: IntMatrix::identity(2),
            zero_entropy: true,
        },
        ClassEntry {
            name: "unipotent_2",
            matrix: IntMatrix::from_i64(2, &[1, 1, 0, 1]),
            zero_entropy: true,
        },
        ClassEntry {
            name: "unipotent_3",
            matrix: IntMatrix::from_i64(3, &[1, 1, 0, 0, 1, 1, 0, 0, 1]),
            zero_entropy: true,
        },
        ClassEntry {
            name: "minus_identity",
            matrix: IntMatrix::from_i64(2, &[-1, 0, 0, -1]),
            zero_entropy: true,
        },
        ClassEntry {
            name: "quarter_turn",
            matrix: IntMatrix::from_i64(2, &[0, -1, 1, 0]),
            zero_entropy: true,
        },
        ClassEntry {
            name: "sixth_order",
            matrix: IntMatrix::from_i64(2, &[0, -1, 1, 1]),
            zero_entropy: true,
        },
        ClassEntry {
            name: "coordinate_swap",
            matrix: IntMatrix::from_i64(2, &[0, 1, 1, 0]),
            zero_entropy: true,
        },
        ClassEntry {
            name: "companion_phi_5",
            matrix: IntMatrix::companion(&IntPoly::from_i64(&[1, 1, 1, 1, 1])),
            zero_entropy: true,
        },
        ClassEntry {
            name: "companion_phi_12",
            matrix: IntMatrix::companion(&IntPoly::from_i64(&[1, 0, -1, 0, 1])),
            zero_entropy: true,
        },
        ClassEntry {
            name: "shear_plus_quarter_turn",
            matrix: IntMatrix::from_i64(
                4,
                &[1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0],
            ),
            zero_entropy: true,
        },
        ClassEntry {
            name: "anosov",
            matrix: IntMatrix::from_i64(2, &[2, 1, 1, 1]),
            zero_entropy: false,
        },
        ClassEntry {
            name: "plastic_companion",
            matrix: IntMatrix::companion(&IntPoly::from_i64(&[-1, -1, 0, 1])),
            zero_entropy: false,
        },
    ]
}
