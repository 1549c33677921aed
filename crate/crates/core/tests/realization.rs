use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zscan_core::{canonical_key, fixtures};
use zscan_core::realization::linalg::{c, matrix_distance, projective_distance, C, M3, V3};
use zscan_core::realization::{
    extract_combinatorics, projective_equivalent, projective_transfer, realize, ProjectiveVerdict, RealizedArrangement,
    Tolerances, DEFAULT_BUDGET,
};

fn realized(a: &zscan_core::Arrangement, seed: u64) -> RealizedArrangement {
    realize(a, DEFAULT_BUDGET, seed, &Tolerances::default()).unwrap().geometry.expect("realized")
}

/// Identity plus a bounded complex perturbation, so the condition number
/// stays moderate.
fn well_conditioned(seed: u64) -> M3 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = M3::identity();
    for z in m.iter_mut() {
        *z += c(rng.random_range(-0.4..0.4), rng.random_range(-0.4..0.4));
    }
    m
}

/// Intersections of a line with x^2 + y^2 - z^2, found by restricting the
/// quadric to two points spanning the line.
fn conic_meets(l: &V3) -> [V3; 2] {
    let q = |u: &V3, v: &V3| u[0] * v[0] + u[1] * v[1] - u[2] * v[2];
    let axes = [V3::x(), V3::y(), V3::z()];
    let mut span: Vec<V3> = axes.iter().map(|e| l.cross(e)).collect();
    span.sort_by(|a, b| b.norm().partial_cmp(&a.norm()).unwrap());
    let (p, r) = (span[0], span[1]);
    // q(p + k r) = q(p,p) + 2k q(p,r) + k^2 q(r,r)
    let (a2, b, c0) = (q(&r, &r), q(&p, &r), q(&p, &p));
    let disc = (b * b - a2 * c0).sqrt();
    [(-b + disc) / a2, (-b - disc) / a2].map(|k| p + r * k)
}

/// Cross-ratio of four conic points seen from a fifth conic point.
fn cross_ratio(points: &[V3; 4]) -> C {
    let (s, t) = (c(1.0, 0.0), c(0.5, 0.3));
    let x = V3::new(s * s - t * t, c(2.0, 0.0) * s * t, s * s + t * t);
    let det = |a: &V3, b: &V3| M3::from_columns(&[x, *a, *b]).determinant();
    let [p1, p2, p3, p4] = points;
    det(p1, p3) * det(p2, p4) / (det(p1, p4) * det(p2, p3))
}

fn four_point_cross_ratio(g: &RealizedArrangement) -> C {
    let lines = g.line_vectors();
    let [a1, a2] = conic_meets(&lines[0]);
    let [b1, b2] = conic_meets(&lines[1]);
    cross_ratio(&[a1, a2, b1, b2])
}

#[test]
fn cross_ratio_oracle_matches_parameters() {
    // Parameters 0, 1, 2, 3 have cross-ratio (0-2)(1-3) / ((0-3)(1-2)) = 4/3.
    let pts = [0.0, 1.0, 2.0, 3.0].map(|t| {
        let t = c(t, 0.0);
        let s = c(1.0, 0.0);
        V3::new(s * s - t * t, c(2.0, 0.0) * s * t, s * s + t * t)
    });
    assert!((cross_ratio(&pts) - c(4.0 / 3.0, 0.0)).norm() < 1e-12);
}

#[test]
fn cross_ratio_obstruction() {
    let a = fixtures::n2_transverse_disjoint();
    let tol = Tolerances::default();
    let g1 = realized(&a, 1);
    let g2 = realized(&a, 2);
    let (l1, l2) = (four_point_cross_ratio(&g1), four_point_cross_ratio(&g2));
    // Swapping the two crossings of one line inverts the ratio; swapping the
    // lines fixes it.
    let gap = (l1 - l2).norm().min((l1 - C::from(1.0) / l2).norm());
    assert!(gap > 1e-3, "cross-ratios {l1} and {l2}");
    assert!(matches!(projective_equivalent(&g1, &g2, &tol).unwrap(), ProjectiveVerdict::NotFound { .. }));
}

#[test]
fn realizer_reproduces_fixture_classes() {
    let tol = Tolerances::default();
    for a in [fixtures::fig1(), fixtures::tangent_triangle()].into_iter().chain(fixtures::n2_classes()) {
        let r = realize(&a, DEFAULT_BUDGET, 0, &tol).unwrap();
        let g = r.geometry.expect("realized");
        assert!(g.residual < 1e-9);
        assert!(g.separation > tol.separation());
        assert_eq!(canonical_key(&extract_combinatorics(&g, &tol).unwrap()), canonical_key(&a));
    }
}

#[test]
fn tighter_residual_never_adds_realizations() {
    let loose = Tolerances::default();
    let tight = Tolerances { res: 1e-20, ..loose };
    for a in fixtures::n2_classes() {
        let r_tight = realize(&a, 8, 9, &tight).unwrap();
        if r_tight.geometry.is_some() {
            assert!(realize(&a, 8, 9, &loose).unwrap().geometry.is_some());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn extraction_is_projectively_invariant(seed in any::<u64>(), which in 0usize..7) {
        let tol = Tolerances::default();
        let mut pool = vec![fixtures::fig1(), fixtures::tangent_triangle()];
        pool.extend(fixtures::n2_classes());
        let a = &pool[which];
        let g = realized(a, seed % 16);
        let h = projective_transfer(&g, &well_conditioned(seed)).unwrap();
        prop_assert_eq!(canonical_key(&extract_combinatorics(&h, &tol).unwrap()), canonical_key(a));
    }

    #[test]
    fn witness_carries_first_onto_second(seed in any::<u64>(), which in 0usize..7) {
        let tol = Tolerances::default();
        let mut pool = vec![fixtures::fig1(), fixtures::tangent_triangle()];
        pool.extend(fixtures::n2_classes());
        let g = realized(&pool[which], seed % 16);
        let h = projective_transfer(&g, &well_conditioned(seed)).unwrap();
        let verdict = projective_equivalent(&g, &h, &tol).unwrap();
        let ProjectiveVerdict::Equivalent { sigma, residual, .. } = &verdict else {
            return Err(TestCaseError::fail("no witness"));
        };
        prop_assert!(*residual < 1e-6);
        let moved = projective_transfer(&g, &verdict.matrix().unwrap()).unwrap();
        prop_assert!(matrix_distance(&moved.conic_matrix(), &h.conic_matrix()) < 1e-6);
        let targets = h.line_vectors();
        for (i, l) in moved.line_vectors().iter().enumerate() {
            prop_assert!(projective_distance(l, &targets[sigma[i] as usize - 1]) < 1e-6);
        }
    }
}
