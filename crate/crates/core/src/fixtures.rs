//! Reference arrangements shipped with the crate.

use crate::model::{Arrangement, PointRecord};

pub const FIG1_JSON: &str = include_str!("../fixtures/fig1.json");
pub const TANGENT_TRIANGLE_JSON: &str = include_str!("../fixtures/tangent_triangle.json");
pub const CONIC_ONLY_JSON: &str = include_str!("../fixtures/conic_only.json");

/// The five classes with two lines, by file name and contents.
pub const N2_CLASSES: [(&str, &str); 5] = [
    ("n2_tangent_tangent", include_str!("../fixtures/n2_tangent_tangent.json")),
    ("n2_tangent_transverse_through", include_str!("../fixtures/n2_tangent_transverse_through.json")),
    ("n2_tangent_transverse_missing", include_str!("../fixtures/n2_tangent_transverse_missing.json")),
    ("n2_transverse_shared", include_str!("../fixtures/n2_transverse_shared.json")),
    ("n2_transverse_disjoint", include_str!("../fixtures/n2_transverse_disjoint.json")),
];

fn parse(text: &str) -> Arrangement {
    Arrangement::from_json(text).expect("bundled fixture is valid")
}

/// A (4,1) arrangement: L1 tangent at its meeting point with L2, chained
/// conic points P(2,3) and P(3,4), and a free crossing of L4.
pub fn fig1() -> Arrangement {
    parse(FIG1_JSON)
}

/// A conic with three tangent lines.
pub fn tangent_triangle() -> Arrangement {
    parse(TANGENT_TRIANGLE_JSON)
}

pub fn conic_only() -> Arrangement {
    parse(CONIC_ONLY_JSON)
}

pub fn n2_classes() -> Vec<Arrangement> {
    N2_CLASSES.iter().map(|(_, text)| parse(text)).collect()
}

pub fn n2_transverse_disjoint() -> Arrangement {
    parse(N2_CLASSES[4].1)
}

pub fn single_tangent() -> Arrangement {
    Arrangement::validate(1, vec![PointRecord::new([1], true, Some(1))]).expect("valid")
}

pub fn single_transverse() -> Arrangement {
    Arrangement::validate(
        1,
        vec![PointRecord::new([1], true, None), PointRecord::new([1], true, None)],
    )
    .expect("valid")
}
