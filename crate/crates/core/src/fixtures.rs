//! In-crate copies of the worked examples used throughout the test suites.
//!
//! The same data ships as files under `fixtures/` for the CLI; these
//! constructors exist so library tests do not depend on paths.

use crate::metric::DistanceMatrix;
use crate::scalar::Scalar;
use crate::symmetry::PartialGraph;
use crate::tree::WeightedTree;

fn s(text: &str) -> Scalar {
    Scalar::parse(text, false).unwrap()
}

/// The phylogenetic-diversity example tree. Internal vertices a, r, b, c
/// carry the branch structure; leaf scores match the five quoted values.
pub fn fig1_tree() -> WeightedTree {
    let e = |u: &str, v: &str, w: &str| (u.to_string(), v.to_string(), s(w));
    WeightedTree::from_edges(&[
        e("u", "a", "4"),
        e("a", "v", "3"),
        e("a", "r", "5"),
        e("r", "b", "2"),
        e("b", "w", "0"),
        e("b", "c", "7"),
        e("c", "x", "1"),
        e("c", "y", "1"),
    ])
    .unwrap()
}

fn k4(d12: &str, d13: &str, d14: &str, d23: &str, d24: &str, d34: &str) -> DistanceMatrix {
    DistanceMatrix::from_upper_triangle(
        vec!["s1".into(), "s2".into(), "s3".into(), "s4".into()],
        vec![s(d12), s(d13), s(d14), s(d23), s(d24), s(d34)],
    )
    .unwrap()
}

/// Four points with a unit base triangle and a fourth point at distances
/// (4/3, 4/3, 1/3). Scores 97/30 under the hybrid measure.
pub fn fig2_s() -> DistanceMatrix {
    k4("1", "1", "4/3", "1", "4/3", "1/3")
}

/// The regular unit tetrahedron; scores exactly 3.
pub fn fig2_s_prime() -> DistanceMatrix {
    k4("1", "1", "1", "1", "1", "1")
}

/// Four points where s1 and s2 coincide while s3, s4 sit at distance 2.
pub fn fig4_s() -> DistanceMatrix {
    k4("0", "1", "1", "1", "1", "2")
}

/// Partial graph with two labeled edges in asymmetric positions
/// (e1 = s1s3 against weight structure that breaks the swap).
pub fn fig5_g1() -> PartialGraph {
    PartialGraph::new(
        4,
        vec![(0, 1, s("0")), (1, 2, s("1")), (0, 3, s("1")), (1, 3, s("1"))],
        vec![(0, 2, "e1".into()), (2, 3, "e2".into())],
    )
    .unwrap()
}

/// Fully labeled K4: every vertex permutation is an automorphism.
pub fn fig5_g2() -> PartialGraph {
    PartialGraph::new(
        4,
        vec![],
        vec![
            (0, 2, "e1".into()),
            (2, 3, "e2".into()),
            (1, 2, "e3".into()),
            (0, 3, "e4".into()),
            (0, 1, "e5".into()),
            (1, 3, "e6".into()),
        ],
    )
    .unwrap()
}

/// Source weights for the orbit-averaging example: unit K4 except d14 = 2.
pub fn fig8_gs() -> DistanceMatrix {
    k4("1", "1", "2", "1", "1", "1")
}

/// The partial graph labelling the three edges at s4.
pub fn fig8_gp() -> PartialGraph {
    PartialGraph::new(
        4,
        vec![(0, 1, s("1")), (0, 2, s("1")), (1, 2, s("1"))],
        vec![(0, 3, "e1".into()), (2, 3, "e2".into()), (1, 3, "e3".into())],
    )
    .unwrap()
}

/// Partial graph for the two-edge pair move: e1 = s1s4, e2 = s3s4.
pub fn fig9_gp() -> PartialGraph {
    PartialGraph::new(
        4,
        vec![(0, 1, s("1")), (0, 2, s("1")), (1, 2, s("1")), (1, 3, s("1"))],
        vec![(0, 3, "e1".into()), (2, 3, "e2".into())],
    )
    .unwrap()
}

/// The merging-measure triangle with sides d12 = 4, d13 = 2, d23 = 3.
pub fn fig9_triangle() -> DistanceMatrix {
    DistanceMatrix::triangle(s("4"), s("2"), s("3"))
}
