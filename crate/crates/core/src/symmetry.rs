//! Partial graphs, edge symmetry via automorphism search, orbit averaging,
//! and symmetric pair moves.
//!
//! Symmetry between two labeled edges is decided by exhaustive search for a
//! vertex permutation that preserves every weighted edge (with its weight)
//! and maps labeled edges to labeled edges. The search is n! with pruning
//! by vertex invariants; set sizes here are desk-scale.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::metric::DistanceMatrix;
use crate::scalar::Scalar;

/// Default cap on the vertex count for the permutation search.
pub const DEFAULT_AUTOMORPHISM_BOUND: usize = 9;

fn ordered(i: usize, j: usize) -> (usize, usize) {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

/// A complete graph where every vertex pair either carries a weight or a
/// distinct label, never both.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartialGraph {
    n: usize,
    weighted: BTreeMap<(usize, usize), Scalar>,
    labeled: BTreeMap<(usize, usize), String>,
}

impl PartialGraph {
    pub fn new(
        n: usize,
        weighted: Vec<(usize, usize, Scalar)>,
        labeled: Vec<(usize, usize, String)>,
    ) -> Result<Self, Error> {
        let mut w = BTreeMap::new();
        let mut l = BTreeMap::new();
        for (i, j, weight) in weighted {
            check_pair(n, i, j)?;
            if w.insert(ordered(i, j), weight).is_some() {
                return Err(Error::PartialGraphCoverage { i, j });
            }
        }
        let mut seen_labels = std::collections::HashSet::new();
        for (i, j, label) in labeled {
            check_pair(n, i, j)?;
            if !seen_labels.insert(label.clone()) {
                return Err(Error::DuplicateEdgeLabel(label));
            }
            let key = ordered(i, j);
            if w.contains_key(&key) || l.insert(key, label).is_some() {
                return Err(Error::PartialGraphCoverage { i, j });
            }
        }
        // every pair covered exactly once
        for i in 0..n {
            for j in (i + 1)..n {
                if !w.contains_key(&(i, j)) && !l.contains_key(&(i, j)) {
                    return Err(Error::PartialGraphCoverage { i, j });
                }
            }
        }
        Ok(PartialGraph {
            n,
            weighted: w,
            labeled: l,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn weighted_edges(&self) -> &BTreeMap<(usize, usize), Scalar> {
        &self.weighted
    }

    pub fn labeled_edges(&self) -> &BTreeMap<(usize, usize), String> {
        &self.labeled
    }

    pub fn label_of(&self, i: usize, j: usize) -> Option<&String> {
        self.labeled.get(&ordered(i, j))
    }

    /// Finds the endpoints of a labeled edge by its label.
    pub fn edge_by_label(&self, label: &str) -> Option<(usize, usize)> {
        self.labeled
            .iter()
            .find(|(_, l)| l.as_str() == label)
            .map(|(&e, _)| e)
    }

    /// Per-vertex invariant used to prune the permutation search: the
    /// sorted incident weighted-edge weights plus the incident label count.
    fn vertex_invariant(&self, v: usize) -> (Vec<Scalar>, usize) {
        let mut weights = Vec::new();
        let mut label_count = 0;
        for u in 0..self.n {
            if u == v {
                continue;
            }
            let key = ordered(u, v);
            if let Some(w) = self.weighted.get(&key) {
                weights.push(w.clone());
            } else {
                label_count += 1;
            }
        }
        weights.sort();
        (weights, label_count)
    }

    fn respects(&self, perm: &[usize], i: usize, j: usize) -> bool {
        let from = ordered(i, j);
        let to = ordered(perm[i], perm[j]);
        match (self.weighted.get(&from), self.weighted.get(&to)) {
            (Some(a), Some(b)) => a == b,
            (None, None) => true, // labeled edge maps to a labeled edge
            _ => false,
        }
    }

    /// All vertex permutations preserving weighted edges (with equal
    /// weights) and the labeled/weighted split. Exhaustive with pruning.
    pub fn automorphisms(&self, bound: usize) -> Result<Vec<Vec<usize>>, Error> {
        if self.n > bound {
            return Err(Error::OverBound {
                n: self.n,
                bound,
            });
        }
        let invariants: Vec<_> = (0..self.n).map(|v| self.vertex_invariant(v)).collect();
        let mut found = Vec::new();
        let mut perm = vec![usize::MAX; self.n];
        let mut used = vec![false; self.n];
        self.search(0, &mut perm, &mut used, &invariants, &mut found);
        // order-normalize so parallel and serial callers compare equal
        found.sort();
        Ok(found)
    }

    fn search(
        &self,
        depth: usize,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        invariants: &[(Vec<Scalar>, usize)],
        found: &mut Vec<Vec<usize>>,
    ) {
        if depth == self.n {
            found.push(perm.clone());
            return;
        }
        for image in 0..self.n {
            if used[image] || invariants[depth] != invariants[image] {
                continue;
            }
            perm[depth] = image;
            if (0..depth).all(|prev| self.respects(perm, prev, depth)) {
                used[image] = true;
                self.search(depth + 1, perm, used, invariants, found);
                used[image] = false;
            }
            perm[depth] = usize::MAX;
        }
    }

    /// True when some automorphism maps the endpoint pair of `e1` to that
    /// of `e2`.
    pub fn edges_symmetric(&self, e1: (usize, usize), e2: (usize, usize), bound: usize) -> Result<bool, Error> {
        let e1 = ordered(e1.0, e1.1);
        let e2 = ordered(e2.0, e2.1);
        let autos = self.automorphisms(bound)?;
        Ok(autos
            .iter()
            .any(|p| ordered(p[e1.0], p[e1.1]) == e2))
    }
}

fn check_pair(n: usize, i: usize, j: usize) -> Result<(), Error> {
    if i == j {
        return Err(Error::PartialGraphCoverage { i, j });
    }
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    if j >= n {
        return Err(Error::IndexOutOfRange { index: j, n });
    }
    Ok(())
}

/// Orbits of the labeled edges under the automorphism group.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeOrbitPartition {
    /// Each orbit lists its edges as (i, j, label), sorted by endpoints.
    pub orbits: Vec<Vec<(usize, usize, String)>>,
    pub group_size: usize,
}

/// Computes the equivalence classes of the labeled edges.
pub fn edge_orbits(g: &PartialGraph, bound: usize) -> Result<EdgeOrbitPartition, Error> {
    let autos = g.automorphisms(bound)?;
    let edges: Vec<(usize, usize)> = g.labeled_edges().keys().copied().collect();
    let index: BTreeMap<(usize, usize), usize> =
        edges.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    let mut parent: Vec<usize> = (0..edges.len()).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for p in &autos {
        for (k, &(i, j)) in edges.iter().enumerate() {
            let img = ordered(p[i], p[j]);
            let k2 = index[&img]; // labeled maps to labeled by construction
            let (a, b) = (find(&mut parent, k), find(&mut parent, k2));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<(usize, usize, String)>> = BTreeMap::new();
    for (k, &(i, j)) in edges.iter().enumerate() {
        let root = find(&mut parent, k);
        groups
            .entry(root)
            .or_default()
            .push((i, j, g.label_of(i, j).unwrap().clone()));
    }
    Ok(EdgeOrbitPartition {
        orbits: groups.into_values().collect(),
        group_size: autos.len(),
    })
}

/// Replaces each labeled edge's weight with the mean of its orbit, taking
/// source weights from `source`. Unlabeled edges must agree with `source`
/// and are unchanged. The result must still validate; a failure here would
/// be evidence against the claim that averaging preserves the triangle
/// inequality, so it is surfaced as a hard error carrying the witness.
pub fn average_orbits(
    source: &DistanceMatrix,
    g: &PartialGraph,
    bound: usize,
) -> Result<DistanceMatrix, Error> {
    check_weights_agree(source, g)?;
    let partition = edge_orbits(g, bound)?;
    let mut out = source.clone();
    for orbit in &partition.orbits {
        let k = orbit.len() as i64;
        let total: Scalar = orbit
            .iter()
            .map(|&(i, j, _)| source.get(i, j).clone())
            .sum();
        let mean = total / Scalar::from_int(k);
        for &(i, j, _) in orbit {
            out.set(i, j, mean.clone());
        }
    }
    let check = out.validate();
    if !check.ok() {
        return Err(Error::InvalidMetric(format!(
            "orbit averaging produced an invalid pseudometric (counterexample evidence): {:?}",
            check.violations
        )));
    }
    Ok(out)
}

/// A strict move of two symmetric edge weights toward their shared mean.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairMove {
    pub e1: (usize, usize),
    pub e2: (usize, usize),
    /// Weight sum, preserved by the move.
    pub lambda: Scalar,
    pub new_w1: Scalar,
}

impl PairMove {
    pub fn new_w2(&self) -> Scalar {
        &self.lambda - &self.new_w1
    }
}

/// Applies a symmetric pair move: `g` must have exactly the two labeled
/// edges of the move, they must be symmetric, and the new weights must sit
/// strictly closer to `lambda / 2` than the old ones.
pub fn apply_pair_move(
    source: &DistanceMatrix,
    mv: &PairMove,
    g: &PartialGraph,
    bound: usize,
) -> Result<DistanceMatrix, Error> {
    if g.labeled_edges().len() != 2 {
        return Err(Error::format(
            "pair move",
            format!("partial graph must have exactly 2 labeled edges, got {}", g.labeled_edges().len()),
        ));
    }
    check_weights_agree(source, g)?;
    let e1 = ordered(mv.e1.0, mv.e1.1);
    let e2 = ordered(mv.e2.0, mv.e2.1);
    if g.label_of(e1.0, e1.1).is_none() || g.label_of(e2.0, e2.1).is_none() {
        return Err(Error::format("pair move", "move edges are not the labeled edges"));
    }
    if !g.edges_symmetric(e1, e2, bound)? {
        let l1 = g.label_of(e1.0, e1.1).unwrap().clone();
        let l2 = g.label_of(e2.0, e2.1).unwrap().clone();
        return Err(Error::NotSymmetric(l1, l2));
    }
    let old_w1 = source.get(e1.0, e1.1).clone();
    let old_w2 = source.get(e2.0, e2.1).clone();
    if &old_w1 + &old_w2 != mv.lambda {
        return Err(Error::MoveSumMismatch);
    }
    let half_lambda = &mv.lambda * &Scalar::ratio(1, 2).unwrap();
    let new_w2 = mv.new_w2();
    let strict = (&mv.new_w1 - &half_lambda).abs() < (&old_w1 - &half_lambda).abs()
        && (&new_w2 - &half_lambda).abs() < (&old_w2 - &half_lambda).abs();
    if !strict {
        return Err(Error::MoveNotStrict);
    }
    let mut out = source.clone();
    out.set(e1.0, e1.1, mv.new_w1.clone());
    out.set(e2.0, e2.1, new_w2);
    let check = out.validate();
    if !check.ok() {
        return Err(Error::InvalidMetric(format!(
            "pair move produced an invalid pseudometric (counterexample evidence): {:?}",
            check.violations
        )));
    }
    Ok(out)
}

fn check_weights_agree(source: &DistanceMatrix, g: &PartialGraph) -> Result<(), Error> {
    if source.len() != g.len() {
        return Err(Error::format(
            "partial graph",
            format!("source has {} points but graph has {}", source.len(), g.len()),
        ));
    }
    for (&(i, j), w) in g.weighted_edges() {
        if source.get(i, j) != w {
            return Err(Error::WeightMismatch { i, j });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn s(text: &str) -> Scalar {
        Scalar::parse(text, false).unwrap()
    }

    const B: usize = DEFAULT_AUTOMORPHISM_BOUND;

    #[test]
    fn fully_labeled_k4_has_all_24_automorphisms() {
        let g = fixtures::fig5_g2();
        assert_eq!(g.automorphisms(B).unwrap().len(), 24);
        let orbits = edge_orbits(&g, B).unwrap();
        assert_eq!(orbits.orbits.len(), 1);
        assert_eq!(orbits.orbits[0].len(), 6);
    }

    #[test]
    fn k2_with_one_weighted_edge_has_both_permutations() {
        let g = PartialGraph::new(2, vec![(0, 1, s("1"))], vec![]).unwrap();
        assert_eq!(g.automorphisms(B).unwrap().len(), 2);
    }

    #[test]
    fn g1_edges_not_symmetric() {
        let g = fixtures::fig5_g1();
        let autos = g.automorphisms(B).unwrap();
        assert!(autos.len() < 24);
        let e1 = g.edge_by_label("e1").unwrap();
        let e2 = g.edge_by_label("e2").unwrap();
        assert!(!g.edges_symmetric(e1, e2, B).unwrap());
        let orbits = edge_orbits(&g, B).unwrap();
        assert_eq!(orbits.orbits.len(), 2);
    }

    #[test]
    fn identity_is_always_an_automorphism_and_group_closed() {
        for g in [fixtures::fig5_g1(), fixtures::fig5_g2(), fixtures::fig8_gp()] {
            let autos = g.automorphisms(B).unwrap();
            let identity: Vec<usize> = (0..g.len()).collect();
            assert!(autos.contains(&identity));
            // closure and inverses
            for p in &autos {
                let mut inv = vec![0; p.len()];
                for (i, &pi) in p.iter().enumerate() {
                    inv[pi] = i;
                }
                assert!(autos.contains(&inv));
                for q in &autos {
                    let composed: Vec<usize> = (0..p.len()).map(|i| p[q[i]]).collect();
                    assert!(autos.contains(&composed));
                }
            }
        }
    }

    #[test]
    fn fig8_single_orbit_and_averaging() {
        let g = fixtures::fig8_gp();
        let orbits = edge_orbits(&g, B).unwrap();
        assert_eq!(orbits.orbits.len(), 1);
        assert_eq!(orbits.orbits[0].len(), 3);

        let averaged = average_orbits(&fixtures::fig8_gs(), &g, B).unwrap();
        for (i, j) in [(0, 3), (1, 3), (2, 3)] {
            assert_eq!(*averaged.get(i, j), s("4/3"));
        }
        // unlabeled edges unchanged
        assert_eq!(*averaged.get(0, 1), s("1"));
        // total weight in the orbit preserved: 2 + 1 + 1 = 3 * 4/3
        // idempotence
        let again = average_orbits(&averaged, &g, B).unwrap();
        assert_eq!(again, averaged);
    }

    #[test]
    fn averaging_orbit_of_size_one_is_identity() {
        let g = PartialGraph::new(
            3,
            vec![(0, 1, s("2")), (1, 2, s("3"))],
            vec![(0, 2, "e1".into())],
        )
        .unwrap();
        let m = DistanceMatrix::triangle(s("2"), s("4"), s("3"));
        let out = average_orbits(&m, &g, B).unwrap();
        assert_eq!(out, m);
    }

    #[test]
    fn averaging_rejects_weight_mismatch() {
        let g = fixtures::fig8_gp();
        let wrong = fixtures::fig8_gs().scale(&s("2")).unwrap();
        assert!(matches!(
            average_orbits(&wrong, &g, B),
            Err(Error::WeightMismatch { .. })
        ));
    }

    #[test]
    fn pair_move_fig9_and_fig10() {
        let g = fixtures::fig9_gp();
        let source = fixtures::fig8_gs(); // d14 = 2, d34 = 1
        let mv = PairMove {
            e1: (0, 3),
            e2: (2, 3),
            lambda: s("3"),
            new_w1: s("17/10"),
        };
        let t = apply_pair_move(&source, &mv, &g, B).unwrap();
        assert_eq!(*t.get(0, 3), s("17/10"));
        assert_eq!(*t.get(2, 3), s("13/10"));
        assert!(t.validate().ok());

        // second application on edges (s1s4, s2s4) with weights (1.7, 1)
        let g2 = PartialGraph::new(
            4,
            vec![(0, 1, s("1")), (0, 2, s("1")), (1, 2, s("1")), (2, 3, s("13/10"))],
            vec![(0, 3, "e1".into()), (1, 3, "e2".into())],
        )
        .unwrap();
        let mv2 = PairMove {
            e1: (0, 3),
            e2: (1, 3),
            lambda: s("27/10"),
            new_w1: s("14/10"),
        };
        let t2 = apply_pair_move(&t, &mv2, &g2, B).unwrap();
        assert_eq!(*t2.get(0, 3), s("7/5"));
        assert_eq!(*t2.get(1, 3), s("13/10"));
        assert_eq!(*t2.get(2, 3), s("13/10"));
    }

    #[test]
    fn pair_move_rejects_non_strict() {
        let g = fixtures::fig9_gp();
        let source = fixtures::fig8_gs();
        let mv = PairMove {
            e1: (0, 3),
            e2: (2, 3),
            lambda: s("3"),
            new_w1: s("2"), // unchanged
        };
        assert!(matches!(
            apply_pair_move(&source, &mv, &g, B),
            Err(Error::MoveNotStrict)
        ));
    }

    #[test]
    fn pair_move_rejects_asymmetric_pair() {
        // label two edges that no automorphism can exchange
        let g = PartialGraph::new(
            4,
            vec![(0, 1, s("1")), (0, 2, s("2")), (1, 2, s("2")), (1, 3, s("1"))],
            vec![(0, 3, "e1".into()), (2, 3, "e2".into())],
        )
        .unwrap();
        let mut source = fixtures::fig8_gs();
        source.set(0, 2, s("2"));
        source.set(1, 2, s("2"));
        // source: d12=1 d13=2 d14=2 d23=2 d24=1 d34=1
        assert!(source.validate().ok());
        let mv = PairMove {
            e1: (0, 3),
            e2: (2, 3),
            lambda: s("3"),
            new_w1: s("3/2"),
        };
        assert!(matches!(
            apply_pair_move(&source, &mv, &g, B),
            Err(Error::NotSymmetric(_, _))
        ));
    }

    #[test]
    fn coverage_and_label_validation() {
        // missing pair
        assert!(PartialGraph::new(3, vec![(0, 1, s("1"))], vec![(0, 2, "e1".into())]).is_err());
        // duplicate label
        assert!(PartialGraph::new(
            3,
            vec![(0, 1, s("1"))],
            vec![(0, 2, "e1".into()), (1, 2, "e1".into())]
        )
        .is_err());
        // overlap
        assert!(PartialGraph::new(
            3,
            vec![(0, 1, s("1")), (0, 2, s("1")), (1, 2, s("1"))],
            vec![(0, 1, "e1".into())]
        )
        .is_err());
    }

    #[test]
    fn over_bound_rejected() {
        let n = 10;
        let mut weighted = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                weighted.push((i, j, s("1")));
            }
        }
        let g = PartialGraph::new(n, weighted, vec![]).unwrap();
        assert!(matches!(
            g.automorphisms(DEFAULT_AUTOMORPHISM_BOUND),
            Err(Error::OverBound { .. })
        ));
    }

    #[test]
    fn averaging_commutes_with_scaling() {
        let g = fixtures::fig8_gp();
        let m = fixtures::fig8_gs();
        let c = s("3/2");
        let scaled_g = PartialGraph::new(
            4,
            g.weighted_edges()
                .iter()
                .map(|(&(i, j), w)| (i, j, w * &c))
                .collect(),
            g.labeled_edges()
                .iter()
                .map(|(&(i, j), l)| (i, j, l.clone()))
                .collect(),
        )
        .unwrap();
        let left = average_orbits(&m.scale(&c).unwrap(), &scaled_g, B).unwrap();
        let right = average_orbits(&m, &g, B).unwrap().scale(&c).unwrap();
        assert_eq!(left, right);
    }
}
