//! Edge-weighted trees and phylogenetic diversity.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::scalar::Scalar;

/// A connected acyclic graph with nonnegative edge weights.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedTree {
    vertices: Vec<String>,
    /// (u, v, weight) with u, v indices into `vertices`.
    edges: Vec<(usize, usize, Scalar)>,
}

impl WeightedTree {
    /// Builds a tree from named edges. Vertices are collected from the edge
    /// list. Rejects cycles, disconnection, and negative weights.
    pub fn from_edges(edges: &[(String, String, Scalar)]) -> Result<Self, Error> {
        if edges.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut vertices: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut intern = |name: &str, vertices: &mut Vec<String>| -> usize {
            *index.entry(name.to_string()).or_insert_with(|| {
                vertices.push(name.to_string());
                vertices.len() - 1
            })
        };
        let mut indexed = Vec::with_capacity(edges.len());
        for (u, v, w) in edges {
            if w.is_negative() {
                return Err(Error::NegativeWeight {
                    u: u.clone(),
                    v: v.clone(),
                });
            }
            let ui = intern(u, &mut vertices);
            let vi = intern(v, &mut vertices);
            indexed.push((ui, vi, w.clone()));
        }
        let n = vertices.len();
        if indexed.len() != n - 1 {
            // a connected graph on n vertices with != n-1 edges is not a tree
            return if indexed.len() >= n {
                Err(Error::TreeCyclic)
            } else {
                Err(Error::TreeDisconnected)
            };
        }
        let tree = WeightedTree {
            vertices,
            edges: indexed,
        };
        if !tree.is_connected() {
            return Err(Error::TreeDisconnected);
        }
        Ok(tree)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize, Scalar)] {
        &self.edges
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        // (neighbour, edge index)
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for (e, &(u, v, _)) in self.edges.iter().enumerate() {
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
        adj
    }

    fn is_connected(&self) -> bool {
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &(v, _) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Total weight of the minimal connected subtree spanning `subset`.
    ///
    /// An edge belongs to the spanning subtree exactly when both of the
    /// components left by deleting it contain a subset vertex.
    pub fn phylo_diversity(&self, subset: &[&str]) -> Result<Scalar, Error> {
        if subset.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut marks = vec![false; self.vertices.len()];
        for name in subset {
            let i = self
                .vertex_index(name)
                .ok_or_else(|| Error::UnknownVertex(name.to_string()))?;
            marks[i] = true;
        }
        let adj = self.adjacency();
        let root = marks.iter().position(|&m| m).unwrap();
        // Iterative post-order: count subset vertices under each edge.
        let mut total = Scalar::zero();
        let mut parent_edge = vec![usize::MAX; self.vertices.len()];
        let mut order = Vec::new();
        let mut stack = vec![(root, usize::MAX)];
        let mut visited = vec![false; self.vertices.len()];
        while let Some((u, pe)) = stack.pop() {
            visited[u] = true;
            parent_edge[u] = pe;
            order.push(u);
            for &(v, e) in &adj[u] {
                if !visited[v] {
                    stack.push((v, e));
                }
            }
        }
        let subset_total = marks.iter().filter(|&&m| m).count();
        let mut below = vec![0usize; self.vertices.len()];
        for &u in order.iter().rev() {
            if marks[u] {
                below[u] += 1;
            }
            let pe = parent_edge[u];
            if pe != usize::MAX {
                let (a, b, ref w) = self.edges[pe];
                let p = if a == u { b } else { a };
                // count flows to the parent side
                below[p] += below[u];
                if below[u] > 0 && below[u] < subset_total {
                    total = total + w.clone();
                }
            }
        }
        Ok(total)
    }
}
