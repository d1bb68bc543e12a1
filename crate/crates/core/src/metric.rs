//! Finite pseudometric spaces: construction, validation, and the
//! transformations the measures are built from.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::scalar::Scalar;

/// A symmetric pseudometric on `n` labelled points, stored densely.
///
/// Zero distance between distinct points is allowed; callers that need a
/// genuine metric go through [`DistanceMatrix::quotient_duplicates`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceMatrix {
    labels: Vec<String>,
    /// Row-major n*n grid; kept symmetric with a zero diagonal by construction.
    d: Vec<Scalar>,
}

/// A single pseudometric-contract violation with its witness indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub witness: Vec<usize>,
    /// How far the failed inequality is from holding.
    pub slack: Scalar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    Asymmetry,
    Negative,
    NonzeroDiagonal,
    Triangle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationResult {
    pub violations: Vec<Violation>,
}

impl ValidationResult {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl DistanceMatrix {
    /// Builds a matrix from labels and a full row-major grid of entries.
    /// Only structural shape is checked here; pseudometric properties are
    /// the validator's job.
    pub fn new(labels: Vec<String>, entries: Vec<Scalar>) -> Result<Self, Error> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        if entries.len() != n * n {
            return Err(Error::NotSquare {
                rows: entries.len() / n.max(1),
                cols: n,
            });
        }
        Ok(DistanceMatrix { labels, d: entries })
    }

    /// Builds a matrix from the strict upper triangle, row by row:
    /// `(0,1), (0,2), ..., (0,n-1), (1,2), ...`.
    pub fn from_upper_triangle(labels: Vec<String>, upper: Vec<Scalar>) -> Result<Self, Error> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        if upper.len() != n * (n - 1) / 2 {
            return Err(Error::NotSquare {
                rows: upper.len(),
                cols: n,
            });
        }
        let mut d = vec![Scalar::zero(); n * n];
        let mut it = upper.into_iter();
        for i in 0..n {
            for j in (i + 1)..n {
                let w = it.next().unwrap();
                d[i * n + j] = w.clone();
                d[j * n + i] = w;
            }
        }
        Ok(DistanceMatrix { labels, d })
    }

    /// Convenience constructor for a triangle with sides
    /// `d01 = a`, `d02 = b`, `d12 = c`.
    pub fn triangle(a: Scalar, b: Scalar, c: Scalar) -> Self {
        DistanceMatrix::from_upper_triangle(
            vec!["s1".into(), "s2".into(), "s3".into()],
            vec![a, b, c],
        )
        .unwrap()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects n = 0
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.d[i * self.len() + j]
    }

    /// Iterates the strict upper triangle as `(i, j, d_ij)` with `i < j`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        let n = self.len();
        (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| (i, j, self.get(i, j))))
    }

    /// True when every stored entry is an exact rational.
    pub fn is_exact(&self) -> bool {
        self.d.iter().all(Scalar::is_exact)
    }

    /// Replaces one symmetric entry. The caller re-validates.
    pub fn set(&mut self, i: usize, j: usize, w: Scalar) {
        let n = self.len();
        self.d[i * n + j] = w.clone();
        self.d[j * n + i] = w;
    }

    /// Checks all three pseudometric conditions exactly, exhaustively over
    /// every index triple, and reports each failure with a witness.
    pub fn validate(&self) -> ValidationResult {
        let n = self.len();
        let mut violations = Vec::new();
        for i in 0..n {
            if !self.get(i, i).is_zero() {
                violations.push(Violation {
                    kind: ViolationKind::NonzeroDiagonal,
                    witness: vec![i],
                    slack: self.get(i, i).clone(),
                });
            }
            for j in (i + 1)..n {
                let dij = self.get(i, j);
                let dji = self.get(j, i);
                if dij != dji {
                    violations.push(Violation {
                        kind: ViolationKind::Asymmetry,
                        witness: vec![i, j],
                        slack: (dij - dji).abs(),
                    });
                }
                if dij.is_negative() {
                    violations.push(Violation {
                        kind: ViolationKind::Negative,
                        witness: vec![i, j],
                        slack: dij.abs(),
                    });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if i == j || j == k || i == k {
                        continue;
                    }
                    // d(i,k) <= d(i,j) + d(j,k)
                    let lhs = self.get(i, k);
                    let rhs = self.get(i, j) + self.get(j, k);
                    if *lhs > rhs {
                        violations.push(Violation {
                            kind: ViolationKind::Triangle,
                            witness: vec![i, j, k],
                            slack: lhs - &rhs,
                        });
                    }
                }
            }
        }
        ValidationResult { violations }
    }

    /// Multiplies every entry by `c > 0`.
    pub fn scale(&self, c: &Scalar) -> Result<DistanceMatrix, Error> {
        if !c.is_positive() {
            return Err(Error::NonPositiveScale(c.to_string()));
        }
        Ok(DistanceMatrix {
            labels: self.labels.clone(),
            d: self.d.iter().map(|x| x * c).collect(),
        })
    }

    /// Principal submatrix in the order given by `subset`.
    pub fn restrict(&self, subset: &[usize]) -> Result<DistanceMatrix, Error> {
        let n = self.len();
        let mut seen = vec![false; n];
        for &i in subset {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, n });
            }
            if seen[i] {
                return Err(Error::DuplicateIndex(i));
            }
            seen[i] = true;
        }
        if subset.is_empty() {
            return Err(Error::EmptyInput);
        }
        let labels = subset.iter().map(|&i| self.labels[i].clone()).collect();
        let m = subset.len();
        let mut d = Vec::with_capacity(m * m);
        for &i in subset {
            for &j in subset {
                d.push(self.get(i, j).clone());
            }
        }
        Ok(DistanceMatrix { labels, d })
    }

    /// Collapses every zero-distance pair of distinct points into one
    /// representative (the lowest index). Returns the quotient matrix and
    /// the surjection old index -> new index.
    pub fn quotient_duplicates(&self) -> (DistanceMatrix, Vec<usize>) {
        let n = self.len();
        // Union-find over zero-distance pairs.
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (i, j, d) in self.pairs() {
            if d.is_zero() {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    parent[hi] = lo;
                }
            }
        }
        let mut reps = Vec::new();
        let mut mapping = vec![usize::MAX; n];
        for i in 0..n {
            let r = find(&mut parent, i);
            if r == i {
                mapping[i] = reps.len();
                reps.push(i);
            }
        }
        for i in 0..n {
            let r = find(&mut parent, i);
            mapping[i] = mapping[r];
        }
        let q = self.restrict(&reps).expect("representatives are valid indices");
        (q, mapping)
    }

    /// Merges points `k` and `l` into one vertex whose distance to every
    /// other point is the average of the two old distances.
    pub fn merge_pair(&self, k: usize, l: usize) -> Result<DistanceMatrix, Error> {
        let n = self.len();
        if k >= n {
            return Err(Error::IndexOutOfRange { index: k, n });
        }
        if l >= n {
            return Err(Error::IndexOutOfRange { index: l, n });
        }
        if k == l {
            return Err(Error::MergeSameIndex(k));
        }
        let (k, l) = if k < l { (k, l) } else { (l, k) };
        let rest: Vec<usize> = (0..n).filter(|&i| i != k && i != l).collect();
        let merged_label = format!("{}+{}", self.labels[k], self.labels[l]);
        let mut labels = vec![merged_label];
        labels.extend(rest.iter().map(|&i| self.labels[i].clone()));
        let m = rest.len() + 1;
        let half = Scalar::ratio(1, 2).unwrap();
        let mut d = vec![Scalar::zero(); m * m];
        for (a, &i) in rest.iter().enumerate() {
            let avg = (self.get(k, i) + self.get(l, i)) * half.clone();
            d[a + 1] = avg.clone();
            d[(a + 1) * m] = avg;
            for (b, &j) in rest.iter().enumerate() {
                d[(a + 1) * m + (b + 1)] = self.get(i, j).clone();
            }
        }
        let out = DistanceMatrix { labels, d };
        // The averaged distances provably stay a pseudometric; keep the
        // check as a debug assertion so fuzzing would catch a regression.
        debug_assert!(out.validate().ok(), "merge_pair broke the pseudometric");
        Ok(out)
    }
}

/// Coordinate vectors plus the metric used to turn them into distances.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointCloud {
    pub points: Vec<Vec<f64>>,
    pub metric_kind: MetricKind,
    pub labels: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricKind {
    Euclidean,
    Hamming,
}

impl PointCloud {
    pub fn new(
        labels: Vec<String>,
        points: Vec<Vec<f64>>,
        metric_kind: MetricKind,
    ) -> Result<Self, Error> {
        if points.is_empty() {
            return Err(Error::EmptyInput);
        }
        let dim = points[0].len();
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
        }
        Ok(PointCloud {
            points,
            metric_kind,
            labels,
        })
    }

    /// Pairwise distances under the chosen metric. Hamming yields exact
    /// integers; Euclidean yields inexact scalars.
    pub fn to_distance_matrix(&self) -> Result<DistanceMatrix, Error> {
        let n = self.points.len();
        let mut upper = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                let d = match self.metric_kind {
                    MetricKind::Hamming => {
                        let count = self.points[i]
                            .iter()
                            .zip(&self.points[j])
                            .filter(|(a, b)| a != b)
                            .count();
                        Scalar::from_int(count as i64)
                    }
                    MetricKind::Euclidean => {
                        let sq: f64 = self.points[i]
                            .iter()
                            .zip(&self.points[j])
                            .map(|(a, b)| (a - b) * (a - b))
                            .sum();
                        Scalar::from_f64_approx(sq.sqrt())?
                    }
                };
                upper.push(d);
            }
        }
        DistanceMatrix::from_upper_triangle(self.labels.clone(), upper)
    }
}
