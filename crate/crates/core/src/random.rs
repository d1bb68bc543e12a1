//! Random pseudometric generation for the axiom audits.
//!
//! Two ensembles with deliberately different geometry: Euclidean samples
//! never have tight triangle inequalities, shortest-path repair produces
//! plenty of them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::metric::{DistanceMatrix, MetricKind, PointCloud};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ensemble {
    /// Points drawn uniformly in the unit cube; inexact float distances.
    EuclideanSample,
    /// Random positive rational entries closed under all-pairs shortest
    /// paths; exact, and frequently tight.
    ShortestPathRepair,
}

impl std::str::FromStr for Ensemble {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "euclidean-sample" => Ok(Ensemble::EuclideanSample),
            "shortest-path-repair" => Ok(Ensemble::ShortestPathRepair),
            other => Err(Error::format("ensemble", format!("unknown kind {other:?}"))),
        }
    }
}

/// Deterministic valid pseudometric on `n` points for a fixed seed.
pub fn random_metric(n: usize, ensemble: Ensemble, seed: u64) -> Result<DistanceMatrix, Error> {
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_metric_with(n, ensemble, &mut rng)
}

/// As [`random_metric`] but drawing from a caller-owned stream, so audits
/// can generate many matrices from one seed.
pub fn random_metric_with(
    n: usize,
    ensemble: Ensemble,
    rng: &mut ChaCha8Rng,
) -> Result<DistanceMatrix, Error> {
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let labels: Vec<String> = (1..=n).map(|i| format!("s{i}")).collect();
    match ensemble {
        Ensemble::EuclideanSample => loop {
            let points: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..3).map(|_| rng.gen_range(0.0..1.0)).collect())
                .collect();
            let cloud = PointCloud::new(labels.clone(), points, MetricKind::Euclidean)?;
            let m = cloud.to_distance_matrix()?;
            // f64 rounding can in principle break the exact check; resample.
            if m.validate().ok() {
                return Ok(m);
            }
        },
        Ensemble::ShortestPathRepair => {
            let mut m = DistanceMatrix::from_upper_triangle(
                labels,
                (0..n * (n - 1) / 2)
                    .map(|_| Scalar::ratio(rng.gen_range(1..=32), 16).unwrap())
                    .collect(),
            )?;
            floyd_warshall(&mut m);
            debug_assert!(m.validate().ok());
            Ok(m)
        }
    }
}

/// Closes the matrix under all-pairs shortest paths, in place.
pub fn floyd_warshall(m: &mut DistanceMatrix) {
    let n = m.len();
    for k in 0..n {
        for i in 0..n {
            for j in (i + 1)..n {
                let via = m.get(i, k) + m.get(k, j);
                if via < *m.get(i, j) {
                    m.set(i, j, via);
                }
            }
        }
    }
}
