//! Diversity measures on finite pseudometric spaces: exact rational
//! arithmetic, a family of recursively defined measures, symmetry tooling
//! for partial graphs, and property-based axiom audits.

pub mod audit;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod measures;
pub mod metric;
pub mod par;
pub mod random;
pub mod scalar;
pub mod symmetry;
pub mod tree;

pub use error::Error;
pub use measures::{DiversityScore, MeasureKind, SuitableFunctionKind};
pub use metric::{DistanceMatrix, PointCloud};
pub use scalar::Scalar;
pub use tree::WeightedTree;
