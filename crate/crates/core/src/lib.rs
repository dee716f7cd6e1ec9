//! Diagnostics for discrete dimension theory on large finite point sets:
//! Riesz energy sums, Minkowski/Hausdorff adaptability verdicts, subset
//! pruning, Fekete points and transfinite diameter, distance-set counting,
//! and deterministic generators for the standard example families.
//!
//! All O(N^2) scans run through deterministic parallel reduction kernels:
//! the `parallel` feature (on by default) uses rayon, and results are
//! bit-identical to the sequential fallback regardless of thread count.

pub mod dimension;
pub mod distances;
pub mod energy;
pub mod error;
pub mod fekete;
pub mod fit;
pub mod generators;
pub mod io;
pub mod kernel;
pub mod pointset;

pub use error::{Error, Result};
pub use pointset::{PointSet, SetFamily};
