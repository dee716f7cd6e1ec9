//! Finite point sets, set families, and fattened (δ-neighborhood) sets.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::kernel;

/// An immutable finite list of d-dimensional points with cached diameter and
/// minimum separation. Coordinates are stored flat, row-major.
#[derive(Debug, Clone)]
pub struct PointSet {
    dim: usize,
    n: usize,
    coords: Vec<f64>,
    label: String,
    diameter: f64,
    min_separation: Option<f64>,
}

impl PointSet {
    /// Build a point set from flat row-major coordinates. Validates finiteness
    /// and computes the diameter / min-separation caches with the
    /// deterministic pairwise kernel.
    pub fn new(dim: usize, coords: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::validation("dimension must be positive"));
        }
        if coords.is_empty() || coords.len() % dim != 0 {
            return Err(Error::validation(format!(
                "coordinate count {} is not a positive multiple of dim {}",
                coords.len(),
                dim
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::validation("coordinates must be finite"));
        }
        let n = coords.len() / dim;
        let mut set = PointSet {
            dim,
            n,
            coords,
            label: label.into(),
            diameter: 0.0,
            min_separation: None,
        };
        set.diameter = kernel::pair_max(n, |i, j| set.dist2(i, j))
            .map(f64::sqrt)
            .unwrap_or(0.0);
        set.min_separation = kernel::pair_min(n, |i, j| set.dist2(i, j)).map(f64::sqrt);
        Ok(set)
    }

    /// Build from a list of points given as coordinate vectors.
    pub fn from_points(points: &[Vec<f64>], label: impl Into<String>) -> Result<Self> {
        let dim = points
            .first()
            .map(|p| p.len())
            .ok_or_else(|| Error::validation("point set must be nonempty"))?;
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::validation("inconsistent point dimensions"));
        }
        let coords = points.iter().flatten().copied().collect();
        Self::new(dim, coords, label)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn iter_points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    #[inline]
    pub fn dist2(&self, i: usize, j: usize) -> f64 {
        let a = self.point(i);
        let b = self.point(j);
        let mut acc = 0.0;
        for k in 0..self.dim {
            let d = a[k] - b[k];
            acc += d * d;
        }
        acc
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist2(i, j).sqrt()
    }

    /// Exact maximum pairwise Euclidean distance; 0 for a single point.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Exact minimum pairwise distance. Errors for a single point.
    pub fn min_separation(&self) -> Result<f64> {
        self.min_separation
            .ok_or_else(|| Error::validation("min_separation undefined for a single point"))
    }

    /// The set scaled by `t > 0`. Caches are recomputed from the scaled
    /// coordinates, so the diameter invariant holds exactly in fp terms.
    pub fn scaled(&self, t: f64) -> Result<PointSet> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::validation("scale factor must be positive and finite"));
        }
        let coords = self.coords.iter().map(|c| c * t).collect();
        PointSet::new(self.dim, coords, self.label.clone())
    }

    /// The set rescaled by `1/diam` so its diameter is 1 within rounding.
    pub fn rescale_to_unit(&self) -> Result<PointSet> {
        if self.n < 2 || self.diameter == 0.0 {
            return Err(Error::validation(
                "rescale_to_unit requires at least two distinct points",
            ));
        }
        self.scaled(1.0 / self.diameter)
    }

    /// Subset by point indices, preserving order.
    pub fn subset(&self, indices: &[usize], label: impl Into<String>) -> Result<PointSet> {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            if i >= self.n {
                return Err(Error::validation(format!("index {i} out of range")));
            }
            coords.extend_from_slice(self.point(i));
        }
        PointSet::new(self.dim, coords, label)
    }

    /// Squared distance from an arbitrary coordinate vector to the nearest
    /// point of the set.
    pub fn nearest_dist2(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        let mut best = f64::INFINITY;
        for p in self.iter_points() {
            let mut acc = 0.0;
            for k in 0..self.dim {
                let d = p[k] - x[k];
                acc += d * d;
            }
            best = best.min(acc);
        }
        best
    }
}

/// An indexed sequence of point sets sharing a generator and parameters.
#[derive(Debug, Clone)]
pub struct SetFamily {
    members: Vec<PointSet>,
    generator_id: String,
    params: BTreeMap<String, f64>,
    growth_variable: String,
}

impl SetFamily {
    /// Members must share a dimension and have strictly increasing
    /// cardinalities; at least 3 members (exponent fits need 3 samples).
    pub fn new(
        members: Vec<PointSet>,
        generator_id: impl Into<String>,
        params: BTreeMap<String, f64>,
        growth_variable: impl Into<String>,
    ) -> Result<Self> {
        if members.len() < 3 {
            return Err(Error::validation("a family needs at least 3 members"));
        }
        let dim = members[0].dim();
        if members.iter().any(|m| m.dim() != dim) {
            return Err(Error::validation("family members must share a dimension"));
        }
        if members.windows(2).any(|w| w[1].len() <= w[0].len()) {
            return Err(Error::validation(
                "family cardinalities must be strictly increasing",
            ));
        }
        Ok(SetFamily {
            members,
            generator_id: generator_id.into(),
            params,
            growth_variable: growth_variable.into(),
        })
    }

    pub fn members(&self) -> &[PointSet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.members.iter().map(|m| m.len()).collect()
    }

    pub fn dim(&self) -> usize {
        self.members[0].dim()
    }

    pub fn generator_id(&self) -> &str {
        &self.generator_id
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    pub fn growth_variable(&self) -> &str {
        &self.growth_variable
    }
}

/// A δ-neighborhood of a point set, represented implicitly.
#[derive(Debug, Clone, Copy)]
pub struct FattenedSet<'a> {
    base: &'a PointSet,
    delta: f64,
}

impl<'a> FattenedSet<'a> {
    pub fn new(base: &'a PointSet, delta: f64) -> Result<Self> {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::validation("fattening radius must be positive"));
        }
        Ok(FattenedSet { base, delta })
    }

    pub fn base(&self) -> &PointSet {
        self.base
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

// Cap on grid cells scanned by `neighborhood_measure`.
const MAX_GRID_CELLS: usize = 200_000_000;

/// Lebesgue measure of the union of δ-balls around the set, estimated by
/// counting grid cells of side `resolution` whose centers lie within δ of
/// some point, times the cell volume.
///
/// The boundary layer of miscounted cells has thickness O(resolution), so the
/// relative error is O(resolution / delta). Requires `resolution <= delta/4`.
pub fn neighborhood_measure(fat: &FattenedSet, resolution: f64) -> Result<f64> {
    let delta = fat.delta();
    if !(resolution > 0.0) || resolution > delta / 4.0 {
        return Err(Error::validation(
            "resolution must be positive and at most delta/4",
        ));
    }
    let set = fat.base();
    let d = set.dim();

    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for p in set.iter_points() {
        for k in 0..d {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    // Inflate so every ball is covered, plus one cell of slack.
    let mut counts = Vec::with_capacity(d);
    let mut total: usize = 1;
    for k in 0..d {
        lo[k] -= delta + resolution;
        hi[k] += delta + resolution;
        let c = ((hi[k] - lo[k]) / resolution).ceil() as usize + 1;
        counts.push(c);
        total = total
            .checked_mul(c)
            .filter(|&t| t <= MAX_GRID_CELLS)
            .ok_or_else(|| Error::resource_cap("neighborhood grid too large"))?;
    }

    let delta2 = delta * delta;
    let inner: usize = counts[1..].iter().product();
    let hits = kernel::map_indexed(counts[0], |i0| {
        let mut x = vec![0.0; d];
        let mut idx = vec![0usize; d.saturating_sub(1)];
        x[0] = lo[0] + (i0 as f64 + 0.5) * resolution;
        let mut count = 0usize;
        for _ in 0..inner {
            for k in 1..d {
                x[k] = lo[k] + (idx[k - 1] as f64 + 0.5) * resolution;
            }
            if set.nearest_dist2(&x) <= delta2 {
                count += 1;
            }
            // odometer over the trailing axes
            for k in (1..d).rev() {
                idx[k - 1] += 1;
                if idx[k - 1] < counts[k] {
                    break;
                }
                idx[k - 1] = 0;
            }
        }
        count
    });
    let occupied: usize = hits.iter().sum();
    Ok(occupied as f64 * resolution.powi(d as i32))
}

/// `|E_delta| / delta^(d - alpha)`, the uniform-Minkowski normalization of
/// the neighborhood measure.
pub fn uniform_minkowski_ratio(fat: &FattenedSet, alpha: f64, resolution: f64) -> Result<f64> {
    let d = fat.base().dim() as f64;
    if !(alpha > 0.0 && alpha <= d) {
        return Err(Error::validation("alpha must lie in (0, d]"));
    }
    let measure = neighborhood_measure(fat, resolution)?;
    Ok(measure / fat.delta().powf(d - alpha))
}

/// Outcome of the containment certificate for one consecutive pair of a
/// family. Floating-point containment at the boundary cannot be certified,
/// hence the third value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Nesting {
    Nested,
    NotNested,
    Indeterminate,
}

/// Checks the nesting hypothesis `C_{N+1} ⊆ C_N` for consecutive members,
/// where `C_N` is the `N^(-1/alpha)`-fattening of the member rescaled to unit
/// diameter. Sufficient certificate: every point of member N+1 lies within
/// `delta_N - delta_{N+1}` of some point of member N.
pub fn is_nested_family(family: &SetFamily, alpha: f64, tol: f64) -> Result<Vec<Nesting>> {
    if !(alpha > 0.0) {
        return Err(Error::validation("alpha must be positive"));
    }
    let rescaled: Vec<PointSet> = family
        .members()
        .iter()
        .map(|m| m.rescale_to_unit())
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(rescaled.len() - 1);
    for w in rescaled.windows(2) {
        let (coarse, fine) = (&w[0], &w[1]);
        let delta_coarse = (coarse.len() as f64).powf(-1.0 / alpha);
        let delta_fine = (fine.len() as f64).powf(-1.0 / alpha);
        let margin = delta_coarse - delta_fine;
        let worst = kernel::map_indexed(fine.len(), |i| coarse.nearest_dist2(fine.point(i)))
            .into_iter()
            .fold(0.0f64, f64::max)
            .sqrt();
        out.push(if worst <= margin - tol {
            Nesting::Nested
        } else if worst >= margin + tol {
            Nesting::NotNested
        } else {
            Nesting::Indeterminate
        });
    }
    Ok(out)
}
