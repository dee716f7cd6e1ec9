//! Distinct-distance counting and the fattened distance set.
//!
//! The distance set here excludes the zero distance a = a': every counting
//! statement concerns nonzero distances, and the off-by-one is immaterial to
//! any exponent.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel;
use crate::pointset::PointSet;

/// Materializing all C(N,2) distances is capped here; beyond it the memory
/// cost is prohibitive.
pub const MAX_BINNED_POINTS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMethod {
    ExactInteger,
    Binned,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DistanceSummary {
    pub n_points: usize,
    /// Binning tolerance; 0 for the exact integer method.
    pub tau: f64,
    pub distinct_count: usize,
    pub min_distance: f64,
    pub max_distance: f64,
    pub method: CountMethod,
}

/// Exact count of distinct nonzero distances for integer-coordinate sets:
/// squared distances are integers, so equality is decidable.
pub fn distance_count_exact(set: &PointSet) -> Result<DistanceSummary> {
    if set.len() < 2 {
        return Err(Error::validation("distance counting needs at least 2 points"));
    }
    let rounded: Vec<i64> = set
        .coords()
        .iter()
        .map(|&c| {
            let r = c.round();
            if (c - r).abs() > 1e-9 || r.abs() > 1e15 {
                Err(Error::validation(format!("coordinate {c} is not integral")))
            } else {
                Ok(r as i64)
            }
        })
        .collect::<Result<Vec<i64>>>()?;
    let d = set.dim();
    let n = set.len();
    let mut sq: Vec<i128> = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            let mut acc: i128 = 0;
            for k in 0..d {
                let diff = (rounded[i * d + k] - rounded[j * d + k]) as i128;
                acc += diff * diff;
            }
            if acc == 0 {
                return Err(Error::singular("duplicate points in distance count"));
            }
            sq.push(acc);
        }
    }
    sq.sort_unstable();
    sq.dedup();
    Ok(DistanceSummary {
        n_points: n,
        tau: 0.0,
        distinct_count: sq.len(),
        min_distance: (*sq.first().unwrap() as f64).sqrt(),
        max_distance: (*sq.last().unwrap() as f64).sqrt(),
        method: CountMethod::ExactInteger,
    })
}

/// Distinct distances at tolerance `tau`: all C(N,2) distances are sorted
/// and clusters separated by gaps > tau are counted (single-linkage, so the
/// count is invariant under global shifts of the distance list and free of
/// bin-boundary artifacts). Requires `tau < min_separation/2`.
pub fn distance_count_binned(set: &PointSet, tau: f64) -> Result<DistanceSummary> {
    if set.len() < 2 {
        return Err(Error::validation("distance counting needs at least 2 points"));
    }
    if set.len() > MAX_BINNED_POINTS {
        return Err(Error::resource_cap(format!(
            "binned counting is capped at {MAX_BINNED_POINTS} points ({} given)",
            set.len()
        )));
    }
    if !(tau > 0.0) {
        return Err(Error::validation("tau must be positive"));
    }
    if tau >= set.min_separation()? / 2.0 {
        return Err(Error::validation("tau must be below min_separation/2"));
    }
    let mut dists = sorted_distances(set);
    dists.dedup();
    let mut count = 1usize;
    for w in dists.windows(2) {
        if w[1] - w[0] > tau {
            count += 1;
        }
    }
    Ok(DistanceSummary {
        n_points: set.len(),
        tau,
        distinct_count: count,
        min_distance: dists[0],
        max_distance: *dists.last().unwrap(),
        method: CountMethod::Binned,
    })
}

fn sorted_distances(set: &PointSet) -> Vec<f64> {
    let n = set.len();
    let rows = kernel::map_indexed(n, |i| {
        ((i + 1)..n).map(|j| set.dist(i, j)).collect::<Vec<f64>>()
    });
    let mut dists: Vec<f64> = rows.into_iter().flatten().collect();
    dists.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    dists
}

/// Exact length of the 2δ-fattened distance set: the union of intervals
/// [t - 2δ, t + 2δ] over the distinct distances t, by sorted merging.
pub fn fattened_distance_length(set: &PointSet, delta: f64) -> Result<f64> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::validation("delta must be positive"));
    }
    if set.len() < 2 {
        return Ok(0.0);
    }
    if set.len() > MAX_BINNED_POINTS {
        return Err(Error::resource_cap(format!(
            "fattened length is capped at {MAX_BINNED_POINTS} points ({} given)",
            set.len()
        )));
    }
    let dists = sorted_distances(set);
    let width = 2.0 * delta;
    let mut total = 0.0;
    let mut lo = dists[0] - width;
    let mut hi = dists[0] + width;
    for &t in &dists[1..] {
        if t - width > hi {
            total += hi - lo;
            lo = t - width;
        }
        hi = t + width;
    }
    total += hi - lo;
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_lattice;
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn set(points: &[Vec<f64>]) -> PointSet {
        PointSet::from_points(points, "t").unwrap()
    }

    #[test]
    fn exact_grid_examples() {
        let grid = gen_lattice(2, 2).unwrap();
        let s = distance_count_exact(&grid).unwrap();
        assert_eq!(s.distinct_count, 5); // squared: 1,2,4,5,8
        assert_relative_eq!(s.min_distance, 1.0);
        assert_relative_eq!(s.max_distance, 8f64.sqrt());

        let line = gen_lattice(1, 3).unwrap();
        assert_eq!(distance_count_exact(&line).unwrap().distinct_count, 3);

        let two = set(&[vec![0.0], vec![7.0]]);
        assert_eq!(distance_count_exact(&two).unwrap().distinct_count, 1);
    }

    #[test]
    fn exact_rejects_non_integral() {
        let s = set(&[vec![0.0], vec![0.5]]);
        assert!(distance_count_exact(&s).is_err());
    }

    #[test]
    fn binned_agrees_with_exact_on_integer_sets() {
        let sets = [gen_lattice(2, 2).unwrap(), gen_lattice(2, 4).unwrap(), gen_lattice(3, 2).unwrap()];
        for s in &sets {
            let e = distance_count_exact(s).unwrap();
            let b = distance_count_binned(s, 1e-9).unwrap();
            assert_eq!(e.distinct_count, b.distinct_count, "{}", s.label());
        }
    }

    #[test]
    fn binned_collinear_progression() {
        let pts: Vec<Vec<f64>> = (0..100).map(|i| vec![i as f64]).collect();
        let s = distance_count_binned(&set(&pts), 1e-9).unwrap();
        assert_eq!(s.distinct_count, 99);
    }

    #[test]
    fn binned_validates_tau() {
        let s = gen_lattice(2, 2).unwrap();
        assert!(distance_count_binned(&s, 0.5).is_err());
        assert!(distance_count_binned(&s, 0.0).is_err());
    }

    #[test]
    fn counts_bounded_and_isometry_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..5 {
            let pts: Vec<Vec<f64>> = (0..30)
                .map(|_| vec![rng.gen_range(0.0..5.0), rng.gen_range(0.0..5.0)])
                .collect();
            let a = set(&pts);
            let tau = a.min_separation().unwrap() / 4.0;
            let s = distance_count_binned(&a, tau).unwrap();
            let n = a.len();
            assert!(s.distinct_count >= 1 && s.distinct_count <= n * (n - 1) / 2);
            assert_relative_eq!(s.min_distance, a.min_separation().unwrap());

            let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let (c, sn) = (theta.cos(), theta.sin());
            let moved: Vec<Vec<f64>> = pts
                .iter()
                .map(|p| vec![c * p[0] - sn * p[1] + 3.0, sn * p[0] + c * p[1] - 1.0])
                .collect();
            let s2 = distance_count_binned(&set(&moved), tau).unwrap();
            assert_eq!(s.distinct_count, s2.distinct_count);
        }
    }

    #[test]
    fn subset_monotonicity() {
        // at large tau the gap clustering can chain distances together, so
        // strict monotonicity only holds in the exact (tau -> 0) regime
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..5 {
            let pts: Vec<Vec<f64>> = (0..25)
                .map(|_| vec![rng.gen_range(0.0..4.0), rng.gen_range(0.0..4.0)])
                .collect();
            let a = set(&pts);
            let b = a.subset(&(0..12).collect::<Vec<_>>(), "sub").unwrap();
            let ca = distance_count_binned(&a, 1e-13).unwrap().distinct_count;
            let cb = distance_count_binned(&b, 1e-13).unwrap().distinct_count;
            assert!(cb <= ca);
        }
        let grid = gen_lattice(2, 4).unwrap();
        let sub = grid.subset(&(0..10).collect::<Vec<_>>(), "sub").unwrap();
        assert!(
            distance_count_exact(&sub).unwrap().distinct_count
                <= distance_count_exact(&grid).unwrap().distinct_count
        );
    }

    #[test]
    fn perturbation_stability() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..50 {
            let pts: Vec<Vec<f64>> = (0..15)
                .map(|_| vec![rng.gen_range(0.0..3.0), rng.gen_range(0.0..3.0)])
                .collect();
            let a = set(&pts);
            let tau = a.min_separation().unwrap() / 4.0;
            let base = distance_count_binned(&a, tau).unwrap().distinct_count;
            let jig = tau / (4.0 * 2f64.sqrt());
            let moved: Vec<Vec<f64>> = pts
                .iter()
                .map(|p| {
                    vec![
                        p[0] + rng.gen_range(-jig..jig),
                        p[1] + rng.gen_range(-jig..jig),
                    ]
                })
                .collect();
            let perturbed = distance_count_binned(&set(&moved), tau).unwrap().distinct_count;
            assert!(perturbed <= 2 * base, "{perturbed} vs {base}");
        }
    }

    #[test]
    fn fattened_length_examples() {
        // distances {1, 2}: [0.8,1.2] u [1.8,2.2]
        let a = set(&[vec![0.0], vec![1.0], vec![2.0]]);
        assert_relative_eq!(fattened_distance_length(&a, 0.1).unwrap(), 0.8, epsilon = 1e-12);
        // the pair distance 1 alone
        let two = set(&[vec![0.0], vec![1.0]]);
        assert_relative_eq!(fattened_distance_length(&two, 0.1).unwrap(), 0.4, epsilon = 1e-12);
        // distances {1, 1.1} merge at delta = 0.1
        let b = set(&[vec![0.0], vec![1.0], vec![-1.1]]);
        // distance list {1, 1.1, 2.1}: [0.8,1.3] u [1.9,2.3]
        assert_relative_eq!(fattened_distance_length(&b, 0.1).unwrap(), 0.5 + 0.4, epsilon = 1e-12);
    }

    #[test]
    fn fattened_length_monotone_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let pts: Vec<Vec<f64>> = (0..20)
            .map(|_| vec![rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0)])
            .collect();
        let a = set(&pts);
        let count = distance_count_binned(&a, 1e-12).unwrap().distinct_count;
        let mut last = 0.0;
        for &delta in &[1e-4, 1e-3, 1e-2, 0.1, 1.0] {
            let len = fattened_distance_length(&a, delta).unwrap();
            assert!(len >= last);
            assert!(len <= 4.0 * delta * count as f64 + 1e-12);
            last = len;
        }
    }
}
