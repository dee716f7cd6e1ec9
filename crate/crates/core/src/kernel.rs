//! Deterministic pairwise reduction kernels.
//!
//! All O(N^2) scans in this crate go through these helpers. Work is split by
//! row index, each row is accumulated left-to-right, and the per-row partial
//! results are combined by a fixed pairwise tree in row order. The summation
//! order therefore does not depend on the thread count: the `parallel` build
//! and the sequential fallback produce bit-identical results.
//!
//! The pairwise tree differs from a naive left-to-right double loop; the two
//! agree to better than 1e-12 relative error (checked against the brute-force
//! oracle in the energy tests).

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Cap the number of rayon worker threads. A no-op on sequential builds and
/// after the global pool has already been initialized.
pub fn configure_threads(threads: usize) {
    #[cfg(feature = "parallel")]
    {
        if threads > 0 {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global();
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
}

/// Map `f` over `0..n`, preserving index order in the output.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Pairwise (cascade) sum of a slice. Fixed association order.
pub fn tree_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n if n <= 8 => xs.iter().sum(),
        n => {
            let mid = n / 2;
            tree_sum(&xs[..mid]) + tree_sum(&xs[mid..])
        }
    }
}

/// Sum of `f(i, j)` over unordered pairs `i < j` of `0..n`.
pub fn pair_sum<F>(n: usize, f: F) -> f64
where
    F: Fn(usize, usize) -> f64 + Sync,
{
    let rows = map_indexed(n, |i| {
        let mut acc = 0.0;
        for j in (i + 1)..n {
            acc += f(i, j);
        }
        acc
    });
    tree_sum(&rows)
}

/// Minimum of `f(i, j)` over unordered pairs `i < j`. `None` when `n < 2`.
pub fn pair_min<F>(n: usize, f: F) -> Option<f64>
where
    F: Fn(usize, usize) -> f64 + Sync,
{
    if n < 2 {
        return None;
    }
    let rows = map_indexed(n - 1, |i| {
        let mut best = f64::INFINITY;
        for j in (i + 1)..n {
            best = best.min(f(i, j));
        }
        best
    });
    rows.into_iter().reduce(f64::min)
}

/// Maximum of `f(i, j)` over unordered pairs `i < j`. `None` when `n < 2`.
pub fn pair_max<F>(n: usize, f: F) -> Option<f64>
where
    F: Fn(usize, usize) -> f64 + Sync,
{
    if n < 2 {
        return None;
    }
    let rows = map_indexed(n - 1, |i| {
        let mut best = f64::NEG_INFINITY;
        for j in (i + 1)..n {
            best = best.max(f(i, j));
        }
        best
    });
    rows.into_iter().reduce(f64::max)
}

/// Sequential reference implementation of [`pair_sum`] with the same
/// association order. Used by the criterion benches to compare the parallel
/// kernel against single-threaded execution on any build.
pub fn pair_sum_seq<F>(n: usize, f: F) -> f64
where
    F: Fn(usize, usize) -> f64,
{
    let rows: Vec<f64> = (0..n)
        .map(|i| {
            let mut acc = 0.0;
            for j in (i + 1)..n {
                acc += f(i, j);
            }
            acc
        })
        .collect();
    tree_sum(&rows)
}

/// `r2^(-beta/2)`, i.e. `r^-beta` from a squared distance, with fast paths
/// for the exponents the diagnostics use in hot loops.
#[inline]
pub fn inv_pow_from_sq(r2: f64, beta: f64) -> f64 {
    if beta == 1.0 {
        1.0 / r2.sqrt()
    } else if beta == 2.0 {
        1.0 / r2
    } else if beta == 0.5 {
        1.0 / r2.sqrt().sqrt()
    } else if beta == 1.5 {
        let r = r2.sqrt();
        1.0 / (r * r.sqrt())
    } else if beta == 0.0 {
        1.0
    } else {
        r2.powf(-0.5 * beta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn pair_sum_matches_naive_double_loop() {
        let n = 137;
        let f = |i: usize, j: usize| 1.0 / ((i + 1) as f64 + (j * j) as f64);
        let mut naive = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                naive += f(i, j);
            }
        }
        assert_relative_eq!(pair_sum(n, f), naive, max_relative = 1e-12);
    }

    #[test]
    fn parallel_and_sequential_orders_are_identical() {
        let n = 500;
        let f = |i: usize, j: usize| ((i * 31 + j) as f64).sin();
        assert_eq!(pair_sum(n, f).to_bits(), pair_sum_seq(n, f).to_bits());
    }

    #[test]
    fn pair_extrema() {
        let f = |i: usize, j: usize| (i + j) as f64;
        assert_eq!(pair_min(4, f), Some(1.0));
        assert_eq!(pair_max(4, f), Some(5.0));
        assert_eq!(pair_min(1, f), None);
    }

    #[test]
    fn inv_pow_fast_paths_agree_with_powf() {
        for &r2 in &[0.04, 1.0, 7.3, 1e6] {
            for &beta in &[0.5, 1.0, 1.5, 2.0] {
                assert_relative_eq!(
                    inv_pow_from_sq(r2, beta),
                    r2.powf(-0.5 * beta),
                    max_relative = 1e-14
                );
            }
        }
    }
}
