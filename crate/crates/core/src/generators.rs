//! Point-set family generators and the Cantor pruning operations.
//!
//! Every generator is deterministic given its parameters (and seed, for the
//! jittered one; the PRNG is ChaCha8 throughout). Outputs are 1-separated
//! after the rescale documented on each generator.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::pointset::{PointSet, SetFamily};

/// Hard cap on generated cardinalities.
const MAX_POINTS: usize = 4_000_000;

/// Largest vanishing-ratio Cantor generation representable without the
/// sidelength degrading in double precision.
pub const MAX_VANISHING_GENERATION: usize = 12;

fn check_cardinality(n: usize) -> Result<usize> {
    if n > MAX_POINTS {
        Err(Error::resource_cap(format!(
            "generator would produce {n} points (cap {MAX_POINTS})"
        )))
    } else {
        Ok(n)
    }
}

/// All integer points of `[0, q]^d`; `N = (q+1)^d`, already 1-separated.
pub fn gen_lattice(d: usize, q: usize) -> Result<PointSet> {
    if d == 0 || q == 0 {
        return Err(Error::validation("lattice needs d >= 1 and q >= 1"));
    }
    let side = q + 1;
    let n = (0..d).try_fold(1usize, |acc, _| {
        acc.checked_mul(side)
            .ok_or_else(|| Error::resource_cap("lattice cardinality overflows"))
    })?;
    check_cardinality(n)?;
    let mut coords = Vec::with_capacity(n * d);
    let mut idx = vec![0usize; d];
    for _ in 0..n {
        coords.extend(idx.iter().map(|&v| v as f64));
        for k in (0..d).rev() {
            idx[k] += 1;
            if idx[k] < side {
                break;
            }
            idx[k] = 0;
        }
    }
    PointSet::new(d, coords, format!("lattice_d{d}_q{q}"))
}

/// One point per unit cell of `[0, q]^d`, uniformly jittered from the cell
/// center by at most `jitter` per coordinate, then rescaled by
/// `1/(1 - 2*jitter)` so the output is 1-separated. `jitter = 0` gives the
/// lattice of cell centers.
pub fn gen_delone(d: usize, q: usize, jitter: f64, seed: u64) -> Result<PointSet> {
    if d == 0 || q == 0 {
        return Err(Error::validation("delone needs d >= 1 and q >= 1"));
    }
    if !(0.0..=0.4).contains(&jitter) {
        return Err(Error::validation("jitter must lie in [0, 0.4]"));
    }
    let n = (0..d).try_fold(1usize, |acc, _| {
        acc.checked_mul(q)
            .ok_or_else(|| Error::resource_cap("delone cardinality overflows"))
    })?;
    check_cardinality(n)?;
    let scale = 1.0 / (1.0 - 2.0 * jitter);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coords = Vec::with_capacity(n * d);
    let mut idx = vec![0usize; d];
    for _ in 0..n {
        for &cell in idx.iter() {
            let center = cell as f64 + 0.5;
            let off = if jitter > 0.0 {
                rng.gen_range(-jitter..=jitter)
            } else {
                0.0
            };
            coords.push((center + off) * scale);
        }
        for k in (0..d).rev() {
            idx[k] += 1;
            if idx[k] < q {
                break;
            }
            idx[k] = 0;
        }
    }
    PointSet::new(d, coords, format!("delone_d{d}_q{q}_j{jitter}_s{seed}"))
}

/// The reciprocal grid `B_M x B_M`, `B_M = {1/n : n = 1..M}`, rescaled by
/// `M^2` so the minimum separation is `M^2/(M-1) - M > 1`.
pub fn gen_reciprocal_grid(m: usize) -> Result<PointSet> {
    if m < 3 {
        return Err(Error::validation("reciprocal grid needs M >= 3"));
    }
    check_cardinality(m * m)?;
    let scale = (m * m) as f64;
    let mut coords = Vec::with_capacity(m * m * 2);
    for i in 1..=m {
        for j in 1..=m {
            coords.push(scale / i as f64);
            coords.push(scale / j as f64);
        }
    }
    PointSet::new(2, coords, format!("reciprocal_grid_M{m}"))
}

/// Number of tail elements kept by [`gen_reciprocal_tail`].
pub fn reciprocal_tail_len(m: usize, eps: f64) -> usize {
    (m as f64).powf(1.0 - eps / 4.0).floor() as usize
}

/// The Delone-like tail `D_{M,eps} x D_{M,eps}` with
/// `D_{M,eps} = {1/n : n = M - floor(M^(1-eps/4)) + 1, ..., M}`, rescaled by
/// the reciprocal of its minimum separation (exactly 1-separated).
pub fn gen_reciprocal_tail(m: usize, eps: f64) -> Result<PointSet> {
    if m < 3 {
        return Err(Error::validation("reciprocal tail needs M >= 3"));
    }
    if !(eps > 0.0) {
        return Err(Error::validation("eps must be positive"));
    }
    let t = reciprocal_tail_len(m, eps);
    // the gap-comparability constant degrades as the tail start M - t + 1
    // drops toward 1; it reaches M/2 only at astronomically large M, so the
    // generator only insists the tail stays inside {1..M}
    if t < 2 || t >= m {
        return Err(Error::validation(
            "eps/M incompatible: tail must be a proper subrange of 1..M",
        ));
    }
    check_cardinality(t * t)?;
    let start = m - t + 1;
    let mut coords = Vec::with_capacity(t * t * 2);
    for i in start..=m {
        for j in start..=m {
            coords.push(1.0 / i as f64);
            coords.push(1.0 / j as f64);
        }
    }
    let raw = PointSet::new(2, coords, format!("reciprocal_tail_M{m}_e{eps}"))?;
    raw.scaled(1.0 / raw.min_separation()?)
}

/// The 1-d sequence `{n^(-1/a) : n = 1..M}`. Not rescaled: this is the box
/// counting example set living in (0, 1]. (The classical dimension formula
/// `a/(1+a)` is usually stated for `a > 1`; the generator allows any `a > 0`.)
pub fn gen_reciprocal_sequence(a: f64, m: usize) -> Result<PointSet> {
    if !(a > 0.0) {
        return Err(Error::validation("exponent a must be positive"));
    }
    if m == 0 {
        return Err(Error::validation("sequence needs M >= 1"));
    }
    check_cardinality(m)?;
    let coords: Vec<f64> = (1..=m).map(|n| (n as f64).powf(-1.0 / a)).collect();
    PointSet::new(1, coords, format!("reciprocal_seq_a{a}_M{m}"))
}

/// Which sibling square survives a pruning operation. Digits encode
/// (x-bit, y-bit) as `bx + 2*by`; 0 is the lower-left square.
pub const SURVIVOR_LOWER_LEFT: u8 = 0;

/// Pruning mode: `P` acts at an explicit scale, `PPrime` acts at the deepest
/// still-active scale and moves upward on repeated application.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PruneMode {
    P,
    PPrime,
}

/// A generation-M Cantor point set (one point per surviving square) carrying
/// its square-tree metadata so the pruning operations can act exactly on
/// sibling groups.
#[derive(Debug, Clone)]
pub struct CantorSet {
    lambda: f64,
    generations: usize,
    vanishing: bool,
    /// Per point: digit path through the square tree, level 1 first.
    cells: Vec<Vec<u8>>,
    /// Unscaled square-center coordinates in [0,1]^2, parallel to `cells`.
    base: Vec<[f64; 2]>,
    /// Levels that still hold 4-way sibling groups, ascending.
    active_levels: Vec<usize>,
    label: String,
}

/// Per-level interval contraction factor: `lambda` at every level for the
/// fixed-ratio construction, `lambda / 2^(k-1)` for the vanishing one.
fn contraction(lambda: f64, vanishing: bool, level: usize) -> f64 {
    if vanishing {
        lambda / 2f64.powi(level as i32 - 1)
    } else {
        lambda
    }
}

/// Interval [start, start+len] reached by following 1-d bits down the tree.
fn descend(lambda: f64, vanishing: bool, bits: impl Iterator<Item = u8>) -> (f64, f64) {
    let mut start = 0.0;
    let mut len = 1.0;
    for (level, bit) in bits.enumerate() {
        let f = contraction(lambda, vanishing, level + 1);
        let child = f * len;
        if bit == 1 {
            start += len - child;
        }
        len = child;
    }
    (start, len)
}

impl CantorSet {
    fn generate(lambda: f64, generations: usize, vanishing: bool, label: String) -> Result<Self> {
        let n = check_cardinality(
            4usize
                .checked_pow(generations as u32)
                .ok_or_else(|| Error::resource_cap("cantor cardinality overflows"))?,
        )?;
        let mut cells = Vec::with_capacity(n);
        let mut base = Vec::with_capacity(n);
        for index in 0..n {
            let mut digits = Vec::with_capacity(generations);
            let mut rest = index;
            for level in (0..generations).rev() {
                digits.push(((rest >> (2 * level)) & 3) as u8);
                rest &= (1 << (2 * level)) - 1;
            }
            let (sx, lx) = descend(lambda, vanishing, digits.iter().map(|d| d & 1));
            let (sy, ly) = descend(lambda, vanishing, digits.iter().map(|d| (d >> 1) & 1));
            base.push([sx + lx / 2.0, sy + ly / 2.0]);
            cells.push(digits);
        }
        Ok(CantorSet {
            lambda,
            generations,
            vanishing,
            cells,
            base,
            active_levels: (1..=generations).collect(),
            label,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn generations(&self) -> usize {
        self.generations
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn active_levels(&self) -> &[usize] {
        &self.active_levels
    }

    /// Interval sidelength of a generation-k square.
    pub fn sidelength(&self, level: usize) -> f64 {
        (1..=level)
            .map(|k| contraction(self.lambda, self.vanishing, k))
            .product()
    }

    /// Unscaled points in [0,1]^2.
    pub fn base_point_set(&self) -> Result<PointSet> {
        let coords = self.base.iter().flatten().copied().collect();
        PointSet::new(2, coords, self.label.clone())
    }

    /// Points rescaled by the reciprocal of the minimum separation, i.e.
    /// exactly 1-separated.
    pub fn point_set(&self) -> Result<PointSet> {
        let raw = self.base_point_set()?;
        if raw.len() == 1 {
            return Ok(raw);
        }
        raw.scaled(1.0 / raw.min_separation()?)
    }

    /// Center of the ancestor square at `level` for each point.
    pub fn ancestor_centers(&self, level: usize) -> Vec<[f64; 2]> {
        self.cells
            .iter()
            .map(|digits| {
                let (sx, lx) =
                    descend(self.lambda, self.vanishing, digits[..level].iter().map(|d| d & 1));
                let (sy, ly) = descend(
                    self.lambda,
                    self.vanishing,
                    digits[..level].iter().map(|d| (d >> 1) & 1),
                );
                [sx + lx / 2.0, sy + ly / 2.0]
            })
            .collect()
    }

    fn prune_level(&self, level: usize, survivor: u8) -> Result<CantorSet> {
        if survivor > 3 {
            return Err(Error::validation("survivor digit must be in 0..=3"));
        }
        let pos = self
            .active_levels
            .iter()
            .position(|&l| l == level)
            .ok_or_else(|| {
                Error::validation(format!("scale {level} is out of range or already pruned"))
            })?;
        let mut cells = Vec::with_capacity(self.len() / 4);
        let mut base = Vec::with_capacity(self.len() / 4);
        for (digits, point) in self.cells.iter().zip(&self.base) {
            if digits[level - 1] == survivor {
                cells.push(digits.clone());
                base.push(*point);
            }
        }
        let mut active = self.active_levels.clone();
        active.remove(pos);
        Ok(CantorSet {
            lambda: self.lambda,
            generations: self.generations,
            vanishing: self.vanishing,
            cells,
            base,
            active_levels: active,
            label: format!("{}_p{level}", self.label),
        })
    }
}

/// Fixed-ratio Cantor set `C_1(lambda) x C_1(lambda)` truncated at generation
/// M: centers of the `4^M` squares, rescaled so the minimum separation
/// `(1-lambda) * lambda^(M-1)` becomes 1.
pub fn gen_cantor_fixed(lambda: f64, m: usize) -> Result<CantorSet> {
    if !(lambda > 0.0 && lambda < 0.5) {
        return Err(Error::validation("fixed-ratio Cantor needs 0 < lambda < 1/2"));
    }
    if m == 0 {
        return Err(Error::validation("cantor generation must be >= 1"));
    }
    CantorSet::generate(lambda, m, false, format!("cantor_fixed_l{lambda}_M{m}"))
}

/// Vanishing-ratio Cantor construction: the generation-k contraction is
/// `lambda / 2^(k-1)`, so generation-M squares have sidelength
/// `lambda^M / 2^(M(M-1)/2)`. Limited to M <= 12 in double precision.
pub fn gen_cantor_vanishing(lambda: f64, m: usize) -> Result<CantorSet> {
    if !(lambda > 0.0 && lambda < 0.25) {
        return Err(Error::validation(
            "vanishing-ratio Cantor needs 0 < lambda < 1/4",
        ));
    }
    if m == 0 {
        return Err(Error::validation("cantor generation must be >= 1"));
    }
    if m > MAX_VANISHING_GENERATION {
        return Err(Error::validation(format!(
            "vanishing-ratio Cantor limited to M <= {MAX_VANISHING_GENERATION}: \
             sidelengths degrade in double precision"
        )));
    }
    CantorSet::generate(lambda, m, true, format!("cantor_vanishing_l{lambda}_M{m}"))
}

/// Pruning operation on a Cantor-generated set. `P` removes 3 of the 4
/// sibling squares (and descendants) at scale `k`; `P'` does the same at the
/// deepest still-active scale (the `scale` argument is ignored for `P'`).
/// Cardinality divides by 4 per application.
pub fn cantor_prune(
    set: &CantorSet,
    scale: usize,
    mode: PruneMode,
    survivor: u8,
) -> Result<CantorSet> {
    let level = match mode {
        PruneMode::P => scale,
        PruneMode::PPrime => *set
            .active_levels
            .last()
            .ok_or_else(|| Error::validation("no active scales left to prune"))?,
    };
    set.prune_level(level, survivor)
}

/// Serializable generator description; `schedule` holds the growth-variable
/// values (q or M per member).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GeneratorSpec {
    pub generator_id: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    pub schedule: Vec<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
}

impl GeneratorSpec {
    fn param(&self, key: &str) -> Result<f64> {
        self.params
            .get(key)
            .copied()
            .ok_or_else(|| Error::validation(format!("generator param `{key}` missing")))
    }

    fn param_or(&self, key: &str, default: f64) -> f64 {
        self.params.get(key).copied().unwrap_or(default)
    }

    /// Generate one member at the given growth-variable value.
    pub fn build_member(&self, growth: usize) -> Result<PointSet> {
        match self.generator_id.as_str() {
            "lattice" => gen_lattice(self.param_or("d", 2.0) as usize, growth),
            "delone" => gen_delone(
                self.param_or("d", 2.0) as usize,
                growth,
                self.param_or("jitter", 0.0),
                self.seed.unwrap_or(0),
            ),
            "reciprocal_grid" => gen_reciprocal_grid(growth),
            "reciprocal_tail" => gen_reciprocal_tail(growth, self.param("eps")?),
            "reciprocal_sequence" => gen_reciprocal_sequence(self.param("a")?, growth),
            "cantor_fixed" => gen_cantor_fixed(self.param("lambda")?, growth)?.point_set(),
            "cantor_vanishing" => gen_cantor_vanishing(self.param("lambda")?, growth)?.point_set(),
            other => Err(Error::validation(format!("unknown generator `{other}`"))),
        }
    }

    pub fn growth_variable(&self) -> &'static str {
        match self.generator_id.as_str() {
            "reciprocal_grid" | "reciprocal_tail" | "reciprocal_sequence" | "cantor_fixed"
            | "cantor_vanishing" => "M",
            _ => "q",
        }
    }

    /// Generate the whole family.
    pub fn build(&self) -> Result<SetFamily> {
        let members = self
            .schedule
            .iter()
            .map(|&g| self.build_member(g))
            .collect::<Result<Vec<_>>>()?;
        let mut params = self.params.clone();
        if let Some(seed) = self.seed {
            params.insert("seed".to_string(), seed as f64);
        }
        SetFamily::new(members, self.generator_id.clone(), params, self.growth_variable())
    }
}

/// Convenience builders for the families the diagnostics are run on.
pub fn lattice_family(d: usize, qs: &[usize]) -> Result<SetFamily> {
    GeneratorSpec {
        generator_id: "lattice".into(),
        params: BTreeMap::from([("d".to_string(), d as f64)]),
        schedule: qs.to_vec(),
        seed: None,
    }
    .build()
}

pub fn delone_family(d: usize, qs: &[usize], jitter: f64, seed: u64) -> Result<SetFamily> {
    GeneratorSpec {
        generator_id: "delone".into(),
        params: BTreeMap::from([
            ("d".to_string(), d as f64),
            ("jitter".to_string(), jitter),
        ]),
        schedule: qs.to_vec(),
        seed: Some(seed),
    }
    .build()
}

pub fn reciprocal_grid_family(ms: &[usize]) -> Result<SetFamily> {
    GeneratorSpec {
        generator_id: "reciprocal_grid".into(),
        params: BTreeMap::new(),
        schedule: ms.to_vec(),
        seed: None,
    }
    .build()
}

pub fn reciprocal_tail_family(ms: &[usize], eps: f64) -> Result<SetFamily> {
    GeneratorSpec {
        generator_id: "reciprocal_tail".into(),
        params: BTreeMap::from([("eps".to_string(), eps)]),
        schedule: ms.to_vec(),
        seed: None,
    }
    .build()
}

pub fn cantor_fixed_family(lambda: f64, ms: &[usize]) -> Result<SetFamily> {
    GeneratorSpec {
        generator_id: "cantor_fixed".into(),
        params: BTreeMap::from([("lambda".to_string(), lambda)]),
        schedule: ms.to_vec(),
        seed: None,
    }
    .build()
}

pub fn cantor_vanishing_family(lambda: f64, ms: &[usize]) -> Result<SetFamily> {
    GeneratorSpec {
        generator_id: "cantor_vanishing".into(),
        params: BTreeMap::from([("lambda".to_string(), lambda)]),
        schedule: ms.to_vec(),
        seed: None,
    }
    .build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn lattice_examples() {
        let g = gen_lattice(2, 2).unwrap();
        assert_eq!(g.len(), 9);
        assert_relative_eq!(g.diameter(), 8.0f64.sqrt(), epsilon = 1e-12);
        let line = gen_lattice(1, 1).unwrap();
        assert_eq!(line.coords(), &[0.0, 1.0]);
        assert_eq!(gen_lattice(3, 5).unwrap().len(), 216);
    }

    #[test]
    fn delone_zero_jitter_is_cell_centers() {
        let g = gen_delone(2, 3, 0.0, 42).unwrap();
        assert_eq!(g.len(), 9);
        assert_eq!(g.point(0), &[0.5, 0.5]);
        assert_relative_eq!(g.min_separation().unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn delone_every_cell_holds_one_point() {
        for seed in [1u64, 2, 3] {
            let q = 6;
            let jitter = 0.3;
            let g = gen_delone(2, q, jitter, seed).unwrap();
            let scale = 1.0 - 2.0 * jitter;
            let mut seen = vec![false; q * q];
            for p in g.iter_points() {
                // undo the separation rescale to recover the cell
                let cx = (p[0] * scale).floor() as usize;
                let cy = (p[1] * scale).floor() as usize;
                let cell = cx * q + cy;
                assert!(!seen[cell], "cell {cell} occupied twice");
                seen[cell] = true;
            }
            assert!(seen.iter().all(|&s| s));
            assert!(g.min_separation().unwrap() >= 1.0 - 1e-9);
        }
    }

    #[test]
    fn delone_deterministic_per_seed() {
        let a = gen_delone(2, 5, 0.25, 7).unwrap();
        let b = gen_delone(2, 5, 0.25, 7).unwrap();
        assert_eq!(a.coords(), b.coords());
        let c = gen_delone(2, 5, 0.25, 8).unwrap();
        assert_ne!(a.coords(), c.coords());
    }

    #[test]
    fn delone_rejects_bad_jitter() {
        assert!(gen_delone(2, 5, 0.5, 0).is_err());
        assert!(gen_delone(2, 5, -0.1, 0).is_err());
    }

    #[test]
    fn reciprocal_grid_examples() {
        let g = gen_reciprocal_grid(3).unwrap();
        assert_eq!(g.len(), 9);
        // rescaled coordinates are M^2/n
        assert_eq!(g.point(0), &[9.0, 9.0]);
        let m = 10;
        let g = gen_reciprocal_grid(m).unwrap();
        let expected = (m * m) as f64 / (m - 1) as f64 - m as f64;
        assert_relative_eq!(g.min_separation().unwrap(), expected, epsilon = 1e-9);
    }

    #[test]
    fn reciprocal_tail_subset_and_separation() {
        let m = 60;
        let eps = 0.2;
        let t = reciprocal_tail_len(m, eps);
        let tail = gen_reciprocal_tail(m, eps).unwrap();
        assert_eq!(tail.len(), t * t);
        assert_relative_eq!(tail.min_separation().unwrap(), 1.0, epsilon = 1e-9);
        // before rescale the tail coordinates are a subset of the grid's 1/n values
        let start = m - t + 1;
        assert!(start >= 1 && start < m);
        // consecutive gaps all comparable to 1/M^2, with constant (M/start)^2
        let gaps: Vec<f64> = (start..m)
            .map(|n| 1.0 / n as f64 - 1.0 / (n + 1) as f64)
            .collect();
        let scale = (m * m) as f64;
        let cap = (m as f64 / start as f64).powi(2) * 1.1;
        for g in &gaps {
            let normalized = g * scale;
            assert!(normalized > 0.9 && normalized < cap, "gap ratio {normalized}");
        }
    }

    #[test]
    fn reciprocal_sequence_examples() {
        let s = gen_reciprocal_sequence(1.0, 4).unwrap();
        assert_eq!(s.coords(), &[1.0, 0.5, 1.0 / 3.0, 0.25]);
        // documented rescale: 1/min_sep makes it 1-separated
        let r = s.scaled(1.0 / s.min_separation().unwrap()).unwrap();
        assert!(r.min_separation().unwrap() >= 1.0 - 1e-9);
    }

    #[test]
    fn cantor_fixed_generation_one() {
        let c = gen_cantor_fixed(0.2, 1).unwrap();
        let base = c.base_point_set().unwrap();
        let mut pts: Vec<(f64, f64)> = base.iter_points().map(|p| (p[0], p[1])).collect();
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let expected = [(0.1, 0.1), (0.1, 0.9), (0.9, 0.1), (0.9, 0.9)];
        for (got, want) in pts.iter().zip(expected) {
            assert_relative_eq!(got.0, want.0, epsilon = 1e-12);
            assert_relative_eq!(got.1, want.1, epsilon = 1e-12);
        }
    }

    #[test]
    fn cantor_fixed_cardinality_and_separation() {
        let m = 5;
        let lambda = 0.2;
        let c = gen_cantor_fixed(lambda, m).unwrap();
        assert_eq!(c.len(), 1024);
        let base = c.base_point_set().unwrap();
        let expected = (1.0 - lambda) * lambda.powi(m as i32 - 1);
        assert_relative_eq!(base.min_separation().unwrap(), expected, max_relative = 1e-9);
        assert!(c.point_set().unwrap().min_separation().unwrap() >= 1.0 - 1e-9);
    }

    #[test]
    fn cantor_vanishing_factors_and_sidelength() {
        let lambda = 0.2;
        let c = gen_cantor_vanishing(lambda, 2).unwrap();
        assert_relative_eq!(contraction(lambda, true, 1), lambda);
        assert_relative_eq!(contraction(lambda, true, 2), lambda / 2.0);
        assert_relative_eq!(c.sidelength(2), 0.02, epsilon = 1e-15);
        assert!(gen_cantor_vanishing(0.2, 13).is_err());
    }

    #[test]
    fn cantor_vanishing_rescale_factor() {
        // diam(A_N) ~ 2^((M-1)(M-2)/2) / lambda^(M-1)
        let lambda = 0.2;
        let m = 6;
        let c = gen_cantor_vanishing(lambda, m).unwrap();
        let rescaled = c.point_set().unwrap();
        let predicted = 2f64.powi(((m - 1) * (m - 2) / 2) as i32) / lambda.powi(m as i32 - 1);
        let ratio = rescaled.diameter() / predicted;
        assert!(ratio > 0.5 && ratio < 3.0, "ratio {ratio}");
    }

    #[test]
    fn prune_divides_cardinality_by_four() {
        let c = gen_cantor_fixed(0.2, 3).unwrap();
        assert_eq!(c.len(), 64);
        let p = cantor_prune(&c, 1, PruneMode::P, SURVIVOR_LOWER_LEFT).unwrap();
        assert_eq!(p.len(), 16);
        // pruning the same scale twice is an error
        assert!(cantor_prune(&p, 1, PruneMode::P, SURVIVOR_LOWER_LEFT).is_err());
        assert!(cantor_prune(&c, 7, PruneMode::P, SURVIVOR_LOWER_LEFT).is_err());
    }

    #[test]
    fn prune_every_scale_leaves_single_point() {
        let mut c = gen_cantor_fixed(0.3, 3).unwrap();
        for k in 1..=3 {
            c = cantor_prune(&c, k, PruneMode::P, SURVIVOR_LOWER_LEFT).unwrap();
        }
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn pprime_applications_reproduce_coarser_generation() {
        let lambda = 0.2;
        let m = 4;
        let l = 2;
        let mut c = gen_cantor_fixed(lambda, m).unwrap();
        for _ in 0..l {
            c = cantor_prune(&c, 0, PruneMode::PPrime, SURVIVOR_LOWER_LEFT).unwrap();
        }
        assert_eq!(c.len(), 4usize.pow((m - l) as u32));
        // snapping every surviving point to its generation M-L ancestor
        // square recovers exactly the generation M-L construction
        let mut anc = c.ancestor_centers(m - l);
        let coarse = gen_cantor_fixed(lambda, m - l).unwrap();
        let mut want: Vec<[f64; 2]> = coarse.base.clone();
        let key = |p: &[f64; 2]| (p[0], p[1]);
        anc.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        want.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        for (a, w) in anc.iter().zip(&want) {
            assert_relative_eq!(a[0], w[0], epsilon = 1e-12);
            assert_relative_eq!(a[1], w[1], epsilon = 1e-12);
        }
    }

    #[test]
    fn families_are_one_separated_and_deterministic() {
        let fams = [
            lattice_family(2, &[3, 5, 7]).unwrap(),
            delone_family(2, &[3, 5, 7], 0.3, 11).unwrap(),
            reciprocal_grid_family(&[5, 8, 12]).unwrap(),
            cantor_fixed_family(0.2, &[2, 3, 4]).unwrap(),
            cantor_vanishing_family(0.2, &[2, 3, 4]).unwrap(),
        ];
        for fam in &fams {
            for m in fam.members() {
                assert!(
                    m.min_separation().unwrap() >= 1.0 - 1e-9,
                    "{} not 1-separated",
                    m.label()
                );
            }
        }
        let a = delone_family(2, &[3, 5, 7], 0.3, 11).unwrap();
        for (x, y) in a.members().iter().zip(fams[1].members()) {
            assert_eq!(x.coords(), y.coords());
        }
    }
}
