//! File formats: point-set CSV, family manifests, energy tables, and
//! verdict/estimate JSON.
//!
//! Point-set files are CSV with a single comment header
//! `# dim=<d> n=<N> label=<text>` followed by one point per line;
//! coordinates carry 17 significant digits so a write/read round trip is
//! exact in double precision.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::dimension::{AdaptabilityVerdict, DimensionEstimate};
use crate::energy::EnergyCurveRow;
use crate::error::{Error, Result};
use crate::generators::GeneratorSpec;
use crate::pointset::{PointSet, SetFamily};

/// Render a point set in the CSV format.
pub fn point_set_to_csv(set: &PointSet) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# dim={} n={} label={}",
        set.dim(),
        set.len(),
        set.label()
    );
    for p in set.iter_points() {
        let row: Vec<String> = p.iter().map(|c| format!("{c:.16e}")).collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

pub fn write_point_set(path: &Path, set: &PointSet) -> Result<()> {
    fs::write(path, point_set_to_csv(set))?;
    Ok(())
}

pub fn point_set_from_csv(text: &str) -> Result<PointSet> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Format("empty point-set file".to_string()))?;
    let rest = header
        .strip_prefix("# ")
        .ok_or_else(|| Error::Format("missing `# dim=.. n=.. label=..` header".to_string()))?;
    let mut dim = None;
    let mut n = None;
    let mut label = String::new();
    for field in rest.splitn(3, ' ') {
        match field.split_once('=') {
            Some(("dim", v)) => dim = v.parse::<usize>().ok(),
            Some(("n", v)) => n = v.parse::<usize>().ok(),
            Some(("label", v)) => label = v.to_string(),
            _ => return Err(Error::Format(format!("bad header field `{field}`"))),
        }
    }
    let dim = dim.ok_or_else(|| Error::Format("header missing dim".to_string()))?;
    let n = n.ok_or_else(|| Error::Format("header missing n".to_string()))?;
    let mut coords = Vec::with_capacity(n * dim);
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Format(format!("bad coordinate on line {}", lineno + 2)))
            })
            .collect::<Result<Vec<f64>>>()?;
        if row.len() != dim {
            return Err(Error::Format(format!(
                "line {} has {} coordinates, expected {dim}",
                lineno + 2,
                row.len()
            )));
        }
        coords.extend(row);
    }
    if coords.len() != n * dim {
        return Err(Error::Format(format!(
            "expected {n} points, found {}",
            coords.len() / dim
        )));
    }
    PointSet::new(dim, coords, label)
}

pub fn read_point_set(path: &Path) -> Result<PointSet> {
    point_set_from_csv(&fs::read_to_string(path)?)
}

/// `family.json`: the generator description plus the member file names.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FamilyManifest {
    pub generator_id: String,
    pub params: BTreeMap<String, f64>,
    pub sizes: Vec<usize>,
    pub files: Vec<String>,
    #[serde(default)]
    pub growth_variable: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<GeneratorSpec>,
}

/// Write a family as one CSV per member plus the manifest, into `dir`.
pub fn write_family(dir: &Path, family: &SetFamily, spec: Option<&GeneratorSpec>) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let mut files = Vec::with_capacity(family.len());
    for (i, member) in family.members().iter().enumerate() {
        let name = format!("member_{:02}_n{}.csv", i, member.len());
        write_point_set(&dir.join(&name), member)?;
        files.push(name);
    }
    let manifest = FamilyManifest {
        generator_id: family.generator_id().to_string(),
        params: family.params().clone(),
        sizes: family.sizes(),
        files,
        growth_variable: family.growth_variable().to_string(),
        spec: spec.cloned(),
    };
    let path = dir.join("family.json");
    fs::write(&path, serde_json::to_string_pretty(&manifest)?)?;
    Ok(path)
}

/// Load a family back from its manifest path (or the directory holding it).
pub fn read_family(path: &Path) -> Result<SetFamily> {
    let manifest_path = if path.is_dir() {
        path.join("family.json")
    } else {
        path.to_path_buf()
    };
    let manifest: FamilyManifest = serde_json::from_str(&fs::read_to_string(&manifest_path)?)
        .map_err(|e| Error::Format(format!("bad family manifest: {e}")))?;
    let dir = manifest_path.parent().unwrap_or_else(|| Path::new("."));
    let members = manifest
        .files
        .iter()
        .map(|f| read_point_set(&dir.join(f)))
        .collect::<Result<Vec<_>>>()?;
    let growth = if manifest.growth_variable.is_empty() {
        "N".to_string()
    } else {
        manifest.growth_variable
    };
    SetFamily::new(members, manifest.generator_id, manifest.params, growth)
}

/// Energy tables: columns N, beta, raw_sum, normalized,
/// scale_invariant_ratio, diameter.
pub fn energy_curve_to_csv(rows: &[EnergyCurveRow]) -> String {
    let mut out = String::from("N,beta,raw_sum,normalized,scale_invariant_ratio,diameter\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.n,
            r.report.beta,
            r.report.raw_sum,
            r.report.normalized,
            r.report.scale_invariant_ratio,
            r.report.diameter
        );
    }
    out
}

pub fn write_energy_curve(path: &Path, rows: &[EnergyCurveRow]) -> Result<()> {
    fs::write(path, energy_curve_to_csv(rows))?;
    Ok(())
}

pub fn write_verdict(path: &Path, verdict: &AdaptabilityVerdict) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(verdict)?)?;
    Ok(())
}

pub fn write_estimate(path: &Path, estimate: &DimensionEstimate) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(estimate)?)?;
    Ok(())
}
