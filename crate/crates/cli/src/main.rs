//! Reproducible experiment runner over the `pointdim` library.
//!
//! Subcommands expose the individual diagnostics (generate, energy, adapt,
//! dimension, distances, fekete, boxcount); `run` executes a JSON-described
//! experiment: it generates the requested families, runs an ordered pipeline
//! of diagnostic steps, and emits fit tables (CSV), verdicts (JSON), a
//! markdown summary, and a SHA-256 manifest of every output file. Re-running
//! an identical config reproduces every output byte-for-byte.
//!
//! Exit codes: 0 success, 2 validation failure, 3 numerical failure
//! (singular input), 4 resource cap exceeded.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use pointdim::dimension::{
    box_counting, check_hausdorff_adaptable_slack, check_minkowski_adaptable,
    default_strategies, estimate_hausdorff_dimension, estimate_minkowski_dimension, DEFAULT_TOL,
};
use pointdim::distances::{distance_count_binned, distance_count_exact, DistanceSummary};
use pointdim::energy::energy_curve;
use pointdim::fekete::{fekete_optimize, transfinite_diameter_curve, Domain};
use pointdim::fit;
use pointdim::generators::GeneratorSpec;
use pointdim::io;
use pointdim::kernel;
use pointdim::{Error, Result, SetFamily};

/// Environment variable overriding the default worker thread count.
const THREADS_ENV: &str = "POINTDIM_THREADS";

#[derive(Parser)]
#[command(name = "pointdim", version, about = "Discrete dimension diagnostics")]
struct Cli {
    /// Cap on worker threads (0 = use POINTDIM_THREADS, else all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a point-set family and write it as CSV members plus a manifest.
    Generate {
        /// Generator id: lattice | delone | reciprocal_grid | reciprocal_tail
        /// | reciprocal_sequence | cantor_fixed | cantor_vanishing.
        #[arg(long)]
        generator: String,
        /// Numeric parameters as key=value (e.g. d=2, jitter=0.3, lambda=0.125).
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        /// Growth-variable values, one per member (q or M).
        #[arg(long, value_delimiter = ',', required = true)]
        schedule: Vec<usize>,
        /// RNG seed for randomized generators.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Riesz energy table for a family at one or more exponents.
    Energy {
        /// Family directory or family.json path.
        #[arg(long)]
        family: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        betas: Vec<f64>,
        /// Output CSV path (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Adaptability verdict for a family at a single alpha.
    Adapt {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        alpha: f64,
        /// Energy exponents in (0, alpha); empty = diameter-only verdict.
        #[arg(long, value_delimiter = ',')]
        betas: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Extra N^slack allowance on the energy growth.
        #[arg(long, default_value_t = 0.0)]
        slack: f64,
        /// Output JSON path (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certified lower bound on the dimension over the default alpha grid.
    Dimension {
        #[arg(long)]
        family: PathBuf,
        /// minkowski | hausdorff
        #[arg(long, default_value = "minkowski")]
        kind: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distinct-distance count for a single point set.
    Distances {
        /// Point-set CSV path.
        #[arg(long)]
        input: PathBuf,
        /// Clustering tolerance; omitted = exact integer-coordinate count.
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fekete configurations and the transfinite-diameter curve.
    Fekete {
        /// segment | circle | square_boundary | solid_square | cantor:<lambda>:<gen>
        #[arg(long)]
        domain: String,
        #[arg(long)]
        alpha: f64,
        /// Optimize a single N-point configuration.
        #[arg(long)]
        n: Option<usize>,
        /// Compute D_N for N = 2..n_max (ignored when --n is given).
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long, default_value_t = 2000)]
        budget: usize,
        #[arg(long, default_value_t = 4)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Covering-number table for a single point set.
    Boxcount {
        #[arg(long)]
        input: PathBuf,
        /// Strictly decreasing covering radii.
        #[arg(long, value_delimiter = ',', required = true)]
        deltas: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a JSON-described experiment pipeline.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides the config's output_dir).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = if cli.threads > 0 {
        cli.threads
    } else {
        std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(0)
    };
    kernel::configure_threads(threads);
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Singular(_) => 3,
        Error::ResourceCap(_) => 4,
        Error::Validation(_) | Error::Io(_) | Error::Format(_) => 2,
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Generate {
            generator,
            params,
            schedule,
            seed,
            out,
        } => {
            let spec = GeneratorSpec {
                generator_id: generator,
                params: parse_params(&params)?,
                schedule,
                seed,
            };
            let family = spec.build()?;
            let manifest = io::write_family(&out, &family, Some(&spec))?;
            println!("wrote {} members to {}", family.len(), manifest.display());
            Ok(())
        }
        Command::Energy { family, betas, out } => {
            let family = io::read_family(&family)?;
            let rows = energy_curve(&family, &betas)?;
            emit_text(out.as_deref(), &io::energy_curve_to_csv(&rows))
        }
        Command::Adapt {
            family,
            alpha,
            betas,
            tol,
            slack,
            out,
        } => {
            let family = io::read_family(&family)?;
            let verdict = if betas.is_empty() {
                check_minkowski_adaptable(&family, alpha, tol)?
            } else {
                check_hausdorff_adaptable_slack(&family, alpha, &betas, tol, slack)?
            };
            emit_json(out.as_deref(), &verdict)
        }
        Command::Dimension { family, kind, out } => {
            let family = io::read_family(&family)?;
            let strategies = default_strategies();
            let estimate = match kind.as_str() {
                "minkowski" => estimate_minkowski_dimension(&family, &strategies),
                "hausdorff" => estimate_hausdorff_dimension(&family, &strategies),
                other => {
                    return Err(Error::validation(format!(
                        "unknown dimension kind `{other}` (minkowski | hausdorff)"
                    )))
                }
            };
            emit_json(out.as_deref(), &estimate)
        }
        Command::Distances { input, tau, out } => {
            let set = io::read_point_set(&input)?;
            let summary = match tau {
                Some(tau) => distance_count_binned(&set, tau)?,
                None => distance_count_exact(&set)?,
            };
            emit_json(out.as_deref(), &summary)
        }
        Command::Fekete {
            domain,
            alpha,
            n,
            n_max,
            budget,
            restarts,
            seed,
            out,
        } => {
            let domain: Domain = domain.parse()?;
            if let Some(n) = n {
                let result = fekete_optimize(&domain, n, alpha, budget, restarts, seed)?;
                #[derive(Serialize)]
                struct FeketeSummary {
                    n: usize,
                    alpha: f64,
                    f_alpha: f64,
                    d_n_alpha: f64,
                    iterations: usize,
                    converged: bool,
                    restarts_used: usize,
                    configuration_csv: String,
                }
                let summary = FeketeSummary {
                    n,
                    alpha,
                    f_alpha: result.f_alpha,
                    d_n_alpha: result.d_n_alpha,
                    iterations: result.iterations,
                    converged: result.converged,
                    restarts_used: result.restarts_used,
                    configuration_csv: io::point_set_to_csv(&result.configuration),
                };
                emit_json(out.as_deref(), &summary)
            } else {
                let n_max = n_max
                    .ok_or_else(|| Error::validation("pass --n or --n-max"))?;
                let curve =
                    transfinite_diameter_curve(&domain, alpha, n_max, budget, restarts, seed)?;
                emit_json(out.as_deref(), &curve)
            }
        }
        Command::Boxcount { input, deltas, out } => {
            let set = io::read_point_set(&input)?;
            let report = box_counting(&set, &deltas)?;
            emit_json(out.as_deref(), &report)
        }
        Command::Run { config, out } => run_experiment(&config, out.as_deref()),
    }
}

fn parse_params(pairs: &[String]) -> Result<BTreeMap<String, f64>> {
    let mut params = BTreeMap::new();
    for pair in pairs {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| Error::validation(format!("bad --param `{pair}`: expected KEY=VALUE")))?;
        let value: f64 = value
            .parse()
            .map_err(|_| Error::validation(format!("bad --param value in `{pair}`")))?;
        params.insert(key.to_string(), value);
    }
    Ok(params)
}

fn emit_text(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            if let Some(parent) = path.parent() {
                fs::create_dir_all(parent)?;
            }
            fs::write(path, text)?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit_text(out, &text)
}

// --------------------------------------------------------------------------
// Experiment runner
// --------------------------------------------------------------------------

/// A fully serializable experiment: named generator specs plus an ordered
/// pipeline of diagnostic steps. Re-running the same config reproduces every
/// output byte-for-byte (the echoed config drops the output directory so the
/// outputs are location-independent).
#[derive(Debug, Clone, Serialize, Deserialize)]
struct ExperimentConfig {
    experiment_id: String,
    /// Fallback seed for generator specs that do not pin their own.
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    output_dir: Option<PathBuf>,
    /// Slope tolerance for adaptability verdicts.
    #[serde(default = "default_tol")]
    tol: f64,
    #[serde(default)]
    generators: BTreeMap<String, GeneratorSpec>,
    #[serde(default)]
    pipeline: Vec<Step>,
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
enum Step {
    /// Energy table plus per-beta log-log fits of the scale-invariant ratio.
    Energy {
        family: String,
        betas: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        claim: Option<String>,
    },
    /// Adaptability verdict at one alpha (diameter-only if betas is empty).
    Adapt {
        family: String,
        alpha: f64,
        #[serde(default)]
        betas: Vec<f64>,
        #[serde(default)]
        slack: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        claim: Option<String>,
    },
    /// Dimension lower bound over the default alpha grid and strategies.
    Dimension {
        family: String,
        kind: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        claim: Option<String>,
    },
    /// Covering-number table on the largest family member.
    Boxcount {
        family: String,
        deltas: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        claim: Option<String>,
    },
    /// Distinct-distance counts for every family member.
    Distances {
        family: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tau: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        claim: Option<String>,
    },
    /// Transfinite-diameter curve on a continuum domain.
    Fekete {
        domain: String,
        alpha: f64,
        n_max: usize,
        #[serde(default = "default_budget")]
        budget: usize,
        #[serde(default = "default_restarts")]
        restarts: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        claim: Option<String>,
    },
}

fn default_budget() -> usize {
    2000
}

fn default_restarts() -> usize {
    4
}

impl Step {
    fn op_name(&self) -> &'static str {
        match self {
            Step::Energy { .. } => "energy",
            Step::Adapt { .. } => "adapt",
            Step::Dimension { .. } => "dimension",
            Step::Boxcount { .. } => "boxcount",
            Step::Distances { .. } => "distances",
            Step::Fekete { .. } => "fekete",
        }
    }

    fn claim(&self) -> Option<&str> {
        match self {
            Step::Energy { claim, .. }
            | Step::Adapt { claim, .. }
            | Step::Dimension { claim, .. }
            | Step::Boxcount { claim, .. }
            | Step::Distances { claim, .. }
            | Step::Fekete { claim, .. } => claim.as_deref(),
        }
    }
}

#[derive(Debug, Serialize)]
struct StepStatus {
    index: usize,
    op: String,
    status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    message: Option<String>,
}

#[derive(Debug, Serialize)]
struct Report {
    experiment_id: String,
    steps: Vec<StepStatus>,
}

/// A generated family together with its provenance: the params string and
/// the content hash of its manifest file, stamped onto every table row
/// derived from it.
struct FamilyArtifact {
    family: SetFamily,
    spec: GeneratorSpec,
    params_text: String,
    input_sha: String,
}

fn run_experiment(config_path: &Path, out_override: Option<&Path>) -> Result<()> {
    let text = fs::read_to_string(config_path)?;
    let config: ExperimentConfig = serde_json::from_str(&text)
        .map_err(|e| Error::validation(format!("bad experiment config: {e}")))?;
    let out = out_override
        .map(Path::to_path_buf)
        .or_else(|| config.output_dir.clone())
        .ok_or_else(|| Error::validation("no output directory: pass --out or set output_dir"))?;
    fs::create_dir_all(&out)?;

    let mut families: BTreeMap<String, FamilyArtifact> = BTreeMap::new();
    for (name, spec) in &config.generators {
        let mut spec = spec.clone();
        if spec.seed.is_none() {
            spec.seed = config.seed;
        }
        let family = spec.build()?;
        let dir = out.join("families").join(name);
        let manifest_path = io::write_family(&dir, &family, Some(&spec))?;
        let input_sha = sha256_file(&manifest_path)?;
        let params_text = params_text(&family);
        families.insert(
            name.clone(),
            FamilyArtifact {
                family,
                spec,
                params_text,
                input_sha,
            },
        );
    }

    let mut summary = format!("# Experiment `{}`\n", config.experiment_id);
    summary.push_str(&format!(
        "\nSeed: {}. Slope tolerance: {:.4}. Families: {}.\n",
        config
            .seed
            .map_or_else(|| "none".to_string(), |s| s.to_string()),
        config.tol,
        if config.generators.is_empty() {
            "none".to_string()
        } else {
            config
                .generators
                .keys()
                .cloned()
                .collect::<Vec<_>>()
                .join(", ")
        }
    ));

    let mut statuses = Vec::with_capacity(config.pipeline.len());
    let mut first_error: Option<Error> = None;
    for (index, step) in config.pipeline.iter().enumerate() {
        let dir = out.join("steps").join(format!("step_{index:02}_{}", step.op_name()));
        summary.push_str(&format!("\n## Step {index}: {}\n", step.op_name()));
        if let Some(claim) = step.claim() {
            summary.push_str(&format!("\nChecks: {claim}\n"));
        }
        match execute_step(step, &families, &config, &dir, &mut summary) {
            Ok(()) => statuses.push(StepStatus {
                index,
                op: step.op_name().to_string(),
                status: "ok".to_string(),
                message: None,
            }),
            Err(e) => {
                summary.push_str(&format!("\nStatus: FAILED — {e}\n"));
                statuses.push(StepStatus {
                    index,
                    op: step.op_name().to_string(),
                    status: "error".to_string(),
                    message: Some(e.to_string()),
                });
                if first_error.is_none() {
                    first_error = Some(e);
                }
            }
        }
    }

    // Echo the config with defaults resolved; the output directory is
    // dropped so runs into different directories produce identical bytes.
    let mut echoed = config.clone();
    echoed.output_dir = None;
    let mut config_text = serde_json::to_string_pretty(&echoed)?;
    config_text.push('\n');
    fs::write(out.join("config.json"), config_text)?;

    let report = Report {
        experiment_id: config.experiment_id.clone(),
        steps: statuses,
    };
    let mut report_text = serde_json::to_string_pretty(&report)?;
    report_text.push('\n');
    fs::write(out.join("report.json"), report_text)?;
    fs::write(out.join("summary.md"), &summary)?;

    write_manifest(&out)?;

    match first_error {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn get_family<'a>(
    families: &'a BTreeMap<String, FamilyArtifact>,
    name: &str,
) -> Result<&'a FamilyArtifact> {
    families
        .get(name)
        .ok_or_else(|| Error::validation(format!("step references unknown family `{name}`")))
}

fn execute_step(
    step: &Step,
    families: &BTreeMap<String, FamilyArtifact>,
    config: &ExperimentConfig,
    dir: &Path,
    summary: &mut String,
) -> Result<()> {
    fs::create_dir_all(dir)?;
    match step {
        Step::Energy { family, betas, .. } => {
            let art = get_family(families, family)?;
            let rows = energy_curve(&art.family, betas)?;
            io::write_energy_curve(&dir.join("energy.csv"), &rows)?;
            let fits = energy_fits(art, betas, &rows)?;
            let mut csv = String::from(
                "family,params,input_sha,beta,ratio_slope,ratio_stderr,ratio_r_squared,\
                 max_min_ratio,raw_growth_slope\n",
            );
            summary.push_str(&format!(
                "\nFamily `{family}` ({}); table: energy.csv, fits: fits.csv\n\n\
                 | beta | ratio slope | max/min ratio | raw-sum growth slope |\n\
                 |------|-------------|---------------|----------------------|\n",
                art.params_text
            ));
            for row in &fits {
                csv.push_str(&format!(
                    "{},{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                    family,
                    art.params_text,
                    art.input_sha,
                    row.beta,
                    row.ratio_fit.slope,
                    row.ratio_fit.stderr,
                    row.ratio_fit.r_squared,
                    row.max_min_ratio,
                    row.raw_growth_slope,
                ));
                summary.push_str(&format!(
                    "| {:.4} | {:.4} | {:.4} | {:.4} |\n",
                    row.beta, row.ratio_fit.slope, row.max_min_ratio, row.raw_growth_slope
                ));
            }
            fs::write(dir.join("fits.csv"), csv)?;
            Ok(())
        }
        Step::Adapt {
            family,
            alpha,
            betas,
            slack,
            ..
        } => {
            let art = get_family(families, family)?;
            let verdict = if betas.is_empty() {
                check_minkowski_adaptable(&art.family, *alpha, config.tol)?
            } else {
                check_hausdorff_adaptable_slack(&art.family, *alpha, betas, config.tol, *slack)?
            };
            io::write_verdict(&dir.join("verdict.json"), &verdict)?;
            summary.push_str(&format!(
                "\nFamily `{family}` ({}) [input sha256 {}]: alpha = {:.4}, \
                 diameter-ratio slope {:.4}, adaptable: **{}** (verdict.json)\n",
                art.params_text,
                art.input_sha,
                alpha,
                verdict.diam_exponent.slope,
                verdict.adaptable
            ));
            Ok(())
        }
        Step::Dimension { family, kind, .. } => {
            let art = get_family(families, family)?;
            let strategies = default_strategies();
            let estimate = match kind.as_str() {
                "minkowski" => estimate_minkowski_dimension(&art.family, &strategies),
                "hausdorff" => estimate_hausdorff_dimension(&art.family, &strategies),
                other => {
                    return Err(Error::validation(format!(
                        "unknown dimension kind `{other}`"
                    )))
                }
            };
            io::write_estimate(&dir.join("estimate.json"), &estimate)?;
            summary.push_str(&format!(
                "\nFamily `{family}` ({}) [input sha256 {}]: {kind} dimension lower bound \
                 **{:.4}** via {} (estimate.json)\n",
                art.params_text,
                art.input_sha,
                estimate.value,
                estimate
                    .strategy_used
                    .as_deref()
                    .unwrap_or("no certifying strategy"),
            ));
            Ok(())
        }
        Step::Boxcount { family, deltas, .. } => {
            let art = get_family(families, family)?;
            let member = art
                .family
                .members()
                .last()
                .ok_or_else(|| Error::validation("empty family"))?;
            let report = box_counting(member, deltas)?;
            emit_json(Some(&dir.join("boxcount.json")), &report)?;
            summary.push_str(&format!(
                "\nFamily `{family}` ({}) [input sha256 {}], largest member (N = {}): \
                 fitted covering dimension **{:.4}** (boxcount.json)\n",
                art.params_text,
                art.input_sha,
                member.len(),
                report.fitted_dimension
            ));
            Ok(())
        }
        Step::Distances { family, tau, .. } => {
            let art = get_family(families, family)?;
            let mut csv = String::from(
                "family,params,input_sha,n_points,tau,distinct_count,min_distance,max_distance\n",
            );
            summary.push_str(&format!(
                "\nFamily `{family}` ({}); table: distances.csv\n\n\
                 | N | distinct distances |\n|---|--------------------|\n",
                art.params_text
            ));
            for member in art.family.members() {
                let row: DistanceSummary = match tau {
                    Some(tau) => distance_count_binned(member, *tau)?,
                    None => distance_count_exact(member)?,
                };
                csv.push_str(&format!(
                    "{},{},{},{},{:.16e},{},{:.16e},{:.16e}\n",
                    family,
                    art.params_text,
                    art.input_sha,
                    row.n_points,
                    row.tau,
                    row.distinct_count,
                    row.min_distance,
                    row.max_distance,
                ));
                summary.push_str(&format!(
                    "| {} | {} |\n",
                    row.n_points, row.distinct_count
                ));
            }
            fs::write(dir.join("distances.csv"), csv)?;
            Ok(())
        }
        Step::Fekete {
            domain,
            alpha,
            n_max,
            budget,
            restarts,
            ..
        } => {
            let domain: Domain = domain.parse()?;
            let seed = config.seed.unwrap_or(0);
            let curve =
                transfinite_diameter_curve(&domain, *alpha, *n_max, *budget, *restarts, seed)?;
            emit_json(Some(&dir.join("transfinite.json")), &curve)?;
            let violations = curve
                .entries
                .iter()
                .filter(|e| e.monotone_violation)
                .count();
            summary.push_str(&format!(
                "\nalpha = {alpha:.4}, N = 2..{n_max}: capacity estimate {:.4} \
                 (extrapolated {:.4}), monotonicity violations: {violations} \
                 (transfinite.json)\n",
                curve.capacity_estimate, curve.extrapolated_capacity
            ));
            Ok(())
        }
    }
}

struct EnergyFitRow {
    beta: f64,
    ratio_fit: fit::LineFit,
    max_min_ratio: f64,
    /// Slope of log raw_sum against the log of the generator's growth
    /// variable (q or M from the schedule).
    raw_growth_slope: f64,
}

fn energy_fits(
    art: &FamilyArtifact,
    betas: &[f64],
    rows: &[pointdim::energy::EnergyCurveRow],
) -> Result<Vec<EnergyFitRow>> {
    let growth: Vec<f64> = art.spec.schedule.iter().map(|&g| g as f64).collect();
    let mut fits = Vec::with_capacity(betas.len());
    for &beta in betas {
        let selected: Vec<_> = rows
            .iter()
            .filter(|r| r.report.beta == beta)
            .collect();
        let ns: Vec<f64> = selected.iter().map(|r| r.n as f64).collect();
        let ratios: Vec<f64> = selected
            .iter()
            .map(|r| r.report.scale_invariant_ratio)
            .collect();
        let raws: Vec<f64> = selected.iter().map(|r| r.report.raw_sum).collect();
        let ratio_fit = fit::fit_exponent(&ns, &ratios)?;
        let raw_growth_slope = if growth.len() == ns.len() {
            fit::fit_exponent(&growth, &raws)?.slope
        } else {
            fit::fit_exponent(&ns, &raws)?.slope
        };
        let max = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        fits.push(EnergyFitRow {
            beta,
            ratio_fit,
            max_min_ratio: max / min,
            raw_growth_slope,
        });
    }
    Ok(fits)
}

/// Compact `key=value` rendering of the family parameters, for table rows.
fn params_text(family: &SetFamily) -> String {
    if family.params().is_empty() {
        return String::from("-");
    }
    family
        .params()
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";")
}

fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path)?;
    Ok(hex_digest(&bytes))
}

fn hex_digest(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// SHA-256 of every output file (relative path, sorted), written last so the
/// manifest itself is excluded.
fn write_manifest(out: &Path) -> Result<()> {
    let mut files = Vec::new();
    collect_files(out, out, &mut files)?;
    files.retain(|f| f != "manifest.json");
    files.sort();
    let mut entries = BTreeMap::new();
    for file in files {
        let sha = sha256_file(&out.join(&file))?;
        entries.insert(file, sha);
    }
    let mut text = serde_json::to_string_pretty(&entries)?;
    text.push('\n');
    fs::write(out.join("manifest.json"), text)?;
    Ok(())
}

fn collect_files(root: &Path, dir: &Path, files: &mut Vec<String>) -> Result<()> {
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if path.is_dir() {
            collect_files(root, &path, files)?;
        } else {
            let rel = path
                .strip_prefix(root)
                .map_err(|_| Error::validation("path outside output root"))?;
            files.push(rel.to_string_lossy().replace('\\', "/"));
        }
    }
    Ok(())
}
