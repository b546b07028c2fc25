//! Command-line front end.
//!
//! Every flag may also come from a TOML file given with `--config`; keys are
//! the long flag names (`n-traj = 100`, `noise = "t_mm=2"`). Flags on the
//! command line win over the file.
//!
//! Exit codes: 0 success, 1 some records failed, 2 fatal error.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ffi::OsString;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::artmodel::{CategoryThresholds, ModelCategory};
use crate::datagen::{generate_dataset, DatasetPlan, LabeledTrajectory, NoiseSpec};
use crate::error::{Error, Result};
use crate::estimator::{estimate, estimate_closed_form, evaluate, LossWeights, Method, OrientationMode};
use crate::io::{
    format_table, load_predictions, load_trajectories, load_trajectories_strict, save_predictions, save_trajectories,
    summarize, write_csv, write_report_csv, PredictionRecord, ReportRow, REPORT_COLUMNS,
};

const COMMANDS: [&str; 5] = ["generate", "estimate", "classify", "evaluate", "benchmark"];

#[derive(Debug, Parser)]
#[command(
    name = "screwkit",
    version,
    about = "Articulation models from pose sequences",
    args_override_self = true
)]
pub struct Cli {
    /// TOML file with default flag values.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic trajectory dataset.
    Generate(GenerateArgs),
    /// Estimate one articulation model per trajectory.
    Estimate(EstimateArgs),
    /// Print the detected category of each trajectory.
    Classify(ClassifyArgs),
    /// Compare predictions with ground truth.
    Evaluate(EvaluateArgs),
    /// Generate, corrupt, estimate and evaluate in one run.
    Benchmark(BenchmarkArgs),
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// rigid, revolute, prismatic, helical, a comma list, or all
    #[arg(long, default_value = "all", value_parser = parse_categories)]
    pub category: Categories,
    #[arg(long, default_value_t = 100)]
    pub n_traj: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 16)]
    pub frames: usize,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ThresholdArgs {
    /// rad
    #[arg(long)]
    pub eps_theta: Option<f64>,
    /// m
    #[arg(long)]
    pub eps_d: Option<f64>,
    /// m/rad
    #[arg(long)]
    pub pitch_tol: Option<f64>,
}

impl ThresholdArgs {
    pub fn resolve(&self) -> Result<CategoryThresholds> {
        let d = CategoryThresholds::default();
        let th = CategoryThresholds {
            eps_theta: self.eps_theta.unwrap_or(d.eps_theta),
            eps_d: self.eps_d.unwrap_or(d.eps_d),
            helical_pitch_tol: self.pitch_tol.unwrap_or(d.helical_pitch_tol),
        };
        th.validate()?;
        Ok(th)
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct WeightArgs {
    #[arg(long)]
    pub lambda1: Option<f64>,
    #[arg(long)]
    pub lambda2: Option<f64>,
    #[arg(long)]
    pub lambda3: Option<f64>,
    #[arg(long)]
    pub lambda4: Option<f64>,
    #[arg(long)]
    pub alpha1: Option<f64>,
    #[arg(long)]
    pub alpha2: Option<f64>,
}

impl WeightArgs {
    pub fn resolve(&self) -> Result<LossWeights> {
        let d = LossWeights::default();
        let w = LossWeights {
            lambda1: self.lambda1.unwrap_or(d.lambda1),
            lambda2: self.lambda2.unwrap_or(d.lambda2),
            lambda3: self.lambda3.unwrap_or(d.lambda3),
            lambda4: self.lambda4.unwrap_or(d.lambda4),
            alpha1: self.alpha1.unwrap_or(d.alpha1),
            alpha2: self.alpha2.unwrap_or(d.alpha2),
        };
        w.validate()?;
        Ok(w)
    }
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Comma list of key=value: frame_skip, rot_deg, t_mm, cfg_theta_deg, cfg_d_mm
    #[arg(long, default_value = "", value_parser = parse_noise)]
    pub noise: NoiseSpec,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct EstimateArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value = "closed-form")]
    pub method: Method,
    #[command(flatten)]
    pub thresholds: ThresholdArgs,
    #[command(flatten)]
    pub weights: WeightArgs,
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// CSV of id, true and predicted category.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub thresholds: ThresholdArgs,
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrientationArg {
    Raw,
    Folded,
}

impl From<OrientationArg> for OrientationMode {
    fn from(o: OrientationArg) -> Self {
        match o {
            OrientationArg::Raw => OrientationMode::Raw,
            OrientationArg::Folded => OrientationMode::Folded,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct EvaluateArgs {
    /// Predictions file written by `estimate`.
    #[arg(long)]
    pub pred: PathBuf,
    /// Trajectory file holding the ground truth.
    #[arg(long)]
    pub gt: PathBuf,
    /// Report CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "raw")]
    pub orientation: OrientationArg,
}

#[derive(Debug, Clone, Args)]
pub struct BenchmarkArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Rotation jitter per axis, deg.
    #[arg(long, default_value_t = 0.5)]
    pub rot_deg: f64,
    /// Translation jitter per axis, mm.
    #[arg(long, default_value_t = 2.0)]
    pub t_mm: f64,
    /// Frame skip probability.
    #[arg(long, default_value_t = 0.0)]
    pub skip: f64,
    /// Comma list of translation jitter levels in mm; replaces --t-mm.
    #[arg(long, value_parser = parse_list)]
    pub sweep_t_mm: Option<Levels>,
    #[arg(long, default_value = "refine")]
    pub method: Method,
    #[command(flatten)]
    pub thresholds: ThresholdArgs,
    #[command(flatten)]
    pub weights: WeightArgs,
    #[arg(long, value_enum, default_value = "raw")]
    pub orientation: OrientationArg,
    /// Report CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Categories(pub Vec<ModelCategory>);

fn parse_categories(s: &str) -> std::result::Result<Categories, String> {
    if s.trim() == "all" {
        return Ok(Categories(ModelCategory::ALL.to_vec()));
    }
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let c: ModelCategory = part.parse().map_err(|e: Error| e.to_string())?;
        if !out.contains(&c) {
            out.push(c);
        }
    }
    if out.is_empty() {
        return Err("no category given".into());
    }
    Ok(Categories(out))
}

/// Parses `frame_skip=0.1,rot_deg=0.5,t_mm=2`. Angles in deg and lengths in mm
/// are converted to rad and m.
pub fn parse_noise(s: &str) -> std::result::Result<NoiseSpec, String> {
    let mut n = NoiseSpec::default();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got '{part}'"))?;
        let v: f64 = v.trim().parse().map_err(|_| format!("bad number in '{part}'"))?;
        match k.trim() {
            "frame_skip" | "skip" => n.frame_skip_prob = v,
            "rot_deg" => n.rot_sigma = v.to_radians(),
            "t_mm" => n.trans_sigma = v / 1000.0,
            "cfg_theta_deg" => n.config_theta_sigma = v.to_radians(),
            "cfg_d_mm" => n.config_d_sigma = v / 1000.0,
            other => return Err(format!("unknown noise key '{other}'")),
        }
    }
    n.validate().map_err(|e| e.to_string())?;
    Ok(n)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Levels(pub Vec<f64>);

fn parse_list(s: &str) -> std::result::Result<Levels, String> {
    let v: std::result::Result<Vec<f64>, String> = s
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<f64>().map_err(|_| format!("bad number '{p}'")))
        .collect();
    Ok(Levels(v?))
}

/// Flags equivalent to a TOML config table.
fn config_flags(path: &Path) -> Result<Vec<OsString>> {
    let text = std::fs::read_to_string(path)?;
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::invalid(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (key, value) in table {
        let flag = format!("--{}", key.replace('_', "-"));
        if flag == "--config" {
            return Err(Error::invalid("config files cannot include other config files"));
        }
        let text = match value {
            toml::Value::String(s) => s,
            toml::Value::Integer(i) => i.to_string(),
            toml::Value::Float(f) => f.to_string(),
            toml::Value::Boolean(true) => {
                out.push(flag.into());
                continue;
            }
            toml::Value::Boolean(false) => continue,
            toml::Value::Array(items) => items
                .iter()
                .map(|v| match v {
                    toml::Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect::<Vec<_>>()
                .join(","),
            toml::Value::Table(t) => t.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(","),
            toml::Value::Datetime(d) => d.to_string(),
        };
        out.push(flag.into());
        out.push(text.into());
    }
    Ok(out)
}

/// Inserts the flags from `--config` right after the subcommand so that flags
/// given on the command line override them.
fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let mut config = None;
    for (i, a) in args.iter().enumerate() {
        let s = a.to_string_lossy();
        if s == "--config" {
            config = args.get(i + 1).map(PathBuf::from);
        } else if let Some(p) = s.strip_prefix("--config=") {
            config = Some(PathBuf::from(p));
        }
    }
    let Some(path) = config else {
        return Ok(args);
    };
    let Some(pos) = args
        .iter()
        .position(|a| COMMANDS.contains(&a.to_string_lossy().as_ref()))
    else {
        return Ok(args);
    };
    let mut out = args[..=pos].to_vec();
    out.extend(config_flags(&path)?);
    out.extend_from_slice(&args[pos + 1..]);
    Ok(out)
}

fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    match threads {
        Some(0) => Err(Error::invalid("--threads must be positive")),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::invalid(e.to_string()))?;
            Ok(pool.install(f))
        }
        None => Ok(f()),
    }
}

/// Result of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    /// Some records failed; output was still written for the rest.
    Partial,
}

/// Parses arguments (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(Outcome::Success) => 0,
        Ok(Outcome::Partial) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

pub fn execute(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Generate(a) => cmd_generate(a),
        Command::Estimate(a) => cmd_estimate(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Benchmark(a) => cmd_benchmark(a),
    }
}

fn plan(data: &DataArgs, noise: NoiseSpec) -> Result<DatasetPlan> {
    if data.frames < 2 {
        return Err(Error::invalid("--frames must be at least 2"));
    }
    Ok(DatasetPlan {
        categories: data.category.0.clone(),
        n_traj: data.n_traj,
        seed: data.seed,
        n_frames: data.frames,
        noise,
    })
}

fn category_counts<'a>(cats: impl Iterator<Item = &'a ModelCategory>) -> String {
    let mut counts: BTreeMap<ModelCategory, usize> = BTreeMap::new();
    for c in cats {
        *counts.entry(*c).or_default() += 1;
    }
    counts
        .iter()
        .map(|(c, n)| format!("{c}={n}"))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn cmd_generate(a: &GenerateArgs) -> Result<Outcome> {
    let plan = plan(&a.data, a.noise)?;
    let trajs = with_threads(a.threads, || generate_dataset(&plan))??;
    save_trajectories(&a.out, &trajs)?;
    println!(
        "wrote {} trajectories to {} (seed {}): {}",
        trajs.len(),
        a.out.display(),
        plan.seed,
        category_counts(trajs.iter().map(|t| &t.category))
    );
    Ok(Outcome::Success)
}

pub fn cmd_estimate(a: &EstimateArgs) -> Result<Outcome> {
    let th = a.thresholds.resolve()?;
    let w = a.weights.resolve()?;
    let records = load_trajectories(&a.input)?;
    if records.is_empty() {
        return Err(Error::invalid("no trajectories"));
    }
    let preds: Vec<PredictionRecord> = with_threads(a.threads, || {
        records
            .par_iter()
            .enumerate()
            .map(|(i, r)| match r {
                Ok(t) => match estimate(&t.poses, &t.base_pose, a.method, &th, &w) {
                    Ok(e) => PredictionRecord::from_estimate(t.id, &e),
                    Err(e) => PredictionRecord::failed(t.id, a.method, &e),
                },
                Err(e) => PredictionRecord::failed(e.id.unwrap_or(i as u64), a.method, &Error::Schema(e.to_string())),
            })
            .collect()
    })?;
    save_predictions(&a.out, &preds)?;
    let failed = preds.iter().filter(|p| p.error.is_some()).count();
    println!(
        "estimated {} of {} trajectories ({}) -> {}",
        preds.len() - failed,
        preds.len(),
        a.method,
        a.out.display()
    );
    for p in preds.iter().filter(|p| p.error.is_some()) {
        eprintln!("trajectory {}: {}", p.id, p.error.as_deref().unwrap_or_default());
    }
    if failed == preds.len() {
        Err(Error::invalid("every trajectory failed"))
    } else if failed > 0 {
        Ok(Outcome::Partial)
    } else {
        Ok(Outcome::Success)
    }
}

pub fn cmd_classify(a: &ClassifyArgs) -> Result<Outcome> {
    let th = a.thresholds.resolve()?;
    let records = load_trajectories(&a.input)?;
    if records.is_empty() {
        return Err(Error::invalid("no trajectories"));
    }
    let rows: Vec<std::result::Result<(u64, ModelCategory, ModelCategory), String>> = with_threads(a.threads, || {
        records
            .par_iter()
            .map(|r| match r {
                Ok(t) => estimate_closed_form(&t.poses, &t.base_pose, &th)
                    .map(|m| (t.id, t.category, m.category))
                    .map_err(|e| format!("trajectory {}: {e}", t.id)),
                Err(e) => Err(e.to_string()),
            })
            .collect()
    })?;

    let mut confusion: BTreeMap<(ModelCategory, ModelCategory), usize> = BTreeMap::new();
    let mut csv = Vec::new();
    let mut failed = 0;
    for r in &rows {
        match r {
            Ok((id, truth, pred)) => {
                *confusion.entry((*truth, *pred)).or_default() += 1;
                csv.push(vec![id.to_string(), truth.to_string(), pred.to_string()]);
            }
            Err(e) => {
                failed += 1;
                eprintln!("{e}");
            }
        }
    }
    let total: usize = confusion.values().sum();
    let hits: usize = confusion.iter().filter(|((t, p), _)| t == p).map(|(_, n)| n).sum();
    print!("{:<10}", "true\\pred");
    for c in ModelCategory::ALL {
        print!(" {:>10}", c.to_string());
    }
    println!();
    for t in ModelCategory::ALL {
        print!("{:<10}", t.to_string());
        for p in ModelCategory::ALL {
            print!(" {:>10}", confusion.get(&(t, p)).copied().unwrap_or(0));
        }
        println!();
    }
    if total > 0 {
        println!("accuracy {:.4} ({hits}/{total})", hits as f64 / total as f64);
    }
    if let Some(out) = &a.out {
        write_csv(
            BufWriter::new(File::create(out)?),
            &["id", "category", "predicted"],
            &csv,
        )?;
    }
    if failed == rows.len() {
        Err(Error::invalid("every trajectory failed"))
    } else if failed > 0 {
        Ok(Outcome::Partial)
    } else {
        Ok(Outcome::Success)
    }
}

fn write_report(path: Option<&Path>, rows: &[ReportRow]) -> Result<()> {
    if let Some(p) = path {
        write_report_csv(BufWriter::new(File::create(p)?), rows)?;
    }
    Ok(())
}

/// Ids that are missing on one side or repeated on either.
fn mismatched_ids(pred: impl Iterator<Item = u64>, gt: impl Iterator<Item = u64>) -> BTreeSet<u64> {
    let mut bad = BTreeSet::new();
    let mut collect = |ids: &mut dyn Iterator<Item = u64>| {
        let mut seen = BTreeSet::new();
        for id in ids {
            if !seen.insert(id) {
                bad.insert(id);
            }
        }
        seen
    };
    let p = collect(&mut { pred });
    let g = collect(&mut { gt });
    bad.extend(p.symmetric_difference(&g));
    bad
}

pub fn cmd_evaluate(a: &EvaluateArgs) -> Result<Outcome> {
    let gt = load_trajectories_strict(&a.gt)?;
    let preds = load_predictions(&a.pred)?;
    if gt.is_empty() {
        return Err(Error::invalid("no trajectories"));
    }
    let bad = mismatched_ids(preds.iter().map(|p| p.id), gt.iter().map(|t| t.id));
    if !bad.is_empty() {
        let list: Vec<String> = bad.iter().map(u64::to_string).collect();
        return Err(Error::Schema(format!(
            "trajectory ids do not match: {}",
            list.join(", ")
        )));
    }
    let by_id: HashMap<u64, &LabeledTrajectory> = gt.iter().map(|t| (t.id, t)).collect();

    let mut results = Vec::new();
    let mut failed = 0;
    for p in &preds {
        let truth = by_id[&p.id];
        match p.model().and_then(|m| evaluate(&m, &truth.gt)) {
            Ok(r) => results.push((truth.category, r)),
            Err(e) => {
                failed += 1;
                eprintln!("trajectory {}: {e}", p.id);
            }
        }
    }
    let rows = summarize(&results, a.orientation.into());
    print!("{}", format_table(&rows));
    write_report(a.out.as_deref(), &rows)?;
    if results.is_empty() {
        Err(Error::invalid("no prediction could be evaluated"))
    } else if failed > 0 {
        Ok(Outcome::Partial)
    } else {
        Ok(Outcome::Success)
    }
}

/// One benchmark level: rows for each category plus the number of failures.
pub struct BenchmarkLevel {
    pub noise: NoiseSpec,
    pub rows: Vec<ReportRow>,
    pub failed: usize,
}

/// Runs generate → corrupt → estimate → evaluate for each noise level.
/// Wall-clock times go to stdout only, never into the returned rows.
pub fn run_benchmark(a: &BenchmarkArgs) -> Result<Vec<BenchmarkLevel>> {
    let th = a.thresholds.resolve()?;
    let w = a.weights.resolve()?;
    let levels: Vec<f64> = a.sweep_t_mm.clone().map(|l| l.0).unwrap_or_else(|| vec![a.t_mm]);
    if levels.is_empty() {
        return Err(Error::invalid("empty sweep"));
    }
    let mut out = Vec::new();
    for t_mm in levels {
        let noise = NoiseSpec {
            frame_skip_prob: a.skip,
            rot_sigma: a.rot_deg.to_radians(),
            trans_sigma: t_mm / 1000.0,
            ..Default::default()
        };
        let plan = plan(&a.data, noise)?;
        let clock = Instant::now();
        let trajs = with_threads(a.threads, || generate_dataset(&plan))??;
        if trajs.is_empty() {
            return Err(Error::invalid("no trajectories"));
        }
        let t_gen = clock.elapsed();
        let clock = Instant::now();
        let estimates: Vec<Result<_>> = with_threads(a.threads, || {
            trajs
                .par_iter()
                .map(|t| estimate(&t.poses, &t.base_pose, a.method, &th, &w))
                .collect()
        })?;
        let t_est = clock.elapsed();
        let clock = Instant::now();
        let mut results = Vec::new();
        let mut failed = 0;
        for (t, e) in trajs.iter().zip(estimates) {
            match e.and_then(|e| evaluate(&e.model, &t.gt)) {
                Ok(r) => results.push((t.category, r)),
                Err(err) => {
                    failed += 1;
                    eprintln!("trajectory {}: {err}", t.id);
                }
            }
        }
        let rows = summarize(&results, a.orientation.into());
        let t_eval = clock.elapsed();
        println!(
            "rot {:.3} deg, t {:.3} mm, skip {:.3}: generate+corrupt {:.1} ms, estimate {:.1} ms, evaluate {:.1} ms",
            a.rot_deg,
            t_mm,
            a.skip,
            t_gen.as_secs_f64() * 1e3,
            t_est.as_secs_f64() * 1e3,
            t_eval.as_secs_f64() * 1e3
        );
        print!("{}", format_table(&rows));
        out.push(BenchmarkLevel { noise, rows, failed });
    }
    Ok(out)
}

/// Categories whose orientation or position error decreases as noise grows.
pub fn non_monotone(levels: &[BenchmarkLevel]) -> Vec<(ModelCategory, &'static str)> {
    let mut flagged = Vec::new();
    for c in ModelCategory::ALL {
        let series: Vec<&ReportRow> = levels
            .iter()
            .filter_map(|l| l.rows.iter().find(|r| r.category == c))
            .collect();
        let ori = series.windows(2).any(|w| w[1].ori_deg_mean < w[0].ori_deg_mean);
        let pos = series.windows(2).any(|w| w[1].pos_cm_mean < w[0].pos_cm_mean);
        if ori {
            flagged.push((c, "orientation"));
        }
        if pos {
            flagged.push((c, "position"));
        }
    }
    flagged
}

pub const BENCHMARK_COLUMNS: [&str; 5] = ["seed", "rot_deg", "t_mm", "skip", "method"];

pub fn write_benchmark_csv<W: std::io::Write>(w: W, a: &BenchmarkArgs, levels: &[BenchmarkLevel]) -> Result<()> {
    let header: Vec<&str> = BENCHMARK_COLUMNS.iter().chain(REPORT_COLUMNS.iter()).copied().collect();
    let mut body = Vec::new();
    for level in levels {
        for r in &level.rows {
            let mut row = vec![
                a.data.seed.to_string(),
                format!("{:.6}", level.noise.rot_sigma.to_degrees()),
                format!("{:.6}", level.noise.trans_sigma * 1000.0),
                format!("{:.6}", level.noise.frame_skip_prob),
                a.method.to_string(),
            ];
            row.extend(r.fields());
            body.push(row);
        }
    }
    write_csv(w, &header, &body)
}

pub fn cmd_benchmark(a: &BenchmarkArgs) -> Result<Outcome> {
    let levels = run_benchmark(a)?;
    if levels.len() > 1 {
        for (c, what) in non_monotone(&levels) {
            println!("warning: {what} error of {c} is not monotone in the noise level");
        }
    }
    if let Some(out) = &a.out {
        write_benchmark_csv(BufWriter::new(File::create(out)?), a, &levels)?;
        println!("report written to {}", out.display());
    }
    if levels.iter().any(|l| l.failed > 0) {
        Ok(Outcome::Partial)
    } else {
        Ok(Outcome::Success)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("screwkit").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn noise_keys_convert_units() {
        let n = parse_noise("frame_skip=0.1, rot_deg=0.5,t_mm=2").unwrap();
        assert_eq!(n.frame_skip_prob, 0.1);
        assert!((n.rot_sigma - 0.5f64.to_radians()).abs() < 1e-15);
        assert!((n.trans_sigma - 0.002).abs() < 1e-15);
        assert!(parse_noise("").unwrap().is_zero());
        assert!(parse_noise("bogus=1").is_err());
        assert!(parse_noise("frame_skip=2").is_err());
        assert!(parse_noise("t_mm").is_err());
    }

    #[test]
    fn category_lists() {
        assert_eq!(parse_categories("all").unwrap().0, ModelCategory::ALL.to_vec());
        assert_eq!(
            parse_categories("helical,rigid,helical").unwrap().0,
            vec![ModelCategory::Helical, ModelCategory::Rigid]
        );
        assert!(parse_categories("hinge").is_err());
    }

    #[test]
    fn default_thresholds_and_weights() {
        assert_eq!(
            ThresholdArgs::default().resolve().unwrap(),
            CategoryThresholds::default()
        );
        assert_eq!(WeightArgs::default().resolve().unwrap(), LossWeights::default());
        let bad = ThresholdArgs {
            eps_d: Some(-1.0),
            ..Default::default()
        };
        assert!(bad.resolve().is_err());
    }

    #[test]
    fn later_flags_override() {
        let Command::Generate(g) = parse(&["generate", "--seed", "3", "--out", "a", "--seed", "5"]).command else {
            panic!()
        };
        assert_eq!(g.data.seed, 5);
    }

    #[test]
    fn config_file_is_overridden_by_flags() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("run.toml");
        std::fs::write(
            &cfg,
            "seed = 9\nn_traj = 4\nnoise = \"t_mm=1\"\ncategory = [\"revolute\", \"helical\"]\n",
        )
        .unwrap();
        let args: Vec<OsString> = [
            "screwkit",
            "generate",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            "x",
            "--seed",
            "1",
        ]
        .iter()
        .map(OsString::from)
        .collect();
        let cli = Cli::try_parse_from(expand_config(args).unwrap()).unwrap();
        let Command::Generate(g) = cli.command else { panic!() };
        assert_eq!(g.data.seed, 1);
        assert_eq!(g.data.n_traj, 4);
        assert!((g.noise.trans_sigma - 0.001).abs() < 1e-15);
        assert_eq!(g.data.category.0, vec![ModelCategory::Revolute, ModelCategory::Helical]);
    }

    #[test]
    fn id_mismatches() {
        assert!(mismatched_ids([1, 2, 3].into_iter(), [3, 2, 1].into_iter()).is_empty());
        let bad = mismatched_ids([1, 2, 2, 5].into_iter(), [1, 2, 4].into_iter());
        assert_eq!(bad.into_iter().collect::<Vec<_>>(), vec![2, 4, 5]);
    }
}
