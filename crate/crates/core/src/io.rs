//! On-disk formats.
//!
//! Trajectory and prediction files are JSON Lines: one object per line, units
//! m and rad, quaternions `[w, x, y, z]`. Reports are CSV with `.` decimals
//! and LF line endings; errors there are in deg and cm.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::artmodel::{ArticulationModel, ModelCategory};
use crate::datagen::LabeledTrajectory;
use crate::error::{Error, Result};
use crate::estimator::{ConfigUnit, ErrorReport, Estimate, Method, OrientationMode};
use crate::geom3d::{PluckerLine, Pose, Vector3};
use crate::screwkin::{Configuration, ScrewDisplacement};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelRecord {
    pub l: [f64; 3],
    pub m: [f64; 3],
    pub theta: f64,
    pub d: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroundTruthRecord {
    pub l: [f64; 3],
    pub m: [f64; 3],
    pub configs: Vec<Configuration>,
}

/// One line of a trajectory file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectoryRecord {
    pub id: u64,
    pub seed: u64,
    pub category: ModelCategory,
    pub n_frames: usize,
    pub base_pose: Pose,
    pub poses: Vec<Pose>,
    pub labels: Vec<LabelRecord>,
    pub gt: GroundTruthRecord,
}

fn line_from(l: [f64; 3], m: [f64; 3]) -> Result<PluckerLine> {
    PluckerLine::new(Vector3::from(l), Vector3::from(m)).map_err(|e| Error::Schema(e.to_string()))
}

fn coords(line: &PluckerLine) -> ([f64; 3], [f64; 3]) {
    ((*line.direction()).into(), (*line.moment()).into())
}

impl From<&LabeledTrajectory> for TrajectoryRecord {
    fn from(t: &LabeledTrajectory) -> Self {
        let (gl, gm) = coords(&t.gt.axis);
        TrajectoryRecord {
            id: t.id,
            seed: t.seed,
            category: t.category,
            n_frames: t.poses.len(),
            base_pose: t.base_pose,
            poses: t.poses.clone(),
            labels: t
                .labels
                .iter()
                .map(|s| {
                    let (l, m) = coords(&s.axis);
                    LabelRecord {
                        l,
                        m,
                        theta: s.theta,
                        d: s.d,
                    }
                })
                .collect(),
            gt: GroundTruthRecord {
                l: gl,
                m: gm,
                configs: t.gt.configs.clone(),
            },
        }
    }
}

impl TryFrom<TrajectoryRecord> for LabeledTrajectory {
    type Error = Error;

    fn try_from(r: TrajectoryRecord) -> Result<Self> {
        if r.n_frames != r.poses.len() {
            return Err(Error::Schema(format!(
                "trajectory {}: n_frames = {} but {} poses",
                r.id,
                r.n_frames,
                r.poses.len()
            )));
        }
        let labels = r
            .labels
            .iter()
            .map(|l| {
                Ok(ScrewDisplacement {
                    axis: line_from(l.l, l.m)?,
                    theta: l.theta,
                    d: l.d,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let traj = LabeledTrajectory {
            id: r.id,
            seed: r.seed,
            category: r.category,
            base_pose: r.base_pose,
            poses: r.poses,
            labels,
            gt: ArticulationModel::new(r.category, line_from(r.gt.l, r.gt.m)?, r.gt.configs),
        };
        traj.validate()?;
        Ok(traj)
    }
}

pub fn write_trajectories<W: Write>(mut w: W, trajs: &[LabeledTrajectory]) -> Result<()> {
    for t in trajs {
        serde_json::to_writer(&mut w, &TrajectoryRecord::from(t))?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_trajectories(path: &Path, trajs: &[LabeledTrajectory]) -> Result<()> {
    write_trajectories(BufWriter::new(File::create(path)?), trajs)
}

/// A record that could not be read, with its 1-based line number and its id
/// when the line was at least valid JSON.
#[derive(Debug)]
pub struct RecordError {
    pub line: usize,
    pub id: Option<u64>,
    pub error: Error,
}

impl std::fmt::Display for RecordError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.error)
    }
}

impl From<RecordError> for Error {
    fn from(e: RecordError) -> Self {
        Error::Schema(e.to_string())
    }
}

/// Parses and validates every non-blank line. A bad record does not stop the
/// read; its error is returned in place.
pub fn read_trajectories<R: BufRead>(r: R) -> Result<Vec<std::result::Result<LabeledTrajectory, RecordError>>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str::<TrajectoryRecord>(&line)
            .map_err(|e| Error::Schema(e.to_string()))
            .and_then(LabeledTrajectory::try_from)
            .map_err(|error| RecordError {
                line: i + 1,
                id: serde_json::from_str::<serde_json::Value>(&line)
                    .ok()
                    .and_then(|v| v.get("id")?.as_u64()),
                error,
            });
        out.push(rec);
    }
    Ok(out)
}

pub fn load_trajectories(path: &Path) -> Result<Vec<std::result::Result<LabeledTrajectory, RecordError>>> {
    read_trajectories(BufReader::new(File::open(path)?))
}

/// Like [`load_trajectories`] but fails on the first bad record.
pub fn load_trajectories_strict(path: &Path) -> Result<Vec<LabeledTrajectory>> {
    load_trajectories(path)?
        .into_iter()
        .map(|r| r.map_err(Error::from))
        .collect()
}

/// One line of a predictions file. Model fields are absent when `error` is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub id: u64,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<ModelCategory>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub configs: Option<Vec<Configuration>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis_consistent: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loss_closed_form: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loss_refined: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl PredictionRecord {
    pub fn from_estimate(id: u64, e: &Estimate) -> Self {
        let (l, m) = coords(&e.model.axis);
        PredictionRecord {
            id,
            method: e.method,
            category: Some(e.model.category),
            l: Some(l),
            m: Some(m),
            configs: Some(e.model.configs.clone()),
            axis_consistent: Some(e.axis_consistent),
            loss_closed_form: Some(e.loss_closed_form),
            loss_refined: e.loss_refined,
            error: None,
        }
    }

    pub fn failed(id: u64, method: Method, err: &Error) -> Self {
        PredictionRecord {
            id,
            method,
            category: None,
            l: None,
            m: None,
            configs: None,
            axis_consistent: None,
            loss_closed_form: None,
            loss_refined: None,
            error: Some(err.to_string()),
        }
    }

    /// The predicted model, or the recorded failure.
    pub fn model(&self) -> Result<ArticulationModel> {
        if let Some(e) = &self.error {
            return Err(Error::Schema(format!("prediction {} failed: {e}", self.id)));
        }
        match (self.category, self.l, self.m, &self.configs) {
            (Some(c), Some(l), Some(m), Some(cfg)) => Ok(ArticulationModel::new(c, line_from(l, m)?, cfg.clone())),
            _ => Err(Error::Schema(format!("prediction {} is missing model fields", self.id))),
        }
    }
}

pub fn write_predictions<W: Write>(mut w: W, preds: &[PredictionRecord]) -> Result<()> {
    for p in preds {
        serde_json::to_writer(&mut w, p)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_predictions(path: &Path, preds: &[PredictionRecord]) -> Result<()> {
    write_predictions(BufWriter::new(File::create(path)?), preds)
}

pub fn read_predictions<R: BufRead>(r: R) -> Result<Vec<PredictionRecord>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| Error::Schema(format!("line {}: {e}", i + 1)))?);
    }
    Ok(out)
}

pub fn load_predictions(path: &Path) -> Result<Vec<PredictionRecord>> {
    read_predictions(BufReader::new(File::open(path)?))
}

pub const REPORT_COLUMNS: [&str; 10] = [
    "category",
    "n",
    "ori_deg_mean",
    "ori_deg_std",
    "pos_cm_mean",
    "pos_cm_std",
    "cfg_mean",
    "cfg_std",
    "cfg_unit",
    "acc",
];

/// Per-category summary of error reports.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub category: ModelCategory,
    pub n: usize,
    pub ori_deg_mean: f64,
    pub ori_deg_std: f64,
    pub pos_cm_mean: f64,
    pub pos_cm_std: f64,
    pub cfg_mean: f64,
    pub cfg_std: f64,
    pub cfg_unit: ConfigUnit,
    /// Fraction of trajectories whose category was predicted correctly.
    pub acc: f64,
}

impl ReportRow {
    pub fn fields(&self) -> Vec<String> {
        vec![
            self.category.to_string(),
            self.n.to_string(),
            format!("{:.6}", self.ori_deg_mean),
            format!("{:.6}", self.ori_deg_std),
            format!("{:.6}", self.pos_cm_mean),
            format!("{:.6}", self.pos_cm_std),
            format!("{:.6}", self.cfg_mean),
            format!("{:.6}", self.cfg_std),
            self.cfg_unit.name().to_string(),
            format!("{:.6}", self.acc),
        ]
    }
}

/// Mean and population standard deviation.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (0.0, 0.0);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Groups `(ground-truth category, report)` pairs by category, in category order.
pub fn summarize(results: &[(ModelCategory, ErrorReport)], mode: OrientationMode) -> Vec<ReportRow> {
    let mut groups: BTreeMap<ModelCategory, Vec<&ErrorReport>> = BTreeMap::new();
    for (c, r) in results {
        groups.entry(*c).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|(category, reports)| {
            let ori: Vec<f64> = reports.iter().map(|r| r.orientation(mode)).collect();
            let pos: Vec<f64> = reports.iter().map(|r| r.axis_position_error).collect();
            let cfg: Vec<f64> = reports.iter().map(|r| r.mean_config_error(category)).collect();
            let (ori_deg_mean, ori_deg_std) = mean_std(&ori);
            let (pos_cm_mean, pos_cm_std) = mean_std(&pos);
            let (cfg_mean, cfg_std) = mean_std(&cfg);
            let hits = reports.iter().filter(|r| r.category_match).count();
            ReportRow {
                category,
                n: reports.len(),
                ori_deg_mean,
                ori_deg_std,
                pos_cm_mean,
                pos_cm_std,
                cfg_mean,
                cfg_std,
                cfg_unit: ConfigUnit::for_category(category),
                acc: hits as f64 / reports.len() as f64,
            }
        })
        .collect()
}

/// Writes a CSV table. Fields must not contain commas or newlines.
pub fn write_csv<W: Write>(mut w: W, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    writeln!(w, "{}", header.join(","))?;
    for r in rows {
        writeln!(w, "{}", r.join(","))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_report_csv<W: Write>(w: W, rows: &[ReportRow]) -> Result<()> {
    let body: Vec<Vec<String>> = rows.iter().map(|r| r.fields()).collect();
    write_csv(w, &REPORT_COLUMNS, &body)
}

/// Fixed-width table for terminals.
pub fn format_table(rows: &[ReportRow]) -> String {
    let mut s = format!(
        "{:<10} {:>6} {:>20} {:>20} {:>24} {:>7}\n",
        "category", "n", "orientation [deg]", "position [cm]", "configuration", "acc"
    );
    for r in rows {
        s.push_str(&format!(
            "{:<10} {:>6} {:>9.3} ± {:<8.3} {:>9.3} ± {:<8.3} {:>9.3} ± {:<8.3} {:<3} {:>6.1}%\n",
            r.category.to_string(),
            r.n,
            r.ori_deg_mean,
            r.ori_deg_std,
            r.pos_cm_mean,
            r.pos_cm_std,
            r.cfg_mean,
            r.cfg_std,
            r.cfg_unit.name(),
            100.0 * r.acc
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::{corrupt, generate, NoiseSpec, ObjectSpec};

    #[test]
    fn trajectory_roundtrip_is_lossless() {
        for cat in ModelCategory::ALL {
            let t = generate(&ObjectSpec::for_category(cat), 11).unwrap();
            let t = corrupt(
                &t,
                &NoiseSpec {
                    frame_skip_prob: 0.3,
                    ..NoiseSpec::jitter(0.01, 0.002)
                },
                3,
            )
            .unwrap();
            let mut buf = Vec::new();
            write_trajectories(&mut buf, std::slice::from_ref(&t)).unwrap();
            let back = read_trajectories(&buf[..]).unwrap().remove(0).unwrap();
            assert_eq!(back, t);
        }
    }

    #[test]
    fn record_keys() {
        let t = generate(&ObjectSpec::for_category(ModelCategory::Helical).with_frames(3), 1).unwrap();
        let v = serde_json::to_value(TrajectoryRecord::from(&t)).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        let mut expected = vec![
            "id",
            "seed",
            "category",
            "n_frames",
            "base_pose",
            "poses",
            "labels",
            "gt",
        ];
        expected.sort();
        let mut keys = keys;
        keys.sort();
        assert_eq!(keys, expected);
        assert_eq!(v["category"], "helical");
        assert_eq!(v["base_pose"]["q"].as_array().unwrap().len(), 4);
        assert_eq!(v["labels"][0].as_object().unwrap().len(), 4);
        assert_eq!(v["gt"]["configs"][0].as_array().unwrap().len(), 2);
    }

    #[test]
    fn bad_lines_are_reported_in_place() {
        let t = generate(&ObjectSpec::for_category(ModelCategory::Revolute).with_frames(4), 2).unwrap();
        let mut buf = Vec::new();
        write_trajectories(&mut buf, std::slice::from_ref(&t)).unwrap();
        let mut text = String::from_utf8(buf).unwrap();
        let mut broken = TrajectoryRecord::from(&t);
        broken.n_frames = 9;
        text.push_str(&serde_json::to_string(&broken).unwrap());
        text.push_str("\n\nnot json\n");
        let recs = read_trajectories(text.as_bytes()).unwrap();
        assert_eq!(recs.len(), 3);
        assert!(recs[0].is_ok());
        let e1 = recs[1].as_ref().unwrap_err();
        assert_eq!((e1.line, e1.id), (2, Some(t.id)));
        let e2 = recs[2].as_ref().unwrap_err();
        assert_eq!((e2.line, e2.id), (4, None));
    }

    #[test]
    fn prediction_roundtrip() {
        let gt = generate(&ObjectSpec::for_category(ModelCategory::Prismatic), 5)
            .unwrap()
            .gt;
        let e = Estimate {
            model: gt.clone(),
            method: Method::Refine,
            axis_consistent: true,
            loss_closed_form: 0.5,
            loss_refined: Some(0.25),
        };
        let recs = vec![
            PredictionRecord::from_estimate(3, &e),
            PredictionRecord::failed(4, Method::ClosedForm, &Error::invalid("boom")),
        ];
        let mut buf = Vec::new();
        write_predictions(&mut buf, &recs).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.lines().nth(1).unwrap().contains("\"method\":\"closed-form\""));
        let back = read_predictions(&buf[..]).unwrap();
        assert_eq!(back, recs);
        assert_eq!(back[0].model().unwrap(), gt);
        assert!(back[1].model().is_err());
    }

    #[test]
    fn population_std() {
        let (m, s) = mean_std(&[1.0, 3.0]);
        assert_eq!((m, s), (2.0, 1.0));
        assert_eq!(mean_std(&[]), (0.0, 0.0));
    }

    #[test]
    fn csv_format() {
        let r = ErrorReport {
            axis_orientation_error: 1.0,
            axis_orientation_error_folded: 1.0,
            axis_position_error: 0.5,
            config_errors: vec![],
            category_match: true,
        };
        let rows = summarize(
            &[(ModelCategory::Prismatic, r.clone()), (ModelCategory::Rigid, r)],
            OrientationMode::Raw,
        );
        let mut buf = Vec::new();
        write_report_csv(&mut buf, &rows).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "category,n,ori_deg_mean,ori_deg_std,pos_cm_mean,pos_cm_std,cfg_mean,cfg_std,cfg_unit,acc\n\
             rigid,1,1.000000,0.000000,0.500000,0.000000,0.000000,0.000000,deg,1.000000\n\
             prismatic,1,1.000000,0.000000,0.500000,0.000000,0.000000,0.000000,cm,1.000000\n"
        );
    }
}
