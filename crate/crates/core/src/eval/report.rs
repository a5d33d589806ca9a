//! Report emission: `report.json`, `eao_curve.csv`, `success_curve.csv`,
//! `attributes.json`. All floats are written with six decimals, files are
//! UTF-8 and newline-terminated, and identical inputs produce byte-identical
//! files.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::metrics::{Accuracy, EAOCurve, SuccessCurve};
use super::EvalRun;

/// Everything the report writer may emit. Optional parts are skipped.
pub struct ReportFiles<'a, S> {
    pub protocol: &'a str,
    pub accuracy: Option<&'a Accuracy<S>>,
    pub robustness: Option<S>,
    pub eao: Option<&'a EAOCurve<S>>,
    pub success: Option<&'a SuccessCurve<S>>,
    pub runs: &'a [EvalRun<S>],
    pub attributes: Option<&'a BTreeMap<String, EAOCurve<S>>>,
}

fn fmt6<S: Scalar>(v: S) -> String {
    format!("{:.6}", v.to_f64().unwrap())
}

fn esc(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn write_file(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// Writes per-sequence trajectory files: one line per frame, `x,y,w,h` with
/// four decimals for initialization/tracked/failed frames (the first line
/// echoes the init box), `fail` for failure frames without a recorded box,
/// and `skip` for frames awaiting re-initialization.
pub fn write_trajectories<S: Scalar>(dir: &Path, runs: &[EvalRun<S>]) -> Result<Vec<PathBuf>> {
    let traj_dir = dir.join("trajectories");
    std::fs::create_dir_all(&traj_dir).map_err(|e| Error::io(&traj_dir, e))?;
    let mut written = Vec::new();
    for run in runs {
        let mut text = String::new();
        for (outcome, bbox) in run.frames.iter().zip(&run.boxes) {
            match outcome {
                super::FrameOutcome::Skipped => text.push_str("skip\n"),
                super::FrameOutcome::Failure => match bbox {
                    Some(b) => text.push_str(&format!(
                        "fail,{:.4},{:.4},{:.4},{:.4}\n",
                        b.x.to_f64().unwrap(),
                        b.y.to_f64().unwrap(),
                        b.w.to_f64().unwrap(),
                        b.h.to_f64().unwrap()
                    )),
                    None => text.push_str("fail\n"),
                },
                _ => match bbox {
                    Some(b) => text.push_str(&format!(
                        "{:.4},{:.4},{:.4},{:.4}\n",
                        b.x.to_f64().unwrap(),
                        b.y.to_f64().unwrap(),
                        b.w.to_f64().unwrap(),
                        b.h.to_f64().unwrap()
                    )),
                    None => text.push_str("skip\n"),
                },
            }
        }
        let path = traj_dir.join(format!("{}.txt", run.sequence));
        std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

/// Writes the report files into `dir` (created if missing).
pub fn write_reports<S: Scalar>(dir: &Path, files: &ReportFiles<'_, S>) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();

    let mut json = String::from("{\n");
    json.push_str(&format!("  \"protocol\": \"{}\",\n", esc(files.protocol)));
    if let Some(a) = files.accuracy {
        json.push_str(&format!("  \"accuracy\": {},\n", fmt6(a.value)));
        if !a.excluded.is_empty() {
            let list: Vec<String> = a.excluded.iter().map(|s| format!("\"{}\"", esc(s))).collect();
            json.push_str(&format!("  \"accuracy_excluded\": [{}],\n", list.join(", ")));
        }
    }
    if let Some(r) = files.robustness {
        json.push_str(&format!("  \"robustness\": {},\n", fmt6(r)));
    }
    if let Some(c) = files.eao {
        json.push_str(&format!("  \"eao\": {},\n", fmt6(c.eao)));
        json.push_str(&format!(
            "  \"eao_interval\": [{}, {}],\n",
            c.interval.0, c.interval.1
        ));
        json.push_str(&format!("  \"segments\": {},\n", c.segments));
    }
    if let Some(sc) = files.success {
        json.push_str(&format!("  \"auc\": {},\n", fmt6(sc.auc)));
    }
    json.push_str("  \"sequences\": [\n");
    for (i, run) in files.runs.iter().enumerate() {
        let overlaps = run.tracked_overlaps();
        let mean = if overlaps.is_empty() {
            S::zero()
        } else {
            overlaps.iter().copied().sum::<S>() / S::from_usize(overlaps.len()).unwrap()
        };
        json.push_str(&format!(
            "    {{\"name\": \"{}\", \"frames\": {}, \"failures\": {}, \"mean_overlap\": {}}}{}\n",
            esc(&run.sequence),
            run.frames.len(),
            run.failures.len(),
            fmt6(mean),
            if i + 1 == files.runs.len() { "" } else { "," }
        ));
    }
    json.push_str("  ]\n}\n");
    written.push(write_file(dir, "report.json", &json)?);

    if let Some(c) = files.eao {
        let mut csv = String::from("n_s,phi\n");
        for (i, phi) in c.phi.iter().enumerate() {
            csv.push_str(&format!("{},{}\n", i + 1, fmt6(*phi)));
        }
        written.push(write_file(dir, "eao_curve.csv", &csv)?);
    }

    if let Some(sc) = files.success {
        let mut csv = String::from("threshold,success\n");
        for (t, s) in sc.thresholds.iter().zip(&sc.success) {
            csv.push_str(&format!("{},{}\n", fmt6(*t), fmt6(*s)));
        }
        written.push(write_file(dir, "success_curve.csv", &csv)?);
    }

    if let Some(attrs) = files.attributes {
        let mut json = String::from("{\n");
        let last = attrs.len();
        for (i, (tag, curve)) in attrs.iter().enumerate() {
            json.push_str(&format!(
                "  \"{}\": {{\"eao\": {}, \"segments\": {}, \"interval\": [{}, {}]}}{}\n",
                esc(tag),
                fmt6(curve.eao),
                curve.segments,
                curve.interval.0,
                curve.interval.1,
                if i + 1 == last { "" } else { "," }
            ));
        }
        json.push_str("}\n");
        written.push(write_file(dir, "attributes.json", &json)?);
    }
    Ok(written)
}
