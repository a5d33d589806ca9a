use std::path::Path;

use thermotrack::error::{Error, Result};
use thermotrack::frame::Frame;
use thermotrack::translate::translation_distance;
use thermotrack::Real;

use crate::log_info;

fn load_sorted(dir: &Path) -> Result<Vec<(String, Frame)>> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| {
            matches!(
                p.extension().and_then(|e| e.to_str()),
                Some("png") | Some("pgm")
            )
        })
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Error::Dataset(format!(
            "no .png or .pgm images in {}",
            dir.display()
        )));
    }
    paths
        .iter()
        .map(|p| {
            let name = p
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            Ok((name, Frame::load(p)?))
        })
        .collect()
}

/// Scores translated frames against references: writes `distance.txt` with a
/// single `distance=<value>` line plus a per-frame CSV.
pub fn run(pred: &Path, gt: &Path, out: &Path) -> Result<()> {
    let pred_frames = load_sorted(pred)?;
    let gt_frames = load_sorted(gt)?;
    if pred_frames.len() != gt_frames.len() {
        return Err(Error::Dimension(format!(
            "{} predicted frames vs {} references",
            pred_frames.len(),
            gt_frames.len()
        )));
    }
    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;

    let mut csv = String::from("frame,rms\n");
    for ((name, p), (_, g)) in pred_frames.iter().zip(&gt_frames) {
        let d: Real = translation_distance(std::slice::from_ref(p), std::slice::from_ref(g))?;
        csv.push_str(&format!("{name},{d:.6}\n"));
    }
    let pred_only: Vec<Frame> = pred_frames.into_iter().map(|(_, f)| f).collect();
    let gt_only: Vec<Frame> = gt_frames.into_iter().map(|(_, f)| f).collect();
    let total: Real = translation_distance(&pred_only, &gt_only)?;

    let dist_path = out.join("distance.txt");
    std::fs::write(&dist_path, format!("distance={total:.6}\n"))
        .map_err(|e| Error::io(&dist_path, e))?;
    let csv_path = out.join("per_frame.csv");
    std::fs::write(&csv_path, csv).map_err(|e| Error::io(&csv_path, e))?;
    log_info!("distance = {total:.6}");
    Ok(())
}
