use std::path::Path;

use thermotrack::data::load_sequence;
use thermotrack::error::{Error, Result};
use thermotrack::tracker::TrackState;
use thermotrack::Real;

use crate::log_info;

/// Runs the tracker once over a sequence (no resets) and writes
/// `trajectory.txt`: one `x,y,w,h` line per frame with four decimals, the
/// first line echoing the initialization box.
pub fn run(sequence: &Path, config: Option<&Path>, out: &Path) -> Result<()> {
    let cfg = super::load_config(config)?;
    super::echo_config(out, &cfg)?;

    let seq = load_sequence::<Real>(sequence)?;
    let gt = seq.groundtruth();
    let first = seq.frame(0)?;
    let mut state = TrackState::init(&first, gt[0], cfg.tracker.clone())?;

    let mut lines = String::new();
    let fmt = |b: &thermotrack::BBox| format!("{:.4},{:.4},{:.4},{:.4}\n", b.x, b.y, b.w, b.h);
    lines.push_str(&fmt(&gt[0]));
    for i in 1..seq.len() {
        let frame = seq.frame(i)?;
        let bbox = state.step(&frame)?;
        lines.push_str(&fmt(&bbox));
        log_info!("frame {i}/{}: box {:.1},{:.1}", seq.len() - 1, bbox.x, bbox.y);
    }
    let path = out.join("trajectory.txt");
    std::fs::write(&path, lines).map_err(|e| Error::io(&path, e))?;
    log_info!("trajectory written to {}", path.display());
    Ok(())
}
