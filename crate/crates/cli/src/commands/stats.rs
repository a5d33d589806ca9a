use std::path::Path;

use thermotrack::data::grad_histogram;
use thermotrack::error::{Error, Result};
use thermotrack::frame::Frame;
use thermotrack::Real;

use crate::log_info;

fn load_images(dir: &Path) -> Result<Vec<Frame>> {
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
    paths.iter().map(|p| Frame::load(p)).collect()
}

/// Writes the gradient-magnitude histogram of an image directory as CSV.
pub fn run(images: &Path, bins: usize, range: &str, out: &Path) -> Result<()> {
    let (lo, hi) = range
        .split_once(':')
        .ok_or_else(|| Error::Config(format!("range must be `lo:hi`, got {range:?}")))?;
    let lo: Real = lo
        .trim()
        .parse()
        .map_err(|e| Error::Config(format!("bad range low {lo:?}: {e}")))?;
    let hi: Real = hi
        .trim()
        .parse()
        .map_err(|e| Error::Config(format!("bad range high {hi:?}: {e}")))?;

    let frames = load_images(images)?;
    let hist = grad_histogram(&frames, bins, (lo, hi))?;
    if let Some(parent) = out.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
    }
    std::fs::write(out, hist.to_csv()).map_err(|e| Error::io(out, e))?;
    log_info!(
        "histogram of {} images ({bins} bins) written to {}",
        frames.len(),
        out.display()
    );
    Ok(())
}
