//! Sequence-directory ingestion.
//!
//! A sequence directory holds ordered image files (`.png` or `.pgm`, sorted
//! in natural order) and a `groundtruth.txt` with one comma-separated line
//! per frame: either `x,y,w,h` or an eight-value polygon that collapses to
//! its bounding rectangle. Optional annotations live under `attributes/`:
//! `<tag>.tag` files with one `0`/`1` per frame, and `sequence.txt` with one
//! sequence-level tag per line.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::geometry::{BoundingBox, Polygon};
use crate::scalar::Scalar;
use crate::sequence::{FrameSource, Sequence};

/// Digit-aware filename ordering, so `2.png` sorts before `10.png`.
fn natural_cmp(a: &str, b: &str) -> std::cmp::Ordering {
    let mut ai = a.chars().peekable();
    let mut bi = b.chars().peekable();
    loop {
        match (ai.peek().copied(), bi.peek().copied()) {
            (None, None) => return std::cmp::Ordering::Equal,
            (None, Some(_)) => return std::cmp::Ordering::Less,
            (Some(_), None) => return std::cmp::Ordering::Greater,
            (Some(x), Some(y)) if x.is_ascii_digit() && y.is_ascii_digit() => {
                let mut na = 0u64;
                while let Some(c) = ai.peek().copied().filter(|c| c.is_ascii_digit()) {
                    na = na * 10 + c.to_digit(10).unwrap() as u64;
                    ai.next();
                }
                let mut nb = 0u64;
                while let Some(c) = bi.peek().copied().filter(|c| c.is_ascii_digit()) {
                    nb = nb * 10 + c.to_digit(10).unwrap() as u64;
                    bi.next();
                }
                match na.cmp(&nb) {
                    std::cmp::Ordering::Equal => {}
                    other => return other,
                }
            }
            (Some(x), Some(y)) => match x.cmp(&y) {
                std::cmp::Ordering::Equal => {
                    ai.next();
                    bi.next();
                }
                other => return other,
            },
        }
    }
}

fn parse_gt_line<S: Scalar>(path: &Path, lineno: usize, line: &str) -> Result<BoundingBox<S>> {
    let parse_err = |message: String| Error::Parse {
        path: path.display().to_string(),
        line: lineno,
        message,
    };
    let fields: Vec<f64> = line
        .split(',')
        .map(|f| {
            f.trim()
                .parse::<f64>()
                .map_err(|e| parse_err(format!("bad number {f:?}: {e}")))
        })
        .collect::<Result<_>>()?;
    let to_s = |v: f64| S::from_f64(v).unwrap();
    match fields.len() {
        4 => BoundingBox::new(to_s(fields[0]), to_s(fields[1]), to_s(fields[2]), to_s(fields[3]))
            .map_err(|e| parse_err(e.to_string())),
        8 => {
            let poly = Polygon::new([
                (to_s(fields[0]), to_s(fields[1])),
                (to_s(fields[2]), to_s(fields[3])),
                (to_s(fields[4]), to_s(fields[5])),
                (to_s(fields[6]), to_s(fields[7])),
            ])
            .map_err(|e| parse_err(e.to_string()))?;
            poly.bounding_box().map_err(|e| parse_err(e.to_string()))
        }
        n => Err(parse_err(format!("expected 4 or 8 values, got {n}"))),
    }
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text.lines().map(str::to_string).collect())
}

/// Loads one sequence directory. Frames decode lazily on access.
pub fn load_sequence<S: Scalar>(dir: &Path) -> Result<Sequence<S>> {
    let name = dir
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "sequence".to_string());

    let mut images: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| {
            matches!(
                p.extension().and_then(|e| e.to_str()),
                Some("png") | Some("pgm")
            )
        })
        .collect();
    images.sort_by(|a, b| {
        natural_cmp(
            &a.file_name().unwrap_or_default().to_string_lossy(),
            &b.file_name().unwrap_or_default().to_string_lossy(),
        )
    });
    if images.is_empty() {
        return Err(Error::Dataset(format!(
            "no .png or .pgm frames in {}",
            dir.display()
        )));
    }

    let gt_path = dir.join("groundtruth.txt");
    let gt_lines: Vec<String> = read_lines(&gt_path)?
        .into_iter()
        .filter(|l| !l.trim().is_empty())
        .collect();
    if gt_lines.len() != images.len() {
        return Err(Error::Dataset(format!(
            "sequence {name}: {} images but {} ground-truth lines",
            images.len(),
            gt_lines.len()
        )));
    }
    let groundtruth: Vec<BoundingBox<S>> = gt_lines
        .iter()
        .enumerate()
        .map(|(i, line)| parse_gt_line(&gt_path, i + 1, line))
        .collect::<Result<_>>()?;

    let mut frame_attributes = vec![BTreeSet::new(); images.len()];
    let mut sequence_attributes = BTreeSet::new();
    let attr_dir = dir.join("attributes");
    if attr_dir.is_dir() {
        let mut tag_files: Vec<PathBuf> = std::fs::read_dir(&attr_dir)
            .map_err(|e| Error::io(&attr_dir, e))?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .collect();
        tag_files.sort();
        for tf in tag_files {
            match tf.extension().and_then(|e| e.to_str()) {
                Some("tag") => {
                    let tag = tf
                        .file_stem()
                        .map(|s| s.to_string_lossy().into_owned())
                        .unwrap_or_default();
                    let lines = read_lines(&tf)?;
                    let flags: Vec<&String> =
                        lines.iter().filter(|l| !l.trim().is_empty()).collect();
                    if flags.len() != images.len() {
                        return Err(Error::Dataset(format!(
                            "tag file {} has {} lines for {} frames",
                            tf.display(),
                            flags.len(),
                            images.len()
                        )));
                    }
                    for (i, flag) in flags.iter().enumerate() {
                        if flag.trim() != "0" {
                            frame_attributes[i].insert(tag.clone());
                        }
                    }
                }
                _ if tf.file_name().and_then(|s| s.to_str()) == Some("sequence.txt") => {
                    for line in read_lines(&tf)? {
                        let t = line.trim();
                        if !t.is_empty() {
                            sequence_attributes.insert(t.to_string());
                        }
                    }
                }
                _ => {}
            }
        }
    }

    Sequence::new(
        name,
        images.into_iter().map(FrameSource::Path).collect(),
        groundtruth,
        frame_attributes,
        sequence_attributes,
    )
}

/// A dataset root: one subdirectory per sequence.
#[derive(Debug, Clone)]
pub struct DatasetManifest {
    pub root: PathBuf,
    pub sequences: Vec<String>,
}

/// Scans a dataset root and validates that every sequence loads.
pub fn scan_dataset(root: &Path) -> Result<DatasetManifest> {
    let mut sequences: Vec<String> = std::fs::read_dir(root)
        .map_err(|e| Error::io(root, e))?
        .filter_map(|entry| entry.ok())
        .filter(|e| e.path().is_dir())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .collect();
    sequences.sort();
    if sequences.is_empty() {
        return Err(Error::Dataset(format!(
            "no sequence directories under {}",
            root.display()
        )));
    }
    Ok(DatasetManifest {
        root: root.to_path_buf(),
        sequences,
    })
}

/// Loads every sequence of a dataset.
pub fn load_dataset<S: Scalar>(root: &Path) -> Result<Vec<Sequence<S>>> {
    let manifest = scan_dataset(root)?;
    manifest
        .sequences
        .iter()
        .map(|name| {
            let seq = load_sequence(&manifest.root.join(name))?;
            if seq.len() < 2 {
                return Err(Error::Dataset(format!(
                    "sequence {name} has fewer than 2 frames"
                )));
            }
            Ok(seq)
        })
        .collect()
}
