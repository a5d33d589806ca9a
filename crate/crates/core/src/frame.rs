//! 8-bit image frames.

use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

/// A single video frame: row-major interleaved 8-bit samples, 1 (gray) or 3
/// (RGB) channels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<u8>,
}

impl Frame {
    pub fn new(width: usize, height: usize, channels: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Dimension("frame dimensions must be nonzero".into()));
        }
        if channels != 1 && channels != 3 {
            return Err(Error::Dimension(format!(
                "frame must have 1 or 3 channels, got {channels}"
            )));
        }
        if data.len() != width * height * channels {
            return Err(Error::Dimension(format!(
                "pixel count {} does not match {}x{}x{}",
                data.len(),
                width,
                height,
                channels
            )));
        }
        Ok(Frame {
            width,
            height,
            channels,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        Frame {
            width,
            height,
            channels: 1,
            data: vec![value; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, c: usize) -> u8 {
        self.data[(y * self.width + x) * self.channels + c]
    }

    /// Sample with edge replication: out-of-range coordinates clamp to the
    /// nearest valid pixel.
    #[inline]
    pub fn get_replicated(&self, x: isize, y: isize, c: usize) -> u8 {
        let xc = x.clamp(0, self.width as isize - 1) as usize;
        let yc = y.clamp(0, self.height as isize - 1) as usize;
        self.get(xc, yc, c)
    }

    /// Grayscale view of the frame. Single-channel frames pass through;
    /// RGB frames use Rec. 601 luma weights.
    pub fn luma<S: Scalar>(&self) -> Vec<S> {
        match self.channels {
            1 => self.data.iter().map(|&v| lit::<S>(v as f64)).collect(),
            _ => {
                let (wr, wg, wb) = (lit::<S>(0.299), lit::<S>(0.587), lit::<S>(0.114));
                self.data
                    .chunks_exact(3)
                    .map(|p| {
                        wr * lit::<S>(p[0] as f64)
                            + wg * lit::<S>(p[1] as f64)
                            + wb * lit::<S>(p[2] as f64)
                    })
                    .collect()
            }
        }
    }

    /// Grayscale 8-bit copy (identity for single-channel frames).
    pub fn to_gray(&self) -> Frame {
        if self.channels == 1 {
            return self.clone();
        }
        let luma: Vec<f64> = self.luma();
        let data = luma
            .into_iter()
            .map(|v| v.round().clamp(0.0, 255.0) as u8)
            .collect();
        Frame {
            width: self.width,
            height: self.height,
            channels: 1,
            data,
        }
    }

    /// Loads a frame from a PNG or PGM/PPM file (detected by content).
    pub fn load(path: &Path) -> Result<Self> {
        let img = image::open(path).map_err(|e| Error::Dataset(format!(
            "cannot decode image {}: {e}",
            path.display()
        )))?;
        match img {
            image::DynamicImage::ImageLuma8(g) => {
                let (w, h) = (g.width() as usize, g.height() as usize);
                Frame::new(w, h, 1, g.into_raw())
            }
            other => {
                let rgb = other.to_rgb8();
                let (w, h) = (rgb.width() as usize, rgb.height() as usize);
                Frame::new(w, h, 3, rgb.into_raw())
            }
        }
    }

    /// Saves the frame as PNG (or PGM when the extension is `.pgm`).
    pub fn save(&self, path: &Path) -> Result<()> {
        let save = |r: std::result::Result<(), image::ImageError>| {
            r.map_err(|e| Error::Dataset(format!("cannot encode image {}: {e}", path.display())))
        };
        match self.channels {
            1 => {
                let img = image::GrayImage::from_raw(
                    self.width as u32,
                    self.height as u32,
                    self.data.clone(),
                )
                .expect("buffer size checked at construction");
                save(img.save(path))
            }
            _ => {
                let img = image::RgbImage::from_raw(
                    self.width as u32,
                    self.height as u32,
                    self.data.clone(),
                )
                .expect("buffer size checked at construction");
                save(img.save(path))
            }
        }
    }
}
