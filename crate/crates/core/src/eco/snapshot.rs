//! Versioned binary model snapshots.
//!
//! Layout (all integers and floats little-endian):
//! magic `b"TTRK"`, format version `u32`, then the filter (channel count,
//! common bandwidth, per-channel mask bandwidths, coefficients as f64
//! re/im pairs), the projection matrix, and the sample memory (capacity,
//! learning rate, and per sample its raw weight, label and coefficient
//! blocks).

use std::io::{Read, Write};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::coeff::CoeffGrid;
use super::interp::InterpolatedSample;
use super::memory::SampleMemory;
use super::projection::ProjectionMatrix;
use super::score::ContinuousFilter;

const MAGIC: &[u8; 4] = b"TTRK";
const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSnapshot<S> {
    pub filter: ContinuousFilter<S>,
    pub projection: ProjectionMatrix<S>,
    pub memory: SampleMemory<S>,
}

fn io_err(e: std::io::Error) -> Error {
    Error::Io {
        path: "<snapshot stream>".into(),
        source: e,
    }
}

struct Writer<'a, W: Write>(&'a mut W);

impl<W: Write> Writer<'_, W> {
    fn u32(&mut self, v: u32) -> Result<()> {
        self.0.write_all(&v.to_le_bytes()).map_err(io_err)
    }

    fn u64(&mut self, v: u64) -> Result<()> {
        self.0.write_all(&v.to_le_bytes()).map_err(io_err)
    }

    fn f64(&mut self, v: f64) -> Result<()> {
        self.0.write_all(&v.to_le_bytes()).map_err(io_err)
    }

    fn grid<S: Scalar>(&mut self, g: &CoeffGrid<S>) -> Result<()> {
        self.u32(g.bandwidth() as u32)?;
        for c in g.data() {
            self.f64(c.re.to_f64().unwrap())?;
            self.f64(c.im.to_f64().unwrap())?;
        }
        Ok(())
    }
}

struct Reader<'a, R: Read>(&'a mut R);

impl<R: Read> Reader<'_, R> {
    fn u32(&mut self) -> Result<u32> {
        let mut b = [0u8; 4];
        self.0.read_exact(&mut b).map_err(io_err)?;
        Ok(u32::from_le_bytes(b))
    }

    fn u64(&mut self) -> Result<u64> {
        let mut b = [0u8; 8];
        self.0.read_exact(&mut b).map_err(io_err)?;
        Ok(u64::from_le_bytes(b))
    }

    fn f64(&mut self) -> Result<f64> {
        let mut b = [0u8; 8];
        self.0.read_exact(&mut b).map_err(io_err)?;
        Ok(f64::from_le_bytes(b))
    }

    fn grid<S: Scalar>(&mut self) -> Result<CoeffGrid<S>> {
        let bw = self.u32()? as usize;
        if bw > 4096 {
            return Err(Error::Parse {
                path: "<snapshot stream>".into(),
                line: 0,
                message: format!("implausible bandwidth {bw}"),
            });
        }
        let mut g = CoeffGrid::zeros(bw);
        for v in g.data_mut() {
            let re = self.f64()?;
            let im = self.f64()?;
            *v = Complex::new(
                S::from_f64(re).unwrap_or_else(S::zero),
                S::from_f64(im).unwrap_or_else(S::zero),
            );
        }
        Ok(g)
    }
}

impl<S: Scalar> ModelSnapshot<S> {
    pub fn write_to<W: Write>(&self, out: &mut W) -> Result<()> {
        out.write_all(MAGIC).map_err(io_err)?;
        let mut w = Writer(out);
        w.u32(VERSION)?;

        w.u32(self.filter.channel_count() as u32)?;
        for (ch, &bw) in self.filter.channels.iter().zip(&self.filter.bandwidths) {
            w.u32(bw as u32)?;
            w.grid(ch)?;
        }

        w.u32(self.projection.rows() as u32)?;
        w.u32(self.projection.cols() as u32)?;
        for v in self.projection.data() {
            w.f64(v.to_f64().unwrap())?;
        }

        w.u64(self.memory.capacity() as u64)?;
        w.f64(self.memory.learning_rate().to_f64().unwrap())?;
        w.u64(self.memory.len() as u64)?;
        let raw = self.memory.raw_weights();
        for (entry, weight) in self.memory.samples().iter().zip(raw) {
            w.f64(weight.to_f64().unwrap())?;
            w.grid(&entry.label)?;
            w.u32(entry.sample.channels.len() as u32)?;
            for (ch, &bw) in entry.sample.channels.iter().zip(&entry.sample.bandwidths) {
                w.u32(bw as u32)?;
                w.grid(ch)?;
            }
        }
        Ok(())
    }

    pub fn read_from<R: Read>(input: &mut R) -> Result<Self> {
        let mut magic = [0u8; 4];
        input.read_exact(&mut magic).map_err(io_err)?;
        if &magic != MAGIC {
            return Err(Error::Parse {
                path: "<snapshot stream>".into(),
                line: 0,
                message: "bad magic; not a model snapshot".into(),
            });
        }
        let mut r = Reader(input);
        let version = r.u32()?;
        if version != VERSION {
            return Err(Error::Parse {
                path: "<snapshot stream>".into(),
                line: 0,
                message: format!("unsupported snapshot version {version}"),
            });
        }

        let nch = r.u32()? as usize;
        let mut channels = Vec::with_capacity(nch);
        let mut bandwidths = Vec::with_capacity(nch);
        for _ in 0..nch {
            bandwidths.push(r.u32()? as usize);
            channels.push(r.grid()?);
        }
        let filter = ContinuousFilter {
            channels,
            bandwidths,
        };

        let rows = r.u32()? as usize;
        let cols = r.u32()? as usize;
        let mut pdata = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            pdata.push(S::from_f64(r.f64()?).unwrap_or_else(S::zero));
        }
        let projection = ProjectionMatrix::new(rows, cols, pdata)?;

        let capacity = r.u64()? as usize;
        let rate = S::from_f64(r.f64()?).unwrap_or_else(|| S::from_f64(0.003).unwrap());
        let count = r.u64()? as usize;
        let mut memory = SampleMemory::new(capacity, rate)?;
        let mut entries = Vec::with_capacity(count);
        for _ in 0..count {
            let weight = S::from_f64(r.f64()?).unwrap_or_else(S::one);
            let label = r.grid()?;
            let nch = r.u32()? as usize;
            let mut channels = Vec::with_capacity(nch);
            let mut bandwidths = Vec::with_capacity(nch);
            for _ in 0..nch {
                bandwidths.push(r.u32()? as usize);
                channels.push(r.grid()?);
            }
            entries.push((
                InterpolatedSample {
                    channels,
                    bandwidths,
                },
                label,
                weight,
            ));
        }
        memory.restore(entries)?;
        Ok(ModelSnapshot {
            filter,
            projection,
            memory,
        })
    }
}
