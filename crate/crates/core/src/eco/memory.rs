//! Weighted training-sample memory.
//!
//! Sample weights follow `alpha_j ~ (1 - gamma)^age_j`, renormalized to sum
//! one: on every insertion existing raw weights decay by `(1 - gamma)` and
//! the new sample enters with raw weight one. When the capacity would be
//! exceeded, the two most similar samples (smallest L2 distance between
//! projected coefficient blocks) are merged by weighted average, their raw
//! weights adding up.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::coeff::CoeffGrid;
use super::interp::InterpolatedSample;

#[derive(Debug, Clone, PartialEq)]
pub struct MemorySample<S> {
    pub sample: InterpolatedSample<S>,
    pub label: CoeffGrid<S>,
    raw_weight: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleMemory<S> {
    capacity: usize,
    learning_rate: S,
    samples: Vec<MemorySample<S>>,
}

impl<S: Scalar> SampleMemory<S> {
    pub fn new(capacity: usize, learning_rate: S) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::Config("memory capacity must be at least 1".into()));
        }
        if !(learning_rate > S::zero()) || !(learning_rate < S::one()) {
            return Err(Error::Config(format!(
                "learning rate must lie in (0, 1), got {learning_rate}"
            )));
        }
        Ok(SampleMemory {
            capacity,
            learning_rate,
            samples: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn learning_rate(&self) -> S {
        self.learning_rate
    }

    pub fn samples(&self) -> &[MemorySample<S>] {
        &self.samples
    }

    /// Raw (unnormalized) decay weights, exposed for serialization.
    pub fn raw_weights(&self) -> Vec<S> {
        self.samples.iter().map(|s| s.raw_weight).collect()
    }

    /// Replaces the contents with deserialized entries of
    /// `(sample, label, raw weight)`.
    pub fn restore(
        &mut self,
        entries: Vec<(InterpolatedSample<S>, CoeffGrid<S>, S)>,
    ) -> Result<()> {
        if entries.len() > self.capacity {
            return Err(Error::Config(format!(
                "{} entries exceed memory capacity {}",
                entries.len(),
                self.capacity
            )));
        }
        self.samples = entries
            .into_iter()
            .map(|(sample, label, raw_weight)| MemorySample {
                sample,
                label,
                raw_weight,
            })
            .collect();
        Ok(())
    }

    /// Normalized weights, summing to one.
    pub fn weights(&self) -> Vec<S> {
        let total: S = self.samples.iter().map(|s| s.raw_weight).sum();
        self.samples
            .iter()
            .map(|s| s.raw_weight / total)
            .collect()
    }

    /// Inserts a (projected) sample with its label: decays existing weights,
    /// appends the newcomer, and merges the closest pair when over capacity.
    pub fn insert(&mut self, sample: InterpolatedSample<S>, label: CoeffGrid<S>) {
        let decay = S::one() - self.learning_rate;
        for s in &mut self.samples {
            s.raw_weight *= decay;
        }
        self.samples.push(MemorySample {
            sample,
            label,
            raw_weight: S::one(),
        });
        if self.samples.len() > self.capacity {
            self.merge_closest_pair();
        }
    }

    fn merge_closest_pair(&mut self) {
        let n = self.samples.len();
        let mut best = (0usize, 1usize);
        let mut best_d = S::infinity();
        for i in 0..n {
            for j in i + 1..n {
                let d = self.samples[i].sample.distance_sqr(&self.samples[j].sample);
                if d < best_d {
                    best_d = d;
                    best = (i, j);
                }
            }
        }
        let (i, j) = best;
        let b = self.samples.remove(j);
        let a = &self.samples[i];
        let (wa, wb) = (a.raw_weight, b.raw_weight);
        let merged_sample = a.sample.blend(wa, &b.sample, wb);
        let merged_label = {
            let total = wa + wb;
            let mut l = a.label.clone();
            l.scale(wa / total);
            l.axpy(wb / total, &b.label);
            l
        };
        self.samples[i] = MemorySample {
            sample: merged_sample,
            label: merged_label,
            raw_weight: wa + wb,
        };
    }
}
