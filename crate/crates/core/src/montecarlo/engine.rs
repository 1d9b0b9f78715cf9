//! Chunked, seed-deterministic sampling.
//!
//! Sample n belongs to chunk n / chunk_size, and chunk c draws from stream
//! c of the master seed. Chunks run in parallel; their partial results are
//! always combined in chunk order, so the output does not depend on the
//! thread count.

use rayon::prelude::*;

use crate::distributions::{stream, Stream};
use crate::error::{Error, Result};

pub const DEFAULT_CHUNK_SIZE: u64 = 1 << 16;

/// Monte-Carlo run settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McSpec {
    pub master_seed: u64,
    pub n_samples: u64,
    pub chunk_size: u64,
}

impl McSpec {
    pub fn new(master_seed: u64, n_samples: u64) -> Self {
        Self {
            master_seed,
            n_samples,
            chunk_size: DEFAULT_CHUNK_SIZE,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples == 0 || self.chunk_size == 0 {
            return Err(Error::validation(format!(
                "n_samples and chunk_size must be positive, got {} and {}",
                self.n_samples, self.chunk_size
            )));
        }
        Ok(())
    }

    fn n_chunks(&self) -> u64 {
        self.n_samples.div_ceil(self.chunk_size)
    }
}

/// Runs `f(stream, count)` once per chunk and returns the results in chunk
/// order.
pub(crate) fn map_chunks<T, F>(mc: &McSpec, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut Stream, usize) -> T + Sync,
{
    mc.validate()?;
    let out = (0..mc.n_chunks())
        .into_par_iter()
        .map(|c| {
            let start = c * mc.chunk_size;
            let count = mc.chunk_size.min(mc.n_samples - start) as usize;
            let mut rng = stream(mc.master_seed, c);
            f(&mut rng, count)
        })
        .collect();
    Ok(out)
}

/// Running count, mean and sum of squared deviations (Welford), mergeable
/// with Chan's update.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct MeanVar {
    pub n: u64,
    pub mean: f64,
    pub m2: f64,
}

impl MeanVar {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(&mut self, o: &MeanVar) {
        if o.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *o;
            return;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        let (na, nb) = (self.n as f64, o.n as f64);
        self.mean += d * nb / n as f64;
        self.m2 += o.m2 + d * d * na * nb / n as f64;
        self.n = n;
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    pub fn std_error(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            (self.variance() / self.n as f64).sqrt()
        }
    }
}

/// Merges per-chunk accumulator rows in chunk order.
pub(crate) fn merge_rows(rows: Vec<Vec<MeanVar>>, width: usize) -> Vec<MeanVar> {
    let mut acc = vec![MeanVar::default(); width];
    for row in rows {
        for (a, r) in acc.iter_mut().zip(&row) {
            a.merge(r);
        }
    }
    acc
}
