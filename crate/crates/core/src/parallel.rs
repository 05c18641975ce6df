//! Deterministic block-parallel helpers.
//!
//! Work is cut into fixed-size blocks whose boundaries do not depend on the
//! thread count. Block `b` draws from its own ChaCha stream, and per-block
//! results come back in block order, so any reduction over them is
//! bit-identical for every `--jobs` setting.

use std::ops::Range;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub const SAMPLE_BLOCK: usize = 1024;

pub fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

pub fn block_ranges(total: usize, block: usize) -> Vec<Range<usize>> {
    let block = block.max(1);
    (0..total.div_ceil(block)).map(|b| b * block..((b + 1) * block).min(total)).collect()
}

/// Runs `f(block_index, range)` over all blocks, possibly in parallel, and
/// returns the results in block order.
pub fn map_blocks<T, F>(total: usize, block: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, Range<usize>) -> T + Sync + Send,
{
    block_ranges(total, block)
        .into_par_iter()
        .enumerate()
        .map(|(b, r)| f(b, r))
        .collect()
}

/// Runs `f` on a dedicated pool with `jobs` threads (0 keeps the global pool).
pub fn with_jobs<R: Send>(jobs: usize, f: impl FnOnce() -> R + Send) -> R {
    if jobs == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Count, sum and sum of squares; merged strictly in block order.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub n: u64,
    pub sum: f64,
    pub sumsq: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sumsq += x * x;
    }

    pub fn merge(mut self, o: &Moments) -> Moments {
        self.n += o.n;
        self.sum += o.sum;
        self.sumsq += o.sumsq;
        self
    }

    pub fn merge_all<'a>(parts: impl IntoIterator<Item = &'a Moments>) -> Moments {
        parts.into_iter().fold(Moments::default(), |acc, m| acc.merge(m))
    }

    pub fn mean(&self) -> f64 {
        if self.n == 0 {
            return f64::NAN;
        }
        self.sum / self.n as f64
    }

    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let n = self.n as f64;
        ((self.sumsq - self.sum * self.sum / n) / (n - 1.0)).max(0.0)
    }

    pub fn stderr(&self) -> f64 {
        if self.n == 0 {
            return f64::NAN;
        }
        (self.variance() / self.n as f64).sqrt()
    }
}
