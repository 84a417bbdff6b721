//! Portable sampling on top of ChaCha8.
//!
//! Streams are fixed by the seed alone: `ChaCha8Rng::seed_from_u64` expands
//! the seed, integers in a range use Lemire's widening-multiply rejection
//! method and reals use the top 53 bits of one `u64` draw.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub(crate) struct SampleRng {
    inner: ChaCha8Rng,
}

impl SampleRng {
    pub(crate) fn new(seed: u64) -> Self {
        SampleRng {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform integer in `lo..=hi`, without modulo bias.
    pub(crate) fn int_inclusive(&mut self, lo: u64, hi: u64) -> u64 {
        assert!(lo <= hi);
        let span = hi - lo;
        if span == u64::MAX {
            return self.inner.next_u64();
        }
        let range = span + 1;
        let threshold = range.wrapping_neg() % range;
        loop {
            let m = (self.inner.next_u64() as u128) * (range as u128);
            if (m as u64) >= threshold {
                return lo + (m >> 64) as u64;
            }
        }
    }

    /// Uniform real in `[0, 1)` with 53 bits of resolution.
    pub(crate) fn unit(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform real in `[lo, hi)`; returns `lo` when the interval is empty.
    pub(crate) fn real(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }
}
