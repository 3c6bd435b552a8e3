//! Compensated summation and deterministic parallel reduction.
//!
//! Every long float reduction in this crate goes through [`KahanSum`] or
//! [`sum_over`]. Parallel sums are split into segments of a fixed width
//! that does not depend on the thread count; per-segment partials are
//! combined in ascending segment order, so results are bitwise identical
//! for any `--threads` setting.

use rayon::prelude::*;

/// Width of a reduction segment. Fixed so that the segmentation (and hence
/// the rounding pattern) is independent of how many workers are available.
pub const SEGMENT_WIDTH: u64 = 1 << 16;

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Compensated sum of an iterator, sequential.
pub fn sum_iter<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    let mut acc = KahanSum::new();
    for v in iter {
        acc.add(v);
    }
    acc.value()
}

/// Compensated sum of `f(i)` for `i` in `[lo, hi)`, parallel over fixed
/// segments with ordered combination.
pub fn sum_over<F>(lo: u64, hi: u64, f: F) -> f64
where
    F: Fn(u64) -> f64 + Sync,
{
    if hi <= lo {
        return 0.0;
    }
    let n = hi - lo;
    let nseg = n.div_ceil(SEGMENT_WIDTH);
    let partials: Vec<f64> = (0..nseg)
        .into_par_iter()
        .map(|s| {
            let a = lo + s * SEGMENT_WIDTH;
            let b = (a + SEGMENT_WIDTH).min(hi);
            let mut acc = KahanSum::new();
            for i in a..b {
                acc.add(f(i));
            }
            acc.value()
        })
        .collect();
    sum_iter(partials)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensation_beats_naive() {
        // 1 + 1e-16 repeated: naive f64 addition loses the small terms.
        let mut acc = KahanSum::new();
        acc.add(1.0);
        for _ in 0..1000 {
            acc.add(1e-16);
        }
        assert!((acc.value() - (1.0 + 1000.0 * 1e-16)).abs() < 1e-18);
    }

    #[test]
    fn parallel_matches_sequential_combination() {
        let f = |i: u64| ((i % 97) as f64).sin() / ((i + 1) as f64);
        let par = sum_over(0, 1_000_000, f);
        // Same segmentation applied sequentially.
        let mut partials = Vec::new();
        let mut s = 0u64;
        while s < 1_000_000 {
            let e = (s + SEGMENT_WIDTH).min(1_000_000);
            let mut acc = KahanSum::new();
            for i in s..e {
                acc.add(f(i));
            }
            partials.push(acc.value());
            s = e;
        }
        assert_eq!(par.to_bits(), sum_iter(partials).to_bits());
    }

    #[test]
    fn empty_range_is_zero() {
        assert_eq!(sum_over(5, 5, |_| 1.0), 0.0);
        assert_eq!(sum_over(7, 3, |_| 1.0), 0.0);
    }
}
