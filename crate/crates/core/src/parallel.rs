//! Split-merge exact summation.
//!
//! The input is cut into contiguous segments, each summed exactly into its
//! own accumulator, and the partial accumulators are merged in ascending
//! segment order. Merging is exact, so the rounded result does not depend on
//! the number of segments or on how they were scheduled.
//!
//! With the `parallel` feature the segments are summed on the rayon pool;
//! without it the same plan runs sequentially.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::large::LargeAccumulator;
use crate::small::SmallAccumulator;

/// Bounds of segment `part` when `len` items are split into `parts` pieces.
pub fn segment_bounds(len: usize, parts: usize, part: usize) -> Range<usize> {
    debug_assert!(part < parts);
    let at = |p: usize| ((len as u128 * p as u128) / parts as u128) as usize;
    at(part)..at(part + 1)
}

/// Exact partial sum of one segment; uses the large accumulator above
/// `large_threshold` terms.
pub fn accumulate_segment(segment: &[f64], large_threshold: usize) -> SmallAccumulator {
    if segment.len() > large_threshold {
        let mut large = LargeAccumulator::new();
        large.add_slice(segment);
        large.into_small()
    } else {
        let mut small = SmallAccumulator::new();
        small.add_slice(segment);
        small
    }
}

fn merge_in_order(partials: impl IntoIterator<Item = SmallAccumulator>) -> SmallAccumulator {
    let mut total = SmallAccumulator::new();
    for p in partials {
        total.merge(&p);
    }
    total
}

pub fn sum_segments_sequential(
    values: &[f64],
    parts: usize,
    large_threshold: usize,
) -> Result<SmallAccumulator> {
    if parts == 0 {
        return Err(Error::ZeroParts);
    }
    Ok(merge_in_order((0..parts).map(|p| {
        accumulate_segment(
            &values[segment_bounds(values.len(), parts, p)],
            large_threshold,
        )
    })))
}

#[cfg(feature = "parallel")]
pub fn sum_segments_parallel(
    values: &[f64],
    parts: usize,
    large_threshold: usize,
) -> Result<SmallAccumulator> {
    use rayon::prelude::*;

    if parts == 0 {
        return Err(Error::ZeroParts);
    }
    let partials: Vec<SmallAccumulator> = (0..parts)
        .into_par_iter()
        .map(|p| {
            accumulate_segment(
                &values[segment_bounds(values.len(), parts, p)],
                large_threshold,
            )
        })
        .collect();
    Ok(merge_in_order(partials))
}

/// Sums segments on the rayon pool when built with `parallel`, sequentially otherwise.
pub fn sum_segments(
    values: &[f64],
    parts: usize,
    large_threshold: usize,
) -> Result<SmallAccumulator> {
    #[cfg(feature = "parallel")]
    {
        sum_segments_parallel(values, parts, large_threshold)
    }
    #[cfg(not(feature = "parallel"))]
    {
        sum_segments_sequential(values, parts, large_threshold)
    }
}
