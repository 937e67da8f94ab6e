//! Exact summation of `f64` values with correct round-to-nearest-even.
//!
//! Two accumulators are provided. [`SmallAccumulator`] keeps 67 overlapping
//! 64-bit chunks and is the faster choice for short sums.
//! [`LargeAccumulator`] keeps one chunk per sign/exponent pair in front of a
//! small accumulator, so each term costs a single integer add; it pays off
//! beyond roughly a thousand terms. Both produce the exact sum, independent
//! of term order, and round once at the end.
//!
//! ```
//! use exactsum::{exact_sum, ExactMethod};
//!
//! let v = [1e16, 1.0, -1e16];
//! assert_eq!(exact_sum(&v, ExactMethod::Small), 1.0);
//! assert_eq!(v.iter().sum::<f64>(), 0.0);
//! ```

pub mod baselines;
pub mod error;
pub mod fpbits;
pub mod large;
pub mod parallel;
mod rounding;
pub mod small;
pub mod vector;

pub use baselines::{sum_kahan, sum_ordered, sum_unordered, BaselineMethod};
pub use error::{Error, Result};
pub use fpbits::{decompose, FpClass, FpParts};
pub use large::LargeAccumulator;
pub use small::SmallAccumulator;
pub use vector::{
    dot, exact_mean, exact_sum, mean, parallel_exact_sum, parallel_exact_sum_with, sqnorm, sum,
    ExactMethod, SumMethod, UnknownMethod, DEFAULT_LARGE_THRESHOLD,
};
