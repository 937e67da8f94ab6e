//! Exact and baseline sums, squared norms, dot products and means.

use std::fmt;
use std::str::FromStr;

use crate::baselines::BaselineMethod;
use crate::error::{Error, Result};
use crate::large::LargeAccumulator;
use crate::parallel;
use crate::small::SmallAccumulator;

/// Above this many terms the large accumulator is usually faster.
pub const DEFAULT_LARGE_THRESHOLD: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExactMethod {
    Small,
    Large,
}

impl ExactMethod {
    pub fn auto(len: usize, large_threshold: usize) -> Self {
        if len > large_threshold {
            ExactMethod::Large
        } else {
            ExactMethod::Small
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SumMethod {
    Small,
    Large,
    Ordered,
    Unordered,
    Kahan,
}

impl SumMethod {
    pub const ALL: [SumMethod; 5] = [
        SumMethod::Small,
        SumMethod::Large,
        SumMethod::Ordered,
        SumMethod::Unordered,
        SumMethod::Kahan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SumMethod::Small => "small",
            SumMethod::Large => "large",
            SumMethod::Ordered => "ordered",
            SumMethod::Unordered => "unordered",
            SumMethod::Kahan => "kahan",
        }
    }

    pub fn exact(self) -> Option<ExactMethod> {
        match self {
            SumMethod::Small => Some(ExactMethod::Small),
            SumMethod::Large => Some(ExactMethod::Large),
            _ => None,
        }
    }

    pub fn baseline(self) -> Option<BaselineMethod> {
        match self {
            SumMethod::Ordered => Some(BaselineMethod::Ordered),
            SumMethod::Unordered => Some(BaselineMethod::Unordered),
            SumMethod::Kahan => Some(BaselineMethod::Kahan),
            _ => None,
        }
    }

    pub fn is_exact(self) -> bool {
        self.exact().is_some()
    }
}

impl From<ExactMethod> for SumMethod {
    fn from(m: ExactMethod) -> Self {
        match m {
            ExactMethod::Small => SumMethod::Small,
            ExactMethod::Large => SumMethod::Large,
        }
    }
}

impl fmt::Display for SumMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownMethod(pub String);

impl fmt::Display for UnknownMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown method `{}` (expected small, large, ordered, unordered or kahan)",
            self.0
        )
    }
}

impl std::error::Error for UnknownMethod {}

impl FromStr for SumMethod {
    type Err = UnknownMethod;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        SumMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| UnknownMethod(s.to_string()))
    }
}

/// Runs `fill` against the chosen exact accumulator and hands back the
/// condensed small accumulator.
fn accumulate(
    method: ExactMethod,
    fill_small: impl FnOnce(&mut SmallAccumulator),
    fill_large: impl FnOnce(&mut LargeAccumulator),
) -> SmallAccumulator {
    match method {
        ExactMethod::Small => {
            let mut acc = SmallAccumulator::new();
            fill_small(&mut acc);
            acc
        }
        ExactMethod::Large => {
            let mut acc = LargeAccumulator::new();
            fill_large(&mut acc);
            acc.into_small()
        }
    }
}

pub fn exact_sum(values: &[f64], method: ExactMethod) -> f64 {
    accumulate(method, |a| a.add_slice(values), |a| a.add_slice(values)).round()
}

pub fn sum(values: &[f64], method: SumMethod) -> f64 {
    match (method.exact(), method.baseline()) {
        (Some(m), _) => exact_sum(values, m),
        (_, Some(b)) => b.sum(values),
        _ => unreachable!(),
    }
}

/// Sum of rounded squares.
pub fn sqnorm(values: &[f64], method: SumMethod) -> f64 {
    match (method.exact(), method.baseline()) {
        (Some(m), _) => accumulate(m, |a| a.add_sqnorm(values), |a| a.add_sqnorm(values)).round(),
        (_, Some(b)) => b.sum_terms(values.iter().map(|&v| v * v)),
        _ => unreachable!(),
    }
}

/// Sum of rounded elementwise products.
pub fn dot(a: &[f64], b: &[f64], method: SumMethod) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(match (method.exact(), method.baseline()) {
        (Some(m), _) => accumulate(m, |acc| acc.add_dot(a, b), |acc| acc.add_dot(a, b)).round(),
        (_, Some(base)) => base.sum_terms(a.iter().zip(b).map(|(&x, &y)| x * y)),
        _ => unreachable!(),
    })
}

/// Correctly rounded mean of the exact sum.
pub fn exact_mean(values: &[f64], method: ExactMethod) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    accumulate(method, |a| a.add_slice(values), |a| a.add_slice(values)).mean(values.len() as u64)
}

/// Mean by any method; baselines divide their rounded sum by the count.
pub fn mean(values: &[f64], method: SumMethod) -> Result<f64> {
    match (method.exact(), method.baseline()) {
        (Some(m), _) => exact_mean(values, m),
        (_, Some(b)) if !values.is_empty() => Ok(b.sum(values) / values.len() as f64),
        _ => Err(Error::EmptyInput),
    }
}

pub fn parallel_exact_sum(values: &[f64], parts: usize) -> Result<f64> {
    parallel_exact_sum_with(values, parts, DEFAULT_LARGE_THRESHOLD)
}

pub fn parallel_exact_sum_with(
    values: &[f64],
    parts: usize,
    large_threshold: usize,
) -> Result<f64> {
    Ok(parallel::sum_segments(values, parts, large_threshold)?.round())
}
