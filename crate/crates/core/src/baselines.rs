//! Inexact reference summers used for contrast and benchmarking.
//!
//! These rely on strict IEEE semantics: Rust never reassociates float
//! arithmetic, so each result is bit-deterministic for a given input order.

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaselineMethod {
    Ordered,
    Unordered,
    Kahan,
}

impl BaselineMethod {
    pub fn sum(self, values: &[f64]) -> f64 {
        self.sum_terms(values.iter().copied())
    }

    pub fn sum_terms(self, terms: impl IntoIterator<Item = f64>) -> f64 {
        match self {
            BaselineMethod::Ordered => sum_ordered(terms),
            BaselineMethod::Unordered => sum_unordered(terms),
            BaselineMethod::Kahan => sum_kahan(terms),
        }
    }
}

/// Left-to-right fold into one double.
pub fn sum_ordered(terms: impl IntoIterator<Item = f64>) -> f64 {
    let mut s = 0.0;
    for v in terms {
        s += v;
    }
    s
}

/// Separate accumulators for even and odd positions, added at the end.
/// With an odd count the last term lands in the even accumulator.
pub fn sum_unordered(terms: impl IntoIterator<Item = f64>) -> f64 {
    let mut terms = terms.into_iter();
    let (mut even, mut odd) = (0.0, 0.0);
    while let Some(a) = terms.next() {
        even += a;
        match terms.next() {
            Some(b) => odd += b,
            None => break,
        }
    }
    even + odd
}

/// Classic Kahan compensated summation.
pub fn sum_kahan(terms: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for v in terms {
        let y = v - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_inputs_give_positive_zero() {
        for m in [
            BaselineMethod::Ordered,
            BaselineMethod::Unordered,
            BaselineMethod::Kahan,
        ] {
            assert_eq!(m.sum(&[]).to_bits(), 0);
        }
    }

    #[test]
    fn ordered_cases() {
        assert_eq!(sum_ordered([1e16, 1.0, -1e16]), 0.0);
        assert_eq!(sum_ordered([1.7e308, 1.7e308, -1.7e308]), f64::INFINITY);
    }

    #[test]
    fn unordered_cases() {
        assert_eq!(sum_unordered([0.25, 3.0]), 3.25);
        let v = [1.0, 1e-16, 1.0, 1e-16];
        assert_eq!(
            sum_unordered(v).to_bits(),
            ((1.0f64 + 1.0) + (1e-16f64 + 1e-16)).to_bits()
        );
        assert_eq!(
            sum_unordered([1.0, 2.0, 4.0]).to_bits(),
            ((1.0f64 + 4.0) + 2.0).to_bits()
        );
    }

    #[test]
    fn kahan_cases() {
        assert_eq!(sum_kahan([1.0, 2.0, 3.0]), 6.0);
        // the -1 compensation is applied to the next term, but -1e16 + 1 rounds
        // back to -1e16, so the correction is lost
        assert_eq!(sum_kahan([1e16, 1.0, -1e16]), 0.0);
        // small terms absorbed by ordered summation are recovered
        let mut v = vec![1.0];
        v.extend([1e-16; 10]);
        assert_eq!(sum_ordered(v.iter().copied()), 1.0);
        assert_eq!(sum_kahan(v.iter().copied()), 1.000000000000001);
    }

    proptest! {
        #[test]
        fn ordered_matches_naive_fold(values in prop::collection::vec(any::<f64>(), 0..100)) {
            let naive = values.iter().fold(0.0f64, |a, &b| a + b);
            prop_assert_eq!(sum_ordered(values.iter().copied()).to_bits(), naive.to_bits());
        }

        #[test]
        fn baselines_are_deterministic(values in prop::collection::vec(-1e10f64..1e10, 0..100)) {
            for m in [BaselineMethod::Ordered, BaselineMethod::Unordered, BaselineMethod::Kahan] {
                prop_assert_eq!(m.sum(&values).to_bits(), m.sum(&values).to_bits());
            }
        }
    }
}
