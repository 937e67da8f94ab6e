//! Arbitrary-precision reference for exact `f64` summation.
//!
//! Every finite double is an integer multiple of 2^-1074, so an exact sum is
//! just a big integer counting units of 2^-1074. Rounding back to `f64` is done
//! by explicit quotient/remainder comparison on that integer, which keeps this
//! crate independent of any chunked or carry-save representation.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};

const MANTISSA_BITS: u32 = 52;
const EXP_SPECIAL: u64 = 0x7FF;
const MANTISSA_MASK: u64 = (1 << MANTISSA_BITS) - 1;

/// Exact value `numerator * 2^-1074`, plus IEEE special-value state.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExactValue {
    pub numerator: BigInt,
    /// +1 or -1 if an infinity of that sign was absorbed, 0 otherwise.
    pub has_inf: i8,
    pub has_nan: bool,
}

impl ExactValue {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_units(numerator: impl Into<BigInt>) -> Self {
        Self {
            numerator: numerator.into(),
            ..Self::default()
        }
    }

    pub fn add(&mut self, v: f64) {
        let bits = v.to_bits();
        let exp = (bits >> MANTISSA_BITS) & EXP_SPECIAL;
        let mantissa = bits & MANTISSA_MASK;
        let negative = bits >> 63 != 0;

        if exp == EXP_SPECIAL {
            if mantissa != 0 {
                self.has_nan = true;
            } else {
                let sign = if negative { -1 } else { 1 };
                if self.has_inf == 0 {
                    self.has_inf = sign;
                } else if self.has_inf != sign {
                    self.has_nan = true;
                }
            }
            return;
        }

        // value = significand * 2^(max(exp,1) - 1075) = (significand << (max(exp,1) - 1)) units
        let (significand, shift) = if exp == 0 {
            (mantissa, 0)
        } else {
            (mantissa | (1 << MANTISSA_BITS), exp - 1)
        };
        let mut term = BigInt::from(significand) << shift as usize;
        if negative {
            term = -term;
        }
        self.numerator += term;
    }

    pub fn merge(&mut self, other: &ExactValue) {
        self.numerator += &other.numerator;
        self.has_nan |= other.has_nan;
        if other.has_inf != 0 {
            if self.has_inf == 0 {
                self.has_inf = other.has_inf;
            } else if self.has_inf != other.has_inf {
                self.has_nan = true;
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        !self.has_nan && self.has_inf == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleError {
    ZeroDivisor,
}

impl std::fmt::Display for OracleError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("divisor must be a positive integer")
    }
}

impl std::error::Error for OracleError {}

/// Exact sum of `values` with IEEE special-value semantics.
pub fn oracle_sum<'a>(values: impl IntoIterator<Item = &'a f64>) -> ExactValue {
    let mut ev = ExactValue::zero();
    for &v in values {
        ev.add(v);
    }
    ev
}

/// Exact sum of arbitrary `f64` terms (e.g. already-rounded products).
pub fn oracle_sum_terms(terms: impl IntoIterator<Item = f64>) -> ExactValue {
    let mut ev = ExactValue::zero();
    for v in terms {
        ev.add(v);
    }
    ev
}

/// Nearest-even rounding of the exact value. Exact zero gives +0.0.
pub fn oracle_round(ev: &ExactValue) -> f64 {
    if let Some(special) = special_result(ev) {
        return special;
    }
    round_rational(&ev.numerator, &BigUint::one())
}

/// Nearest-even rounding of `ev / n`.
pub fn oracle_mean(ev: &ExactValue, n: u64) -> Result<f64, OracleError> {
    if n == 0 {
        return Err(OracleError::ZeroDivisor);
    }
    if let Some(special) = special_result(ev) {
        return Ok(special);
    }
    Ok(round_rational(&ev.numerator, &BigUint::from(n)))
}

fn special_result(ev: &ExactValue) -> Option<f64> {
    if ev.has_nan {
        Some(f64::NAN)
    } else if ev.has_inf > 0 {
        Some(f64::INFINITY)
    } else if ev.has_inf < 0 {
        Some(f64::NEG_INFINITY)
    } else {
        None
    }
}

/// Rounds `num / den` units of 2^-1074 to the nearest double, ties to even.
fn round_rational(num: &BigInt, den: &BigUint) -> f64 {
    let (sign, mag) = num.clone().into_parts();
    if mag.is_zero() {
        return 0.0;
    }
    let negative = sign == Sign::Minus;

    // Subnormal range: value < 2^-1022, i.e. mag/den < 2^52 units; quantum is one unit.
    let min_normal = den << MANTISSA_BITS as usize;
    let bits = if mag < min_normal {
        round_div(&mag, den)
            .try_into()
            .expect("subnormal quotient fits in u64")
    } else {
        // Pick t so that 2^52 <= mag / (den * 2^t) < 2^53.
        let mut t = mag.bits() as i64 - den.bits() as i64 - MANTISSA_BITS as i64;
        loop {
            let q = scaled_floor(&mag, den, t);
            if q < BigUint::one() << MANTISSA_BITS as usize {
                t -= 1;
            } else if q >= BigUint::one() << (MANTISSA_BITS + 1) as usize {
                t += 1;
            } else {
                break;
            }
        }
        let (n, d) = scaled_fraction(&mag, den, t);
        let mut r: u64 = round_div(&n, &d).try_into().expect("53-bit quotient");
        if r == 1 << (MANTISSA_BITS + 1) {
            r >>= 1;
            t += 1;
        }
        // value = r * 2^(t - 1074) = r * 2^(e - 1075)
        let e = t + 1;
        if e >= EXP_SPECIAL as i64 {
            return if negative {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            };
        }
        ((e as u64) << MANTISSA_BITS) | (r & MANTISSA_MASK)
    };
    let bits = if negative { bits | (1 << 63) } else { bits };
    f64::from_bits(bits)
}

/// `(mag * 2^-t, den)` or `(mag, den * 2^t)` depending on the sign of `t`.
fn scaled_fraction(mag: &BigUint, den: &BigUint, t: i64) -> (BigUint, BigUint) {
    if t >= 0 {
        (mag.clone(), den << t as usize)
    } else {
        (mag << (-t) as usize, den.clone())
    }
}

fn scaled_floor(mag: &BigUint, den: &BigUint, t: i64) -> BigUint {
    let (n, d) = scaled_fraction(mag, den, t);
    n / d
}

/// `n / d` rounded to nearest, ties to even, decided by comparing 2*remainder with `d`.
fn round_div(n: &BigUint, d: &BigUint) -> BigUint {
    let (q, r) = n.div_rem(d);
    let twice: BigUint = r << 1usize;
    match twice.cmp(d) {
        Ordering::Less => q,
        Ordering::Greater => q + 1u32,
        Ordering::Equal => {
            if q.is_odd() {
                q + 1u32
            } else {
                q
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pow2(k: usize) -> BigInt {
        BigInt::one() << k
    }

    #[test]
    fn sums_in_units_of_smallest_denormal() {
        assert_eq!(oracle_sum(&[]).numerator, BigInt::zero());
        let tiny = f64::from_bits(1);
        assert_eq!(oracle_sum(&[tiny, tiny]).numerator, BigInt::from(2));
        assert_eq!(oracle_sum(&[1.0]).numerator, pow2(1074));
    }

    #[test]
    fn rounds_zero_and_denormals_exactly() {
        assert_eq!(oracle_round(&ExactValue::zero()).to_bits(), 0);
        assert_eq!(oracle_round(&ExactValue::from_units(3)).to_bits(), 3);
        assert_eq!(
            oracle_round(&ExactValue::from_units(-3)).to_bits(),
            3 | 1 << 63
        );
    }

    #[test]
    fn half_ulp_of_one_ties_to_even() {
        let ev = ExactValue::from_units(pow2(1074) + pow2(1021));
        assert_eq!(oracle_round(&ev), 1.0);
        // 1 + 3 half-ulps is a tie between 1+ulp (odd) and 1+2ulp (even)
        let ev = ExactValue::from_units(pow2(1074) + pow2(1021) * 3);
        assert_eq!(oracle_round(&ev), 1.0 + 2.0 * f64::EPSILON);
    }

    #[test]
    fn overflow_and_specials() {
        let max = oracle_sum(&[f64::MAX, f64::MAX]);
        assert_eq!(oracle_round(&max), f64::INFINITY);
        assert!(oracle_round(&oracle_sum(&[f64::INFINITY, f64::NEG_INFINITY])).is_nan());
        assert_eq!(
            oracle_round(&oracle_sum(&[f64::NEG_INFINITY, 1.0])),
            f64::NEG_INFINITY
        );
        assert!(oracle_round(&oracle_sum(&[f64::NAN, f64::INFINITY])).is_nan());
        // largest finite plus just under half an ulp (2^970, in 2^-1074 units)
        // stays finite; exactly half ties to the even neighbour, infinity
        let mut ev = oracle_sum(&[f64::MAX]);
        ev.numerator += pow2(970 + 1074) - 1;
        assert_eq!(oracle_round(&ev), f64::MAX);
        ev.numerator += 1;
        assert_eq!(oracle_round(&ev), f64::INFINITY);
    }

    #[test]
    fn mean_examples() {
        assert_eq!(oracle_mean(&ExactValue::from_units(pow2(1075)), 2), Ok(1.0));
        assert_eq!(
            oracle_mean(&ExactValue::from_units(pow2(1074)), 3),
            Ok(1.0 / 3.0)
        );
        assert_eq!(oracle_mean(&ExactValue::zero(), 7).map(f64::to_bits), Ok(0));
        assert_eq!(
            oracle_mean(&ExactValue::zero(), 0),
            Err(OracleError::ZeroDivisor)
        );
        // 3 units / 2 = 1.5 units, tie to even -> 2 units
        assert_eq!(
            oracle_mean(&ExactValue::from_units(3), 2)
                .unwrap()
                .to_bits(),
            2
        );
        assert_eq!(
            oracle_mean(&ExactValue::from_units(5), 2)
                .unwrap()
                .to_bits(),
            2
        );
    }

    fn any_finite() -> impl Strategy<Value = f64> {
        (any::<bool>(), 0u64..2047, any::<u64>()).prop_map(|(s, e, m)| {
            f64::from_bits(((s as u64) << 63) | (e << 52) | (m & MANTISSA_MASK))
        })
    }

    proptest! {
        #[test]
        fn single_value_round_trips(v in any_finite()) {
            let r = oracle_round(&oracle_sum(&[v]));
            let expected = if v == 0.0 { 0.0f64 } else { v };
            prop_assert_eq!(r.to_bits(), expected.to_bits());
        }

        #[test]
        fn two_term_sums_match_hardware(a in any_finite(), b in any_finite()) {
            let hw = a + b;
            let r = oracle_round(&oracle_sum(&[a, b]));
            if hw == 0.0 {
                prop_assert_eq!(r.to_bits(), 0);
            } else {
                prop_assert_eq!(r.to_bits(), hw.to_bits());
            }
        }

        #[test]
        fn division_by_one_matches_round(v in any_finite(), w in any_finite()) {
            let ev = oracle_sum(&[v, w]);
            prop_assert_eq!(oracle_mean(&ev, 1).unwrap().to_bits(), oracle_round(&ev).to_bits());
        }

        #[test]
        fn small_divisions_match_hardware(v in any_finite(), n in 1u64..1 << 20) {
            // n is exact in f64 and v/n is a single correctly rounded IEEE op
            let hw = v / n as f64;
            let r = oracle_mean(&oracle_sum(&[v]), n).unwrap();
            let expected = if hw == 0.0 { 0.0f64 } else { hw };
            prop_assert_eq!(r.to_bits(), expected.to_bits());
        }
    }
}
