//! Small superaccumulator: 67 signed 64-bit chunks overlapping by 32 bits.
//!
//! The represented value is `sum(chunks[i] * 2^(32*i - 1075))`. A term is
//! added by touching two adjacent chunks, selected by the high 6 bits of its
//! exponent; the low 5 exponent bits position the mantissa inside the chunk.
//! Each add changes a chunk by at most 2^52 - 1, so starting from a
//! propagated state (every |chunk| <= 2^32) 2047 adds can be done before the
//! chunks have to be normalized again.

use crate::error::{Error, Result};
use crate::fpbits::{EXP_MASK, MANTISSA_BITS, MANTISSA_MASK};
use crate::rounding::round_magnitude;

pub const SMALL_CHUNKS: usize = 67;
pub const LOW_MANTISSA_BITS: u32 = 32;
pub const LOW_MANTISSA_MASK: i64 = (1 << LOW_MANTISSA_BITS) - 1;
pub const LOW_EXP_BITS: u32 = 5;
pub const LOW_EXP_MASK: i64 = (1 << LOW_EXP_BITS) - 1;
pub const HIGH_EXP_BITS: u32 = 6;
/// Adds allowed between carry propagations, 2^11 - 1.
pub const PROPAGATE_BUDGET: u32 = 2047;

/// Scale of chunk 0: chunk `i` has weight 2^(32*i - 1075).
pub(crate) const CHUNK0_EXP: i32 = -1075;

const CANONICAL_NAN: u64 = 0x7FF8_0000_0000_0000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallAccumulator {
    pub(crate) chunks: [i64; SMALL_CHUNKS],
    pub(crate) inf_bits: u64,
    pub(crate) nan_bits: u64,
    pub(crate) adds_until_propagate: u32,
}

impl Default for SmallAccumulator {
    fn default() -> Self {
        Self::new()
    }
}

impl SmallAccumulator {
    pub fn new() -> Self {
        Self {
            chunks: [0; SMALL_CHUNKS],
            inf_bits: 0,
            nan_bits: 0,
            adds_until_propagate: PROPAGATE_BUDGET,
        }
    }

    pub fn chunks(&self) -> &[i64; SMALL_CHUNKS] {
        &self.chunks
    }

    pub fn inf_bits(&self) -> u64 {
        self.inf_bits
    }

    pub fn nan_bits(&self) -> u64 {
        self.nan_bits
    }

    pub fn adds_until_propagate(&self) -> u32 {
        self.adds_until_propagate
    }

    /// Adds one value, propagating carries first if the budget is used up.
    pub fn add(&mut self, v: f64) {
        if self.adds_until_propagate == 0 {
            self.carry_propagate();
        }
        let bits = v.to_bits();
        let exp = (bits >> MANTISSA_BITS) & EXP_MASK;
        self.add_no_carry(v);
        if bits << 1 != 0 && exp != EXP_MASK {
            self.adds_until_propagate -= 1;
        }
    }

    pub fn add_slice(&mut self, values: &[f64]) {
        self.add_in_blocks(values.len(), |acc, range| {
            for &v in &values[range] {
                acc.add_no_carry(v);
            }
        });
    }

    /// Adds the rounded square of each element.
    pub fn add_sqnorm(&mut self, values: &[f64]) {
        self.add_in_blocks(values.len(), |acc, range| {
            for &v in &values[range] {
                acc.add_no_carry(v * v);
            }
        });
    }

    /// Adds the rounded products `a[i] * b[i]`.
    ///
    /// # Panics
    /// If the slices have different lengths.
    pub fn add_dot(&mut self, a: &[f64], b: &[f64]) {
        assert_eq!(a.len(), b.len(), "dot product operands differ in length");
        self.add_in_blocks(a.len(), |acc, range| {
            for (&x, &y) in a[range.clone()].iter().zip(&b[range]) {
                acc.add_no_carry(x * y);
            }
        });
    }

    /// Nested-loop driver: the inner `add_range` never checks the budget.
    /// Every term is charged against the budget, zeros included.
    #[inline]
    fn add_in_blocks(
        &mut self,
        len: usize,
        mut add_range: impl FnMut(&mut Self, std::ops::Range<usize>),
    ) {
        let mut start = 0;
        while start < len {
            if self.adds_until_propagate == 0 {
                self.carry_propagate();
            }
            let m = (len - start).min(self.adds_until_propagate as usize);
            add_range(self, start..start + m);
            self.adds_until_propagate -= m as u32;
            start += m;
        }
    }

    /// Adds `v` without touching the budget. Caller guarantees budget >= 1.
    #[inline(always)]
    pub(crate) fn add_no_carry(&mut self, v: f64) {
        let ivalue = v.to_bits() as i64;
        let mut mantissa = ivalue & MANTISSA_MASK as i64;
        let mut exp = (ivalue >> MANTISSA_BITS) & EXP_MASK as i64;

        if exp != 0 && exp != EXP_MASK as i64 {
            mantissa |= 1 << MANTISSA_BITS;
        } else if exp == 0 {
            if mantissa == 0 {
                return;
            }
            exp = 1;
        } else {
            self.add_inf_nan(ivalue as u64);
            return;
        }

        let low_exp = exp & LOW_EXP_MASK;
        let high_exp = (exp >> LOW_EXP_BITS) as usize;
        let low_mantissa = (mantissa << low_exp) & LOW_MANTISSA_MASK;
        let high_mantissa = mantissa >> (LOW_MANTISSA_BITS as i64 - low_exp);

        let pair = &mut self.chunks[high_exp..high_exp + 2];
        if ivalue < 0 {
            pair[0] -= low_mantissa;
            pair[1] -= high_mantissa;
        } else {
            pair[0] += low_mantissa;
            pair[1] += high_mantissa;
        }
    }

    /// Records an infinity or NaN. `bits` must have an all-ones exponent.
    pub fn add_inf_nan(&mut self, bits: u64) {
        debug_assert_eq!((bits >> MANTISSA_BITS) & EXP_MASK, EXP_MASK);
        if bits & MANTISSA_MASK != 0 {
            if self.nan_bits == 0 {
                self.nan_bits = bits;
            }
        } else if self.inf_bits == 0 {
            self.inf_bits = bits;
        } else if self.inf_bits != bits && self.nan_bits == 0 {
            // +Inf and -Inf together
            self.nan_bits = CANONICAL_NAN;
        }
    }

    /// Normalizes the chunks and returns the index of the highest nonzero
    /// chunk, or `None` if the value is zero.
    ///
    /// Afterwards every chunk below the top one lies in [0, 2^32) and the top
    /// chunk in [-2^32, 2^32). A top chunk that would be -1 is cleared and the
    /// chunk below it made negative instead.
    pub fn carry_propagate(&mut self) -> Option<usize> {
        self.adds_until_propagate = PROPAGATE_BUDGET;
        let c = &mut self.chunks;

        let lo = c.iter().position(|&x| x != 0)?;
        let hi = c.iter().rposition(|&x| x != 0).unwrap_or(lo);

        let mut top = SMALL_CHUNKS - 1;
        for i in lo..SMALL_CHUNKS - 1 {
            let carry = c[i] >> LOW_MANTISSA_BITS;
            if i >= hi && (carry == 0 || carry == -1) {
                // nothing above; a negative chunk here already has all-ones high bits
                top = i;
                break;
            }
            c[i] &= LOW_MANTISSA_MASK;
            c[i + 1] += carry;
        }

        let mut top = c[..=top].iter().rposition(|&x| x != 0)?;
        while top > 0 && c[top] == -1 {
            c[top] = 0;
            c[top - 1] -= 1 << LOW_MANTISSA_BITS;
            top -= 1;
        }
        Some(top)
    }

    /// Correctly rounded value, ties to even. NaN takes precedence over Inf,
    /// and exact zero gives +0.0.
    pub fn round(&mut self) -> f64 {
        if self.nan_bits != 0 {
            return f64::from_bits(self.nan_bits);
        }
        if self.inf_bits != 0 {
            return f64::from_bits(self.inf_bits);
        }
        let Some(top) = self.carry_propagate() else {
            return 0.0;
        };
        let negative = self.chunks[top] < 0;
        let digits = self.magnitude_digits(top, negative);
        round_magnitude(&digits[..=top + 1], CHUNK0_EXP, false, negative)
    }

    /// Correctly rounded value divided by `n`, ties to even.
    pub fn mean(&mut self, n: u64) -> Result<f64> {
        if n == 0 {
            return Err(Error::ZeroDivisor);
        }
        if self.nan_bits != 0 {
            return Ok(f64::from_bits(self.nan_bits));
        }
        if self.inf_bits != 0 {
            return Ok(f64::from_bits(self.inf_bits));
        }
        let Some(top) = self.carry_propagate() else {
            return Ok(0.0);
        };
        let negative = self.chunks[top] < 0;
        let digits = self.magnitude_digits(top, negative);

        // Two extra low digits keep the rounding position inside the quotient;
        // the remainder only contributes a sticky bit.
        const GUARD_DIGITS: usize = 2;
        let mut quotient = [0u32; SMALL_CHUNKS + 1 + GUARD_DIGITS];
        let len = top + 2 + GUARD_DIGITS;
        let mut rem: u64 = 0;
        for i in (0..len).rev() {
            let d = if i >= GUARD_DIGITS {
                digits[i - GUARD_DIGITS] as u128
            } else {
                0
            };
            let cur = (rem as u128) << 32 | d;
            quotient[i] = (cur / n as u128) as u32;
            rem = (cur % n as u128) as u64;
        }
        Ok(round_magnitude(
            &quotient[..len],
            CHUNK0_EXP - 32 * GUARD_DIGITS as i32,
            rem != 0,
            negative,
        ))
    }

    /// Magnitude of a propagated value as 32-bit digits, one spare on top.
    fn magnitude_digits(&self, top: usize, negative: bool) -> [u32; SMALL_CHUNKS + 1] {
        let mut digits = [0u32; SMALL_CHUNKS + 1];
        let mut carry: i64 = 0;
        for (d, &c) in digits.iter_mut().zip(&self.chunks[..=top]) {
            let x = if negative { -c } else { c } + carry;
            *d = (x & LOW_MANTISSA_MASK) as u32;
            carry = x >> LOW_MANTISSA_BITS;
        }
        debug_assert!(carry >= 0);
        digits[top + 1] = carry as u32;
        digits
    }

    /// Adds the exact value of `other` into `self`.
    pub fn merge(&mut self, other: &SmallAccumulator) {
        if other.nan_bits != 0 && self.nan_bits == 0 {
            self.nan_bits = other.nan_bits;
        }
        if other.inf_bits != 0 {
            self.add_inf_nan(other.inf_bits);
        }
        let mut src = other.clone();
        if src.carry_propagate().is_none() {
            return;
        }
        if self.adds_until_propagate == 0 {
            self.carry_propagate();
        }
        // each src chunk is at most 2^32 in magnitude, within one add's allowance
        for (d, s) in self.chunks.iter_mut().zip(&src.chunks) {
            *d += s;
        }
        self.adds_until_propagate -= 1;
        self.carry_propagate();
    }

    /// Adds 32-bit pieces to chunks `index..index + 3`, charging three units
    /// of budget. Used when condensing a large-accumulator chunk.
    pub(crate) fn add_pieces(&mut self, index: usize, pieces: [i64; 3], negative: bool) {
        if self.adds_until_propagate < 3 {
            self.carry_propagate();
        }
        let window = &mut self.chunks[index..index + 3];
        if negative {
            for (c, p) in window.iter_mut().zip(pieces) {
                *c -= p;
            }
        } else {
            for (c, p) in window.iter_mut().zip(pieces) {
                *c += p;
            }
        }
        self.adds_until_propagate -= 3;
    }
}

impl Extend<f64> for SmallAccumulator {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

impl<'a> Extend<&'a f64> for SmallAccumulator {
    fn extend<I: IntoIterator<Item = &'a f64>>(&mut self, iter: I) {
        for &v in iter {
            self.add(v);
        }
    }
}

impl FromIterator<f64> for SmallAccumulator {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        acc.extend(iter);
        acc
    }
}
