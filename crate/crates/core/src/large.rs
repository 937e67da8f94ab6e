//! Large superaccumulator: one 64-bit chunk per sign+exponent combination.
//!
//! A term's top 12 bits pick its chunk, and the whole bit pattern is added to
//! that chunk as an unsigned integer. The sign and exponent bits that ride
//! along are the same for every add to a given chunk, so they can be removed
//! arithmetically when the chunk is condensed into the embedded
//! [`SmallAccumulator`]. A chunk absorbs at most 4096 terms; after that its
//! sign/exponent contribution has shifted out of the word entirely
//! (4096 * 2^52 = 2^64) and the remaining mantissa sum is at most
//! 4096 * (2^52 - 1) < 2^64.

use crate::error::Result;
use crate::fpbits::{EXP_MASK, MANTISSA_BITS};
use crate::small::{SmallAccumulator, LOW_EXP_BITS, LOW_EXP_MASK, LOW_MANTISSA_BITS};

pub const LARGE_CHUNKS: usize = 1 << (1 + 11);
/// Adds a chunk absorbs before it must be transferred.
pub const CHUNK_ADDS: i16 = 4096;
const USED_WORDS: usize = LARGE_CHUNKS / 64;
const LOW32: u64 = (1 << LOW_MANTISSA_BITS) - 1;

#[derive(Clone, Debug)]
pub struct LargeAccumulator {
    /// Only meaningful where `counts >= 0`; overwritten on first use, never cleared.
    chunks: Box<[u64; LARGE_CHUNKS]>,
    /// Remaining adds for each chunk, or -1 if unused (always -1 for Inf/NaN).
    counts: Box<[i16; LARGE_CHUNKS]>,
    chunks_used: [u64; USED_WORDS],
    used_used: u64,
    small: SmallAccumulator,
}

impl Default for LargeAccumulator {
    fn default() -> Self {
        Self::new()
    }
}

impl LargeAccumulator {
    pub fn new() -> Self {
        let chunks = vec![0u64; LARGE_CHUNKS]
            .into_boxed_slice()
            .try_into()
            .expect("exact length");
        let counts = vec![-1i16; LARGE_CHUNKS]
            .into_boxed_slice()
            .try_into()
            .expect("exact length");
        Self {
            chunks,
            counts,
            chunks_used: [0; USED_WORDS],
            used_used: 0,
            small: SmallAccumulator::new(),
        }
    }

    /// Resets to an empty sum without reallocating. Chunk words keep stale
    /// contents; they are rezeroed when next used.
    pub fn clear(&mut self) {
        self.counts.fill(-1);
        self.chunks_used = [0; USED_WORDS];
        self.used_used = 0;
        self.small = SmallAccumulator::new();
    }

    pub fn counts(&self) -> &[i16; LARGE_CHUNKS] {
        &self.counts
    }

    pub fn chunks_used(&self) -> &[u64; USED_WORDS] {
        &self.chunks_used
    }

    pub fn used_used(&self) -> u64 {
        self.used_used
    }

    pub fn small(&self) -> &SmallAccumulator {
        &self.small
    }

    #[inline(always)]
    pub fn add(&mut self, v: f64) {
        let bits = v.to_bits();
        let ix = (bits >> MANTISSA_BITS) as usize;
        let count = self.counts[ix] - 1;
        if count < 0 {
            self.add_special(ix, bits);
        } else {
            self.counts[ix] = count;
            self.chunks[ix] = self.chunks[ix].wrapping_add(bits);
        }
    }

    pub fn add_slice(&mut self, values: &[f64]) {
        for &v in values {
            self.add(v);
        }
    }

    pub fn add_sqnorm(&mut self, values: &[f64]) {
        for &v in values {
            self.add(v * v);
        }
    }

    /// # Panics
    /// If the slices have different lengths.
    pub fn add_dot(&mut self, a: &[f64], b: &[f64]) {
        assert_eq!(a.len(), b.len(), "dot product operands differ in length");
        for (&x, &y) in a.iter().zip(b) {
            self.add(x * y);
        }
    }

    /// Handles the rare cases merged into the `count < 0` branch: Inf/NaN,
    /// first use of a chunk, and a chunk that has absorbed its 4096 adds.
    #[cold]
    #[inline(never)]
    fn add_special(&mut self, ix: usize, bits: u64) {
        if ix as u64 & EXP_MASK == EXP_MASK {
            self.small.add_inf_nan(bits);
            return;
        }
        if self.counts[ix] == -1 {
            self.chunks_used[ix >> 6] |= 1 << (ix & 63);
            self.used_used |= 1 << (ix >> 6);
        } else {
            debug_assert_eq!(self.counts[ix], 0);
            self.transfer_chunk(ix);
        }
        // equivalent to zeroing the chunk, setting the count to 4096, then a normal add
        self.counts[ix] = CHUNK_ADDS - 1;
        self.chunks[ix] = bits;
    }

    /// Moves the partial sum held in chunk `ix` into the small accumulator.
    /// Leaves the chunk word and count untouched; callers reset them.
    fn transfer_chunk(&mut self, ix: usize) {
        let count = self.counts[ix];
        debug_assert!((0..=CHUNK_ADDS).contains(&count));
        let adds = (CHUNK_ADDS - count) as u64;
        if adds == 0 {
            return;
        }
        // Cancel the sign/exponent bits: they were added `adds` times, and
        // adding them `count` more times makes 4096 copies, i.e. zero mod 2^64.
        let mantissa_sum =
            self.chunks[ix].wrapping_add(((ix as u64) * count as u64) << MANTISSA_BITS);

        let exp_field = ix as u64 & EXP_MASK;
        let negative = ix as u64 >> 11 != 0;
        let (exp, implicit) = if exp_field == 0 {
            (1, 0)
        } else {
            (exp_field, adds)
        };
        let low_exp = (exp as i64 & LOW_EXP_MASK) as u32;
        let high_exp = (exp >> LOW_EXP_BITS) as usize;

        // Split mantissa_sum << low_exp (up to 96 bits) into three 32-bit pieces
        // using only 64-bit shifts.
        let low = (mantissa_sum << low_exp) & LOW32;
        let (mid, high) = if low_exp == 0 {
            ((mantissa_sum >> 32) & LOW32, 0)
        } else {
            (
                (mantissa_sum >> (32 - low_exp)) & LOW32,
                mantissa_sum >> (64 - low_exp),
            )
        };
        let mut pieces = [low as i64, mid as i64, high as i64];

        // The implicit leading 1s sit at bit 52 + low_exp of the window.
        let implicit_pos = MANTISSA_BITS + low_exp;
        if implicit_pos < 64 {
            pieces[1] += (implicit << (implicit_pos - 32)) as i64;
        } else {
            pieces[2] += (implicit << (implicit_pos - 64)) as i64;
        }

        self.small.add_pieces(high_exp, pieces, negative);
    }

    /// Transfers every in-use chunk into the small accumulator and marks all
    /// chunks unused. Returns the number of chunks transferred.
    pub fn drain(&mut self) -> usize {
        let mut transferred = 0;
        let mut used_used = self.used_used;
        while used_used != 0 {
            let w = used_used.trailing_zeros() as usize;
            used_used &= used_used - 1;
            let mut used = self.chunks_used[w];
            while used != 0 {
                let ix = (w << 6) | used.trailing_zeros() as usize;
                used &= used - 1;
                self.transfer_chunk(ix);
                self.counts[ix] = -1;
                transferred += 1;
            }
            self.chunks_used[w] = 0;
        }
        self.used_used = 0;
        transferred
    }

    /// Drains into the small accumulator and returns it. The large chunks
    /// are left empty, so `self` remains usable.
    pub fn condense(&mut self) -> &mut SmallAccumulator {
        self.drain();
        &mut self.small
    }

    pub fn into_small(mut self) -> SmallAccumulator {
        self.drain();
        self.small
    }

    pub fn round(&mut self) -> f64 {
        self.condense().round()
    }

    pub fn mean(&mut self, n: u64) -> Result<f64> {
        self.condense().mean(n)
    }
}

impl Extend<f64> for LargeAccumulator {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

impl FromIterator<f64> for LargeAccumulator {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        acc.extend(iter);
        acc
    }
}
