//! Nearest-even rounding of a non-negative base-2^32 magnitude to `f64`.

use crate::fpbits::{EXP_MASK, MANTISSA_BITS, MANTISSA_MASK, SIGN_MASK};

const MIN_QUANTUM_EXP: i32 = -1074;

/// Rounds `digits * 2^unit_exp` (little-endian 32-bit digits) to the nearest
/// double, ties to even. `sticky` marks a nonzero tail strictly below one unit.
///
/// A zero magnitude without sticky gives +0.0 regardless of `negative`;
/// a nonzero value that rounds to zero keeps its sign.
pub(crate) fn round_magnitude(digits: &[u32], unit_exp: i32, sticky: bool, negative: bool) -> f64 {
    let sign = if negative { SIGN_MASK } else { 0 };
    let Some(top) = digits.iter().rposition(|&d| d != 0) else {
        return if sticky { f64::from_bits(sign) } else { 0.0 };
    };
    let msb = 32 * top as i64 + (31 - digits[top].leading_zeros()) as i64;
    let msb_exp = msb + unit_exp as i64;
    let quantum_exp = (msb_exp - MANTISSA_BITS as i64).max(MIN_QUANTUM_EXP as i64);
    let shift = quantum_exp - unit_exp as i64;

    let mut mantissa;
    let round_bit;
    let mut sticky = sticky;
    if shift <= 0 {
        // at most 53 significant bits, all kept
        mantissa = extract(digits, 0) << (-shift) as u32;
        round_bit = false;
    } else {
        let shift = shift as usize;
        mantissa = extract(digits, shift);
        mantissa &= (1u64 << (MANTISSA_BITS + 1)) - 1;
        round_bit = bit(digits, shift - 1);
        sticky |= any_below(digits, shift - 1);
    }
    if round_bit && (sticky || mantissa & 1 == 1) {
        mantissa += 1;
    }

    if mantissa < 1 << MANTISSA_BITS {
        // subnormal, only reachable at the minimum quantum
        return f64::from_bits(sign | mantissa);
    }
    let mut exp_field = quantum_exp + 1075;
    if mantissa == 1 << (MANTISSA_BITS + 1) {
        mantissa >>= 1;
        exp_field += 1;
    }
    if exp_field >= EXP_MASK as i64 {
        return f64::from_bits(sign | (EXP_MASK << MANTISSA_BITS));
    }
    f64::from_bits(sign | ((exp_field as u64) << MANTISSA_BITS) | (mantissa & MANTISSA_MASK))
}

fn digit(digits: &[u32], i: usize) -> u64 {
    digits.get(i).copied().unwrap_or(0) as u64
}

/// 64 bits starting at bit `pos`.
fn extract(digits: &[u32], pos: usize) -> u64 {
    let (w, off) = (pos / 32, pos % 32);
    let window = digit(digits, w) as u128
        | (digit(digits, w + 1) as u128) << 32
        | (digit(digits, w + 2) as u128) << 64;
    (window >> off) as u64
}

fn bit(digits: &[u32], pos: usize) -> bool {
    (digit(digits, pos / 32) >> (pos % 32)) & 1 == 1
}

/// Any set bit strictly below `pos`.
fn any_below(digits: &[u32], pos: usize) -> bool {
    let (w, off) = (pos / 32, pos % 32);
    let partial = digit(digits, w) & ((1u64 << off) - 1);
    partial != 0 || digits[..w.min(digits.len())].iter().any(|&d| d != 0)
}
