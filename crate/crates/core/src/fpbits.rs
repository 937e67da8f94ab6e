//! Bit-level view of IEEE-754 binary64 values.
//!
//! Layout, high to low: 1 sign bit, 11 exponent bits (bias 1023), 52 mantissa
//! bits. Reinterpretation goes through `f64::to_bits`/`from_bits`, which is a
//! register-level cast and therefore independent of byte order.

pub const MANTISSA_BITS: u32 = 52;
pub const EXP_BITS: u32 = 11;
pub const EXP_BIAS: i32 = 1023;
pub const EXP_MASK: u64 = (1 << EXP_BITS) - 1;
pub const MANTISSA_MASK: u64 = (1 << MANTISSA_BITS) - 1;
pub const SIGN_MASK: u64 = 1 << 63;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FpClass {
    Zero,
    Denormal,
    Normal,
    Infinity,
    Nan,
}

/// Raw sign, exponent and mantissa fields of a double.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FpParts {
    pub sign: u8,
    pub exponent_field: u16,
    pub mantissa_field: u64,
    pub class: FpClass,
}

impl FpParts {
    /// Reassembles the original bit pattern.
    pub fn to_bits(self) -> u64 {
        ((self.sign as u64) << 63)
            | ((self.exponent_field as u64) << MANTISSA_BITS)
            | self.mantissa_field
    }

    pub fn is_finite(self) -> bool {
        !matches!(self.class, FpClass::Infinity | FpClass::Nan)
    }
}

#[inline]
pub fn to_bits(v: f64) -> u64 {
    v.to_bits()
}

#[inline]
pub fn from_bits(bits: u64) -> f64 {
    f64::from_bits(bits)
}

pub fn decompose(v: f64) -> FpParts {
    decompose_bits(v.to_bits())
}

pub fn decompose_bits(bits: u64) -> FpParts {
    let exponent_field = ((bits >> MANTISSA_BITS) & EXP_MASK) as u16;
    let mantissa_field = bits & MANTISSA_MASK;
    let class = match (exponent_field as u64, mantissa_field) {
        (0, 0) => FpClass::Zero,
        (0, _) => FpClass::Denormal,
        (EXP_MASK, 0) => FpClass::Infinity,
        (EXP_MASK, _) => FpClass::Nan,
        _ => FpClass::Normal,
    };
    FpParts {
        sign: (bits >> 63) as u8,
        exponent_field,
        mantissa_field,
        class,
    }
}
