use std::fmt;

use super::FloatFormat;
use crate::error::FormatError;

/// A bit pattern in some [`FloatFormat`], laid out as sign | biased exponent | fraction.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PackedFloat {
    format: FloatFormat,
    bits: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FloatClass {
    Zero,
    Subnormal,
    Normal,
    Infinity,
    Nan,
}

/// Sign, class, unbiased exponent and significand with the implicit bit made
/// explicit.
///
/// For finite values the encoded number is `significand * 2^(exponent - frac_bits)`.
/// Zeros and subnormals carry `exponent == emin`. Infinities carry a zero
/// significand and NaNs carry their fraction field (payload) as significand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Unpacked {
    pub negative: bool,
    pub class: FloatClass,
    pub exponent: i64,
    pub significand: u64,
}

impl Unpacked {
    /// Exponent of the least significant significand bit.
    #[inline]
    pub fn lsb_exponent(&self, format: FloatFormat) -> i64 {
        self.exponent - format.frac_bits() as i64
    }

    #[inline]
    pub fn is_finite(&self) -> bool {
        !matches!(self.class, FloatClass::Infinity | FloatClass::Nan)
    }
}

impl PackedFloat {
    pub fn new(format: FloatFormat, bits: u64) -> Result<Self, FormatError> {
        if bits & !format.bits_mask() != 0 {
            return Err(FormatError::BitsOutOfRange { bits, width: format.width() });
        }
        Ok(Self { format, bits })
    }

    #[inline]
    pub(crate) const fn from_parts_unchecked(format: FloatFormat, bits: u64) -> Self {
        Self { format, bits }
    }

    #[inline]
    pub fn from_f32(x: f32) -> Self {
        Self { format: FloatFormat::BINARY32, bits: x.to_bits() as u64 }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Self {
        Self { format: FloatFormat::BINARY64, bits: x.to_bits() }
    }

    /// Reinterprets the bits as a host `f32`. Panics if the format is not binary32.
    #[inline]
    pub fn to_f32(self) -> f32 {
        assert_eq!(self.format, FloatFormat::BINARY32, "not a binary32 value");
        f32::from_bits(self.bits as u32)
    }

    /// Reinterprets the bits as a host `f64`. Panics if the format is not binary64.
    #[inline]
    pub fn to_f64(self) -> f64 {
        assert_eq!(self.format, FloatFormat::BINARY64, "not a binary64 value");
        f64::from_bits(self.bits)
    }

    #[inline]
    pub const fn format(&self) -> FloatFormat {
        self.format
    }

    #[inline]
    pub const fn bits(&self) -> u64 {
        self.bits
    }

    pub fn zero(format: FloatFormat, negative: bool) -> Self {
        let bits = if negative { format.sign_mask() } else { 0 };
        Self { format, bits }
    }

    pub fn infinity(format: FloatFormat, negative: bool) -> Self {
        let bits = (format.exp_field_max() << format.frac_bits()) | if negative { format.sign_mask() } else { 0 };
        Self { format, bits }
    }

    /// Largest finite magnitude with the given sign.
    pub fn max_finite(format: FloatFormat, negative: bool) -> Self {
        let bits = ((format.exp_field_max() - 1) << format.frac_bits())
            | format.frac_mask()
            | if negative { format.sign_mask() } else { 0 };
        Self { format, bits }
    }

    /// The quiet NaN with an all-zero payload apart from the quiet bit.
    pub fn default_nan(format: FloatFormat) -> Self {
        let quiet = 1u64 << (format.frac_bits() - 1);
        Self { format, bits: (format.exp_field_max() << format.frac_bits()) | quiet }
    }

    #[inline]
    pub fn is_negative(&self) -> bool {
        self.bits & self.format.sign_mask() != 0
    }

    #[inline]
    fn exp_field(&self) -> u64 {
        (self.bits >> self.format.frac_bits()) & self.format.exp_field_max()
    }

    #[inline]
    fn frac_field(&self) -> u64 {
        self.bits & self.format.frac_mask()
    }

    pub fn class(&self) -> FloatClass {
        match (self.exp_field(), self.frac_field()) {
            (0, 0) => FloatClass::Zero,
            (0, _) => FloatClass::Subnormal,
            (e, 0) if e == self.format.exp_field_max() => FloatClass::Infinity,
            (e, _) if e == self.format.exp_field_max() => FloatClass::Nan,
            _ => FloatClass::Normal,
        }
    }

    #[inline]
    pub fn is_nan(&self) -> bool {
        self.class() == FloatClass::Nan
    }

    #[inline]
    pub fn is_finite(&self) -> bool {
        self.exp_field() != self.format.exp_field_max()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.bits & !self.format.sign_mask() == 0
    }

    /// NaN with the quiet bit forced on, payload otherwise preserved.
    pub fn quieted(self) -> Self {
        if !self.is_nan() {
            return self;
        }
        let quiet = 1u64 << (self.format.frac_bits() - 1);
        Self { format: self.format, bits: self.bits | quiet }
    }

    pub fn is_signaling_nan(&self) -> bool {
        self.is_nan() && self.bits & (1u64 << (self.format.frac_bits() - 1)) == 0
    }

    pub fn negated(self) -> Self {
        Self { format: self.format, bits: self.bits ^ self.format.sign_mask() }
    }

    pub fn unpack(self) -> Unpacked {
        let f = self.format;
        let negative = self.is_negative();
        let frac = self.frac_field();
        let exp = self.exp_field();
        let class = self.class();
        let (exponent, significand) = match class {
            FloatClass::Zero | FloatClass::Subnormal => (f.emin(), frac),
            FloatClass::Normal => (exp as i64 - f.bias(), frac | (1u64 << f.frac_bits())),
            FloatClass::Infinity => (f.emax() + 1, 0),
            FloatClass::Nan => (f.emax() + 1, frac),
        };
        Unpacked { negative, class, exponent, significand }
    }

    /// Re-encodes an [`Unpacked`] value. `pack(unpack(x)) == x` for every encoding.
    pub fn pack(format: FloatFormat, u: &Unpacked) -> Self {
        let sign = if u.negative { format.sign_mask() } else { 0 };
        let body = match u.class {
            FloatClass::Zero => 0,
            FloatClass::Subnormal => u.significand & format.frac_mask(),
            FloatClass::Normal => {
                let field = (u.exponent + format.bias()) as u64;
                (field << format.frac_bits()) | (u.significand & format.frac_mask())
            }
            FloatClass::Infinity => format.exp_field_max() << format.frac_bits(),
            FloatClass::Nan => {
                let payload = (u.significand & format.frac_mask()).max(1);
                (format.exp_field_max() << format.frac_bits()) | payload
            }
        };
        Self { format, bits: sign | body }
    }

    /// Encodes `sig * 2^lsb_exp` exactly, or `None` when it is not representable.
    pub fn from_exact(format: FloatFormat, negative: bool, lsb_exp: i64, sig: u128) -> Option<Self> {
        let (p, flags) = super::round_pack(format, negative, lsb_exp, sig, false, super::RoundingMode::NearestEven);
        (!flags.intersects(super::Flags::INEXACT | super::Flags::OVERFLOW)).then_some(p)
    }
}

impl fmt::Debug for PackedFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.format.name(), crate::hexfloat::format_hex(*self))
    }
}

impl fmt::Display for PackedFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::hexfloat::format_hex(*self))
    }
}
