use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::FormatError;

/// A binary interchange format, parameterized by the widths of its exponent
/// and stored fraction fields.
///
/// Exponents throughout this crate are `i64`; a 62-bit exponent field still
/// has a bias that fits comfortably.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FloatFormat {
    exp_bits: u32,
    frac_bits: u32,
}

impl FloatFormat {
    pub const BINARY32: Self = Self { exp_bits: 8, frac_bits: 23 };
    pub const BINARY64: Self = Self { exp_bits: 11, frac_bits: 52 };
    /// 8-bit format with 5 exponent and 2 fraction bits; small enough to
    /// enumerate every operand pair.
    pub const E5M2: Self = Self { exp_bits: 5, frac_bits: 2 };

    pub fn new(exp_bits: u32, frac_bits: u32) -> Result<Self, FormatError> {
        if exp_bits < 2 || frac_bits < 1 || exp_bits + frac_bits + 1 > 64 {
            return Err(FormatError::InvalidWidths { exp_bits, frac_bits });
        }
        Ok(Self { exp_bits, frac_bits })
    }

    #[inline]
    pub const fn exp_bits(&self) -> u32 {
        self.exp_bits
    }

    #[inline]
    pub const fn frac_bits(&self) -> u32 {
        self.frac_bits
    }

    /// Significand precision including the implicit bit.
    #[inline]
    pub const fn precision(&self) -> u32 {
        self.frac_bits + 1
    }

    #[inline]
    pub const fn width(&self) -> u32 {
        self.exp_bits + self.frac_bits + 1
    }

    #[inline]
    pub const fn bias(&self) -> i64 {
        (1i64 << (self.exp_bits - 1)) - 1
    }

    #[inline]
    pub const fn emax(&self) -> i64 {
        self.bias()
    }

    #[inline]
    pub const fn emin(&self) -> i64 {
        1 - self.bias()
    }

    /// Exponent of the least significant bit of the smallest subnormal.
    #[inline]
    pub const fn lsb_min(&self) -> i64 {
        self.emin() - self.frac_bits as i64
    }

    #[inline]
    pub(crate) const fn frac_mask(&self) -> u64 {
        (1u64 << self.frac_bits) - 1
    }

    #[inline]
    pub(crate) const fn exp_field_max(&self) -> u64 {
        (1u64 << self.exp_bits) - 1
    }

    #[inline]
    pub(crate) const fn sign_mask(&self) -> u64 {
        1u64 << (self.exp_bits + self.frac_bits)
    }

    /// Mask covering every valid bit of an encoding.
    #[inline]
    pub const fn bits_mask(&self) -> u64 {
        if self.width() == 64 {
            u64::MAX
        } else {
            (1u64 << self.width()) - 1
        }
    }

    /// Short name used in reports: `f32`, `f64`, `e5m2`, or `e{E}m{M}`.
    pub fn name(&self) -> String {
        match *self {
            Self::BINARY32 => "f32".to_string(),
            Self::BINARY64 => "f64".to_string(),
            Self { exp_bits, frac_bits } => format!("e{exp_bits}m{frac_bits}"),
        }
    }

    /// Inverse of [`FloatFormat::name`]; also accepts `binary32`/`binary64`.
    pub fn parse(name: &str) -> Result<Self, FormatError> {
        match name {
            "f32" | "binary32" => Ok(Self::BINARY32),
            "f64" | "binary64" => Ok(Self::BINARY64),
            other => {
                let bad = || FormatError::UnknownName(other.to_string());
                let rest = other.strip_prefix('e').ok_or_else(bad)?;
                let (e, m) = rest.split_once('m').ok_or_else(bad)?;
                let e = e.parse().map_err(|_| bad())?;
                let m = m.parse().map_err(|_| bad())?;
                Self::new(e, m)
            }
        }
    }
}

impl fmt::Display for FloatFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}
