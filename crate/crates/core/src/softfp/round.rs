use bitflags::bitflags;
use serde::{Deserialize, Serialize};

use super::{FloatFormat, PackedFloat};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RoundingMode {
    #[default]
    NearestEven,
    TowardZero,
    TowardPositive,
    TowardNegative,
}

bitflags! {
    #[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
    pub struct Flags: u8 {
        const INEXACT = 1 << 0;
        const OVERFLOW = 1 << 1;
        const UNDERFLOW = 1 << 2;
        const INVALID = 1 << 3;
        /// The exact addition error did not fit the format; `err` holds an approximation.
        const ERR_UNREPRESENTABLE = 1 << 4;
        /// An operand, the sum, or the error was subnormal. Hardware that does
        /// not handle denormals would have produced something else here.
        const SUBNORMAL = 1 << 5;
    }
}

/// Position of the discarded part relative to half a unit of the kept part.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Remainder {
    Zero,
    Below,
    Half,
    Above,
}

/// Rounds `(-1)^negative * sig * 2^exp` to `format`.
///
/// `sticky` marks a nonzero magnitude strictly between `sig * 2^exp` and
/// `(sig + 1) * 2^exp` that did not fit in `sig`. When it is set, `sig` must
/// extend at least one bit below the result's precision, otherwise the
/// rounding decision is undetermined (checked in debug builds).
///
/// Overflow rounds to infinity or the largest finite value depending on the
/// mode; underflow is detected after rounding.
pub fn round_pack(
    format: FloatFormat,
    negative: bool,
    exp: i64,
    sig: u128,
    sticky: bool,
    mode: RoundingMode,
) -> (PackedFloat, Flags) {
    if sig == 0 && !sticky {
        return (PackedFloat::zero(format, negative), Flags::empty());
    }
    let p = format.precision() as i64;
    let lsb_min = format.lsb_min();
    let nbits = 128 - sig.leading_zeros() as i64;

    let mut lsb = (exp + nbits - p).max(lsb_min);
    let shift = lsb - exp;
    let (mut kept, rem) = if shift <= 0 {
        debug_assert!(!sticky, "sticky bit without guard bits");
        let rem = if sticky { Remainder::Below } else { Remainder::Zero };
        (sig << (-shift) as u32, rem)
    } else if shift > nbits {
        // everything, including the leading bit, falls below half a unit
        (0, Remainder::Below)
    } else {
        let shift = shift as u32;
        let (kept, low) = if shift == 128 { (0, sig) } else { (sig >> shift, sig & ((1u128 << shift) - 1)) };
        let half = 1u128 << (shift - 1);
        let rem = match low.cmp(&half) {
            _ if low == 0 && !sticky => Remainder::Zero,
            std::cmp::Ordering::Less => Remainder::Below,
            std::cmp::Ordering::Equal if sticky => Remainder::Above,
            std::cmp::Ordering::Equal => Remainder::Half,
            std::cmp::Ordering::Greater => Remainder::Above,
        };
        (kept, rem)
    };

    let mut flags = Flags::empty();
    if rem != Remainder::Zero {
        flags |= Flags::INEXACT;
        let up = match mode {
            RoundingMode::NearestEven => rem == Remainder::Above || (rem == Remainder::Half && kept & 1 == 1),
            RoundingMode::TowardZero => false,
            RoundingMode::TowardPositive => !negative,
            RoundingMode::TowardNegative => negative,
        };
        if up {
            kept += 1;
            if kept == 1u128 << p {
                kept >>= 1;
                lsb += 1;
            }
        }
    }

    let frac_bits = format.frac_bits();
    let implicit = 1u128 << frac_bits;
    if kept >= implicit {
        let e = lsb + frac_bits as i64;
        if e > format.emax() {
            flags |= Flags::OVERFLOW | Flags::INEXACT;
            let to_inf = match mode {
                RoundingMode::NearestEven => true,
                RoundingMode::TowardZero => false,
                RoundingMode::TowardPositive => !negative,
                RoundingMode::TowardNegative => negative,
            };
            let out = if to_inf {
                PackedFloat::infinity(format, negative)
            } else {
                PackedFloat::max_finite(format, negative)
            };
            return (out, flags);
        }
        let field = (e + format.bias()) as u64;
        let bits = sign_bits(format, negative) | (field << frac_bits) | (kept as u64 & format.frac_mask());
        (PackedFloat::from_parts_unchecked(format, bits), flags)
    } else {
        if flags.contains(Flags::INEXACT) {
            flags |= Flags::UNDERFLOW;
        }
        if kept != 0 {
            flags |= Flags::SUBNORMAL;
        }
        let bits = sign_bits(format, negative) | kept as u64;
        (PackedFloat::from_parts_unchecked(format, bits), flags)
    }
}

#[inline]
fn sign_bits(format: FloatFormat, negative: bool) -> u64 {
    if negative {
        format.sign_mask()
    } else {
        0
    }
}
