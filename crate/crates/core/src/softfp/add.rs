use super::{round_pack, Flags, FloatClass, FloatFormat, PackedFloat, RoundingMode};

/// Guard bits kept below the larger operand's significand during alignment.
/// With three guard bits, exact cancellation of more than one leading bit only
/// happens when nothing was shifted out.
const GUARD: i64 = 3;

/// Result of an emulated `fpadd`: the rounded sum and the contents of the
/// error register.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AddResult {
    pub sum: PackedFloat,
    /// `exact(a + b) - sum`; `+0` whenever the sum is not finite.
    pub err: PackedFloat,
    pub flags: Flags,
}

/// Adds two values of the same format and also returns the exact rounding
/// error of the addition.
///
/// The error combines the two places where precision is lost: bits of the
/// smaller operand that fall off the end during exponent alignment (kept
/// verbatim at their own exponent, not collapsed into a sticky bit) and the
/// difference between the pre-rounding and rounded sums.
///
/// Under round-to-nearest-even the error of a finite sum is always
/// representable. Directed modes may not have that property; when the error
/// does not fit, `ERR_UNREPRESENTABLE` is raised and `err` holds the error
/// rounded toward zero.
pub fn add_with_err(a: PackedFloat, b: PackedFloat, mode: RoundingMode) -> AddResult {
    let format = a.format();
    assert_eq!(format, b.format(), "operands must share a format");
    let zero = PackedFloat::zero(format, false);

    let ua = a.unpack();
    let ub = b.unpack();
    let mut flags = Flags::empty();
    if ua.class == FloatClass::Subnormal || ub.class == FloatClass::Subnormal {
        flags |= Flags::SUBNORMAL;
    }

    // NaN and infinity: the error register carries +0.
    if ua.class == FloatClass::Nan || ub.class == FloatClass::Nan {
        if a.is_signaling_nan() || b.is_signaling_nan() {
            flags |= Flags::INVALID;
        }
        let nan = if ua.class == FloatClass::Nan { a } else { b };
        return AddResult { sum: nan.quieted(), err: zero, flags };
    }
    match (ua.class, ub.class) {
        (FloatClass::Infinity, FloatClass::Infinity) if ua.negative != ub.negative => {
            flags |= Flags::INVALID;
            return AddResult { sum: PackedFloat::default_nan(format), err: zero, flags };
        }
        (FloatClass::Infinity, _) => return AddResult { sum: a, err: zero, flags },
        (_, FloatClass::Infinity) => return AddResult { sum: b, err: zero, flags },
        (FloatClass::Zero, FloatClass::Zero) => {
            let negative = if ua.negative == ub.negative { ua.negative } else { mode == RoundingMode::TowardNegative };
            return AddResult { sum: PackedFloat::zero(format, negative), err: zero, flags };
        }
        (FloatClass::Zero, _) => return AddResult { sum: b, err: zero, flags },
        (_, FloatClass::Zero) => return AddResult { sum: a, err: zero, flags },
        _ => {}
    }

    // Both finite and nonzero. `big` is the operand with the larger lsb exponent.
    let (big, small) = if ua.lsb_exponent(format) >= ub.lsb_exponent(format) { (ua, ub) } else { (ub, ua) };
    let e_big = big.lsb_exponent(format);
    let e_small = small.lsb_exponent(format);
    let dist = e_big - e_small;

    // Alignment: the smaller significand is shifted to the working exponent
    // e_big - GUARD. `lost` holds the bits that fall off, at exponent e_small.
    let (aligned_small, lost, lost_bits) = if dist <= GUARD {
        ((small.significand as u128) << (GUARD - dist), 0u64, 0i64)
    } else {
        let s = dist - GUARD;
        if s >= 64 {
            (0u128, small.significand, s)
        } else {
            let kept = (small.significand >> s) as u128;
            let lost = small.significand & ((1u64 << s) - 1);
            (kept, lost, s)
        }
    };
    let aligned_big = (big.significand as u128) << GUARD;
    let subtract = big.negative != small.negative;

    // Rounding works on the aligned sum with one extra sticky bit appended at
    // exponent e_big - GUARD - 1. An odd proxy never sits on a rounding
    // boundary, so it rounds the same way as the true sum.
    let sticky = (lost != 0) as u128;
    let x = aligned_big << 1;
    let y = (aligned_small << 1) | sticky;
    let (proxy, negative) = if !subtract {
        (x + y, big.negative)
    } else if x >= y {
        (x - y, big.negative)
    } else {
        (y - x, small.negative)
    };
    let proxy_exp = e_big - GUARD - 1;

    if proxy == 0 {
        // exact cancellation
        let negative = mode == RoundingMode::TowardNegative;
        return AddResult { sum: PackedFloat::zero(format, negative), err: zero, flags };
    }

    let (sum, round_flags) = round_pack(format, negative, proxy_exp, proxy, false, mode);
    flags |= round_flags;
    if !sum.is_finite() {
        return AddResult { sum, err: zero, flags };
    }

    // Rounding delta, exact at proxy_exp: (aligned sum without sticky) - sum.
    let signed = |neg: bool, m: u128| -> i128 {
        if neg {
            -(m as i128)
        } else {
            m as i128
        }
    };
    let pre_round = signed(big.negative, x) + signed(small.negative, aligned_small << 1);
    let us = sum.unpack();
    let sum_lsb = us.lsb_exponent(format);
    if sum_lsb < proxy_exp {
        // Massive cancellation. Nothing was shifted out and the sum is exact.
        debug_assert!(lost == 0 && !round_flags.contains(Flags::INEXACT));
        return AddResult { sum, err: zero, flags };
    }
    let sum_scaled = signed(us.negative, (us.significand as u128) << (sum_lsb - proxy_exp) as u32);
    let delta = pre_round - sum_scaled;

    let (err, err_flags) = if lost == 0 {
        pack_error(format, proxy_exp, delta)
    } else {
        // lost bits sit at e_small = proxy_exp - (lost_bits - 1)
        let lost = signed(small.negative, lost as u128);
        let scale = lost_bits - 1;
        if delta == 0 {
            pack_error(format, e_small, lost)
        } else if scale + 8 < 120 {
            pack_error(format, e_small, (delta << scale) + lost)
        } else {
            // Only reachable in directed modes: the delta dominates and the
            // lost bits are far below it. Report the delta alone.
            let (p, f) = pack_error(format, proxy_exp, delta);
            (p, f | Flags::ERR_UNREPRESENTABLE)
        }
    };
    debug_assert!(
        mode != RoundingMode::NearestEven || !err_flags.contains(Flags::ERR_UNREPRESENTABLE),
        "addition error must be representable under nearest-even"
    );
    flags |= err_flags;
    AddResult { sum, err, flags }
}

/// Packs the exact error `value * 2^exp`.
fn pack_error(format: FloatFormat, exp: i64, value: i128) -> (PackedFloat, Flags) {
    if value == 0 {
        return (PackedFloat::zero(format, false), Flags::empty());
    }
    let (p, f) = round_pack(format, value < 0, exp, value.unsigned_abs(), false, RoundingMode::TowardZero);
    let mut flags = f & Flags::SUBNORMAL;
    if f.intersects(Flags::INEXACT | Flags::OVERFLOW) {
        flags |= Flags::ERR_UNREPRESENTABLE;
    }
    (p, flags)
}

/// Convenience wrapper for host `f32` values under nearest-even.
pub fn add_f32(a: f32, b: f32) -> (f32, f32) {
    let r = add_with_err(PackedFloat::from_f32(a), PackedFloat::from_f32(b), RoundingMode::NearestEven);
    (r.sum.to_f32(), r.err.to_f32())
}

/// Convenience wrapper for host `f64` values under nearest-even.
pub fn add_f64(a: f64, b: f64) -> (f64, f64) {
    let r = add_with_err(PackedFloat::from_f64(a), PackedFloat::from_f64(b), RoundingMode::NearestEven);
    (r.sum.to_f64(), r.err.to_f64())
}
