//! Bit-level emulation of an IEEE-754 adder whose error register is exposed.
//!
//! Every operation is a pure function; the error travels in the return value
//! rather than in a global register.

mod add;
mod format;
mod packed;
mod round;

pub use add::{add_f32, add_f64, add_with_err, AddResult};
pub use format::FloatFormat;
pub use packed::{FloatClass, PackedFloat, Unpacked};
pub use round::{round_pack, Flags, RoundingMode};

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const RNE: RoundingMode = RoundingMode::NearestEven;

    #[test]
    fn worked_example_binary32() {
        let r = add_with_err(PackedFloat::from_f32(2_808_064.0), PackedFloat::from_f32(100.125), RNE);
        assert_eq!(r.sum.to_f32(), 2_808_164.0);
        assert_eq!(r.err.to_f32().to_bits(), 0.125f32.to_bits());
        assert!(r.flags.contains(Flags::INEXACT));
    }

    #[test]
    fn adding_zero_is_exact() {
        for x in [1.5f32, -3.0e-40, f32::MAX, -0.0] {
            let (s, e) = add_f32(x, 0.0);
            assert_eq!(s.to_bits(), (x + 0.0).to_bits());
            assert_eq!(e.to_bits(), 0);
        }
    }

    #[test]
    fn half_ulp_tie_goes_to_even() {
        let tiny = 2f32.powi(-24);
        let (s, e) = add_f32(1.0, tiny);
        assert_eq!(s, 1.0);
        assert_eq!(e, tiny);
    }

    #[test]
    fn non_finite_sums_carry_zero_error() {
        let (s, e) = add_f32(f32::MAX, f32::MAX);
        assert_eq!(s, f32::INFINITY);
        assert_eq!(e.to_bits(), 0);
        let (s, e) = add_f64(f64::INFINITY, f64::NEG_INFINITY);
        assert!(s.is_nan());
        assert_eq!(e.to_bits(), 0);
        let (s, e) = add_f64(f64::NAN, 1.0);
        assert!(s.is_nan());
        assert_eq!(e.to_bits(), 0);
        let r = add_with_err(PackedFloat::from_f32(f32::MAX), PackedFloat::from_f32(f32::MAX), RNE);
        assert!(r.flags.contains(Flags::OVERFLOW | Flags::INEXACT));
    }

    #[test]
    fn signed_zero_rules() {
        let (s, _) = add_f64(0.0, -0.0);
        assert_eq!(s.to_bits(), 0);
        let (s, _) = add_f64(-0.0, -0.0);
        assert_eq!(s.to_bits(), (-0.0f64).to_bits());
        let (s, e) = add_f64(1.25, -1.25);
        assert_eq!(s.to_bits(), 0);
        assert_eq!(e.to_bits(), 0);
        let r = add_with_err(PackedFloat::from_f64(1.25), PackedFloat::from_f64(-1.25), RoundingMode::TowardNegative);
        assert_eq!(r.sum.to_f64().to_bits(), (-0.0f64).to_bits());
    }

    #[test]
    fn far_apart_operands_keep_the_whole_small_operand() {
        let (s, e) = add_f64(1.0, 1e-300);
        assert_eq!(s, 1.0);
        assert_eq!(e, 1e-300);
        let (s, e) = add_f64(-1e300, f64::from_bits(1));
        assert_eq!(s, -1e300);
        assert_eq!(e.to_bits(), 1);
    }

    #[test]
    fn subnormal_error_is_flagged() {
        let a = f64::MIN_POSITIVE * 3.0;
        let b = f64::from_bits(5);
        let r = add_with_err(PackedFloat::from_f64(a), PackedFloat::from_f64(b), RNE);
        assert!(r.flags.contains(Flags::SUBNORMAL));
        assert_eq!(r.sum.to_f64(), a + b);
    }

    #[test]
    fn directed_rounding_flags_unrepresentable_errors() {
        // 1 + 2^-200 rounded up: the error -(2^-52 - 2^-200) needs 148 bits
        let r = add_with_err(
            PackedFloat::from_f64(1.0),
            PackedFloat::from_f64(2f64.powi(-200)),
            RoundingMode::TowardPositive,
        );
        assert_eq!(r.sum.to_f64(), 1.0 + f64::EPSILON);
        assert!(r.flags.contains(Flags::ERR_UNREPRESENTABLE));
        assert!(r.err.is_finite());
        // an error that does fit is still exact under directed rounding
        let r = add_with_err(
            PackedFloat::from_f32(1.0),
            PackedFloat::from_f32(2f32.powi(-24)),
            RoundingMode::TowardPositive,
        );
        assert_eq!(r.sum.to_f32(), 1.0 + f32::EPSILON);
        assert_eq!(r.err.to_f32(), -(2f32.powi(-24)));
        assert!(!r.flags.contains(Flags::ERR_UNREPRESENTABLE));
    }

    #[test]
    fn sterbenz_subtraction_is_exact() {
        let (s, e) = add_f32(3.0, -1.75);
        assert_eq!(s, 1.25);
        assert_eq!(e.to_bits(), 0);
    }

    fn finite_f64() -> impl Strategy<Value = f64> {
        any::<u64>().prop_map(f64::from_bits).prop_filter("finite", |x| x.is_finite())
    }

    fn finite_f32() -> impl Strategy<Value = f32> {
        any::<u32>().prop_map(f32::from_bits).prop_filter("finite", |x| x.is_finite())
    }

    fn half_ulp_f64(x: f64) -> f64 {
        let bits = x.abs().to_bits();
        (f64::from_bits(bits + 1) - x.abs()) / 2.0
    }

    proptest! {
        #[test]
        fn commutative(a in finite_f64(), b in finite_f64()) {
            let (s1, e1) = add_f64(a, b);
            let (s2, e2) = add_f64(b, a);
            prop_assert_eq!(s1.to_bits(), s2.to_bits());
            prop_assert_eq!(e1.to_bits(), e2.to_bits());
        }

        #[test]
        fn error_within_half_ulp(a in finite_f64(), b in finite_f64()) {
            let (s, e) = add_f64(a, b);
            if s.is_finite() && s.abs() >= f64::MIN_POSITIVE {
                prop_assert!(e.abs() <= half_ulp_f64(s));
            }
            prop_assert!(e.is_finite());
        }

        #[test]
        fn sterbenz(a in finite_f32(), t in 0.5f32..=2.0) {
            let b = a * t;
            if b.is_finite() && a / 2.0 <= b.abs() && b.abs() <= 2.0 * a.abs() {
                let (_, e) = add_f32(a, -b);
                prop_assert_eq!(e.to_bits(), 0);
            }
        }
    }
}
