use crate::error::AccumError;
use crate::scalar::Scalar;
use crate::softfp::{round_pack, FloatFormat, PackedFloat, RoundingMode};

/// Fixed-point two's-complement integer wide enough to hold any sum of up to
/// 2^60 finite values of its format without rounding.
///
/// Bit 0 of limb 0 has weight `2^lsb_min` of the format. Values of narrower
/// formats (whose subnormal lsb is not below this one) may be added as well.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactAccumulator {
    format: FloatFormat,
    lsb: i64,
    limbs: Vec<u64>,
}

impl ExactAccumulator {
    pub fn new(format: FloatFormat) -> Self {
        let p = format.precision() as i64;
        let bits = (format.emax() - format.emin()) + 2 * p + 64;
        let n = (bits as usize).div_ceil(64);
        Self { format, lsb: format.lsb_min(), limbs: vec![0; n] }
    }

    pub fn for_scalar<T: Scalar>() -> Self {
        Self::new(T::FORMAT)
    }

    pub fn format(&self) -> FloatFormat {
        self.format
    }

    /// Two's-complement limbs, least significant first.
    pub fn limbs(&self) -> &[u64] {
        &self.limbs
    }

    /// Weight exponent of bit 0.
    pub fn lsb_exponent(&self) -> i64 {
        self.lsb
    }

    /// Width of the fixed-point integer in bits.
    pub fn width_bits(&self) -> usize {
        self.limbs.len() * 64
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.iter().all(|&l| l == 0)
    }

    pub fn is_negative(&self) -> bool {
        self.limbs.last().is_some_and(|&l| l >> 63 == 1)
    }

    pub fn add(&mut self, x: PackedFloat) -> Result<(), AccumError> {
        if !x.is_finite() {
            return Err(AccumError::NonFinite(x.to_string()));
        }
        if x.is_zero() {
            return Ok(());
        }
        let u = x.unpack();
        let shift = u.lsb_exponent(x.format()) - self.lsb;
        if shift < 0 {
            return Err(AccumError::OutOfRange);
        }
        self.add_shifted(u.negative, u.significand, shift as usize)
    }

    pub fn add_scalar<T: Scalar>(&mut self, x: T) -> Result<(), AccumError> {
        self.add(x.to_packed())
    }

    /// Adds every element, stopping at the first non-finite one.
    pub fn extend<T: Scalar>(&mut self, v: &[T]) -> Result<(), AccumError> {
        v.iter().try_for_each(|&x| self.add_scalar(x))
    }

    /// Adds another accumulator of the same format.
    pub fn merge(&mut self, other: &ExactAccumulator) {
        assert_eq!(self.format, other.format, "accumulators must share a format");
        let mut carry = false;
        for (a, &b) in self.limbs.iter_mut().zip(&other.limbs) {
            let (s1, c1) = a.overflowing_add(b);
            let (s2, c2) = s1.overflowing_add(carry as u64);
            *a = s2;
            carry = c1 || c2;
        }
    }

    pub fn negate(&mut self) {
        negate_limbs(&mut self.limbs);
    }

    fn add_shifted(&mut self, negative: bool, sig: u64, shift: usize) -> Result<(), AccumError> {
        let idx = shift / 64;
        let bit = shift % 64;
        let wide = (sig as u128) << bit;
        let parts = [wide as u64, (wide >> 64) as u64];
        if idx + 2 > self.limbs.len() - 1 {
            return Err(AccumError::OutOfRange);
        }
        if !negative {
            let mut carry = false;
            for (i, limb) in self.limbs[idx..].iter_mut().enumerate() {
                let add = if i < 2 { parts[i] } else { 0 };
                if i >= 2 && !carry {
                    break;
                }
                let (s1, c1) = limb.overflowing_add(add);
                let (s2, c2) = s1.overflowing_add(carry as u64);
                *limb = s2;
                carry = c1 || c2;
            }
        } else {
            let mut borrow = false;
            for (i, limb) in self.limbs[idx..].iter_mut().enumerate() {
                let sub = if i < 2 { parts[i] } else { 0 };
                if i >= 2 && !borrow {
                    break;
                }
                let (d1, b1) = limb.overflowing_sub(sub);
                let (d2, b2) = d1.overflowing_sub(borrow as u64);
                *limb = d2;
                borrow = b1 || b2;
            }
        }
        Ok(())
    }

    /// Correctly rounded (nearest-even) value in `format`; overflow gives infinity.
    pub fn round(&self, format: FloatFormat) -> PackedFloat {
        let negative = self.is_negative();
        let mut mag = self.limbs.clone();
        if negative {
            negate_limbs(&mut mag);
        }
        let Some(top) = highest_bit(&mag) else {
            return PackedFloat::zero(format, false);
        };
        const WINDOW: usize = 120;
        let (window, low, sticky) = if top < WINDOW {
            (extract(&mag, 0, top + 1), 0usize, false)
        } else {
            let low = top + 1 - WINDOW;
            (extract(&mag, low, WINDOW), low, any_below(&mag, low))
        };
        let exp = self.lsb + low as i64;
        round_pack(format, negative, exp, window, sticky, RoundingMode::NearestEven).0
    }

    pub fn round_to<T: Scalar>(&self) -> T {
        T::from_packed(self.round(T::FORMAT))
    }

    /// Sign of the exact value: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        if self.is_negative() {
            -1
        } else if self.is_zero() {
            0
        } else {
            1
        }
    }
}

fn negate_limbs(limbs: &mut [u64]) {
    let mut carry = true;
    for l in limbs.iter_mut() {
        let (s, c) = (!*l).overflowing_add(carry as u64);
        *l = s;
        carry = c;
    }
}

fn highest_bit(limbs: &[u64]) -> Option<usize> {
    limbs.iter().enumerate().rev().find(|(_, &l)| l != 0).map(|(i, &l)| i * 64 + 63 - l.leading_zeros() as usize)
}

/// Bits `[from, from + len)` as an integer; `len <= 128`.
fn extract(limbs: &[u64], from: usize, len: usize) -> u128 {
    let mut out = 0u128;
    for k in 0..len {
        let pos = from + k;
        let bit = (limbs[pos / 64] >> (pos % 64)) & 1;
        out |= (bit as u128) << k;
    }
    out
}

fn any_below(limbs: &[u64], pos: usize) -> bool {
    let full = pos / 64;
    if limbs[..full].iter().any(|&l| l != 0) {
        return true;
    }
    let rem = pos % 64;
    rem != 0 && limbs[full] & ((1u64 << rem) - 1) != 0
}
