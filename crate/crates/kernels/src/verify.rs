//! Adder verification suites.
//!
//! Small formats are checked exhaustively against a nearest-value search over
//! a table of every finite value, which shares no rounding code with the
//! adder. binary32 and binary64 are checked on random and edge-case operand
//! pairs against the host FPU and the two-sum error.

use rand::Rng;
use rebits_core::eft::two_sum;
use rebits_core::{add_with_err, FloatFormat, Host, PackedFloat, RoundingMode, Scalar};
use serde::{Deserialize, Serialize};

use crate::error::KernelError;
use crate::gen::rng;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub format: String,
    pub pairs: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

impl VerifyReport {
    fn new(format: FloatFormat) -> Self {
        Self { format: format.name(), pairs: 0, failures: 0, first_failure: None }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.pairs += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Largest format width accepted by [`verify_exhaustive`].
pub const MAX_EXHAUSTIVE_WIDTH: u32 = 12;

struct Table {
    /// (scaled magnitude, bits) of every non-negative finite value, ascending,
    /// then the overflow threshold `2^(emax+1)` standing for infinity.
    values: Vec<(u128, u64)>,
    inf_bits: u64,
}

fn scaled_mag(x: PackedFloat) -> u128 {
    let f = x.format();
    let u = x.unpack();
    (u.significand as u128) << (u.lsb_exponent(f) - f.lsb_min())
}

impl Table {
    fn new(f: FloatFormat) -> Self {
        let sign = 1u64 << (f.width() - 1);
        let mut values: Vec<(u128, u64)> = (0..sign)
            .map(|b| PackedFloat::new(f, b).expect("in range"))
            .filter(|x| x.is_finite())
            .map(|x| (scaled_mag(x), x.bits()))
            .collect();
        let inf = PackedFloat::infinity(f, false);
        values.push((1u128 << (f.emax() + 1 - f.lsb_min()), inf.bits()));
        Self { values, inf_bits: inf.bits() }
    }

    /// Bits of the nearest table entry, ties to the even pattern.
    fn nearest(&self, mag: u128) -> u64 {
        let i = self.values.partition_point(|&(v, _)| v < mag);
        if i == self.values.len() {
            return self.inf_bits;
        }
        let (hi, hb) = self.values[i];
        if hi == mag || i == 0 {
            return hb;
        }
        let (lo, lb) = self.values[i - 1];
        match (mag - lo).cmp(&(hi - mag)) {
            std::cmp::Ordering::Less => lb,
            std::cmp::Ordering::Greater => hb,
            // the infinity stand-in has an even (zero) significand field
            std::cmp::Ordering::Equal => {
                if lb & 1 == 0 {
                    lb
                } else {
                    hb
                }
            }
        }
    }
}

/// Every ordered pair of a small format under round-to-nearest-even.
pub fn verify_exhaustive(f: FloatFormat) -> Result<VerifyReport, KernelError> {
    if f.width() > MAX_EXHAUSTIVE_WIDTH || f.emax() + 2 - f.lsb_min() > 120 {
        return Err(KernelError::InvalidParameter(format!(
            "exhaustive verification needs a format of at most {MAX_EXHAUSTIVE_WIDTH} bits, got {f}"
        )));
    }
    let table = Table::new(f);
    let sign = 1u64 << (f.width() - 1);
    let scaled = |x: PackedFloat| {
        let m = scaled_mag(x) as i128;
        if x.is_negative() {
            -m
        } else {
            m
        }
    };
    let mut rep = VerifyReport::new(f);
    let n = 1u64 << f.width();
    for ab in 0..n {
        let a = PackedFloat::new(f, ab).expect("in range");
        for bb in 0..n {
            let b = PackedFloat::new(f, bb).expect("in range");
            let r = add_with_err(a, b, RoundingMode::NearestEven);
            let what = || format!("{a:?} + {b:?} gave {:?}, err {:?}", r.sum, r.err);
            if !a.is_finite() || !b.is_finite() {
                let nan = a.is_nan()
                    || b.is_nan()
                    || (!a.is_finite() && !b.is_finite() && a.is_negative() != b.is_negative());
                let ok = if nan {
                    r.sum.is_nan()
                } else {
                    let neg = if a.is_finite() { b.is_negative() } else { a.is_negative() };
                    r.sum == PackedFloat::infinity(f, neg)
                };
                rep.check(ok && r.err.bits() == 0, what);
                continue;
            }
            let exact = scaled(a) + scaled(b);
            let expect = if exact == 0 {
                if a.is_zero() && b.is_zero() && a.is_negative() && b.is_negative() {
                    sign
                } else {
                    0
                }
            } else {
                let bits = table.nearest(exact.unsigned_abs());
                if exact < 0 {
                    bits | sign
                } else {
                    bits
                }
            };
            let mut ok = r.sum.bits() == expect && r.err.is_finite();
            if ok && r.sum.is_finite() {
                let residual = exact - scaled(r.sum);
                ok = scaled(r.err) == residual && (residual != 0 || r.err.bits() == 0);
            } else if ok {
                ok = r.err.bits() == 0;
            }
            rep.check(ok, what);
        }
    }
    Ok(rep)
}

fn bits_of<T: Scalar>(x: T) -> u64 {
    x.to_packed().bits()
}

fn from_bits<T: Scalar>(b: u64) -> T {
    T::from_packed(PackedFloat::new(T::FORMAT, b).expect("in range"))
}

fn random_finite<T: Scalar>(r: &mut impl Rng) -> T {
    let mask = T::FORMAT.bits_mask();
    loop {
        let x: T = from_bits(r.random::<u64>() & mask);
        if x.is_finite() {
            return x;
        }
    }
}

fn ulp<T: Scalar>(x: T) -> T {
    let a = x.abs();
    from_bits::<T>(bits_of(a) + 1) - a
}

/// One operand pair of the mixed random and edge-case stream.
pub fn edge_pair<T: Scalar>(r: &mut impl Rng) -> (T, T) {
    let a: T = random_finite(r);
    let f = T::FORMAT;
    match r.random_range(0..8u32) {
        0 => (a, random_finite(r)),
        // same exponent field
        1 => {
            let frac = (1u64 << f.frac_bits()) - 1;
            let b: T = from_bits((bits_of(a) & !frac) | (r.random::<u64>() & frac));
            (a, if r.random() { b } else { -b })
        }
        // near cancellation
        2 => {
            let k = r.random_range(-4i64..=4);
            let b = bits_of(a) as i64 + k;
            let b: T = from_bits((b.max(0) as u64) & f.bits_mask());
            (a, if b.is_finite() { -b } else { -a })
        }
        // half-ulp ties and their neighbours
        3 => {
            let u = ulp(a);
            if !u.is_finite() {
                return (a, a);
            }
            let h = u / T::narrow(2.0);
            let b = match r.random_range(0..4u32) {
                0 => h,
                1 => -h,
                2 => h * T::narrow(3.0),
                _ => h + h * T::epsilon(),
            };
            (a, b)
        }
        // a subnormal partner
        4 => (a, from_bits(r.random_range(1..1u64 << f.frac_bits()))),
        // exponent gap around the precision
        5 => {
            let gap = r.random_range(0..f.precision() as i32 + 6);
            let m = T::narrow(r.random_range(1.0..2.0));
            (a, -a * m * T::narrow(2f64.powi(-gap)))
        }
        // overflow edge
        6 => (T::max_value().copysign(a), a),
        _ => {
            let e = r.random_range(-30..30);
            let x = T::narrow(r.random_range(-2.0..2.0) * 2f64.powi(e));
            let y = T::narrow(r.random_range(-2.0..2.0) * 2f64.powi(e + r.random_range(-30..30)));
            (x, y)
        }
    }
}

/// Random and edge-case pairs: the sum must equal the host sum bitwise and
/// the error the two-sum error bitwise.
pub fn verify_random<T: Scalar>(pairs: u64, seed: u64) -> VerifyReport {
    let mut r = rng(seed);
    let mut rep = VerifyReport::new(T::FORMAT);
    for _ in 0..pairs {
        let (a, b) = edge_pair::<T>(&mut r);
        check_host(&mut rep, a, b);
    }
    rep
}

fn check_host<T: Scalar>(rep: &mut VerifyReport, a: T, b: T) {
    let res = add_with_err(a.to_packed(), b.to_packed(), RoundingMode::NearestEven);
    let (s, e) = (T::from_packed(res.sum), T::from_packed(res.err));
    let host = a + b;
    let mut ok = if host.is_nan() { s.is_nan() } else { bits_of(s) == bits_of(host) };
    if host.is_finite() {
        let t = two_sum(&mut Host::new(), a, b);
        ok &= bits_of(e) == bits_of(t.e);
    } else {
        ok &= bits_of(e) == 0;
    }
    rep.check(ok, || format!("{a:e} + {b:e}: got ({s:e}, {e:e}), host {host:e}"));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e5m2_passes() {
        let r = verify_exhaustive(FloatFormat::E5M2).unwrap();
        assert_eq!((r.pairs, r.failures), (65_536, 0), "{:?}", r.first_failure);
    }

    #[test]
    fn other_small_formats_pass() {
        for (e, m) in [(4, 3), (3, 4), (6, 3), (2, 1)] {
            let r = verify_exhaustive(FloatFormat::new(e, m).unwrap()).unwrap();
            assert!(r.passed(), "e{e}m{m}: {:?}", r.first_failure);
        }
        assert!(verify_exhaustive(FloatFormat::BINARY32).is_err());
    }

    #[test]
    fn nearest_search_ties_to_even() {
        let t = Table::new(FloatFormat::E5M2);
        // 1.0 = 0x3c and 1.25 = 0x3d in e5m2; 1.125 is the midpoint
        let one = scaled_mag(PackedFloat::new(FloatFormat::E5M2, 0x3c).unwrap());
        let next = scaled_mag(PackedFloat::new(FloatFormat::E5M2, 0x3d).unwrap());
        assert_eq!(t.nearest((one + next) / 2), 0x3c);
        assert_eq!(t.nearest((one + next) / 2 + 1), 0x3d);
    }

    #[test]
    fn host_agreement_small_runs() {
        assert!(verify_random::<f32>(200_000, 1).passed());
        assert!(verify_random::<f64>(200_000, 1).passed());
    }
}
