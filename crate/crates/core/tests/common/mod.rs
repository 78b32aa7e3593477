#![allow(dead_code)]

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rebits_core::{ExactAccumulator, PackedFloat};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Exact value `mant * 2^exp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dyadic {
    pub mant: BigInt,
    pub exp: i64,
}

impl Dyadic {
    pub fn of(x: PackedFloat) -> Dyadic {
        assert!(x.is_finite());
        let u = x.unpack();
        let m = BigInt::from(u.significand);
        Dyadic { mant: if u.negative { -m } else { m }, exp: u.lsb_exponent(x.format()) }
    }

    pub fn f64(x: f64) -> Dyadic {
        Self::of(PackedFloat::from_f64(x))
    }

    pub fn f32(x: f32) -> Dyadic {
        Self::of(PackedFloat::from_f32(x))
    }

    fn at(&self, exp: i64) -> BigInt {
        assert!(exp <= self.exp);
        &self.mant << (self.exp - exp) as usize
    }

    pub fn add(&self, o: &Dyadic) -> Dyadic {
        let e = self.exp.min(o.exp);
        Dyadic { mant: self.at(e) + o.at(e), exp: e }
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { mant: -self.mant.clone(), exp: self.exp }
    }

    pub fn sub(&self, o: &Dyadic) -> Dyadic {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Dyadic) -> Dyadic {
        Dyadic { mant: &self.mant * &o.mant, exp: self.exp + o.exp }
    }

    pub fn is_zero(&self) -> bool {
        self.mant == BigInt::from(0)
    }

    /// `|self| <= |o| * 2^k`.
    pub fn abs_le_scaled(&self, o: &Dyadic, k: i64) -> bool {
        let lhs = Dyadic { mant: self.mant.magnitude().clone().into(), exp: self.exp };
        let rhs = Dyadic { mant: o.mant.magnitude().clone().into(), exp: o.exp + k };
        let e = lhs.exp.min(rhs.exp);
        lhs.at(e) <= rhs.at(e)
    }
}

/// Exact value held by an accumulator.
pub fn accumulator_value(acc: &ExactAccumulator) -> Dyadic {
    let mut bytes = Vec::with_capacity(acc.limbs().len() * 8);
    for l in acc.limbs() {
        bytes.extend_from_slice(&l.to_le_bytes());
    }
    Dyadic { mant: BigInt::from_signed_bytes_le(&bytes), exp: acc.lsb_exponent() }
}

/// Random finite f64 with a uniformly chosen exponent in `[lo, hi]`.
pub fn f64_in_binades(r: &mut impl Rng, lo: i32, hi: i32) -> f64 {
    let e = r.random_range(lo..=hi);
    let m: f64 = r.random_range(1.0..2.0);
    let s = if r.random::<bool>() { -1.0 } else { 1.0 };
    s * m * 2f64.powi(e)
}

pub fn f32_in_binades(r: &mut impl Rng, lo: i32, hi: i32) -> f32 {
    let e = r.random_range(lo..=hi);
    let m: f32 = r.random_range(1.0..2.0);
    let s = if r.random::<bool>() { -1.0 } else { 1.0 };
    s * m * 2f32.powi(e)
}

pub fn finite_f64_bits(r: &mut impl Rng) -> f64 {
    loop {
        let x = f64::from_bits(r.random());
        if x.is_finite() {
            return x;
        }
    }
}

pub fn finite_f32_bits(r: &mut impl Rng) -> f32 {
    loop {
        let x = f32::from_bits(r.random());
        if x.is_finite() {
            return x;
        }
    }
}
