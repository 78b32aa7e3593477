//! Arithmetic backends.
//!
//! Algorithms are written against [`FpArith`] so the same code runs on host
//! arithmetic or on the emulated adder, with or without counting. Negation and
//! absolute value are free and are not routed through the backend.

use std::cmp::Ordering;

use crate::opcount::{NoCount, OpKind, Recorder};
use crate::scalar::Scalar;
use crate::softfp::{add_with_err, RoundingMode};

pub trait FpArith<T: Scalar> {
    fn add(&mut self, a: T, b: T) -> T;

    /// `a - b`, one fpadd.
    #[inline]
    fn sub(&mut self, a: T, b: T) -> T {
        self.add(a, -b)
    }

    fn mul(&mut self, a: T, b: T) -> T;

    fn div(&mut self, a: T, b: T) -> T;

    /// `|a| >= |b|`, one fpcomp.
    #[inline]
    fn abs_ge(&mut self, a: T, b: T) -> bool {
        self.cmp_abs(a, b) != Ordering::Less
    }

    /// Compares magnitudes, one fpcomp. NaNs order by bit pattern.
    fn cmp_abs(&mut self, a: T, b: T) -> Ordering;
}

#[inline]
fn magnitude_order<T: Scalar>(a: T, b: T) -> Ordering {
    let (a, b) = (a.abs(), b.abs());
    a.partial_cmp(&b).unwrap_or_else(|| a.to_packed().bits().cmp(&b.to_packed().bits()))
}

/// Backends whose adder also returns the exact rounding error.
pub trait FperrArith<T: Scalar>: FpArith<T> {
    /// Returns `(fl(a + b), exact error)`: one fpadd plus one error-register read.
    fn add_fperr(&mut self, a: T, b: T) -> (T, T);
}

/// Host IEEE-754 arithmetic (round to nearest even).
#[derive(Clone, Copy, Debug, Default)]
pub struct Host<R = NoCount> {
    pub rec: R,
}

impl Host<NoCount> {
    pub fn new() -> Self {
        Self { rec: NoCount }
    }
}

impl<R: Recorder> Host<R> {
    pub fn counting(rec: R) -> Self {
        Self { rec }
    }
}

impl<T: Scalar, R: Recorder> FpArith<T> for Host<R> {
    #[inline]
    fn add(&mut self, a: T, b: T) -> T {
        self.rec.record(OpKind::FpAdd, 1);
        a + b
    }

    #[inline]
    fn mul(&mut self, a: T, b: T) -> T {
        self.rec.record(OpKind::FpMult, 1);
        a * b
    }

    #[inline]
    fn div(&mut self, a: T, b: T) -> T {
        self.rec.record(OpKind::FpDiv, 1);
        a / b
    }

    #[inline]
    fn cmp_abs(&mut self, a: T, b: T) -> Ordering {
        self.rec.record(OpKind::FpComp, 1);
        magnitude_order(a, b)
    }
}

/// Additions go through the emulated adder; multiplication and division use
/// the host, since the error register only covers addition.
#[derive(Clone, Copy, Debug, Default)]
pub struct Soft<R = NoCount> {
    pub rec: R,
}

impl Soft<NoCount> {
    pub fn new() -> Self {
        Self { rec: NoCount }
    }
}

impl<R: Recorder> Soft<R> {
    pub fn counting(rec: R) -> Self {
        Self { rec }
    }
}

#[inline]
fn soft_add<T: Scalar>(a: T, b: T) -> (T, T) {
    let r = add_with_err(a.to_packed(), b.to_packed(), RoundingMode::NearestEven);
    (T::from_packed(r.sum), T::from_packed(r.err))
}

impl<T: Scalar, R: Recorder> FpArith<T> for Soft<R> {
    #[inline]
    fn add(&mut self, a: T, b: T) -> T {
        self.rec.record(OpKind::FpAdd, 1);
        soft_add(a, b).0
    }

    #[inline]
    fn mul(&mut self, a: T, b: T) -> T {
        self.rec.record(OpKind::FpMult, 1);
        a * b
    }

    #[inline]
    fn div(&mut self, a: T, b: T) -> T {
        self.rec.record(OpKind::FpDiv, 1);
        a / b
    }

    #[inline]
    fn cmp_abs(&mut self, a: T, b: T) -> Ordering {
        self.rec.record(OpKind::FpComp, 1);
        magnitude_order(a, b)
    }
}

impl<T: Scalar, R: Recorder> FperrArith<T> for Soft<R> {
    #[inline]
    fn add_fperr(&mut self, a: T, b: T) -> (T, T) {
        self.rec.record(OpKind::FpAdd, 1);
        self.rec.record(OpKind::MoveFperr, 1);
        soft_add(a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcount::CountScope;

    #[test]
    fn backends_agree_and_count() {
        let mut scope = CountScope::new("a");
        let mut h = Host::counting(&mut scope);
        let x: f64 = h.add(0.1, 0.2);
        let y: f64 = h.sub(x, 0.3);
        let _ = h.abs_ge(x, y);
        assert_eq!(scope.report().fpadd, 2);
        assert_eq!(scope.report().fpcomp, 1);

        let mut s = Soft::new();
        let xs: f64 = s.add(0.1, 0.2);
        assert_eq!(xs.to_bits(), x.to_bits());
        let (sum, err) = s.add_fperr(2_808_064.0f32, 100.125);
        assert_eq!((sum, err), (2_808_164.0, 0.125));
    }

    #[test]
    fn add_fperr_counts_one_add_one_move() {
        let mut scope = CountScope::new("s");
        let mut s = Soft::counting(&mut scope);
        let _: (f32, f32) = s.add_fperr(1.0, 2.0);
        let r = scope.report();
        assert_eq!((r.fpadd, r.move_fperr), (1, 1));
    }
}
