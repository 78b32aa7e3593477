//! Double-double arithmetic.
//!
//! The `*_native` functions infer every addition error with extra additions;
//! the `*_rebits` functions read it from the adder instead. For normalized
//! finite operands the two produce identical limbs.

use crate::arith::{FpArith, FperrArith, Host, Soft};
use crate::eft::{fast_two_sum, fast_two_sum_rebits, two_prod, two_sum, two_sum_rebits, SchemeVariant};
use crate::opcount::{NoCount, Recorder};

/// Unevaluated sum `hi + lo` with `fl(hi + lo) == hi`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DDouble {
    pub hi: f64,
    pub lo: f64,
}

impl DDouble {
    pub const ZERO: DDouble = DDouble { hi: 0.0, lo: 0.0 };

    /// No normalization is performed.
    pub const fn new(hi: f64, lo: f64) -> Self {
        Self { hi, lo }
    }

    pub const fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub fn is_normalized(&self) -> bool {
        self.hi + self.lo == self.hi || (self.hi == 0.0 && self.lo == 0.0)
    }

    pub fn negate(self) -> Self {
        Self { hi: -self.hi, lo: -self.lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn bits(&self) -> (u64, u64) {
        (self.hi.to_bits(), self.lo.to_bits())
    }
}

/// Renormalizes an arbitrary pair: one fpcomp picks the operand order for a
/// fast two-sum.
pub fn normalize_native<A: FpArith<f64>>(ar: &mut A, hi: f64, lo: f64) -> DDouble {
    let r = if ar.abs_ge(hi, lo) { fast_two_sum(ar, hi, lo) } else { fast_two_sum(ar, lo, hi) };
    DDouble::new(r.s, r.e)
}

pub fn normalize_rebits<A: FperrArith<f64>>(ar: &mut A, hi: f64, lo: f64) -> DDouble {
    let r = two_sum_rebits(ar, hi, lo);
    DDouble::new(r.s, r.e)
}

/// 20 fpadd.
pub fn add_native<A: FpArith<f64>>(ar: &mut A, x: DDouble, y: DDouble) -> DDouble {
    let s = two_sum(ar, x.hi, y.hi);
    let t = two_sum(ar, x.lo, y.lo);
    let (s1, s2, t1, t2) = (s.s, s.e, t.s, t.e);
    let s2 = ar.add(s2, t1);
    let q = fast_two_sum(ar, s1, s2);
    let s2 = ar.add(q.e, t2);
    let q = fast_two_sum(ar, q.s, s2);
    DDouble::new(q.s, q.e)
}

/// 6 fpadd, 4 moves.
pub fn add_rebits<A: FperrArith<f64>>(ar: &mut A, x: DDouble, y: DDouble) -> DDouble {
    let (s1, s2) = ar.add_fperr(x.hi, y.hi);
    let (t1, t2) = ar.add_fperr(x.lo, y.lo);
    let s2 = ar.add(s2, t1);
    let q = fast_two_sum_rebits(ar, s1, s2);
    let s2 = ar.add(q.e, t2);
    let q = fast_two_sum_rebits(ar, q.s, s2);
    DDouble::new(q.s, q.e)
}

/// Double-double plus double: 10 fpadd.
pub fn add_f64_native<A: FpArith<f64>>(ar: &mut A, x: DDouble, b: f64) -> DDouble {
    let r = two_sum(ar, x.hi, b);
    let s2 = ar.add(r.e, x.lo);
    let q = fast_two_sum(ar, r.s, s2);
    DDouble::new(q.s, q.e)
}

/// 3 fpadd, 2 moves.
pub fn add_f64_rebits<A: FperrArith<f64>>(ar: &mut A, x: DDouble, b: f64) -> DDouble {
    let r = two_sum_rebits(ar, x.hi, b);
    let s2 = ar.add(r.e, x.lo);
    let q = fast_two_sum_rebits(ar, r.s, s2);
    DDouble::new(q.s, q.e)
}

/// 9 fpmult, 15 fpadd.
pub fn mul_native<A: FpArith<f64>>(ar: &mut A, x: DDouble, y: DDouble) -> DDouble {
    let p2 = mul_cross(ar, x, y);
    let q = fast_two_sum(ar, p2.0, p2.1);
    DDouble::new(q.s, q.e)
}

/// 9 fpmult, 13 fpadd, 1 move.
pub fn mul_rebits<A: FperrArith<f64>>(ar: &mut A, x: DDouble, y: DDouble) -> DDouble {
    let p2 = mul_cross(ar, x, y);
    let q = fast_two_sum_rebits(ar, p2.0, p2.1);
    DDouble::new(q.s, q.e)
}

fn mul_cross<A: FpArith<f64>>(ar: &mut A, x: DDouble, y: DDouble) -> (f64, f64) {
    let p = two_prod(ar, x.hi, y.hi);
    let a = ar.mul(x.hi, y.lo);
    let b = ar.mul(x.lo, y.hi);
    let c = ar.add(a, b);
    (p.s, ar.add(p.e, c))
}

/// Double-double times double: 8 fpmult, 14 fpadd.
pub fn mul_f64_native<A: FpArith<f64>>(ar: &mut A, x: DDouble, b: f64) -> DDouble {
    let (p1, p2) = mul_f64_cross(ar, x, b);
    let q = fast_two_sum(ar, p1, p2);
    DDouble::new(q.s, q.e)
}

/// 8 fpmult, 12 fpadd, 1 move.
pub fn mul_f64_rebits<A: FperrArith<f64>>(ar: &mut A, x: DDouble, b: f64) -> DDouble {
    let (p1, p2) = mul_f64_cross(ar, x, b);
    let q = fast_two_sum_rebits(ar, p1, p2);
    DDouble::new(q.s, q.e)
}

fn mul_f64_cross<A: FpArith<f64>>(ar: &mut A, x: DDouble, b: f64) -> (f64, f64) {
    let p = two_prod(ar, x.hi, b);
    let c = ar.mul(x.lo, b);
    (p.s, ar.add(p.e, c))
}

/// Long division with two correction steps: 3 fpdiv, 16 fpmult, 81 fpadd.
pub fn div_native<A: FpArith<f64>>(ar: &mut A, x: DDouble, y: DDouble) -> DDouble {
    let q1 = ar.div(x.hi, y.hi);
    let r = {
        let p = mul_f64_native(ar, y, q1).negate();
        add_native(ar, x, p)
    };
    let q2 = ar.div(r.hi, y.hi);
    let r = {
        let p = mul_f64_native(ar, y, q2).negate();
        add_native(ar, r, p)
    };
    let q3 = ar.div(r.hi, y.hi);
    let q = fast_two_sum(ar, q1, q2);
    add_f64_native(ar, DDouble::new(q.s, q.e), q3)
}

/// 3 fpdiv, 16 fpmult, 40 fpadd, 13 moves.
pub fn div_rebits<A: FperrArith<f64>>(ar: &mut A, x: DDouble, y: DDouble) -> DDouble {
    let q1 = ar.div(x.hi, y.hi);
    let r = {
        let p = mul_f64_rebits(ar, y, q1).negate();
        add_rebits(ar, x, p)
    };
    let q2 = ar.div(r.hi, y.hi);
    let r = {
        let p = mul_f64_rebits(ar, y, q2).negate();
        add_rebits(ar, r, p)
    };
    let q3 = ar.div(r.hi, y.hi);
    let q = fast_two_sum_rebits(ar, q1, q2);
    add_f64_rebits(ar, DDouble::new(q.s, q.e), q3)
}

macro_rules! dispatch {
    ($name:ident, $counted:ident, $native:ident, $rebits:ident, $rhs:ty) => {
        pub fn $name(x: DDouble, y: $rhs, variant: SchemeVariant) -> DDouble {
            $counted(x, y, variant, NoCount)
        }

        pub fn $counted<R: Recorder>(x: DDouble, y: $rhs, variant: SchemeVariant, rec: R) -> DDouble {
            match variant {
                SchemeVariant::Native => $native(&mut Host::counting(rec), x, y),
                SchemeVariant::Rebits => $rebits(&mut Soft::counting(rec), x, y),
            }
        }
    };
}

dispatch!(dd_add, dd_add_counted, add_native, add_rebits, DDouble);
dispatch!(dd_add_f64, dd_add_f64_counted, add_f64_native, add_f64_rebits, f64);
dispatch!(dd_mul, dd_mul_counted, mul_native, mul_rebits, DDouble);
dispatch!(dd_mul_f64, dd_mul_f64_counted, mul_f64_native, mul_f64_rebits, f64);
dispatch!(dd_div, dd_div_counted, div_native, div_rebits, DDouble);

pub fn dd_normalize(hi: f64, lo: f64, variant: SchemeVariant) -> DDouble {
    match variant {
        SchemeVariant::Native => normalize_native(&mut Host::new(), hi, lo),
        SchemeVariant::Rebits => normalize_rebits(&mut Soft::new(), hi, lo),
    }
}

pub fn dd_negate(x: DDouble) -> DDouble {
    x.negate()
}
