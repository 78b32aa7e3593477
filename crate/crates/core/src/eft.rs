//! Error-free transformations and compensated summation.
//!
//! Every routine exists in a native form, which infers rounding errors with
//! extra additions, and a rebits form, which reads them from the adder.

use serde::{Deserialize, Serialize};

use crate::arith::{FpArith, FperrArith, Host, Soft};
use crate::opcount::{NoCount, Recorder};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SumAndError<T> {
    pub s: T,
    pub e: T,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeVariant {
    Native,
    Rebits,
}

/// Knuth's branch-free two-sum: 6 fpadd.
#[inline]
pub fn two_sum<T: Scalar, A: FpArith<T>>(ar: &mut A, a: T, b: T) -> SumAndError<T> {
    let s = ar.add(a, b);
    let bb = ar.sub(s, a);
    let t = ar.sub(s, bb);
    let x = ar.sub(a, t);
    let y = ar.sub(b, bb);
    let e = ar.add(x, y);
    SumAndError { s, e }
}

/// Two-sum with the error read from the adder: 1 fpadd, 1 move.
#[inline]
pub fn two_sum_rebits<T: Scalar, A: FperrArith<T>>(ar: &mut A, a: T, b: T) -> SumAndError<T> {
    let (s, e) = ar.add_fperr(a, b);
    SumAndError { s, e }
}

/// Dekker's fast two-sum: 3 fpadd. Requires `|a| >= |b|` or `a == 0`;
/// the precondition is only checked in debug builds.
#[inline]
pub fn fast_two_sum<T: Scalar, A: FpArith<T>>(ar: &mut A, a: T, b: T) -> SumAndError<T> {
    debug_assert!(
        a.abs() >= b.abs() || a == T::zero() || !(a + b).is_finite(),
        "fast_two_sum precondition violated: |{a:?}| < |{b:?}|"
    );
    let s = ar.add(a, b);
    let t = ar.sub(s, a);
    let e = ar.sub(b, t);
    SumAndError { s, e }
}

/// Rebits replacement for [`fast_two_sum`]: 1 fpadd, 1 move.
///
/// The adder's error is exact regardless of operand order. Debug builds check
/// that it coincides with what `fast_two_sum` would have inferred, which holds
/// whenever the caller respects the magnitude ordering.
#[inline]
pub fn fast_two_sum_rebits<T: Scalar, A: FperrArith<T>>(ar: &mut A, a: T, b: T) -> SumAndError<T> {
    let (s, e) = ar.add_fperr(a, b);
    #[cfg(debug_assertions)]
    if s.is_finite() {
        let inferred = b - (s - a);
        debug_assert!(
            inferred == e || (inferred == T::zero() && e == T::zero()),
            "fast_two_sum_rebits at a site where fast_two_sum is inexact: a={a:?} b={b:?}"
        );
    }
    SumAndError { s, e }
}

/// Product and its exact error, from Dekker's splitting.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoProd<T> {
    pub s: T,
    pub e: T,
    /// The splitting constant times an operand overflowed; `e` is meaningless.
    pub split_overflow: bool,
}

/// `(hi, lo)` with `hi + lo == a` and each half fitting in half the precision:
/// 1 fpmult, 3 fpadd.
#[inline]
pub fn split<T: Scalar, A: FpArith<T>>(ar: &mut A, a: T) -> (T, T, bool) {
    let t = ar.mul(T::SPLITTER, a);
    let u = ar.sub(t, a);
    let hi = ar.sub(t, u);
    let lo = ar.sub(a, hi);
    (hi, lo, a.is_finite() && !t.is_finite())
}

/// Dekker's two-product without FMA: 7 fpmult, 10 fpadd.
#[inline]
pub fn two_prod<T: Scalar, A: FpArith<T>>(ar: &mut A, a: T, b: T) -> TwoProd<T> {
    let s = ar.mul(a, b);
    let (ah, al, oa) = split(ar, a);
    let (bh, bl, ob) = split(ar, b);
    let hh = ar.mul(ah, bh);
    let t = ar.sub(hh, s);
    let hl = ar.mul(ah, bl);
    let t = ar.add(t, hl);
    let lh = ar.mul(al, bh);
    let t = ar.add(t, lh);
    let ll = ar.mul(al, bl);
    let e = ar.add(t, ll);
    TwoProd { s, e, split_overflow: oa || ob }
}

/// Plain recursive summation: one fpadd per element.
pub fn naive_sum<T: Scalar, A: FpArith<T>>(ar: &mut A, v: &[T]) -> T {
    v.iter().fold(T::zero(), |s, &x| ar.add(s, x))
}

/// Running state of Kahan's compensated sum.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct KahanState<T> {
    pub sum: T,
    pub comp: T,
}

impl<T: Scalar> KahanState<T> {
    pub fn new() -> Self {
        Self { sum: T::zero(), comp: T::zero() }
    }

    /// 4 fpadd.
    #[inline]
    pub fn push<A: FpArith<T>>(&mut self, ar: &mut A, x: T) {
        let y = ar.sub(x, self.comp);
        let t = ar.add(self.sum, y);
        let d = ar.sub(t, self.sum);
        self.comp = ar.sub(d, y);
        self.sum = t;
    }

    /// 2 fpadd, 1 move: the compensation is the negated adder error.
    #[inline]
    pub fn push_rebits<A: FperrArith<T>>(&mut self, ar: &mut A, x: T) {
        let y = ar.sub(x, self.comp);
        let (t, e) = ar.add_fperr(self.sum, y);
        self.comp = -e;
        self.sum = t;
    }
}

pub fn kahan_sum_native<T: Scalar, A: FpArith<T>>(ar: &mut A, v: &[T]) -> T {
    let mut k = KahanState::new();
    for &x in v {
        k.push(ar, x);
    }
    k.sum
}

pub fn kahan_sum_rebits<T: Scalar, A: FperrArith<T>>(ar: &mut A, v: &[T]) -> T {
    let mut k = KahanState::new();
    for &x in v {
        k.push_rebits(ar, x);
    }
    k.sum
}

pub fn kahan_sum<T: Scalar>(v: &[T], variant: SchemeVariant) -> T {
    kahan_sum_counted(v, variant, NoCount)
}

pub fn kahan_sum_counted<T: Scalar, R: Recorder>(v: &[T], variant: SchemeVariant, rec: R) -> T {
    match variant {
        SchemeVariant::Native => kahan_sum_native(&mut Host::counting(rec), v),
        SchemeVariant::Rebits => kahan_sum_rebits(&mut Soft::counting(rec), v),
    }
}

/// Sorts by decreasing magnitude; equal magnitudes order by decreasing value,
/// so any permutation of a multiset sorts to the same sequence. Each
/// magnitude comparison is one fpcomp.
pub fn sort_by_magnitude<T: Scalar, A: FpArith<T>>(ar: &mut A, v: &mut [T]) {
    v.sort_by(|a, b| ar.cmp_abs(*b, *a).then_with(|| total_order(*b, *a)));
}

fn total_order<T: Scalar>(a: T, b: T) -> std::cmp::Ordering {
    let key = |x: T| {
        let p = x.to_packed();
        let mag = (p.bits() & !p.format().sign_mask()) as i128;
        if p.is_negative() {
            -mag - 1
        } else {
            mag
        }
    };
    key(a).cmp(&key(b))
}

/// Priest's doubly compensated state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PriestState<T> {
    pub sum: T,
    pub comp: T,
}

impl<T: Scalar> PriestState<T> {
    pub fn start(first: T) -> Self {
        Self { sum: first, comp: T::zero() }
    }

    /// One doubly compensated step: 10 fpadd.
    #[inline]
    pub fn push<A: FpArith<T>>(&mut self, ar: &mut A, x: T) {
        let y = ar.add(self.comp, x);
        let w = ar.sub(y, self.comp);
        let u = ar.sub(x, w);
        let t = ar.add(y, self.sum);
        let w = ar.sub(t, self.sum);
        let v = ar.sub(y, w);
        let z = ar.add(u, v);
        let s = ar.add(t, z);
        let w = ar.sub(s, t);
        self.comp = ar.sub(z, w);
        self.sum = s;
    }
}

/// Priest's doubly compensated summation on magnitude-sorted input.
pub fn priest_sum_native<T: Scalar, A: FpArith<T>>(ar: &mut A, v: &[T]) -> T {
    let mut sorted = v.to_vec();
    sort_by_magnitude(ar, &mut sorted);
    let Some((&first, rest)) = sorted.split_first() else {
        return T::zero();
    };
    let mut st = PriestState::start(first);
    for &x in rest {
        st.push(ar, x);
    }
    st.sum
}

/// One accumulation step of the rebits Priest sum: 1 fpadd, 1 move. The
/// exact error is appended to `errs`.
#[inline]
pub fn priest_step_rebits<T: Scalar, A: FperrArith<T>>(ar: &mut A, sum: T, x: T, errs: &mut Vec<T>) -> T {
    let (s, e) = ar.add_fperr(sum, x);
    errs.push(e);
    s
}

fn distill<T: Scalar, A: FperrArith<T>>(ar: &mut A, v: &mut [T]) -> (T, Vec<T>) {
    sort_by_magnitude(ar, v);
    let mut errs = Vec::with_capacity(v.len());
    let Some((&first, rest)) = v.split_first() else {
        return (T::zero(), errs);
    };
    let mut s = first;
    for &x in rest {
        s = priest_step_rebits(ar, s, x, &mut errs);
    }
    (s, errs)
}

/// Magnitude-sorted cascade whose exact step errors are themselves sorted and
/// cascaded once more; the second-level errors are summed plainly.
pub fn priest_sum_rebits<T: Scalar, A: FperrArith<T>>(ar: &mut A, v: &[T]) -> T {
    let mut sorted = v.to_vec();
    let (s1, mut errs) = distill(ar, &mut sorted);
    let (s2, errs2) = distill(ar, &mut errs);
    let (h, l) = ar.add_fperr(s1, s2);
    let tail = naive_sum(ar, &errs2);
    let l = ar.add(l, tail);
    ar.add(h, l)
}

pub fn priest_sum<T: Scalar>(v: &[T], variant: SchemeVariant) -> T {
    priest_sum_counted(v, variant, NoCount)
}

pub fn priest_sum_counted<T: Scalar, R: Recorder>(v: &[T], variant: SchemeVariant, rec: R) -> T {
    match variant {
        SchemeVariant::Native => priest_sum_native(&mut Host::counting(rec), v),
        SchemeVariant::Rebits => priest_sum_rebits(&mut Soft::counting(rec), v),
    }
}

/// Sum2: a two-sum cascade with the errors accumulated plainly.
pub fn sum2<T: Scalar, A: FpArith<T>>(ar: &mut A, v: &[T]) -> T {
    let mut s = T::zero();
    let mut c = T::zero();
    for &x in v {
        let r = two_sum(ar, s, x);
        s = r.s;
        c = ar.add(c, r.e);
    }
    ar.add(s, c)
}

pub fn two_sum_variant<T: Scalar, R: Recorder>(a: T, b: T, variant: SchemeVariant, rec: R) -> SumAndError<T> {
    match variant {
        SchemeVariant::Native => two_sum(&mut Host::counting(rec), a, b),
        SchemeVariant::Rebits => two_sum_rebits(&mut Soft::counting(rec), a, b),
    }
}

pub fn fast_two_sum_variant<T: Scalar, R: Recorder>(a: T, b: T, variant: SchemeVariant, rec: R) -> SumAndError<T> {
    match variant {
        SchemeVariant::Native => fast_two_sum(&mut Host::counting(rec), a, b),
        SchemeVariant::Rebits => fast_two_sum_rebits(&mut Soft::counting(rec), a, b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcount::CountScope;

    #[test]
    fn two_sum_worked_example() {
        for variant in [SchemeVariant::Native, SchemeVariant::Rebits] {
            let r = two_sum_variant(2_808_064.0f32, 100.125, variant, NoCount);
            assert_eq!((r.s, r.e), (2_808_164.0, 0.125));
            let r = two_sum_variant(7.5f64, 0.0, variant, NoCount);
            assert_eq!((r.s, r.e.to_bits()), (7.5, 0));
        }
    }

    #[test]
    fn fast_two_sum_examples() {
        for variant in [SchemeVariant::Native, SchemeVariant::Rebits] {
            let r = fast_two_sum_variant(2f32.powi(30), 1.0, variant, NoCount);
            assert_eq!((r.s, r.e), (2f32.powi(30), 1.0));
            let r = fast_two_sum_variant(1.5f64, 1.5, variant, NoCount);
            assert_eq!((r.s, r.e), (3.0, 0.0));
        }
    }

    #[test]
    fn op_counts_per_call() {
        let mut s = CountScope::new("knuth");
        two_sum_variant(1.0f64, 1e-20, SchemeVariant::Native, &mut s);
        assert_eq!(s.report().fpadd, 6);
        let mut s = CountScope::new("knuth-r");
        two_sum_variant(1.0f64, 1e-20, SchemeVariant::Rebits, &mut s);
        assert_eq!((s.report().fpadd, s.report().move_fperr), (1, 1));
        let mut s = CountScope::new("dekker");
        fast_two_sum_variant(1.0f64, 1e-20, SchemeVariant::Native, &mut s);
        assert_eq!(s.report().fpadd, 3);
        let mut s = CountScope::new("prod");
        two_prod(&mut Host::counting(&mut s), 3.0f64, 7.0);
        assert_eq!((s.report().fpmult, s.report().fpadd), (7, 10));
    }

    #[test]
    fn kahan_examples() {
        for variant in [SchemeVariant::Native, SchemeVariant::Rebits] {
            assert_eq!(kahan_sum::<f32>(&[], variant), 0.0);
            let mut v = vec![16_777_216.0f32];
            v.extend(std::iter::repeat_n(1.0f32, 100));
            assert_eq!(kahan_sum(&v, variant), 16_777_316.0);
        }
    }

    #[test]
    fn kahan_counts_per_element() {
        let v = [1.0f32, 2.0, 3.0, 1e-9, 7.0];
        let mut s = CountScope::new("k");
        kahan_sum_counted(&v, SchemeVariant::Native, &mut s);
        assert_eq!(s.report().fpadd, 4 * v.len() as u64);
        let mut s = CountScope::new("kr");
        kahan_sum_counted(&v, SchemeVariant::Rebits, &mut s);
        assert_eq!(s.report().fpadd, 2 * v.len() as u64);
        assert_eq!(s.report().move_fperr, v.len() as u64);
    }

    #[test]
    fn priest_examples() {
        for variant in [SchemeVariant::Native, SchemeVariant::Rebits] {
            assert_eq!(priest_sum::<f64>(&[], variant), 0.0);
            assert_eq!(priest_sum(&[1.0f64, 2f64.powi(60), -(2f64.powi(60))], variant), 1.0);
            assert_eq!(priest_sum(&[0.5f32], variant), 0.5);
        }
    }

    #[test]
    fn priest_steps_cost() {
        let mut s = CountScope::new("p");
        let mut st = PriestState::start(1.0f64);
        st.push(&mut Host::counting(&mut s), 1e-17);
        assert_eq!(s.report().fpadd, 10);
        let mut s = CountScope::new("pr");
        let mut errs = Vec::new();
        priest_step_rebits(&mut Soft::counting(&mut s), 1.0f64, 1e-17, &mut errs);
        assert_eq!((s.report().fpadd, s.report().move_fperr), (1, 1));
        assert_eq!(errs, vec![1e-17]);
    }

    #[test]
    fn sorting_is_permutation_invariant() {
        let a = [3.0f64, -3.0, 0.0, -0.0, 1.0, -2.0, 2.0];
        let b = [2.0f64, -0.0, -3.0, 1.0, 0.0, 3.0, -2.0];
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        sort_by_magnitude(&mut Host::new(), &mut a);
        sort_by_magnitude(&mut Host::new(), &mut b);
        let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&a), bits(&b));
        assert_eq!(a[0], 3.0);
        assert_eq!(a[1], -3.0);
    }

    #[test]
    fn two_prod_examples() {
        let mut h = Host::new();
        let r = two_prod(&mut h, 1.0f64, 0.1);
        assert_eq!((r.s, r.e), (0.1, 0.0));
        let x = 1.0 + f64::EPSILON;
        let r = two_prod(&mut h, x, x);
        assert_eq!(r.s, 1.0 + 2.0 * f64::EPSILON);
        assert_eq!(r.e, 2f64.powi(-104));
        assert!(!r.split_overflow);
        let r = two_prod(&mut h, f64::MAX / 2.0, 1.5);
        assert!(r.split_overflow);
    }

    #[test]
    fn sum2_matches_plain_on_exact_data() {
        let v = [1.0f64, 2.0, 3.0, 4.0];
        assert_eq!(sum2(&mut Host::new(), &v), 10.0);
    }
}
