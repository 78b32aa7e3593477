use serde::{Deserialize, Serialize};

use crate::arith::{FperrArith, Soft};
use crate::error::AccumError;
use crate::opcount::{CountScope, OpCounters};
use crate::scalar::Scalar;

/// A running value together with the running sum of its addition errors.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FloatErr<T> {
    pub val: T,
    pub err: T,
}

/// How the error halves combine when two `FloatErr` values are added.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MergeRule {
    /// `err' = fl(fl(a.err + b.err) + e)`.
    #[default]
    SumAll,
    /// `err' = e`, dropping both incoming errors.
    FperrOnly,
}

impl<T: Scalar> FloatErr<T> {
    pub fn zero() -> Self {
        Self { val: T::zero(), err: T::zero() }
    }

    pub fn new(val: T, err: T) -> Self {
        Self { val, err }
    }

    /// `val += x`, then the adder's error is added to `err` with a plain
    /// addition whose own error is dropped.
    #[inline]
    pub fn add_scalar<A: FperrArith<T>>(self, ar: &mut A, x: T) -> Self {
        let (val, e) = ar.add_fperr(self.val, x);
        let err = ar.add(self.err, e);
        Self { val, err }
    }

    pub fn add_fe<A: FperrArith<T>>(self, ar: &mut A, other: Self, rule: MergeRule) -> Self {
        let (val, e) = ar.add_fperr(self.val, other.val);
        let err = match rule {
            MergeRule::SumAll => {
                let errs = ar.add(self.err, other.err);
                ar.add(errs, e)
            }
            MergeRule::FperrOnly => e,
        };
        Self { val, err }
    }

    /// Adds the error into the value; the part that does not fit stays behind
    /// as the new error, so `val + err` is unchanged exactly.
    #[inline]
    pub fn fold<A: FperrArith<T>>(self, ar: &mut A) -> Self {
        let (val, err) = ar.add_fperr(self.val, self.err);
        Self { val, err }
    }

    /// `fl(val + err)`, computed as a fold whose value half is returned. The
    /// two agree because the fold's residual never moves a nearest-even result.
    #[inline]
    pub fn resolve<A: FperrArith<T>>(self, ar: &mut A) -> T {
        self.fold(ar).val
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FoldPolicy {
    None,
    EveryK(u64),
}

impl FoldPolicy {
    pub fn every(k: u64) -> Result<Self, AccumError> {
        if k == 0 {
            return Err(AccumError::OutOfRange);
        }
        Ok(Self::EveryK(k))
    }

    /// Whether to fold after the element with 0-based index `i`.
    #[inline]
    pub fn folds_at(&self, i: u64) -> bool {
        match *self {
            FoldPolicy::None => false,
            FoldPolicy::EveryK(k) => i.is_multiple_of(k),
        }
    }

    /// `none` or `every_k(K)`.
    pub fn label(&self) -> String {
        match self {
            FoldPolicy::None => "none".to_string(),
            FoldPolicy::EveryK(k) => format!("every_k({k})"),
        }
    }
}

impl std::fmt::Display for FoldPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.label())
    }
}

/// Streaming form of the folding sum loop.
#[derive(Clone, Debug)]
pub struct FoldingSum<T> {
    pub acc: FloatErr<T>,
    policy: FoldPolicy,
    index: u64,
    folds: u64,
    poisoned_at: Option<usize>,
}

impl<T: Scalar> FoldingSum<T> {
    pub fn new(policy: FoldPolicy) -> Self {
        Self { acc: FloatErr::zero(), policy, index: 0, folds: 0, poisoned_at: None }
    }

    pub fn policy(&self) -> FoldPolicy {
        self.policy
    }

    /// Number of elements pushed so far.
    pub fn len(&self) -> u64 {
        self.index
    }

    pub fn is_empty(&self) -> bool {
        self.index == 0
    }

    pub fn folds(&self) -> u64 {
        self.folds
    }

    pub fn poisoned_at(&self) -> Option<usize> {
        self.poisoned_at
    }

    #[inline]
    pub fn push<A: FperrArith<T>>(&mut self, ar: &mut A, x: T) {
        self.acc = self.acc.add_scalar(ar, x);
        if self.poisoned_at.is_none() && !self.acc.val.is_finite() {
            self.poisoned_at = Some(self.index as usize);
        }
        if self.policy.folds_at(self.index) {
            self.acc = self.acc.fold(ar);
            self.folds += 1;
        }
        self.index += 1;
    }

    /// Merges a later partition into this one. Poisoning is reported at the
    /// first bad element in concatenation order.
    pub fn merge<A: FperrArith<T>>(&mut self, ar: &mut A, later: &FoldingSum<T>, rule: MergeRule) {
        self.acc = self.acc.add_fe(ar, later.acc, rule);
        if self.poisoned_at.is_none() {
            self.poisoned_at = later.poisoned_at.map(|i| i + self.index as usize);
            if self.poisoned_at.is_none() && !self.acc.val.is_finite() {
                self.poisoned_at = Some((self.index + later.index).saturating_sub(1) as usize);
            }
        }
        self.index += later.index;
        self.folds += later.folds;
    }

    /// Terminal fold and result.
    pub fn finish<A: FperrArith<T>>(&self, ar: &mut A) -> Result<T, AccumError> {
        if let Some(index) = self.poisoned_at {
            return Err(AccumError::Poisoned { index });
        }
        Ok(self.acc.resolve(ar))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldStats {
    /// Folds inside the loop; the terminal fold is not included.
    pub folds: u64,
    pub counts: OpCounters,
}

/// The folding sum loop over a whole vector, counted.
pub fn sum_with_policy<T: Scalar>(v: &[T], policy: FoldPolicy) -> Result<(T, FoldStats), AccumError> {
    let mut scope = CountScope::new("sum_with_policy");
    let mut ar = Soft::counting(&mut scope);
    let mut fs = FoldingSum::new(policy);
    for &x in v {
        fs.push(&mut ar, x);
    }
    let out = fs.finish(&mut ar)?;
    Ok((out, FoldStats { folds: fs.folds(), counts: scope.report() }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ar() -> Soft {
        Soft::new()
    }

    #[test]
    fn worked_example() {
        let a = FloatErr::<f32>::zero().add_scalar(&mut ar(), 2_808_064.0).add_scalar(&mut ar(), 100.125);
        assert_eq!((a.val, a.err), (2_808_164.0, 0.125));
        let b = a.add_scalar(&mut ar(), 0.0);
        assert_eq!(a, b);
    }

    #[test]
    fn stalled_ones_collect_in_err() {
        let mut acc = FloatErr::<f32>::new(16_777_216.0, 0.0);
        for _ in 0..100 {
            acc = acc.add_scalar(&mut ar(), 1.0);
        }
        assert_eq!((acc.val, acc.err), (16_777_216.0, 100.0));
        let f = acc.fold(&mut ar());
        assert_eq!((f.val, f.err), (16_777_316.0, 0.0));
        assert_eq!(acc.resolve(&mut ar()), 16_777_316.0);
    }

    #[test]
    fn fold_examples() {
        let x = FloatErr::new(3.5f64, 0.0);
        assert_eq!(x.fold(&mut ar()), x);
        let t = FloatErr::new(1.0f32, 2f32.powi(-24));
        assert_eq!(t.fold(&mut ar()), t);
        assert_eq!(FloatErr::<f64>::zero().resolve(&mut ar()), 0.0);
        let small = FloatErr::new(1.0f64, 1e-20);
        assert_eq!(small.resolve(&mut ar()), 1.0);
    }

    #[test]
    fn add_fe_examples() {
        let x = FloatErr::new(5.0f32, 0.0);
        assert_eq!(x.add_fe(&mut ar(), FloatErr::zero(), MergeRule::SumAll), x);
        let a = FloatErr::new(1.0f32, 2f32.powi(-30));
        let b = FloatErr::new(1.0f32, -(2f32.powi(-30)));
        let c = a.add_fe(&mut ar(), b, MergeRule::SumAll);
        assert_eq!((c.val, c.err), (2.0, 0.0));
        let d = a.add_fe(&mut ar(), a, MergeRule::FperrOnly);
        assert_eq!((d.val, d.err), (2.0, 0.0));
    }

    #[test]
    fn policy_folds_at_multiples_of_k() {
        let p = FoldPolicy::every(3).unwrap();
        let hits: Vec<u64> = (0..10).filter(|&i| p.folds_at(i)).collect();
        assert_eq!(hits, vec![0, 3, 6, 9]);
        assert!(FoldPolicy::every(0).is_err());
        assert!((0..10).all(|i| FoldPolicy::EveryK(1).folds_at(i)));
        assert!(!(0..10).any(|i| FoldPolicy::None.folds_at(i)));
    }

    #[test]
    fn empty_and_counts() {
        for p in [FoldPolicy::None, FoldPolicy::EveryK(1), FoldPolicy::EveryK(7)] {
            let (v, _) = sum_with_policy::<f32>(&[], p).unwrap();
            assert_eq!(v, 0.0);
        }
        let v = vec![1.0f32; 10];
        let (_, stats) = sum_with_policy(&v, FoldPolicy::None).unwrap();
        assert_eq!(stats.counts.fpadd, 21);
        assert_eq!(stats.counts.move_fperr, 11);
        let (_, stats) = sum_with_policy(&v, FoldPolicy::EveryK(4)).unwrap();
        assert_eq!(stats.folds, 3);
    }

    #[test]
    fn poisoning_reports_first_index() {
        let v = [1.0f32, f32::MAX, f32::MAX, 2.0];
        assert_eq!(sum_with_policy(&v, FoldPolicy::None), Err(AccumError::Poisoned { index: 2 }));
    }

    #[test]
    fn merge_of_partitions_tracks_offsets() {
        let mut ar = ar();
        let mut a = FoldingSum::<f32>::new(FoldPolicy::None);
        let mut b = FoldingSum::<f32>::new(FoldPolicy::None);
        a.push(&mut ar, 1.0);
        b.push(&mut ar, f32::INFINITY);
        a.merge(&mut ar, &b, MergeRule::SumAll);
        assert_eq!(a.finish(&mut ar), Err(AccumError::Poisoned { index: 1 }));
    }
}
