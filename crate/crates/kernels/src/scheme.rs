use std::fmt;
use std::str::FromStr;

use rebits_core::ddouble::{add_f64_native, add_f64_rebits};
use rebits_core::eft::{priest_sum_native, priest_sum_rebits, two_sum, KahanState};
use rebits_core::{
    AccumError, DDouble, ExactAccumulator, FoldPolicy, FoldingSum, FpArith, Host, MergeRule, OpCounters, Scalar,
    SchemeVariant, Soft,
};

use crate::error::KernelError;

/// A summation strategy. Every kernel runs its accumulation under each one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    Naive,
    Rebits(FoldPolicy),
    Kahan(SchemeVariant),
    Priest(SchemeVariant),
    /// Two-sum cascade with plainly summed errors.
    Sum2,
    /// Double-double accumulator (terms widened to binary64).
    Dd(SchemeVariant),
    /// Exact fixed-point accumulation, rounded once.
    Oracle,
}

impl Scheme {
    /// The default experiment matrix.
    pub fn all() -> Vec<Scheme> {
        use SchemeVariant::*;
        vec![
            Scheme::Naive,
            Scheme::Rebits(FoldPolicy::None),
            Scheme::Rebits(FoldPolicy::EveryK(1000)),
            Scheme::Kahan(Native),
            Scheme::Kahan(Rebits),
            Scheme::Priest(Native),
            Scheme::Priest(Rebits),
            Scheme::Sum2,
            Scheme::Dd(Native),
            Scheme::Dd(Rebits),
            Scheme::Oracle,
        ]
    }

    /// Fold policy label for rebits schemes, empty otherwise.
    pub fn policy_label(&self) -> String {
        match self {
            Scheme::Rebits(p) => p.label(),
            _ => String::new(),
        }
    }

    /// Parses a comma-separated list.
    pub fn parse_list(text: &str) -> Result<Vec<Scheme>, KernelError> {
        text.split(',').map(str::trim).filter(|s| !s.is_empty()).map(str::parse).collect()
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let suffix = |v: &SchemeVariant| if *v == SchemeVariant::Rebits { "-rebits" } else { "" };
        match self {
            Scheme::Naive => f.write_str("naive"),
            Scheme::Rebits(FoldPolicy::None) => f.write_str("rebits"),
            Scheme::Rebits(FoldPolicy::EveryK(k)) => write!(f, "rebits:fold={k}"),
            Scheme::Kahan(v) => write!(f, "kahan{}", suffix(v)),
            Scheme::Priest(v) => write!(f, "priest{}", suffix(v)),
            Scheme::Sum2 => f.write_str("sum2"),
            Scheme::Dd(v) => write!(f, "dd{}", suffix(v)),
            Scheme::Oracle => f.write_str("oracle"),
        }
    }
}

impl FromStr for Scheme {
    type Err = KernelError;

    fn from_str(s: &str) -> Result<Self, KernelError> {
        use SchemeVariant::*;
        let bad = || KernelError::UnknownScheme(s.to_string());
        Ok(match s {
            "naive" => Scheme::Naive,
            "rebits" | "rebits:fold=none" => Scheme::Rebits(FoldPolicy::None),
            "kahan" => Scheme::Kahan(Native),
            "kahan-rebits" => Scheme::Kahan(Rebits),
            "priest" => Scheme::Priest(Native),
            "priest-rebits" => Scheme::Priest(Rebits),
            "sum2" => Scheme::Sum2,
            "dd" => Scheme::Dd(Native),
            "dd-rebits" => Scheme::Dd(Rebits),
            "oracle" => Scheme::Oracle,
            other => {
                let k = other.strip_prefix("rebits:fold=").ok_or_else(bad)?;
                let k: u64 = k.parse().map_err(|_| bad())?;
                Scheme::Rebits(FoldPolicy::every(k).map_err(|_| bad())?)
            }
        })
    }
}

#[derive(Clone, Debug)]
enum State<T> {
    Naive(T),
    Rebits(FoldingSum<T>),
    Kahan(KahanState<T>),
    Priest(Vec<T>),
    Sum2 { s: T, c: T },
    Dd(DDouble),
    Oracle { acc: ExactAccumulator, bad: Option<usize> },
}

/// Streaming accumulator for one scheme, counting its own operations.
#[derive(Clone, Debug)]
pub struct Accumulator<T> {
    scheme: Scheme,
    state: State<T>,
    counts: OpCounters,
    len: u64,
}

impl<T: Scalar> Accumulator<T> {
    pub fn new(scheme: Scheme) -> Self {
        let state = match scheme {
            Scheme::Naive => State::Naive(T::zero()),
            Scheme::Rebits(p) => State::Rebits(FoldingSum::new(p)),
            Scheme::Kahan(_) => State::Kahan(KahanState::new()),
            Scheme::Priest(_) => State::Priest(Vec::new()),
            Scheme::Sum2 => State::Sum2 { s: T::zero(), c: T::zero() },
            Scheme::Dd(_) => State::Dd(DDouble::ZERO),
            Scheme::Oracle => State::Oracle { acc: ExactAccumulator::for_scalar::<T>(), bad: None },
        };
        Self { scheme, state, counts: OpCounters::default(), len: 0 }
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Operations counted so far, not including finalization.
    pub fn counts(&self) -> OpCounters {
        self.counts
    }

    #[inline]
    pub fn push(&mut self, x: T) {
        let c = &mut self.counts;
        match &mut self.state {
            State::Naive(s) => *s = Host::counting(c).add(*s, x),
            State::Rebits(fs) => fs.push(&mut Soft::counting(c), x),
            State::Kahan(k) => match self.scheme {
                Scheme::Kahan(SchemeVariant::Rebits) => k.push_rebits(&mut Soft::counting(c), x),
                _ => k.push(&mut Host::counting(c), x),
            },
            State::Priest(buf) => buf.push(x),
            State::Sum2 { s, c: comp } => {
                let mut ar = Host::counting(c);
                let r = two_sum(&mut ar, *s, x);
                *s = r.s;
                *comp = ar.add(*comp, r.e);
            }
            State::Dd(d) => {
                *d = match self.scheme {
                    Scheme::Dd(SchemeVariant::Rebits) => add_f64_rebits(&mut Soft::counting(c), *d, x.widen()),
                    _ => add_f64_native(&mut Host::counting(c), *d, x.widen()),
                }
            }
            State::Oracle { acc, bad } => {
                if acc.add_scalar(x).is_err() && bad.is_none() {
                    *bad = Some(self.len as usize);
                }
            }
        }
        self.len += 1;
    }

    pub fn extend(&mut self, xs: impl IntoIterator<Item = T>) {
        for x in xs {
            self.push(x);
        }
    }

    /// Result and total counts including finalization. The accumulator is
    /// left untouched, so this doubles as a peek at a running sum.
    pub fn finish(&self) -> (Result<T, AccumError>, OpCounters) {
        let mut c = self.counts;
        let out = match &self.state {
            State::Naive(s) => Ok(*s),
            State::Rebits(fs) => fs.finish(&mut Soft::counting(&mut c)),
            State::Kahan(k) => Ok(k.sum),
            State::Priest(buf) => Ok(match self.scheme {
                Scheme::Priest(SchemeVariant::Rebits) => priest_sum_rebits(&mut Soft::counting(&mut c), buf),
                _ => priest_sum_native(&mut Host::counting(&mut c), buf),
            }),
            State::Sum2 { s, c: comp } => Ok(Host::counting(&mut c).add(*s, *comp)),
            // hi + lo is the nearest binary64; narrowing to T adds at most
            // one more rounding.
            State::Dd(d) => Ok(T::narrow(d.hi + d.lo)),
            State::Oracle { acc, bad } => match bad {
                Some(index) => Err(AccumError::Poisoned { index: *index }),
                None => Ok(acc.round_to::<T>()),
            },
        };
        (out, c)
    }

    /// The exact running sum, for the oracle scheme.
    pub fn exact(&self) -> Option<&ExactAccumulator> {
        match &self.state {
            State::Oracle { acc, bad: None } => Some(acc),
            _ => None,
        }
    }

    /// Appends a later partition. Rebits and oracle states merge directly;
    /// every other scheme sums the two partial results with itself.
    pub fn merge(&mut self, later: &Accumulator<T>) {
        assert_eq!(self.scheme, later.scheme, "merging different schemes");
        match (&mut self.state, &later.state) {
            (State::Rebits(a), State::Rebits(b)) => {
                a.merge(&mut Soft::counting(&mut self.counts), b, MergeRule::SumAll);
                self.counts += later.counts;
            }
            (State::Oracle { acc, bad }, State::Oracle { acc: other, bad: other_bad }) => {
                acc.merge(other);
                if bad.is_none() {
                    *bad = other_bad.map(|i| i + self.len as usize);
                }
            }
            _ => {
                let (left, lc) = self.finish();
                let (right, rc) = later.finish();
                let mut fresh = Accumulator::new(self.scheme);
                let len = self.len;
                if let (Ok(l), Ok(r)) = (left, right) {
                    fresh.push(l);
                    fresh.push(r);
                } else {
                    fresh.push(T::nan());
                }
                fresh.counts += lc + rc;
                *self = fresh;
                self.len = len;
            }
        }
        self.len += later.len;
    }
}

/// Sums a slice under one scheme.
pub fn sum_slice<T: Scalar>(scheme: Scheme, v: &[T]) -> (Result<T, AccumError>, OpCounters) {
    let mut acc = Accumulator::new(scheme);
    acc.extend(v.iter().copied());
    acc.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rebits_core::eft::{kahan_sum_counted, priest_sum_counted, sum2};
    use rebits_core::CountScope;

    #[test]
    fn names_round_trip() {
        for s in Scheme::all() {
            assert_eq!(s.to_string().parse::<Scheme>().unwrap(), s);
        }
        assert!("rebits:fold=0".parse::<Scheme>().is_err());
        assert!("fast".parse::<Scheme>().is_err());
        assert_eq!(Scheme::parse_list("naive, oracle").unwrap(), vec![Scheme::Naive, Scheme::Oracle]);
    }

    fn data() -> Vec<f32> {
        let mut v = vec![16_777_216.0f32, 3.0, -2.5];
        v.extend((0..300).map(|i| 0.375 + i as f32 * 0.001953125));
        v
    }

    #[test]
    fn streaming_matches_the_slice_functions() {
        let v = data();
        for variant in [SchemeVariant::Native, SchemeVariant::Rebits] {
            let mut sc = CountScope::new("k");
            let k = kahan_sum_counted(&v, variant, &mut sc);
            let (got, c) = sum_slice(Scheme::Kahan(variant), &v);
            assert_eq!((got.unwrap(), c), (k, sc.report()));

            let mut sc = CountScope::new("p");
            let p = priest_sum_counted(&v, variant, &mut sc);
            let (got, c) = sum_slice(Scheme::Priest(variant), &v);
            assert_eq!((got.unwrap(), c), (p, sc.report()));
        }
        let (s, _) = sum_slice(Scheme::Sum2, &v);
        assert_eq!(s.unwrap(), sum2(&mut Host::new(), &v));
        let (r, _) = sum_slice(Scheme::Rebits(FoldPolicy::None), &v);
        let (w, _) = rebits_core::accum::sum_with_policy(&v, FoldPolicy::None).unwrap();
        assert_eq!(r.unwrap(), w);
    }

    #[test]
    fn oracle_reports_poison_index() {
        let (r, _) = sum_slice(Scheme::Oracle, &[1.0f64, 2.0, f64::NAN, f64::INFINITY]);
        assert!(matches!(r, Err(AccumError::Poisoned { index: 2 })));
    }

    #[test]
    fn merge_of_halves() {
        let v = data();
        let (l, r) = v.split_at(150);
        let oracle = sum_slice(Scheme::Oracle, &v).0.unwrap();
        for scheme in [Scheme::Oracle, Scheme::Rebits(FoldPolicy::None), Scheme::Naive] {
            let mut a = Accumulator::new(scheme);
            let mut b = Accumulator::new(scheme);
            a.extend(l.iter().copied());
            b.extend(r.iter().copied());
            a.merge(&b);
            assert_eq!(a.len(), v.len() as u64);
            let merged = a.finish().0.unwrap();
            if scheme == Scheme::Naive {
                let halves = [sum_slice(scheme, l).0.unwrap(), sum_slice(scheme, r).0.unwrap()];
                assert_eq!(merged, sum_slice(scheme, &halves).0.unwrap());
            } else {
                assert_eq!(merged, oracle, "{scheme}");
            }
        }
    }

    #[test]
    fn dd_scheme_is_exact_here() {
        let v = data();
        assert_eq!(
            sum_slice(Scheme::Dd(SchemeVariant::Rebits), &v).0.unwrap(),
            sum_slice(Scheme::Oracle, &v).0.unwrap()
        );
    }
}
