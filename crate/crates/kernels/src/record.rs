use rebits_core::hexfloat::format_hex;
use rebits_core::{AccumError, ExactAccumulator, OpCounters, Scalar};
use serde::{Deserialize, Serialize};

use crate::scheme::{Accumulator, Scheme};

/// One (kernel, scheme, parameter point) result.
///
/// `abs_err` and `rel_err` are measured against the oracle rounded to the
/// record's format; `rel_err` is absent when that oracle is zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub kernel: String,
    pub scheme: String,
    pub format: String,
    pub n: u64,
    pub seed: u64,
    pub policy: String,
    pub order: String,
    pub partitions: u64,
    pub value_hex: String,
    pub value_dec: String,
    pub abs_err: Option<f64>,
    pub rel_err: Option<f64>,
    #[serde(flatten)]
    pub counts: OpCounters,
    pub error: Option<String>,
}

impl ResultRecord {
    /// Sort key giving the canonical output order.
    pub fn key(&self) -> (&str, &str, u64, u64, &str, u64, &str, &str) {
        (&self.kernel, &self.format, self.n, self.seed, &self.order, self.partitions, &self.scheme, &self.policy)
    }
}

/// Parameters shared by every record of one kernel invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Point {
    pub kernel: String,
    pub format: String,
    pub n: u64,
    pub seed: u64,
    pub order: String,
    pub partitions: u64,
}

impl Point {
    pub fn new<T: Scalar>(kernel: &str, n: u64, seed: u64) -> Self {
        Self { kernel: kernel.to_string(), format: T::NAME.to_string(), n, seed, order: String::new(), partitions: 1 }
    }

    pub fn with_order(mut self, order: impl Into<String>) -> Self {
        self.order = order.into();
        self
    }

    pub fn with_partitions(mut self, p: u64) -> Self {
        self.partitions = p;
        self
    }

    pub fn with_n(mut self, n: u64) -> Self {
        self.n = n;
        self
    }
}

/// `|value - oracle|`, computed exactly and rounded once to binary64.
pub fn abs_deviation<T: Scalar>(value: T, oracle: T) -> Option<f64> {
    if !value.is_finite() || !oracle.is_finite() {
        return None;
    }
    let mut acc = ExactAccumulator::for_scalar::<T>();
    acc.add_scalar(value).ok()?;
    acc.add_scalar(-oracle).ok()?;
    Some(acc.round_to::<f64>().abs())
}

pub fn rel_deviation<T: Scalar>(value: T, oracle: T) -> Option<f64> {
    if oracle.is_zero() {
        return None;
    }
    abs_deviation(value, oracle).map(|a| a / oracle.widen().abs())
}

#[derive(Clone, Debug, PartialEq)]
pub struct SchemeRun<T> {
    pub scheme: Scheme,
    pub value: Result<T, AccumError>,
    pub counts: OpCounters,
}

/// Results of several schemes over one shared term sequence, plus the oracle.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation<T> {
    pub runs: Vec<SchemeRun<T>>,
    pub oracle: Result<T, AccumError>,
}

impl<T: Scalar> Evaluation<T> {
    /// Feeds every term to every scheme once. An oracle accumulator is always
    /// run, whether or not it was requested.
    pub fn evaluate(schemes: &[Scheme], terms: impl IntoIterator<Item = T>) -> Self {
        let mut accs: Vec<Accumulator<T>> = schemes.iter().map(|&s| Accumulator::new(s)).collect();
        let extra = !schemes.contains(&Scheme::Oracle);
        if extra {
            accs.push(Accumulator::new(Scheme::Oracle));
        }
        for x in terms {
            for a in accs.iter_mut() {
                a.push(x);
            }
        }
        Self::from_accumulators(&accs, extra)
    }

    /// `accs` must contain an oracle; if `drop_oracle` it is not reported as
    /// a run.
    pub fn from_accumulators(accs: &[Accumulator<T>], drop_oracle: bool) -> Self {
        let oracle = accs.iter().find(|a| a.scheme() == Scheme::Oracle).expect("an oracle accumulator").finish().0;
        let runs = accs
            .iter()
            .filter(|a| !(drop_oracle && a.scheme() == Scheme::Oracle))
            .map(|a| {
                let (value, counts) = a.finish();
                SchemeRun { scheme: a.scheme(), value, counts }
            })
            .collect();
        Self { runs, oracle }
    }

    /// Applies the same post-processing to every value and to the oracle.
    pub fn map(self, f: impl Fn(T) -> T) -> Self {
        Self {
            runs: self.runs.into_iter().map(|r| SchemeRun { value: r.value.map(&f), ..r }).collect(),
            oracle: self.oracle.map(&f),
        }
    }

    pub fn get(&self, scheme: Scheme) -> Option<&SchemeRun<T>> {
        self.runs.iter().find(|r| r.scheme == scheme)
    }

    pub fn value(&self, scheme: Scheme) -> Option<T> {
        self.get(scheme).and_then(|r| r.value.clone().ok())
    }

    pub fn abs_err(&self, scheme: Scheme) -> Option<f64> {
        abs_deviation(self.value(scheme)?, self.oracle.clone().ok()?)
    }

    pub fn rel_err(&self, scheme: Scheme) -> Option<f64> {
        rel_deviation(self.value(scheme)?, self.oracle.clone().ok()?)
    }

    pub fn records(&self, point: &Point) -> Vec<ResultRecord> {
        self.runs.iter().map(|r| record(point, r.scheme, &r.value, &self.oracle, r.counts)).collect()
    }
}

pub fn record<T: Scalar>(
    point: &Point,
    scheme: Scheme,
    value: &Result<T, AccumError>,
    oracle: &Result<T, AccumError>,
    counts: OpCounters,
) -> ResultRecord {
    let mut rec = ResultRecord {
        kernel: point.kernel.clone(),
        scheme: scheme.to_string(),
        format: point.format.clone(),
        n: point.n,
        seed: point.seed,
        policy: scheme.policy_label(),
        order: point.order.clone(),
        partitions: point.partitions,
        value_hex: String::new(),
        value_dec: String::new(),
        abs_err: None,
        rel_err: None,
        counts,
        error: None,
    };
    match (value, oracle) {
        (Err(e), _) => rec.error = Some(e.to_string()),
        (Ok(v), o) => {
            rec.value_hex = format_hex(v.to_packed());
            rec.value_dec = v.to_string();
            match o {
                Err(e) => rec.error = Some(format!("oracle: {e}")),
                Ok(o) if v.is_finite() => {
                    rec.abs_err = abs_deviation(*v, *o);
                    rec.rel_err = rel_deviation(*v, *o);
                }
                Ok(_) => rec.error = Some("non-finite result".to_string()),
            }
        }
    }
    rec
}
