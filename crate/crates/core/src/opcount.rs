//! Operation accounting.
//!
//! Counting is done through an explicit [`Recorder`] handed to every
//! instrumented operation. [`NoCount`] compiles away entirely.

use std::fmt;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OpKind {
    FpAdd,
    FpMult,
    FpDiv,
    FpComp,
    MoveFperr,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OpCounters {
    pub fpadd: u64,
    pub fpmult: u64,
    pub fpdiv: u64,
    pub fpcomp: u64,
    pub move_fperr: u64,
}

impl OpCounters {
    pub fn get(&self, kind: OpKind) -> u64 {
        match kind {
            OpKind::FpAdd => self.fpadd,
            OpKind::FpMult => self.fpmult,
            OpKind::FpDiv => self.fpdiv,
            OpKind::FpComp => self.fpcomp,
            OpKind::MoveFperr => self.move_fperr,
        }
    }

    fn slot(&mut self, kind: OpKind) -> &mut u64 {
        match kind {
            OpKind::FpAdd => &mut self.fpadd,
            OpKind::FpMult => &mut self.fpmult,
            OpKind::FpDiv => &mut self.fpdiv,
            OpKind::FpComp => &mut self.fpcomp,
            OpKind::MoveFperr => &mut self.move_fperr,
        }
    }

    /// Field-wise sum.
    pub fn merge(&mut self, other: &OpCounters) {
        *self += *other;
    }
}

impl Add for OpCounters {
    type Output = OpCounters;

    fn add(mut self, rhs: OpCounters) -> OpCounters {
        self += rhs;
        self
    }
}

impl AddAssign for OpCounters {
    fn add_assign(&mut self, rhs: OpCounters) {
        self.fpadd += rhs.fpadd;
        self.fpmult += rhs.fpmult;
        self.fpdiv += rhs.fpdiv;
        self.fpcomp += rhs.fpcomp;
        self.move_fperr += rhs.move_fperr;
    }
}

impl fmt::Display for OpCounters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "fpadd={} fpmult={} fpdiv={} fpcomp={} move_fperr={}",
            self.fpadd, self.fpmult, self.fpdiv, self.fpcomp, self.move_fperr
        )
    }
}

pub trait Recorder {
    fn record(&mut self, kind: OpKind, n: u64);
}

/// Recorder that discards everything.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoCount;

impl Recorder for NoCount {
    #[inline(always)]
    fn record(&mut self, _kind: OpKind, _n: u64) {}
}

impl<R: Recorder + ?Sized> Recorder for &mut R {
    #[inline(always)]
    fn record(&mut self, kind: OpKind, n: u64) {
        (**self).record(kind, n)
    }
}

/// A labelled set of counters owned by one worker at a time.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CountScope {
    pub label: String,
    counts: OpCounters,
}

impl CountScope {
    pub fn new(label: impl Into<String>) -> Self {
        Self { label: label.into(), counts: OpCounters::default() }
    }

    pub fn report(&self) -> OpCounters {
        self.counts
    }

    /// Runs `f` under a fresh child scope, then adds the child's counts into
    /// this scope. Returns `f`'s result and the child's counts.
    pub fn nested<T>(&mut self, label: impl Into<String>, f: impl FnOnce(&mut CountScope) -> T) -> (T, OpCounters) {
        let mut child = CountScope::new(label);
        let out = f(&mut child);
        self.counts += child.counts;
        (out, child.counts)
    }

    /// Adds counts gathered elsewhere (for example by another worker).
    pub fn absorb(&mut self, counts: &OpCounters) {
        self.counts += *counts;
    }
}

impl Recorder for CountScope {
    #[inline]
    fn record(&mut self, kind: OpKind, n: u64) {
        *self.counts.slot(kind) += n;
    }
}

/// Bare counters, for hot loops that do not need a label.
impl Recorder for OpCounters {
    #[inline]
    fn record(&mut self, kind: OpKind, n: u64) {
        *self.slot(kind) += n;
    }
}
