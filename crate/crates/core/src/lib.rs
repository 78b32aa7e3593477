//! Floating-point addition with an exposed rounding-error register, and the
//! summation and double-double toolkit built on it.

pub mod accum;
pub mod arith;
pub mod ddouble;
pub mod eft;
pub mod error;
pub mod hexfloat;
pub mod opcount;
pub mod scalar;
pub mod softfp;
pub mod table8;

pub use accum::{ExactAccumulator, FloatErr, FoldPolicy, FoldStats, FoldingSum, MergeRule};
pub use arith::{FpArith, FperrArith, Host, Soft};
pub use ddouble::DDouble;
pub use eft::{SchemeVariant, SumAndError};
pub use error::{AccumError, FormatError, HexFloatError};
pub use opcount::{CountScope, NoCount, OpCounters, OpKind, Recorder};
pub use scalar::Scalar;
pub use softfp::{add_with_err, AddResult, Flags, FloatClass, FloatFormat, PackedFloat, RoundingMode};
