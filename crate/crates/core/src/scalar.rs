use std::fmt::{Debug, Display, LowerExp};

use num_traits::Float;

use crate::softfp::{FloatFormat, PackedFloat};

/// Host floating-point types that have a matching [`FloatFormat`].
pub trait Scalar: Float + Debug + Display + LowerExp + Default + Send + Sync + 'static {
    const FORMAT: FloatFormat;
    const NAME: &'static str;
    /// Dekker's splitting constant, `2^ceil(p/2) + 1`.
    const SPLITTER: Self;

    fn to_packed(self) -> PackedFloat;

    /// Panics when `p` is not in `Self::FORMAT`.
    fn from_packed(p: PackedFloat) -> Self;

    /// Exact conversion to `f64`.
    fn widen(self) -> f64;

    /// Round-to-nearest conversion from `f64`.
    fn narrow(x: f64) -> Self;
}

impl Scalar for f32 {
    const FORMAT: FloatFormat = FloatFormat::BINARY32;
    const NAME: &'static str = "f32";
    const SPLITTER: f32 = 4097.0;

    #[inline]
    fn to_packed(self) -> PackedFloat {
        PackedFloat::from_f32(self)
    }

    #[inline]
    fn from_packed(p: PackedFloat) -> f32 {
        p.to_f32()
    }

    #[inline]
    fn widen(self) -> f64 {
        self as f64
    }

    #[inline]
    fn narrow(x: f64) -> f32 {
        x as f32
    }
}

impl Scalar for f64 {
    const FORMAT: FloatFormat = FloatFormat::BINARY64;
    const NAME: &'static str = "f64";
    const SPLITTER: f64 = 134_217_729.0;

    #[inline]
    fn to_packed(self) -> PackedFloat {
        PackedFloat::from_f64(self)
    }

    #[inline]
    fn from_packed(p: PackedFloat) -> f64 {
        p.to_f64()
    }

    #[inline]
    fn widen(self) -> f64 {
        self
    }

    #[inline]
    fn narrow(x: f64) -> f64 {
        x
    }
}
