//! Scalar abstraction for scores, center statistics and thresholds.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, NumCast, ToPrimitive};

/// Real scalar used for scores and statistics: `f32` or `f64`.
///
/// Pixel tallies are accumulated in integers and converted once, so the
/// indicator purity is identical for both precisions.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + NumCast + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an integer tally. Exact for tallies below the mantissa width.
    #[inline]
    fn from_count(n: u64) -> Self {
        <Self as NumCast>::from(n).expect("float conversion from u64 is total")
    }

    /// Converts an `f64` literal.
    #[inline]
    fn lit(v: f64) -> Self {
        <Self as NumCast>::from(v).expect("float conversion from f64 is total")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
