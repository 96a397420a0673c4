//! Scalar abstraction for the numeric kernels.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, NumCast};

/// Floating-point scalar the math in this crate is generic over.
///
/// Implemented by `f32` and `f64` through the blanket impl.
pub trait Scalar:
    Float + FromPrimitive + NumAssign + NumCast + Sum + Display + Debug + Send + Sync + 'static
{
    /// Converts a finite `f64` constant into the scalar type.
    fn from_f(v: f64) -> Self {
        <Self as NumCast>::from(v).expect("f64 constant representable as scalar")
    }

    /// Converts a count into the scalar type.
    fn from_n(n: usize) -> Self {
        <Self as NumCast>::from(n).expect("count representable as scalar")
    }

    /// Widens to `f64` (used for serialization and hashing).
    fn to_f64_c(self) -> f64 {
        self.to_f64().expect("scalar representable as f64")
    }
}

impl<T> Scalar for T where
    T: Float + FromPrimitive + NumAssign + NumCast + Sum + Display + Debug + Send + Sync + 'static
{
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions_roundtrip() {
        assert_eq!(f64::from_f(0.25), 0.25);
        assert_eq!(f32::from_n(7), 7.0f32);
        assert_eq!(0.5f32.to_f64_c(), 0.5);
    }
}
