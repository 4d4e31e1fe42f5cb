//! Scalar abstraction: all numerical code is generic over a floating-point
//! type implementing [`Real`]. Concrete aliases for `f64` live at the crate
//! root.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign};

/// Floating-point scalar used throughout the library (`f32` or `f64`).
pub trait Real:
    Float + NumAssign + FromPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Machine epsilon scaled reference for internal iteration control.
    fn eps() -> Self {
        Self::epsilon()
    }

    /// Lossless-enough conversion for reporting and sampling.
    fn to_f64(self) -> f64;

    fn from_usize_exact(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    fn from_f64_exact(x: f64) -> Self {
        Self::from_f64(x).expect("constant representable in scalar type")
    }
}

impl Real for f32 {
    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Real for f64 {
    fn to_f64(self) -> f64 {
        self
    }
}
