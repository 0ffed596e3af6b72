//! Floating point scalar used for amplitudes, probabilities and tolerances.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, NumAssign};

/// Real scalar type backing every amplitude in the crate: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + NumAssign + Sum + Default + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        <Self as num_traits::NumCast>::from(x).expect("f64 literal representable in scalar type")
    }

    fn to_f64_lossy(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Numerical tolerances shared by the simulator, graph builder and checker.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance<T> {
    /// Max-entry distance under which two states or density matrices compare equal.
    pub compare: T,
    /// Measurement branches with probability at or below this are dropped.
    pub prune: T,
    /// Allowed deviation of an input vector's norm from 1 before it is rejected.
    pub normalize: T,
}

impl<T: Scalar> Default for Tolerance<T> {
    fn default() -> Self {
        Self {
            compare: T::lit(1e-9),
            prune: T::lit(1e-12),
            normalize: T::lit(1e-6),
        }
    }
}

impl<T: Scalar> Tolerance<T> {
    pub fn with_compare(mut self, compare: T) -> Self {
        self.compare = compare;
        self
    }
}
