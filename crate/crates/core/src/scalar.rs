//! The floating-point abstraction every numerical routine is written against.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use ndarray::{LinalgScalar, ScalarOperand};
use num_traits::{Float, FromPrimitive, ToPrimitive};

/// A real scalar usable by the decompositions, kernels and models.
///
/// Implemented for `f32` and `f64`. Tolerances inside the crate are stated
/// for `f64`; see [`Scalar::tol`] for how they carry over to narrower types.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + LinalgScalar
    + ScalarOperand
    + Sum
    + Debug
    + Display
    + FromStr
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal. Never fails for the implemented types.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }

    /// Converts a count.
    fn count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    /// An `f64`-calibrated tolerance, widened so it stays meaningful for the
    /// type's own machine epsilon (`f32` cannot resolve 1e-12).
    fn tol(v: f64) -> Self {
        let eps = Self::epsilon().to_f64().unwrap_or(f64::EPSILON);
        Self::lit(v.max(eps * 16.0))
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
