//! Scalar abstraction for all spatial quantities.
//!
//! Geometry, placement, and load estimation are generic over the coordinate
//! scalar so the same core runs in `f32` or `f64`. The shipped binaries and
//! the acceptance suite pin [`crate::Real`] = `f64`.

use rand::distributions::uniform::SampleUniform;
use serde::{de::DeserializeOwned, Serialize};

/// Floating-point coordinate scalar: f32 or f64.
pub trait Scalar:
    num_traits::Float
    + num_traits::FromPrimitive
    + SampleUniform
    + Serialize
    + DeserializeOwned
    + std::fmt::Debug
    + std::fmt::Display
    + Send
    + Sync
    + 'static
{
    /// Lossless-enough conversion from `f64` for constants and config values.
    fn from_f64_lossy(v: f64) -> Self {
        <Self as num_traits::FromPrimitive>::from_f64(v).expect("finite f64 converts to scalar")
    }

    /// Widening conversion used when feeding statistics accumulators.
    fn as_f64(self) -> f64 {
        num_traits::NumCast::from(self).expect("scalar converts to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
