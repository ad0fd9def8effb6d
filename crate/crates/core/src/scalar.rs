//! Scalar abstraction for all model arithmetic.
//!
//! Every numeric structure in this crate (matrices, scalers, model
//! parameters, metric reports) is generic over a [`Scalar`], so the same
//! pipeline runs in `f32` or `f64`. The crate root exports `f64` aliases,
//! which is what the CLI uses.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, NumAssignOps, ToPrimitive};

/// Floating-point scalar: `f32` or `f64`.
///
/// `FromStr` + `Display` are required so model artifacts round-trip
/// bit-exactly: Rust's float formatting emits the shortest decimal string
/// that parses back to the identical value.
pub trait Scalar:
    Float
    + NumAssignOps
    + FromPrimitive
    + ToPrimitive
    + Sum
    + FromStr
    + Display
    + Debug
    + Send
    + Sync
    + 'static
{
    /// Lossless-enough conversion from `f64` for configuration constants.
    fn from_config(value: f64) -> Self {
        Self::from_f64(value).expect("finite config value")
    }
}

impl<T> Scalar for T where
    T: Float
        + NumAssignOps
        + FromPrimitive
        + ToPrimitive
        + Sum
        + FromStr
        + Display
        + Debug
        + Send
        + Sync
        + 'static
{
}
