//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};
use serde::{de::DeserializeOwned, Serialize};

/// Real field the transforms, spectra and functionals are computed over.
///
/// Implemented for `f32` and `f64`. All representation matrices are real
/// orthogonal, so nothing here needs complex arithmetic.
pub trait Real:
    RealField
    + Copy
    + FromPrimitive
    + ToPrimitive
    + Display
    + Debug
    + Default
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Relative tolerance used to separate structural zeros from rounding dust.
    fn default_tol() -> Self;

    fn from_usize_lossy(v: usize) -> Self {
        Self::from_usize(v).expect("usize is representable as a real")
    }

    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).expect("f64 is representable as a real")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {
    fn default_tol() -> Self {
        1e-4
    }
}

impl Real for f64 {
    fn default_tol() -> Self {
        1e-9
    }
}
