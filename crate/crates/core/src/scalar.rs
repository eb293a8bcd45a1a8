//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! All solvers, factorizations and spectral checks are written against
//! [`Real`], so they run unchanged in `f32` or `f64`. The acceptance
//! tolerances in this crate assume `f64`; `f32` is useful for quick
//! exploratory runs.

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

/// A real floating-point scalar usable by the linear algebra backend.
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + Send + Sync + std::fmt::Debug + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    /// Lossy conversion to `f64`, for reporting and serialization.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar representable as f64")
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        Self::lit(n as f64)
    }

    #[inline]
    fn is_finite_value(self) -> bool {
        self.as_f64().is_finite()
    }
}

impl<T> Real for T where
    T: RealField + Copy + FromPrimitive + ToPrimitive + Send + Sync + std::fmt::Debug + 'static
{
}

#[cfg(test)]
mod tests {
    use super::Real;

    fn roundtrip<T: Real>(x: f64) -> f64 {
        T::lit(x).as_f64()
    }

    #[test]
    fn literals_round_trip() {
        assert_eq!(roundtrip::<f64>(0.1), 0.1);
        assert!((roundtrip::<f32>(0.1) - 0.1).abs() < 1e-7);
        assert_eq!(<f64 as Real>::from_count(7), 7.0);
        assert!(!f64::NAN.is_finite_value());
    }
}
