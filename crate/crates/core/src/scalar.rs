//! Scalar abstraction for the geometric routines.
//!
//! All geometry is written against [`Scalar`], an ordered field. The
//! realization pipeline instantiates it with [`Rational`](crate::Rational)
//! (arbitrary precision), which makes every sign decision exact. `f64`
//! also satisfies the bound and is handy for quick exploration, but no
//! certificate produced over floats should be trusted.

use std::fmt::{Debug, Display};

use num_traits::{FromPrimitive, Num, Signed};

pub trait Scalar:
    Num + Signed + PartialOrd + Clone + Debug + Display + FromPrimitive + Send + Sync
{
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("integer fits in scalar")
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }

    /// A nearby value with a short representation, used to turn a
    /// floating-point guide into exact inputs.
    fn approximate(v: f64, bits: u32) -> Self;
}

impl Scalar for f64 {
    fn approximate(v: f64, _bits: u32) -> Self {
        v
    }
}

impl Scalar for f32 {
    fn approximate(v: f64, _bits: u32) -> Self {
        v as f32
    }
}

impl Scalar for num_rational::BigRational {
    /// Rounds `v` to a dyadic rational with `bits` significant bits
    /// (at most 53, the precision of `f64`).
    fn approximate(v: f64, bits: u32) -> Self {
        use num_bigint::BigInt;
        let bits = bits.clamp(1, 53);
        assert!(v.is_finite(), "cannot approximate {v}");
        if v == 0.0 {
            return Self::from_int(0);
        }
        let exp = v.abs().log2().floor() as i32;
        let shift = bits as i32 - 1 - exp;
        let scaled = (v * 2f64.powi(shift)).round();
        let num = BigInt::from(scaled as i64);
        if shift >= 0 {
            Self::new(num, BigInt::from(1) << shift as usize)
        } else {
            Self::from_integer(num << (-shift) as usize)
        }
    }
}

/// Exact sign of a scalar.
pub fn sign<T: Scalar>(v: &T) -> std::cmp::Ordering {
    v.partial_cmp(&T::zero())
        .expect("scalar is totally ordered")
}
