//! The integer scalar abstraction every algorithm in this crate is generic over.
//!
//! Fixed-width types are accepted for speed in the experiment kernels, but every
//! arithmetic step that could grow goes through the `Checked*` traits, so an
//! overflow surfaces as [`Error::Overflow`](crate::Error::Overflow) instead of
//! wrapping. [`BigInt`] never overflows.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Signed, ToPrimitive};

use crate::{Error, Result};

/// An exact signed integer type.
pub trait Scalar:
    Integer
    + Signed
    + Clone
    + Hash
    + Debug
    + Display
    + FromStr
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    fn to_bigint(&self) -> BigInt;

    /// `None` when the value does not fit.
    fn from_bigint(value: &BigInt) -> Option<Self>;

    fn from_usize_checked(value: usize) -> Result<Self> {
        Self::from_usize(value).ok_or(Error::Overflow)
    }
}

macro_rules! primitive_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            fn to_bigint(&self) -> BigInt {
                BigInt::from(*self)
            }

            fn from_bigint(value: &BigInt) -> Option<Self> {
                <$t>::try_from(value).ok()
            }
        }
    )*};
}

primitive_scalar!(i32, i64, i128);

impl Scalar for BigInt {
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }

    fn from_bigint(value: &BigInt) -> Option<Self> {
        Some(value.clone())
    }
}

pub(crate) fn add<T: CheckedAdd>(a: &T, b: &T) -> Result<T> {
    a.checked_add(b).ok_or(Error::Overflow)
}

pub(crate) fn sub<T: CheckedSub>(a: &T, b: &T) -> Result<T> {
    a.checked_sub(b).ok_or(Error::Overflow)
}

pub(crate) fn mul<T: CheckedMul>(a: &T, b: &T) -> Result<T> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

/// Converts between scalar types, failing if the value does not fit.
pub fn cast<T: Scalar, U: Scalar>(value: &T) -> Result<U> {
    U::from_bigint(&value.to_bigint()).ok_or(Error::Overflow)
}

pub(crate) fn ratio_add<T: Scalar>(a: &Ratio<T>, b: &Ratio<T>) -> Result<Ratio<T>> {
    a.checked_add(b).ok_or(Error::Overflow)
}

pub(crate) fn ratio_sub<T: Scalar>(a: &Ratio<T>, b: &Ratio<T>) -> Result<Ratio<T>> {
    a.checked_sub(b).ok_or(Error::Overflow)
}

pub(crate) fn ratio_mul<T: Scalar>(a: &Ratio<T>, b: &Ratio<T>) -> Result<Ratio<T>> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

pub(crate) fn ratio_div<T: Scalar>(a: &Ratio<T>, b: &Ratio<T>) -> Result<Ratio<T>> {
    use num_traits::CheckedDiv;
    a.checked_div(b).ok_or(Error::Overflow)
}
