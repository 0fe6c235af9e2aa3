//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar the library is generic over.
///
/// Implemented for [`f32`] and [`f64`]. Quadrature rules and special-function
/// coefficients are tabulated in `f64` and converted on use, so `f32`
/// instantiations work but carry single-precision accuracy.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + LowerExp
    + Default
    + Sum
    + Send
    + Sync
    + serde::Serialize
    + for<'de> serde::Deserialize<'de>
    + 'static
{
    fn half() -> Self;
    fn two() -> Self;
}

impl Real for f32 {
    fn half() -> Self {
        0.5
    }

    fn two() -> Self {
        2.0
    }
}

impl Real for f64 {
    fn half() -> Self {
        0.5
    }

    fn two() -> Self {
        2.0
    }
}

/// Complex number over a [`Real`] scalar.
pub type Cx<T> = Complex<T>;

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

/// Converts a count into `T`.
#[inline]
pub fn from_usize<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("count representable in scalar type")
}

#[inline]
pub(crate) fn cx<T: Real>(re: T, im: T) -> Cx<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn re<T: Real>(x: T) -> Cx<T> {
    Complex::new(x, T::zero())
}

/// `i^k` without floating-point trigonometry.
pub(crate) fn i_pow<T: Real>(k: i64) -> Cx<T> {
    match k.rem_euclid(4) {
        0 => cx(T::one(), T::zero()),
        1 => cx(T::zero(), T::one()),
        2 => cx(-T::one(), T::zero()),
        _ => cx(T::zero(), -T::one()),
    }
}

pub(crate) fn is_finite_cx<T: Real>(z: Cx<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Binomial coefficient as a float.
pub(crate) fn binomial<T: Real>(n: usize, k: usize) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    let mut acc = T::one();
    for j in 0..k {
        acc = acc * from_usize::<T>(n - j) / from_usize::<T>(j + 1);
    }
    acc
}

/// `n!` as a float.
pub(crate) fn factorial<T: Real>(n: usize) -> T {
    (1..=n).fold(T::one(), |acc, j| acc * from_usize::<T>(j))
}

/// Falling factorial `p (p-1) ... (p-k+1)`.
pub(crate) fn falling<T: Real>(p: T, k: usize) -> T {
    (0..k).fold(T::one(), |acc, j| acc * (p - from_usize::<T>(j)))
}
