//! Double-double scalar for reference computations.
//!
//! [`DoubleDouble`] wraps [`twofloat::TwoFloat`] and inherits its addition,
//! multiplication and elementary functions. Division is replaced: the
//! wrapped type forms the residual `1 − b·(1/b)` without a fused multiply-add
//! and so returns quotients that are only accurate to double precision. Here
//! the quotient is refined by two correction steps against the exact
//! double-double residual.

use num_traits::{Float, FromPrimitive, Num, NumCast, One, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::num::FpCategory;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};
use twofloat::TwoFloat;

/// Roughly 106-bit floating point number stored as an unevaluated sum of two
/// `f64`.
#[derive(Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble(pub TwoFloat);

impl DoubleDouble {
    pub fn hi(self) -> f64 {
        self.0.hi()
    }

    pub fn lo(self) -> f64 {
        self.0.lo()
    }
}

fn tf(x: f64) -> TwoFloat {
    <TwoFloat as From<f64>>::from(x)
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self(tf(x))
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl fmt::Debug for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DoubleDouble({:e} + {:e})", self.hi(), self.lo())
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::LowerExp for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::LowerExp::fmt(&self.0, f)
    }
}

macro_rules! binary_op {
    ($tr:ident, $method:ident) => {
        impl $tr for DoubleDouble {
            type Output = Self;
            fn $method(self, rhs: Self) -> Self {
                Self(self.0.$method(rhs.0))
            }
        }
    };
}

binary_op!(Add, add);
binary_op!(Sub, sub);
binary_op!(Mul, mul);

impl Div for DoubleDouble {
    type Output = Self;

    fn div(self, rhs: Self) -> Self {
        let (a, b) = (self.0, rhs.0);
        if !b.is_finite() || b == tf(0.0) || !a.is_finite() {
            return Self(tf(a.hi() / b.hi()));
        }
        let q1 = a.hi() / b.hi();
        let r = a - b * q1;
        let q2 = r.hi() / b.hi();
        let r = r - b * q2;
        let q3 = r.hi() / b.hi();
        Self(TwoFloat::new_add(q1, q2) + q3)
    }
}

impl Rem for DoubleDouble {
    type Output = Self;
    fn rem(self, rhs: Self) -> Self {
        self - (self / rhs).trunc() * rhs
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl Zero for DoubleDouble {
    fn zero() -> Self {
        Self(tf(0.0))
    }
    fn is_zero(&self) -> bool {
        self.0 == tf(0.0)
    }
}

impl One for DoubleDouble {
    fn one() -> Self {
        Self(tf(1.0))
    }
}

impl Num for DoubleDouble {
    type FromStrRadixErr = <TwoFloat as Num>::FromStrRadixErr;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        TwoFloat::from_str_radix(s, radix).map(Self)
    }
}

impl ToPrimitive for DoubleDouble {
    fn to_i64(&self) -> Option<i64> {
        self.0.to_i64()
    }
    fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
    fn to_f64(&self) -> Option<f64> {
        Some(self.hi() + self.lo())
    }
}

impl NumCast for DoubleDouble {
    fn from<N: ToPrimitive>(n: N) -> Option<Self> {
        n.to_f64().map(|x| Self(tf(x)))
    }
}

impl FromPrimitive for DoubleDouble {
    fn from_i64(n: i64) -> Option<Self> {
        TwoFloat::from_i64(n).map(Self)
    }
    fn from_u64(n: u64) -> Option<Self> {
        TwoFloat::from_u64(n).map(Self)
    }
    fn from_f64(x: f64) -> Option<Self> {
        Some(Self(tf(x)))
    }
}

macro_rules! delegate {
    ($($name:ident),*) => {
        $(fn $name(self) -> Self { Self(Float::$name(self.0)) })*
    };
}

macro_rules! delegate_const {
    ($($name:ident),*) => {
        $(fn $name() -> Self { Self(<TwoFloat as Float>::$name()) })*
    };
}

macro_rules! delegate_test {
    ($($name:ident),*) => {
        $(fn $name(self) -> bool { Float::$name(self.0) })*
    };
}

impl Float for DoubleDouble {
    delegate_const!(nan, infinity, neg_infinity, neg_zero, min_value, min_positive_value, max_value);
    delegate_test!(is_nan, is_infinite, is_finite, is_normal, is_sign_positive, is_sign_negative);
    delegate!(
        floor, ceil, round, trunc, fract, abs, signum, sqrt, exp, exp2, ln, log2, log10, cbrt, sin, cos, tan, asin, acos, atan,
        exp_m1, ln_1p, sinh, cosh, tanh, asinh, acosh, atanh
    );

    fn epsilon() -> Self {
        Self(tf(2f64.powi(-104)))
    }

    fn classify(self) -> FpCategory {
        Float::classify(self.0)
    }

    fn mul_add(self, a: Self, b: Self) -> Self {
        self * a + b
    }

    fn recip(self) -> Self {
        Self::one() / self
    }

    fn powi(self, n: i32) -> Self {
        if n < 0 {
            Self::one() / Self(Float::powi(self.0, -n))
        } else {
            Self(Float::powi(self.0, n))
        }
    }

    fn powf(self, n: Self) -> Self {
        Self(Float::powf(self.0, n.0))
    }

    fn log(self, base: Self) -> Self {
        self.ln() / base.ln()
    }

    fn max(self, other: Self) -> Self {
        Self(Float::max(self.0, other.0))
    }

    fn min(self, other: Self) -> Self {
        Self(Float::min(self.0, other.0))
    }

    #[allow(deprecated)]
    fn abs_sub(self, other: Self) -> Self {
        Self(Float::abs_sub(self.0, other.0))
    }

    fn hypot(self, other: Self) -> Self {
        Self(Float::hypot(self.0, other.0))
    }

    fn atan2(self, other: Self) -> Self {
        Self(Float::atan2(self.0, other.0))
    }

    fn sin_cos(self) -> (Self, Self) {
        let (s, c) = Float::sin_cos(self.0);
        (Self(s), Self(c))
    }

    fn integer_decode(self) -> (u64, i16, i8) {
        Float::integer_decode(self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: DoubleDouble, b: DoubleDouble) -> f64 {
        ((a - b).abs() / b.abs()).hi()
    }

    #[test]
    fn division_is_double_double_accurate() {
        let three = DoubleDouble(tf(3.0));
        let third = DoubleDouble::one() / three;
        assert!((third * three - DoubleDouble::one()).abs().hi() < 1e-31);
        let a = DoubleDouble(TwoFloat::new_add(1.2345678901234567, 1e-17));
        let b = DoubleDouble(TwoFloat::new_add(0.7654321098765432, 3e-18));
        assert!(rel(a * b / b, a) < 1e-31);
        assert!(rel(a.recip() * a, DoubleDouble::one()) < 1e-31);
        assert!(rel(a.powi(-2) * a * a, DoubleDouble::one()) < 1e-31);
    }

    #[test]
    fn round_trips_through_f64() {
        let x = DoubleDouble(tf(0.1));
        assert_eq!(x.to_f64(), Some(0.1));
        assert_eq!(<DoubleDouble as NumCast>::from(2.5f32).unwrap().hi(), 2.5);
    }
}
