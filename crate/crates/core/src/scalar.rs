//! Scalar plumbing shared by every module.

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FromPrimitive};

/// Real floating-point type the solvers are generic over: `f32`, `f64`, and
/// with the `twofloat` feature [`crate::DoubleDouble`].
pub trait Real:
    Float + FromPrimitive + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Relative spacing of the arithmetic, which every internal tolerance is
    /// derived from.
    fn unit_roundoff() -> Self {
        Self::epsilon()
    }

    /// Converts an `f64` literal into this type.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }

    /// Converts a count into this type.
    fn count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(feature = "twofloat")]
impl Real for crate::dd::DoubleDouble {}

/// Complex number over `T`.
pub type Cx<T> = Complex<T>;

#[inline]
pub(crate) fn re<T: Real>(x: T) -> Cx<T> {
    Complex::new(x, T::zero())
}

#[inline]
pub(crate) fn czero<T: Real>() -> Cx<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub(crate) fn cone<T: Real>() -> Cx<T> {
    Complex::new(T::one(), T::zero())
}

/// Euclidean norm of a complex vector, guarded against overflow.
pub fn vec_norm<T: Real>(x: &[Cx<T>]) -> T {
    let scale = x.iter().fold(T::zero(), |m, v| m.max(v.re.abs()).max(v.im.abs()));
    if scale == T::zero() || !scale.is_finite() {
        return scale;
    }
    let s = x
        .iter()
        .fold(T::zero(), |acc, v| acc + (v.re / scale).powi(2) + (v.im / scale).powi(2));
    scale * s.sqrt()
}

/// `xᴴ y`.
pub fn vec_dot<T: Real>(x: &[Cx<T>], y: &[Cx<T>]) -> Cx<T> {
    x.iter().zip(y).fold(czero(), |acc, (a, b)| acc + a.conj() * b)
}

/// `|h·μ − k·ν| ≤ tol·‖(h, k)‖₂·‖(ν, μ)‖₂`: the projective equality test
/// used for every pole comparison. The left side over the right-hand norms
/// is the sine of the angle between the two fractions, so the test treats
/// finite and infinite poles alike.
pub fn fractions_match<T: Real>(h: Cx<T>, k: Cx<T>, nu: Cx<T>, mu: Cx<T>, tol: T) -> bool {
    let scale = vec_norm(&[h, k]) * vec_norm(&[nu, mu]);
    (h * mu - k * nu).norm() <= tol * scale.max(T::min_positive_value())
}
