use crate::error::{OrfError, Result};
use crate::scalar::{cone, czero, fractions_match, Cx, Real};

/// A point of the extended complex plane stored as the fraction `ν / μ`.
///
/// The pair is kept in canonical form: the larger of `|ν|`, `|μ|` is
/// exactly one, so `μ = 0` (infinity) and finite values share one code path.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtendedComplexPole<T> {
    nu: Cx<T>,
    mu: Cx<T>,
}

impl<T: Real> ExtendedComplexPole<T> {
    /// Canonicalizes the fraction `nu / mu`.
    pub fn from_fraction(nu: Cx<T>, mu: Cx<T>) -> Result<Self> {
        let (an, am) = (nu.norm(), mu.norm());
        if an == T::zero() && am == T::zero() {
            return Err(OrfError::DegenerateInput("pole fraction 0/0"));
        }
        if !(an.is_finite() && am.is_finite()) {
            return Err(OrfError::InvalidInput("pole fraction is not finite".into()));
        }
        Ok(if an >= am {
            Self { nu: cone(), mu: mu / nu }
        } else {
            Self { nu: nu / mu, mu: cone() }
        })
    }

    pub fn finite(xi: Cx<T>) -> Self {
        Self::from_fraction(xi, cone()).expect("finite pole")
    }

    pub fn infinity() -> Self {
        Self { nu: cone(), mu: czero() }
    }

    pub fn nu(&self) -> Cx<T> {
        self.nu
    }

    pub fn mu(&self) -> Cx<T> {
        self.mu
    }

    pub fn is_infinite(&self) -> bool {
        self.mu == czero()
    }

    /// The finite value `ν/μ`, or `None` at infinity.
    pub fn value(&self) -> Option<Cx<T>> {
        (!self.is_infinite()).then(|| self.nu / self.mu)
    }

    /// The same pole over another real type.
    pub fn cast<U: Real>(&self) -> ExtendedComplexPole<U> {
        ExtendedComplexPole::from_fraction(crate::measure::cast_complex(self.nu), crate::measure::cast_complex(self.mu))
            .expect("cast of a valid pole")
    }

    /// The pole `conj(ν) / conj(μ)`.
    pub fn conj(&self) -> Self {
        Self { nu: self.nu.conj(), mu: self.mu.conj() }
    }

    /// Whether the ratio `h / k` represents this pole, tested by cross product.
    pub fn matches_fraction(&self, h: Cx<T>, k: Cx<T>, tol: T) -> bool {
        fractions_match(h, k, self.nu, self.mu, tol)
    }

    /// Whether the finite point `z` coincides with this pole.
    pub fn coincides_with(&self, z: Cx<T>, tol: T) -> bool {
        self.matches_fraction(z, cone(), tol)
    }

    /// Relative deviation of the ratio `h / k` from this pole: `|h/k − ξ| / |ξ|`
    /// for finite nonzero poles, and the deviation of the normalized fraction
    /// from the pole's direction otherwise.
    pub fn ratio_error(&self, h: Cx<T>, k: Cx<T>) -> T {
        let hk = crate::scalar::vec_norm(&[h, k]);
        match self.value() {
            None => {
                if hk == T::zero() {
                    T::infinity()
                } else {
                    k.norm() / hk
                }
            }
            Some(xi) if xi.norm() == T::zero() => {
                if hk == T::zero() {
                    T::infinity()
                } else {
                    h.norm() / hk
                }
            }
            Some(xi) => {
                if k.norm() == T::zero() {
                    T::infinity()
                } else {
                    (h / k - xi).norm() / xi.norm()
                }
            }
        }
    }
}
