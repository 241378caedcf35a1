use crate::error::{OrfError, Result};
use crate::matrix::ComplexMatrix;
use crate::scalar::{cone, czero, Cx, Real};

/// Unitary plane rotation acting on the index pair `(pivot, partner)`.
///
/// Materialized, it is the identity except for the 2×2 block
/// `[[conj(a), -conj(b)], [b, a]]` on rows and columns `pivot`, `partner`
/// (in that order). Indices are 0-based. The updating procedures always use
/// the trailing index as `partner`, which gives the arrowhead pattern the
/// chase relies on.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneRotation<T> {
    pub pivot: usize,
    pub partner: usize,
    pub a: Cx<T>,
    pub b: Cx<T>,
}

/// Parameters `(a, b)` of the rotation sending `(x, y)ᵀ` to `(r, 0)ᵀ` with
/// `r = ‖(x, y)‖₂`.
pub fn rotation_to_eliminate<T: Real>(x: Cx<T>, y: Cx<T>) -> Result<(Cx<T>, Cx<T>)> {
    let n = crate::scalar::vec_norm(&[x, y]);
    if n == T::zero() {
        return Err(OrfError::DegenerateInput("rotation of a zero vector"));
    }
    Ok((x / n, -(y / n)))
}

impl<T: Real> PlaneRotation<T> {
    pub fn new(pivot: usize, partner: usize, a: Cx<T>, b: Cx<T>) -> Self {
        Self { pivot, partner, a, b }
    }

    pub fn identity(pivot: usize, partner: usize) -> Self {
        Self::new(pivot, partner, cone(), czero())
    }

    /// Rotation that, applied from the left, maps `(x, y)` on rows
    /// `(pivot, partner)` to `(‖(x,y)‖, 0)`.
    pub fn eliminating(pivot: usize, partner: usize, x: Cx<T>, y: Cx<T>) -> Result<Self> {
        let (a, b) = rotation_to_eliminate(x, y)?;
        Ok(Self::new(pivot, partner, a, b))
    }

    /// The 2×2 block `[[ā, −b̄], [b, a]]`.
    pub fn block(&self) -> [[Cx<T>; 2]; 2] {
        [[self.a.conj(), -self.b.conj()], [self.b, self.a]]
    }

    pub fn to_matrix(&self, n: usize) -> ComplexMatrix<T> {
        let mut m = ComplexMatrix::identity(n);
        let g = self.block();
        let (p, q) = (self.pivot, self.partner);
        m[(p, p)] = g[0][0];
        m[(p, q)] = g[0][1];
        m[(q, p)] = g[1][0];
        m[(q, q)] = g[1][1];
        m
    }

    /// `self · m`.
    pub fn apply_left(&self, m: &mut ComplexMatrix<T>) {
        let g = self.block();
        let (rp, rq) = m.two_rows_mut(self.pivot, self.partner);
        for (x, y) in rp.iter_mut().zip(rq.iter_mut()) {
            let (u, v) = (*x, *y);
            *x = g[0][0] * u + g[0][1] * v;
            *y = g[1][0] * u + g[1][1] * v;
        }
    }

    /// `selfᴴ · m`.
    pub fn apply_adjoint_left(&self, m: &mut ComplexMatrix<T>) {
        let g = self.block();
        let (rp, rq) = m.two_rows_mut(self.pivot, self.partner);
        for (x, y) in rp.iter_mut().zip(rq.iter_mut()) {
            let (u, v) = (*x, *y);
            *x = g[0][0].conj() * u + g[1][0].conj() * v;
            *y = g[0][1].conj() * u + g[1][1].conj() * v;
        }
    }

    /// `m · self`.
    pub fn apply_right(&self, m: &mut ComplexMatrix<T>) {
        let g = self.block();
        let (p, q) = (self.pivot, self.partner);
        for i in 0..m.rows() {
            let (u, v) = (m[(i, p)], m[(i, q)]);
            m[(i, p)] = u * g[0][0] + v * g[1][0];
            m[(i, q)] = u * g[0][1] + v * g[1][1];
        }
    }

    /// `m · selfᴴ`.
    pub fn apply_adjoint_right(&self, m: &mut ComplexMatrix<T>) {
        let g = self.block();
        let (p, q) = (self.pivot, self.partner);
        for i in 0..m.rows() {
            let (u, v) = (m[(i, p)], m[(i, q)]);
            m[(i, p)] = u * g[0][0].conj() + v * g[0][1].conj();
            m[(i, q)] = u * g[1][0].conj() + v * g[1][1].conj();
        }
    }
}
