use crate::matrix::ComplexMatrix;
use crate::scalar::{Cx, Real};

/// Which triangle the single off-diagonal entry of an eliminator lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EliminatorKind {
    /// Entry at `(partner, pivot)`.
    Lower,
    /// Entry at `(pivot, partner)`.
    Upper,
}

/// Unit triangular transformation with one off-diagonal entry coupling
/// `pivot` and `partner` (0-based, `partner` is normally the trailing index).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eliminator<T> {
    pub kind: EliminatorKind,
    pub pivot: usize,
    pub partner: usize,
    pub param: Cx<T>,
}

impl<T: Real> Eliminator<T> {
    pub fn lower(pivot: usize, partner: usize, param: Cx<T>) -> Self {
        Self { kind: EliminatorKind::Lower, pivot, partner, param }
    }

    pub fn upper(pivot: usize, partner: usize, param: Cx<T>) -> Self {
        Self { kind: EliminatorKind::Upper, pivot, partner, param }
    }

    /// Row and column of the off-diagonal entry.
    fn slot(&self) -> (usize, usize) {
        match self.kind {
            EliminatorKind::Lower => (self.partner, self.pivot),
            EliminatorKind::Upper => (self.pivot, self.partner),
        }
    }

    pub fn inverse(&self) -> Self {
        Self { param: -self.param, ..*self }
    }

    pub fn adjoint(&self) -> Self {
        let kind = match self.kind {
            EliminatorKind::Lower => EliminatorKind::Upper,
            EliminatorKind::Upper => EliminatorKind::Lower,
        };
        Self { kind, param: self.param.conj(), ..*self }
    }

    pub fn to_matrix(&self, n: usize) -> ComplexMatrix<T> {
        let mut m = ComplexMatrix::identity(n);
        m[self.slot()] = self.param;
        m
    }

    /// `self · m`: adds `param` times one row to the other.
    pub fn apply_left(&self, m: &mut ComplexMatrix<T>) {
        let (dst, src) = self.slot();
        let p = self.param;
        let (d, s) = m.two_rows_mut(dst, src);
        for (x, y) in d.iter_mut().zip(s.iter()) {
            *x = *x + p * y;
        }
    }

    /// `m · self`: adds `param` times one column to the other.
    pub fn apply_right(&self, m: &mut ComplexMatrix<T>) {
        let (src, dst) = self.slot();
        let p = self.param;
        for i in 0..m.rows() {
            let v = m[(i, src)];
            m[(i, dst)] = m[(i, dst)] + v * p;
        }
    }

    /// `m · self⁻¹`.
    pub fn apply_inverse_right(&self, m: &mut ComplexMatrix<T>) {
        self.inverse().apply_right(m);
    }

    /// `m · selfᴴ`.
    pub fn apply_adjoint_right(&self, m: &mut ComplexMatrix<T>) {
        self.adjoint().apply_right(m);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    #[test]
    fn materialized_pattern() {
        let l = Eliminator::lower(1, 3, C::new(2.0, 1.0)).to_matrix(4);
        let u = Eliminator::upper(1, 3, C::new(-1.0, 0.5)).to_matrix(4);
        for i in 0..4 {
            for j in 0..4 {
                let expect_l = if i == j { C::new(1.0, 0.0) } else if (i, j) == (3, 1) { C::new(2.0, 1.0) } else { C::new(0.0, 0.0) };
                let expect_u = if i == j { C::new(1.0, 0.0) } else if (i, j) == (1, 3) { C::new(-1.0, 0.5) } else { C::new(0.0, 0.0) };
                assert_eq!(l[(i, j)], expect_l);
                assert_eq!(u[(i, j)], expect_u);
            }
        }
    }

    #[test]
    fn applications_match_products() {
        let a = ComplexMatrix::from_fn(4, 4, |i, j| C::new(1.0 + i as f64, 0.5 * j as f64 - 0.2));
        for e in [Eliminator::lower(0, 3, C::new(0.3, -0.7)), Eliminator::upper(2, 3, C::new(-1.1, 0.4))] {
            let x = e.to_matrix(4);
            let close = |p: &ComplexMatrix<f64>, q: &ComplexMatrix<f64>| p.sub(q).unwrap().max_abs() < 1e-14;
            let mut l = a.clone();
            e.apply_left(&mut l);
            assert!(close(&l, &x.matmul(&a).unwrap()));
            let mut r = a.clone();
            e.apply_right(&mut r);
            assert!(close(&r, &a.matmul(&x).unwrap()));
            let mut ri = r.clone();
            e.apply_inverse_right(&mut ri);
            assert!(close(&ri, &a));
            let mut rh = a.clone();
            e.apply_adjoint_right(&mut rh);
            assert!(close(&rh, &a.matmul(&x.adjoint()).unwrap()));
        }
    }
}
