use crate::error::{OrfError, Result};
use crate::matrix::ComplexMatrix;
use crate::scalar::{cone, czero, Cx, Real};

/// Default pivot tolerance relative to the largest entry of the operand:
/// `1e-13` in double precision, scaled with the unit roundoff otherwise.
pub fn default_pivot_tolerance<T: Real>() -> T {
    let u = T::unit_roundoff();
    (u / T::lit(f64::EPSILON) * T::lit(1e-13)).max(u * T::lit(64.0))
}

fn require_square<T: Real>(m: &ComplexMatrix<T>) -> Result<usize> {
    if !m.is_square() {
        return Err(OrfError::ShapeError {
            expected: "square matrix".into(),
            found: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    Ok(m.rows())
}

/// Non-pivoted factorization `M = L·R` with `L` unit lower triangular.
///
/// Fails with `StronglySingular(k)` (1-based) when the `k`-th pivot drops
/// below [`default_pivot_tolerance`] times `max|M|`.
pub fn lr_factorize<T: Real>(m: &ComplexMatrix<T>) -> Result<(ComplexMatrix<T>, ComplexMatrix<T>)> {
    lr_factorize_with(m, default_pivot_tolerance())
}

/// [`lr_factorize`] with the pivot tolerance `rel_tol·max|M|`.
pub fn lr_factorize_with<T: Real>(m: &ComplexMatrix<T>, rel_tol: T) -> Result<(ComplexMatrix<T>, ComplexMatrix<T>)> {
    let n = require_square(m)?;
    let tol = rel_tol * m.max_abs();
    let mut r = m.clone();
    let mut l = ComplexMatrix::identity(n);
    for k in 0..n {
        let piv = r[(k, k)];
        if piv.norm() <= tol || piv.norm() == T::zero() {
            return Err(OrfError::StronglySingular(k + 1));
        }
        for i in k + 1..n {
            let f = r[(i, k)] / piv;
            l[(i, k)] = f;
            r[(i, k)] = czero();
            if f == czero() {
                continue;
            }
            let (ri, rk) = r.two_rows_mut(i, k);
            for j in k + 1..n {
                ri[j] = ri[j] - f * rk[j];
            }
        }
    }
    Ok((l, r))
}

/// Cholesky factor `L` with `L·Lᴴ = M` and a real positive diagonal.
pub fn cholesky<T: Real>(m: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let n = require_square(m)?;
    let scale = m.max_abs();
    let herm_tol = T::lit(1e-10) * scale;
    for i in 0..n {
        for j in 0..i {
            if (m[(i, j)] - m[(j, i)].conj()).norm() > herm_tol {
                return Err(OrfError::InvalidInput("matrix is not Hermitian".into()));
            }
        }
    }
    let mut l = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = m[(j, j)].re;
        for k in 0..j {
            d = d - l[(j, k)].norm_sqr();
        }
        if !(d > T::zero()) {
            return Err(OrfError::NotPositiveDefinite(j + 1));
        }
        let djj = d.sqrt();
        l[(j, j)] = Cx::new(djj, T::zero());
        for i in j + 1..n {
            let mut s = m[(i, j)];
            for k in 0..j {
                s = s - l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / djj;
        }
    }
    Ok(l)
}

/// Solves `x · M = rhs` for the row vector `x` by partially pivoted LU of `Mᵀ`.
pub fn solve_row_system<T: Real>(m: &ComplexMatrix<T>, rhs: &[Cx<T>]) -> Result<Vec<Cx<T>>> {
    solve_row_system_with(m, rhs, default_pivot_tolerance())
}

/// [`solve_row_system`] with the pivot tolerance `rel_tol·max|M|`.
pub fn solve_row_system_with<T: Real>(m: &ComplexMatrix<T>, rhs: &[Cx<T>], rel_tol: T) -> Result<Vec<Cx<T>>> {
    let n = require_square(m)?;
    if rhs.len() != n {
        return Err(OrfError::ShapeError { expected: format!("rhs of length {n}"), found: format!("{}", rhs.len()) });
    }
    let tol = rel_tol * m.max_abs();
    let mut a = m.transpose();
    let mut b = rhs.to_vec();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[(i, k)].norm().partial_cmp(&a[(j, k)].norm()).unwrap())
            .unwrap();
        if a[(p, k)].norm() <= tol || a[(p, k)].norm() == T::zero() {
            return Err(OrfError::Singular);
        }
        if p != k {
            let (rp, rk) = a.two_rows_mut(p, k);
            rp.swap_with_slice(rk);
            b.swap(p, k);
        }
        let piv = a[(k, k)];
        for i in k + 1..n {
            let f = a[(i, k)] / piv;
            if f == czero() {
                continue;
            }
            let (ri, rk) = a.two_rows_mut(i, k);
            for j in k..n {
                ri[j] = ri[j] - f * rk[j];
            }
            b[i] = b[i] - f * b[k];
        }
    }
    for k in (0..n).rev() {
        let mut s = b[k];
        for j in k + 1..n {
            s = s - a[(k, j)] * b[j];
        }
        b[k] = s / a[(k, k)];
    }
    Ok(b)
}

/// Solves `U x = b` for upper triangular `U`.
pub fn solve_upper<T: Real>(u: &ComplexMatrix<T>, b: &[Cx<T>]) -> Vec<Cx<T>> {
    let n = u.rows();
    let mut x = b.to_vec();
    for k in (0..n).rev() {
        let row = u.row(k);
        let mut s = x[k];
        for j in k + 1..n {
            s = s - row[j] * x[j];
        }
        x[k] = s / row[k];
    }
    x
}

/// Solves `Uᴴ x = b` for upper triangular `U`.
pub fn solve_upper_adjoint<T: Real>(u: &ComplexMatrix<T>, b: &[Cx<T>]) -> Vec<Cx<T>> {
    let n = u.rows();
    let mut x = b.to_vec();
    for k in 0..n {
        x[k] = x[k] / u[(k, k)].conj();
        let xk = x[k];
        let row = u.row(k);
        for j in k + 1..n {
            x[j] = x[j] - row[j].conj() * xk;
        }
    }
    x
}

/// Solves `L x = b` for lower triangular `L`.
pub fn solve_lower<T: Real>(l: &ComplexMatrix<T>, b: &[Cx<T>]) -> Vec<Cx<T>> {
    let n = l.rows();
    let mut x = b.to_vec();
    for k in 0..n {
        let row = l.row(k);
        let mut s = x[k];
        for j in 0..k {
            s = s - row[j] * x[j];
        }
        x[k] = s / row[k];
    }
    x
}

/// Inverse of an upper triangular matrix, column by column.
pub fn upper_inverse<T: Real>(u: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let n = u.rows();
    let mut inv = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let mut e = vec![czero(); n];
        e[j] = cone();
        inv.set_column(j, &solve_upper(u, &e));
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    fn real(rows: &[&[f64]]) -> ComplexMatrix<f64> {
        ComplexMatrix::from_rows(&rows.iter().map(|r| r.iter().map(|&x| C::new(x, 0.0)).collect()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn pivot_tolerance_can_be_overridden() {
        assert_eq!(default_pivot_tolerance::<f64>(), 1e-13);
        let near = real(&[&[1e-14, 1.0], &[1.0, 1.0]]);
        assert!(matches!(lr_factorize(&near), Err(OrfError::StronglySingular(1))));
        let (l, r) = lr_factorize_with(&near, 1e-15).unwrap();
        assert!(l.matmul(&r).unwrap().sub(&near).unwrap().max_abs() <= 1e-12);
        let sing = real(&[&[1.0, 1.0], &[1.0, 1.0 + 1e-14]]);
        assert!(solve_row_system(&sing, &[C::new(1.0, 0.0), C::new(0.0, 0.0)]).is_err());
        assert!(solve_row_system_with(&sing, &[C::new(1.0, 0.0), C::new(0.0, 0.0)], 1e-16).is_ok());
    }

    #[test]
    fn lr_of_identity() {
        let (l, r) = lr_factorize(&ComplexMatrix::<f64>::identity(3)).unwrap();
        assert_eq!(l, ComplexMatrix::identity(3));
        assert_eq!(r, ComplexMatrix::identity(3));
    }

    #[test]
    fn lr_hand_example_is_exact() {
        let m = real(&[&[1.0, 1.0], &[1.0, 2.0]]);
        let (l, r) = lr_factorize(&m).unwrap();
        assert_eq!(l, real(&[&[1.0, 0.0], &[1.0, 1.0]]));
        assert_eq!(r, real(&[&[1.0, 1.0], &[0.0, 1.0]]));
        assert_eq!(l.matmul(&r).unwrap(), m);
    }

    #[test]
    fn lr_zero_leading_minor() {
        let m = real(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(lr_factorize(&m), Err(OrfError::StronglySingular(1)));
    }

    #[test]
    fn cholesky_diagonal() {
        let l = cholesky(&real(&[&[4.0, 0.0], &[0.0, 9.0]])).unwrap();
        assert_eq!(l, real(&[&[2.0, 0.0], &[0.0, 3.0]]));
        assert_eq!(cholesky(&ComplexMatrix::<f64>::identity(3)).unwrap(), ComplexMatrix::identity(3));
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        assert_eq!(cholesky(&real(&[&[1.0, 2.0], &[2.0, 1.0]])), Err(OrfError::NotPositiveDefinite(2)));
    }

    #[test]
    fn row_system_trivial_cases() {
        let x = solve_row_system(&ComplexMatrix::<f64>::identity(3), &[C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)]).unwrap();
        assert_eq!(x, vec![C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)]);
        let x = solve_row_system(&real(&[&[2.0, 0.0], &[0.0, 4.0]]), &[C::new(2.0, 0.0), C::new(4.0, 0.0)]).unwrap();
        assert_eq!(x, vec![C::new(1.0, 0.0), C::new(1.0, 0.0)]);
    }

    #[test]
    fn row_system_singular() {
        assert_eq!(solve_row_system(&real(&[&[1.0, 2.0], &[2.0, 4.0]]), &[C::new(1.0, 0.0); 2]), Err(OrfError::Singular));
    }

    #[test]
    fn triangular_solvers_invert() {
        let u = ComplexMatrix::from_fn(4, 4, |i, j| if j >= i { C::new(1.0 + (i + j) as f64, 0.3 * j as f64) } else { C::new(0.0, 0.0) });
        let b: Vec<C> = (0..4).map(|k| C::new(k as f64, 1.0)).collect();
        let x = solve_upper(&u, &b);
        let back = u.mul_vec(&x);
        assert!(back.iter().zip(&b).all(|(p, q)| (p - q).norm() < 1e-13));
        let y = solve_upper_adjoint(&u, &b);
        let back = u.adjoint().mul_vec(&y);
        assert!(back.iter().zip(&b).all(|(p, q)| (p - q).norm() < 1e-13));
        let l = u.adjoint();
        let z = solve_lower(&l, &b);
        assert!(l.mul_vec(&z).iter().zip(&b).all(|(p, q)| (p - q).norm() < 1e-13));
        let inv = upper_inverse(&u);
        assert!(u.matmul(&inv).unwrap().minus_identity().max_abs() < 1e-13);
    }
}
