//! Singular values.
//!
//! Two routes are provided. [`svd_jacobi`] is a one-sided Jacobi SVD that
//! returns singular vectors and is used where vectors are needed (null
//! spaces, test oracles). [`singular_values`] reduces to real bidiagonal form
//! with Householder reflectors and then bisects on the Golub–Kahan
//! tridiagonal matrix; it is far cheaper on the matrix sizes the experiments
//! sweep and is what [`norm2`] and [`cond2`] use.

use crate::matrix::ComplexMatrix;
use crate::scalar::{czero, Cx, Real};

/// Thin singular value decomposition `A = U·diag(σ)·Vᴴ`, `σ` descending.
#[derive(Clone, Debug)]
pub struct Svd<T> {
    pub u: ComplexMatrix<T>,
    pub sigma: Vec<T>,
    pub v: ComplexMatrix<T>,
}

/// One-sided (Hestenes) Jacobi SVD.
pub fn svd_jacobi<T: Real>(a: &ComplexMatrix<T>) -> Svd<T> {
    if a.rows() < a.cols() {
        let s = svd_jacobi(&a.adjoint());
        return Svd { u: s.v, sigma: s.sigma, v: s.u };
    }
    let (m, n) = (a.rows(), a.cols());
    let mut cols: Vec<Vec<Cx<T>>> = (0..n).map(|j| a.column(j)).collect();
    let mut vcols: Vec<Vec<Cx<T>>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { Cx::new(T::one(), T::zero()) } else { czero() }).collect())
        .collect();
    let tol = T::unit_roundoff() * T::count(m.max(1));
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: T = cols[p].iter().fold(T::zero(), |s, x| s + x.norm_sqr());
                let beta: T = cols[q].iter().fold(T::zero(), |s, x| s + x.norm_sqr());
                let gamma = crate::scalar::vec_dot(&cols[p], &cols[q]);
                let g = gamma.norm();
                if g == T::zero() || g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (g + g);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                let ph = (gamma / g).conj();
                for vecs in [&mut cols, &mut vcols] {
                    let (lo, hi) = vecs.split_at_mut(q);
                    for (x, y) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
                        let (u, w) = (*x, *y * ph);
                        *x = u * c - w * s;
                        *y = u * s + w * c;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<(T, usize)> = cols.iter().enumerate().map(|(j, c)| (crate::scalar::vec_norm(c), j)).collect();
    order.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap_or(std::cmp::Ordering::Equal));
    let mut u = ComplexMatrix::zeros(m, n);
    let mut v = ComplexMatrix::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    for (k, &(s, j)) in order.iter().enumerate() {
        sigma.push(s);
        for i in 0..m {
            u[(i, k)] = if s > T::zero() { cols[j][i] / s } else { czero() };
        }
        for i in 0..n {
            v[(i, k)] = vcols[j][i];
        }
    }
    Svd { u, sigma, v }
}

/// Householder reflector data for `x`: returns `(v, tau, alpha)` with
/// `(I − tau·v·vᴴ)·x = alpha·e₁`, or `None` when `x` is zero.
fn householder<T: Real>(x: &[Cx<T>]) -> Option<(Vec<Cx<T>>, T, Cx<T>)> {
    let nx = crate::scalar::vec_norm(x);
    if nx == T::zero() {
        return None;
    }
    let x0 = x[0];
    let phase = if x0.norm() == T::zero() { Cx::new(T::one(), T::zero()) } else { x0 / x0.norm() };
    let alpha = -phase * nx;
    let mut v = x.to_vec();
    v[0] = v[0] - alpha;
    let vv = crate::scalar::vec_norm(&v);
    if vv == T::zero() {
        return None;
    }
    let tau = T::lit(2.0) / (vv * vv);
    Some((v, tau, alpha))
}

/// Moduli of the diagonal and superdiagonal of a bidiagonal form of `a`.
fn bidiagonalize<T: Real>(a: &ComplexMatrix<T>) -> (Vec<T>, Vec<T>) {
    let mut w = if a.rows() >= a.cols() { a.clone() } else { a.adjoint() };
    let (m, n) = (w.rows(), w.cols());
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n.saturating_sub(1)];
    let mut acc = vec![czero::<T>(); n.max(m)];
    for k in 0..n {
        let x: Vec<Cx<T>> = (k..m).map(|i| w[(i, k)]).collect();
        if let Some((v, tau, _)) = householder(&x) {
            for a in acc[k..n].iter_mut() {
                *a = czero();
            }
            for (r, vi) in (k..m).zip(&v) {
                let row = w.row(r);
                let c = vi.conj();
                for j in k..n {
                    acc[j] = acc[j] + c * row[j];
                }
            }
            for (r, vi) in (k..m).zip(&v) {
                let f = *vi * tau;
                let row = w.row_mut(r);
                for j in k..n {
                    row[j] = row[j] - f * acc[j];
                }
            }
        }
        d[k] = w[(k, k)].norm();
        if k + 1 < n {
            let x: Vec<Cx<T>> = (k + 1..n).map(|j| w[(k, j)].conj()).collect();
            if let Some((v, tau, _)) = householder(&x) {
                for r in k..m {
                    let row = w.row_mut(r);
                    let mut s = czero::<T>();
                    for (j, vj) in (k + 1..n).zip(&v) {
                        s = s + row[j] * vj;
                    }
                    let s = s * tau;
                    for (j, vj) in (k + 1..n).zip(&v) {
                        row[j] = row[j] - s * vj.conj();
                    }
                }
            }
            e[k] = w[(k, k + 1)].norm();
        }
    }
    (d, e)
}

/// Number of eigenvalues below `x` of the Golub–Kahan tridiagonal matrix
/// with zero diagonal and off-diagonal `b`.
fn sturm_count<T: Real>(b2: &[T], x: T, pivmin: T) -> usize {
    let mut q = -x;
    if q.abs() < pivmin {
        q = -pivmin;
    }
    let mut count = usize::from(q < T::zero());
    for &bb in b2 {
        q = -x - bb / q;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < T::zero() {
            count += 1;
        }
    }
    count
}

struct GolubKahan<T> {
    n: usize,
    b2: Vec<T>,
    scale: T,
    bound: T,
    pivmin: T,
}

impl<T: Real> GolubKahan<T> {
    fn new(d: &[T], e: &[T]) -> Self {
        let n = d.len();
        let scale = d.iter().chain(e).fold(T::zero(), |m, &x| m.max(x.abs()));
        let s = if scale > T::zero() { scale } else { T::one() };
        let mut b = Vec::with_capacity(2 * n);
        for k in 0..n {
            b.push(d[k] / s);
            if k < e.len() {
                b.push(e[k] / s);
            }
        }
        let mut bound = T::zero();
        for k in 0..=b.len() {
            let l = if k > 0 { b[k - 1].abs() } else { T::zero() };
            let r = if k < b.len() { b[k].abs() } else { T::zero() };
            bound = bound.max(l + r);
        }
        let b2: Vec<T> = b.iter().map(|&x| x * x).collect();
        let maxb2 = b2.iter().fold(T::one(), |m, &x| m.max(x));
        Self { n, b2, scale: s, bound: bound * T::lit(1.001) + T::unit_roundoff(), pivmin: T::min_positive_value() * maxb2 }
    }

    /// The `k`-th largest singular value (0-based).
    fn kth_largest(&self, k: usize) -> T {
        let target = 2 * self.n - k;
        let (mut lo, mut hi) = (T::zero(), self.bound);
        for _ in 0..400 {
            if hi - lo <= T::lit(2.0) * T::unit_roundoff() * hi || hi <= T::min_positive_value() {
                break;
            }
            let mid = (lo + hi) * T::lit(0.5);
            if sturm_count(&self.b2, mid, self.pivmin) >= target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        (lo + hi) * T::lit(0.5) * self.scale
    }
}

/// Singular values of the real bidiagonal matrix with diagonal `d` and
/// superdiagonal `e`, in descending order.
pub fn bidiagonal_singular_values<T: Real>(d: &[T], e: &[T]) -> Vec<T> {
    if d.is_empty() {
        return Vec::new();
    }
    let gk = GolubKahan::new(d, e);
    (0..d.len()).map(|k| gk.kth_largest(k)).collect()
}

/// All singular values of `a`, descending.
pub fn singular_values<T: Real>(a: &ComplexMatrix<T>) -> Vec<T> {
    let (d, e) = bidiagonalize(a);
    bidiagonal_singular_values(&d, &e)
}

/// Spectral norm `‖a‖₂`.
pub fn norm2<T: Real>(a: &ComplexMatrix<T>) -> T {
    if a.rows() == 0 || a.cols() == 0 || a.max_abs() == T::zero() {
        return T::zero();
    }
    let (d, e) = bidiagonalize(a);
    GolubKahan::new(&d, &e).kth_largest(0)
}

/// Spectral condition number `σ_max / σ_min` of a square matrix; `+∞` when
/// the smallest singular value is zero.
pub fn cond2<T: Real>(a: &ComplexMatrix<T>) -> T {
    let (d, e) = bidiagonalize(a);
    let n = d.len();
    if n == 0 {
        return T::one();
    }
    if d.iter().any(|x| *x == T::zero()) {
        return T::infinity();
    }
    let gk = GolubKahan::new(&d, &e);
    let smax = gk.kth_largest(0);
    let smin = gk.kth_largest(n - 1);
    if smin <= T::zero() || smax == T::zero() {
        return T::infinity();
    }
    (smax / smin).max(T::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(n: usize, m: usize, seed: u64) -> ComplexMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        ComplexMatrix::from_fn(n, m, |_, _| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    #[test]
    fn cond_of_identity_and_diagonal() {
        assert_eq!(cond2(&ComplexMatrix::<f64>::identity(4)), 1.0);
        let d = ComplexMatrix::from_diag(&[C::new(10.0, 0.0), C::new(1.0, 0.0)]);
        assert!((cond2(&d) - 10.0).abs() < 1e-13);
    }

    #[test]
    fn singular_matrix_gives_infinity() {
        let d = ComplexMatrix::from_diag(&[C::new(1.0, 0.0), C::new(0.0, 0.0)]);
        assert!(cond2(&d).is_infinite());
    }

    #[test]
    fn jacobi_reconstructs() {
        for (r, c) in [(6, 4), (3, 5), (5, 5)] {
            let a = random(r, c, 7 + r as u64);
            let s = svd_jacobi(&a);
            let k = s.sigma.len();
            let us = ComplexMatrix::from_fn(r, k, |i, j| s.u[(i, j)] * s.sigma[j]);
            let back = us.matmul(&s.v.adjoint()).unwrap();
            assert!(back.sub(&a).unwrap().max_abs() < 1e-13);
            assert!(s.sigma.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn bisection_matches_jacobi() {
        for seed in 0..5 {
            let a = random(9, 7, seed);
            let sv = singular_values(&a);
            let sj = svd_jacobi(&a).sigma;
            for (x, y) in sv.iter().zip(&sj) {
                assert!((x - y).abs() <= 1e-13 * sj[0], "{x} vs {y}");
            }
            assert!((norm2(&a) - sj[0]).abs() <= 1e-13 * sj[0]);
        }
    }

    #[test]
    fn graded_bidiagonal_keeps_relative_accuracy() {
        let d: [f64; 4] = [1.0, 1e-5, 1e-10, 1e-15];
        let e: [f64; 3] = [0.0, 0.0, 0.0];
        let s = bidiagonal_singular_values(&d, &e);
        for (x, y) in s.iter().zip(d.iter()) {
            assert!((x - y).abs() <= 1e-14 * y);
        }
    }

    #[test]
    fn cond_is_scale_invariant() {
        let a = random(6, 6, 11);
        let c1 = cond2(&a);
        let c2 = cond2(&a.scaled(C::new(-3.5e4, 2.0e3)));
        assert!(((c1 - c2) / c1).abs() < 1e-12);
    }
}
