//! Evaluation of the rational function sequences encoded by a pencil.
//!
//! Row `i` of `Z·V·C = V·B` reads `z_i·x·C = x·B` for `x = e_iᵀV`, so the
//! values `(r_0(z), …, r_{m−1}(z))` solve `x·(B − zC) = 0` on the first
//! `m − 1` columns, pinned by the known constant `r_0`.

use crate::error::{pair, OrfError, Result};
use crate::linalg::{bidiagonal_singular_values, solve_upper, solve_upper_adjoint};
use crate::matrix::ComplexMatrix;
use crate::measure::DiscreteMeasure;
use crate::pencil::{Pencil, PencilSolution, SolutionKind};
use crate::scalar::{cone, czero, vec_dot, vec_norm, Cx, Real};

/// Which sequence a handle evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SequenceKind {
    /// Orthonormal functions of an inner product.
    Orthogonal,
    /// The `r_j` of a bilinear form.
    BiorthogonalPrimal,
    /// The `s_j` of a bilinear form, evaluated from the dual pencil as
    /// `s_j(z) = conj(u_j(conj z))`.
    BiorthogonalDual,
}

/// Pencil members plus the constant first function.
#[derive(Clone, Debug, PartialEq)]
pub struct OrfSequenceHandle<T> {
    pub b: ComplexMatrix<T>,
    pub c: ComplexMatrix<T>,
    /// Value of the first function of the sequence.
    pub r0: Cx<T>,
    pub kind: SequenceKind,
    /// Whether the pencil is tridiagonal, which shortens the substitution.
    pub tridiagonal: bool,
}

impl<T: Real> OrfSequenceHandle<T> {
    pub fn size(&self) -> usize {
        self.b.rows()
    }

    fn raw_point(&self, z: Cx<T>) -> Cx<T> {
        match self.kind {
            SequenceKind::BiorthogonalDual => z.conj(),
            _ => z,
        }
    }

    /// First row touched by column `col` of the pencil.
    fn first_row(&self, col: usize) -> usize {
        if self.tridiagonal {
            col.saturating_sub(1)
        } else {
            0
        }
    }

    /// The evaluation matrix `[γ·e₁ | (B − zC)[:, 0..m−1]]`, with the
    /// pinning column scaled by `γ`.
    pub fn evaluation_matrix(&self, z: Cx<T>, gamma: T) -> ComplexMatrix<T> {
        let m = self.size();
        let z = self.raw_point(z);
        let mut a = ComplexMatrix::zeros(m, m);
        a[(0, 0)] = Cx::new(gamma, T::zero());
        for j in 1..m {
            for i in self.first_row(j - 1)..=j {
                a[(i, j)] = self.b[(i, j - 1)] - z * self.c[(i, j - 1)];
            }
        }
        a
    }
}

/// Handle for the `r_j` of a solution.
pub fn primal_handle<T: Real>(sol: &PencilSolution<T>) -> Result<OrfSequenceHandle<T>> {
    let (kind, r0) = match sol.kind {
        SolutionKind::Orthogonal => (SequenceKind::Orthogonal, cone::<T>() / Cx::new(vec_norm(&sol.measure.weights_v), T::zero())),
        SolutionKind::Biorthogonal => (SequenceKind::BiorthogonalPrimal, cone::<T>() / bilinear_root(&sol.measure)?),
    };
    Ok(OrfSequenceHandle {
        b: sol.b().clone(),
        c: sol.c().clone(),
        r0,
        kind,
        tridiagonal: matches!(sol.pencil, Pencil::Tridiagonal(_)),
    })
}

/// Handle for the `s_j` of a biorthogonal solution. The dual pencil is
/// extracted from the bases when the solution does not carry one.
pub fn dual_handle<T: Real>(sol: &PencilSolution<T>) -> Result<OrfSequenceHandle<T>> {
    if sol.kind != SolutionKind::Biorthogonal {
        return Err(OrfError::InvalidInput("dual sequence exists only for bilinear forms".into()));
    }
    let dual = match &sol.dual_pencil {
        Some(d) => d.clone(),
        None => crate::rks::dual_pencil(sol)?,
    };
    Ok(OrfSequenceHandle {
        b: dual.t,
        c: dual.s,
        r0: cone::<T>() / bilinear_root(&sol.measure)?,
        kind: SequenceKind::BiorthogonalDual,
        tridiagonal: true,
    })
}

fn bilinear_root<T: Real>(measure: &DiscreteMeasure<T>) -> Result<Cx<T>> {
    let w = measure
        .weights_w
        .as_ref()
        .ok_or_else(|| OrfError::InvalidInput("bilinear form requires weights_w".into()))?;
    Ok(vec_dot(w, &measure.weights_v).sqrt())
}

/// Values `(r_0(z), …, r_{m−1}(z))` by forward substitution on the
/// triangular evaluation system.
pub fn evaluate_sequence<T: Real>(h: &OrfSequenceHandle<T>, z: Cx<T>) -> Result<Vec<Cx<T>>> {
    let m = h.size();
    let zr = h.raw_point(z);
    let mut x = vec![czero(); m];
    x[0] = match h.kind {
        SequenceKind::BiorthogonalDual => h.r0.conj(),
        _ => h.r0,
    };
    for j in 1..m {
        let col = j - 1;
        let diag = h.b[(j, col)] - zr * h.c[(j, col)];
        let guard = T::unit_roundoff() * (h.b[(j, col)].norm() + zr.norm() * h.c[(j, col)].norm());
        if diag.norm() <= guard || diag.norm() == T::zero() {
            return Err(OrfError::EvaluationSingular(pair(z)));
        }
        let mut acc: Cx<T> = czero();
        for i in h.first_row(col)..j {
            acc = acc + x[i] * (h.b[(i, col)] - zr * h.c[(i, col)]);
        }
        x[j] = -acc / diag;
    }
    if h.kind == SequenceKind::BiorthogonalDual {
        for v in &mut x {
            *v = v.conj();
        }
    }
    Ok(x)
}

/// Gram matrix of the evaluated functions under the measure.
///
/// Orthogonal case: entry `(i, j) = Σ_k α_k·conj(r_j(z_k))·r_i(z_k)` with
/// `α_k = |v_k|²`. Biorthogonal case: `Σ_k conj(w_k)·v_k·s_j(z_k)·r_i(z_k)`.
pub fn function_moment_matrix<T: Real>(
    primal: &OrfSequenceHandle<T>,
    dual: Option<&OrfSequenceHandle<T>>,
    measure: &DiscreteMeasure<T>,
) -> Result<ComplexMatrix<T>> {
    let m = primal.size();
    if measure.len() != m {
        return Err(OrfError::ShapeError { expected: format!("{m} nodes"), found: format!("{}", measure.len()) });
    }
    let r: Vec<Vec<Cx<T>>> = measure.nodes.iter().map(|&z| evaluate_sequence(primal, z)).collect::<Result<_>>()?;
    let (s, omega): (Vec<Vec<Cx<T>>>, Vec<Cx<T>>) = match (dual, &measure.weights_w) {
        (Some(d), Some(w)) => (
            measure.nodes.iter().map(|&z| evaluate_sequence(d, z)).collect::<Result<_>>()?,
            w.iter().zip(&measure.weights_v).map(|(a, b)| a.conj() * b).collect(),
        ),
        (None, _) => (
            r.iter().map(|row| row.iter().map(|x| x.conj()).collect()).collect(),
            measure.weights_v.iter().map(|v| Cx::new(v.norm_sqr(), T::zero())).collect(),
        ),
        (Some(_), None) => return Err(OrfError::InvalidInput("dual handle needs weights_w".into())),
    };
    let mut f = ComplexMatrix::zeros(m, m);
    for k in 0..m {
        let wk = omega[k];
        for i in 0..m {
            let a = r[k][i] * wk;
            let row = f.row_mut(i);
            for (o, sj) in row.iter_mut().zip(&s[k]) {
                *o = *o + a * sj;
            }
        }
    }
    Ok(f)
}

/// Deterministic start vector for the Lanczos estimator.
fn start_vector<T: Real>(n: usize) -> Vec<Cx<T>> {
    let v: Vec<Cx<T>> = (0..n)
        .map(|i| {
            let t = T::count(i + 1);
            Cx::new(T::one() + T::lit(0.37) * (t * T::lit(0.71)).sin(), T::lit(0.23) * (t * T::lit(1.37)).cos())
        })
        .collect();
    let n = vec_norm(&v);
    v.into_iter().map(|x| x / n).collect()
}

fn reorthogonalize<T: Real>(x: &mut [Cx<T>], basis: &[Vec<Cx<T>>]) {
    for _ in 0..2 {
        for q in basis {
            let c = vec_dot(q, x);
            for (xi, qi) in x.iter_mut().zip(q) {
                *xi = *xi - c * qi;
            }
        }
    }
}

/// Largest singular value of the operator `apply` (with adjoint `apply_adj`)
/// by Golub–Kahan–Lanczos bidiagonalization with full reorthogonalization.
/// Exact once `steps` reaches the dimension. Stops early when the estimate
/// has not moved by more than `1e-10` relative over the last five steps.
fn gkl_largest<T: Real>(
    n: usize,
    steps: usize,
    apply: impl Fn(&[Cx<T>]) -> Vec<Cx<T>>,
    apply_adj: impl Fn(&[Cx<T>]) -> Vec<Cx<T>>,
) -> T {
    let mut vs = vec![start_vector::<T>(n)];
    let mut us: Vec<Vec<Cx<T>>> = Vec::new();
    let (mut alpha, mut beta) = (Vec::new(), Vec::new());
    let mut u = apply(&vs[0]);
    let mut previous = T::zero();
    let settled = T::lit(1e-10);
    loop {
        let a = vec_norm(&u);
        if !a.is_finite() {
            return T::infinity();
        }
        alpha.push(a);
        if a == T::zero() {
            break;
        }
        us.push(u.iter().map(|x| x / a).collect());
        if alpha.len() >= steps {
            break;
        }
        if alpha.len() % 5 == 0 {
            let current = bidiagonal_singular_values(&alpha, &beta)[0];
            if (current - previous).abs() <= settled * current {
                break;
            }
            previous = current;
        }
        let j = alpha.len() - 1;
        let mut r = apply_adj(&us[j]);
        for (x, y) in r.iter_mut().zip(&vs[j]) {
            *x = *x - *y * a;
        }
        reorthogonalize(&mut r, &vs);
        let b = vec_norm(&r);
        if !b.is_finite() {
            return T::infinity();
        }
        if b <= T::unit_roundoff() * a {
            break;
        }
        beta.push(b);
        vs.push(r.iter().map(|x| x / b).collect());
        let mut p = apply(&vs[j + 1]);
        for (x, y) in p.iter_mut().zip(&us[j]) {
            *x = *x - *y * b;
        }
        reorthogonalize(&mut p, &us);
        u = p;
    }
    let k = alpha.len();
    beta.truncate(k.saturating_sub(1));
    bidiagonal_singular_values(&alpha, &beta).first().copied().unwrap_or(T::zero())
}

/// `U·x` touching only the upper triangle.
fn upper_mul_vec<T: Real>(u: &ComplexMatrix<T>, x: &[Cx<T>]) -> Vec<Cx<T>> {
    (0..u.rows()).map(|i| u.row(i)[i..].iter().zip(&x[i..]).fold(czero(), |s, (a, b)| s + *a * *b)).collect()
}

/// `Uᴴ·x` touching only the upper triangle.
fn upper_adjoint_mul_vec<T: Real>(u: &ComplexMatrix<T>, x: &[Cx<T>]) -> Vec<Cx<T>> {
    let mut y = vec![czero(); u.cols()];
    for (i, xi) in x.iter().enumerate() {
        for (yj, a) in y[i..].iter_mut().zip(&u.row(i)[i..]) {
            *yj = *yj + a.conj() * *xi;
        }
    }
    y
}

/// Spectral condition number of an upper triangular matrix, from Lanczos
/// estimates of `‖U‖₂` and `‖U⁻¹‖₂` with at most `steps` iterations each.
pub fn triangular_cond<T: Real>(u: &ComplexMatrix<T>, steps: usize) -> T {
    let n = u.rows();
    if (0..n).any(|i| u[(i, i)] == czero()) {
        return T::infinity();
    }
    let steps = steps.min(n).max(1);
    let big = gkl_largest(n, steps, |x| upper_mul_vec(u, x), |x| upper_adjoint_mul_vec(u, x));
    let inv = gkl_largest(n, steps, |x| solve_upper(u, x), |x| solve_upper_adjoint(u, x));
    let k = big * inv;
    if k.is_finite() {
        k.max(T::one())
    } else {
        T::infinity()
    }
}

/// Maximum over the measure's nodes of the spectral condition number of the
/// evaluation system. The pinning column is scaled by the largest entry of
/// the truncated `B − zC`, which makes the value invariant under a joint
/// scaling of the pencil.
pub fn kappa<T: Real>(h: &OrfSequenceHandle<T>, measure: &DiscreteMeasure<T>) -> T {
    kappa_with_steps(h, measure, 40)
}

/// [`kappa`] with an explicit iteration cap for the norm estimates.
pub fn kappa_with_steps<T: Real>(h: &OrfSequenceHandle<T>, measure: &DiscreteMeasure<T>, steps: usize) -> T {
    if h.size() <= 1 {
        return T::one();
    }
    let mut worst = T::one();
    for &z in &measure.nodes {
        let mut a = h.evaluation_matrix(z, T::one());
        let gamma = a.block(0, a.rows(), 1, a.cols()).max_abs();
        a[(0, 0)] = Cx::new(if gamma > T::zero() { gamma } else { T::one() }, T::zero());
        let c = triangular_cond(&a, steps);
        if !c.is_finite() {
            return T::infinity();
        }
        worst = worst.max(c);
    }
    worst
}
