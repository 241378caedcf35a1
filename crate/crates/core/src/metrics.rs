//! The four accuracy metrics and the evaluation condition number.

use crate::error::{OrfError, Result};
use crate::linalg::norm2;
use crate::orf_eval::{dual_handle, function_moment_matrix, kappa, primal_handle};
use crate::pencil::{Pencil, PencilSolution, SolutionKind};
use crate::scalar::Real;

/// All metrics of one solution.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricReport<T> {
    pub m: usize,
    pub err_o: T,
    pub err_r: T,
    pub err_f: T,
    /// `err_f` restricted to the first `m − 1` functions.
    pub err_f_truncated: Option<T>,
    pub err_p: T,
    /// Evaluation condition number; skipped when not requested.
    pub kappa: Option<T>,
}

/// Which optional metrics to compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MetricOptions {
    pub kappa: bool,
    pub truncated: bool,
}

impl Default for MetricOptions {
    fn default() -> Self {
        Self { kappa: true, truncated: true }
    }
}

/// `‖WᴴV − I‖₂`, with `W = V = Q` in the orthogonal case.
pub fn err_orthogonality<T: Real>(sol: &PencilSolution<T>) -> Result<T> {
    let g = sol.basis_w_or_v().adjoint_matmul(&sol.basis_v)?;
    Ok(norm2(&g.minus_identity()))
}

/// `‖Z·V·C − V·B‖₂ / max(‖Z·V·C‖₂, ‖V·B‖₂)`.
pub fn err_recurrence<T: Real>(sol: &PencilSolution<T>) -> Result<T> {
    let zvc = sol.z_times(&sol.basis_v).matmul(sol.c())?;
    let vb = sol.basis_v.matmul(sol.b())?;
    let denom = norm2(&zvc).max(norm2(&vb));
    if denom == T::zero() {
        return Err(OrfError::DegenerateInput("both sides of the recurrence vanish"));
    }
    Ok(norm2(&zvc.sub(&vb)?) / denom)
}

/// `‖F − I‖₂` for the function moment matrix `F`, over all `m` functions or
/// the first `m − 1` when `truncate_last` is set.
pub fn err_functions<T: Real>(sol: &PencilSolution<T>, truncate_last: bool) -> Result<T> {
    let f = function_moments(sol)?;
    Ok(moment_error(&f, truncate_last))
}

fn function_moments<T: Real>(sol: &PencilSolution<T>) -> Result<crate::matrix::ComplexMatrix<T>> {
    let p = primal_handle(sol)?;
    match sol.kind {
        SolutionKind::Orthogonal => function_moment_matrix(&p, None, &sol.measure),
        SolutionKind::Biorthogonal => {
            let d = dual_handle(sol)?;
            function_moment_matrix(&p, Some(&d), &sol.measure)
        }
    }
}

fn moment_error<T: Real>(f: &crate::matrix::ComplexMatrix<T>, truncate_last: bool) -> T {
    let n = if truncate_last { f.rows().saturating_sub(1) } else { f.rows() };
    if n == 0 {
        return T::zero();
    }
    norm2(&f.block(0, n, 0, n).minus_identity())
}

/// Largest relative deviation of a prescribed pencil ratio from its pole.
///
/// Subdiagonal `(i+1, i)` carries `ξ_i`; for tridiagonal pencils the
/// superdiagonal `(i, i+1)`, `i ≥ 1`, carries `ψ_{i−1}`. Finite poles
/// are scored as `|b/c − ξ| / |ξ|`; the infinite pole as `|c| / ‖(b, c)‖₂`.
pub fn err_poles<T: Real>(sol: &PencilSolution<T>) -> T {
    let (b, c) = (sol.b(), sol.c());
    let n = sol.size();
    let mut worst = T::zero();
    for i in 0..n.saturating_sub(1) {
        worst = worst.max(sol.poles_xi[i].ratio_error(b[(i + 1, i)], c[(i + 1, i)]));
    }
    if let (Pencil::Tridiagonal(_), Some(psi)) = (&sol.pencil, &sol.poles_psi) {
        for i in 1..n.saturating_sub(1) {
            worst = worst.max(psi[i - 1].ratio_error(b[(i, i + 1)], c[(i, i + 1)]));
        }
    }
    worst
}

/// Computes the full report.
pub fn metric_report<T: Real>(sol: &PencilSolution<T>, opts: MetricOptions) -> Result<MetricReport<T>> {
    let f = function_moments(sol)?;
    Ok(MetricReport {
        m: sol.size(),
        err_o: err_orthogonality(sol)?,
        err_r: err_recurrence(sol)?,
        err_f: moment_error(&f, false),
        err_f_truncated: opts.truncated.then(|| moment_error(&f, true)),
        err_p: err_poles(sol),
        kappa: if opts.kappa { Some(kappa(&primal_handle(sol)?, &sol.measure)) } else { None },
    })
}
