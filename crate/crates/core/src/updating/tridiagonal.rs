use crate::error::{OrfError, Result};
use crate::linalg::Eliminator;
use crate::matrix::ComplexMatrix;
use crate::measure::DiscreteMeasure;
use crate::pencil::{Pencil, PencilSolution, SolutionKind, Tolerances, TridiagonalPencil};
use crate::pole::ExtendedComplexPole;
use crate::scalar::{cone, czero, re, vec_dot, Cx, Real};

use super::{check_new_node, colinear_param, embedding_seed};

/// One node to append to a biorthogonal solution.
#[derive(Clone, Debug)]
pub struct TpUpdateRequest<T> {
    pub prior: PencilSolution<T>,
    pub new_node: Cx<T>,
    pub new_weight_v: Cx<T>,
    pub new_weight_w: Cx<T>,
    pub new_pole_xi: ExtendedComplexPole<T>,
    pub new_pole_psi: ExtendedComplexPole<T>,
}

/// Working state of a tridiagonal update.
///
/// Left transforms `X` act as `T ← X·T`, `S ← X·S`, `V ← V·X⁻¹`,
/// `W ← W·Xᴴ`; right transforms only touch the pencil. Both keep
/// `Z·V·S = V·T` and `WᴴV = I`.
#[derive(Clone, Debug)]
pub struct TpWork<T> {
    pub v: ComplexMatrix<T>,
    pub w: ComplexMatrix<T>,
    pub t: ComplexMatrix<T>,
    pub s: ComplexMatrix<T>,
    pub measure: DiscreteMeasure<T>,
    pub poles_xi: Vec<ExtendedComplexPole<T>>,
    pub poles_psi: Vec<ExtendedComplexPole<T>>,
    tol: T,
}

impl<T: Real> TpWork<T> {
    /// Embeds the prior solution block-diagonally and appends the node.
    pub fn embed(prior: PencilSolution<T>, z: Cx<T>, wv: Cx<T>, ww: Cx<T>, tol: T) -> Result<Self> {
        let w = prior
            .basis_w
            .ok_or_else(|| OrfError::InvalidInput("tridiagonal update needs a biorthogonal solution".into()))?;
        let (tt, st) = embedding_seed(z);
        let mut measure = prior.measure;
        measure.push(z, wv, Some(ww));
        Ok(Self {
            v: prior.basis_v.bordered(cone()),
            w: w.bordered(cone()),
            t: prior.pencil.b().bordered(tt),
            s: prior.pencil.c().bordered(st),
            measure,
            poles_xi: prior.poles_xi,
            poles_psi: prior.poles_psi.unwrap_or_default(),
            tol,
        })
    }

    fn last(&self) -> usize {
        self.v.rows() - 1
    }

    fn left(&mut self, e: &Eliminator<T>) {
        e.apply_left(&mut self.t);
        e.apply_left(&mut self.s);
        e.apply_inverse_right(&mut self.v);
        e.apply_adjoint_right(&mut self.w);
    }

    fn right(&mut self, e: &Eliminator<T>) {
        e.apply_right(&mut self.t);
        e.apply_right(&mut self.s);
    }

    /// Left diagonal scaling of index `i` by `d`.
    fn left_scale(&mut self, i: usize, d: Cx<T>) {
        for m in [&mut self.t, &mut self.s] {
            for x in m.row_mut(i) {
                *x = *x * d;
            }
        }
        let n = self.v.rows();
        for r in 0..n {
            self.v[(r, i)] = self.v[(r, i)] / d;
            self.w[(r, i)] = self.w[(r, i)] * d.conj();
        }
    }

    /// Transforms rows `(0, last)` so that `V·e₁` and `W·e₁` become the
    /// enlarged weight vectors scaled by `1/√(w̃ᴴṽ)` and its conjugate.
    pub fn biorth_weights(&mut self) -> Result<()> {
        let last = self.last();
        let vt = self.measure.weights_v.clone();
        let wt = self.measure.weights_w.clone().expect("bilinear measure");
        let (vnew, wnew) = (vt[last], wt[last]);
        let nu = vec_dot(&self.w.column(0)[..last], &vt[..last]);
        let eta = vec_dot(&self.v.column(0)[..last], &wt[..last]);
        let form = vec_dot(&wt, &vt);
        let scale = crate::scalar::vec_norm(&vt) * crate::scalar::vec_norm(&wt);
        if !(form.norm() > self.tol * scale) || nu.norm() == T::zero() {
            return Err(OrfError::Breakdown { step: 0 });
        }
        let shat = form.sqrt();
        let adot = -vnew / nu;
        let d1 = shat / nu;
        let q0 = (eta - adot.conj() * wnew) / d1.conj();
        if q0.norm() == T::zero() {
            return Err(OrfError::Breakdown { step: 0 });
        }
        let b = (wnew / q0).conj();
        self.left(&Eliminator::lower(0, last, adot));
        self.left_scale(0, d1);
        self.left(&Eliminator::upper(0, last, b));
        Ok(())
    }

    /// Eliminator parameter for zeroing `m[target]` by adding a multiple of
    /// the entry `m[source]`, pivoting on whichever pencil member has the
    /// larger source entry. Breakdown is declared when the pivot is negligible
    /// next to the entries it must cancel.
    fn zeroing_param(&self, target: (usize, usize), source: (usize, usize), step: usize) -> Result<Cx<T>> {
        let (tt, st) = (self.t[target], self.s[target]);
        if tt == czero() && st == czero() {
            return Ok(czero());
        }
        let (ts, ss) = (self.t[source], self.s[source]);
        let scale = tt.norm() + st.norm();
        let (num, den) = if ts.norm() >= ss.norm() { (tt, ts) } else { (st, ss) };
        if !(den.norm() > self.tol * scale) {
            return Err(OrfError::Breakdown { step });
        }
        Ok(-num / den)
    }

    /// Restores tridiagonal form by chasing the fill in the trailing row and
    /// column up to the bottom-right corner.
    pub fn chase_tridiagonal(&mut self) -> Result<()> {
        let last = self.last();
        let m = last;
        let tol = self.tol;
        if m < 2 {
            return Ok(());
        }
        for i in 0..m - 1 {
            let step = i + 1;
            let bd = OrfError::Breakdown { step };
            if i == 0 {
                let c = colinear_param(
                    self.t[(0, 1)], self.s[(0, 1)], self.t[(0, 0)], self.s[(0, 0)], self.t[(0, last)], self.s[(0, last)], tol,
                )
                .ok_or_else(|| bd.clone())?;
                self.right(&Eliminator::upper(0, 1, c));
            } else {
                let b = colinear_param(
                    self.t[(i, last)], self.s[(i, last)], self.t[(last, last)], self.s[(last, last)], self.t[(i, i + 1)], self.s[(i, i + 1)], tol,
                )
                .ok_or_else(|| bd.clone())?;
                self.left(&Eliminator::upper(i, last, b));
            }
            let a = colinear_param(
                self.t[(last, i)], self.s[(last, i)], self.t[(last, last)], self.s[(last, last)], self.t[(i + 1, i)], self.s[(i + 1, i)], tol,
            )
            .ok_or_else(|| bd.clone())?;
            self.right(&Eliminator::lower(i, last, a));

            let adot = self.zeroing_param((last, i), (i + 1, i), step)?;
            self.left(&Eliminator::lower(i + 1, last, adot));
            self.t[(last, i)] = czero();
            self.s[(last, i)] = czero();

            let bdot = self.zeroing_param((i, last), (i, i + 1), step)?;
            self.right(&Eliminator::upper(i + 1, last, bdot));
            self.t[(i, last)] = czero();
            self.s[(i, last)] = czero();
        }
        Ok(())
    }

    /// Installs `ξ` on the new subdiagonal pair and, when the prior size was
    /// at least two, `ψ_{m−1}` on the new superdiagonal pair.
    pub fn introduce_poles(&mut self, xi: &ExtendedComplexPole<T>, psi_new: &ExtendedComplexPole<T>) -> Result<()> {
        let last = self.last();
        let c = last - 1;
        let tol = self.tol;
        let a = colinear_param(self.t[(last, c)], self.s[(last, c)], self.t[(last, last)], self.s[(last, last)], xi.nu(), xi.mu(), tol)
            .ok_or(OrfError::PoleInstallFailure)?;
        self.right(&Eliminator::lower(c, last, a));
        if last >= 2 {
            let target = self.poles_psi[last - 2];
            let b = colinear_param(
                self.t[(c, last)], self.s[(c, last)], self.t[(last, last)], self.s[(last, last)], target.nu(), target.mu(), tol,
            )
            .ok_or(OrfError::PoleInstallFailure)?;
            self.left(&Eliminator::upper(c, last, b));
        }
        if self.t[(last, c)] == czero() && self.s[(last, c)] == czero() {
            return Err(OrfError::PoleInstallFailure);
        }
        self.poles_xi.push(*xi);
        self.poles_psi.push(*psi_new);
        Ok(())
    }

    /// Balances `‖V·e_k‖ = ‖W·e_k‖` for `k ≥ 1` and scales each pencil
    /// column to unit norm. Neither step changes any ratio.
    pub fn rebalance(&mut self) {
        let n = self.v.rows();
        for k in 1..n {
            let nv = crate::scalar::vec_norm(&self.v.column(k));
            let nw = crate::scalar::vec_norm(&self.w.column(k));
            if nv > T::zero() && nw > T::zero() {
                self.left_scale(k, re((nv / nw).sqrt()));
            }
        }
        for j in 0..n {
            let lo = j.saturating_sub(1);
            let hi = (j + 1).min(n - 1);
            let mut col = Vec::with_capacity(6);
            for i in lo..=hi {
                col.push(self.t[(i, j)]);
                col.push(self.s[(i, j)]);
            }
            let nrm = crate::scalar::vec_norm(&col);
            if nrm > T::zero() {
                for i in lo..=hi {
                    self.t[(i, j)] = self.t[(i, j)] / nrm;
                    self.s[(i, j)] = self.s[(i, j)] / nrm;
                }
            }
        }
    }

    pub fn into_solution(self) -> PencilSolution<T> {
        PencilSolution {
            kind: SolutionKind::Biorthogonal,
            basis_v: self.v,
            basis_w: Some(self.w),
            pencil: Pencil::Tridiagonal(TridiagonalPencil { t: self.t, s: self.s }),
            dual_pencil: None,
            measure: self.measure,
            poles_xi: self.poles_xi,
            poles_psi: Some(self.poles_psi),
        }
    }
}

/// Extends a biorthogonal solution by one node, two weights and two poles.
pub fn tpiep_update<T: Real>(req: TpUpdateRequest<T>) -> Result<PencilSolution<T>> {
    tpiep_update_with(req, &Tolerances::default())
}

pub fn tpiep_update_with<T: Real>(req: TpUpdateRequest<T>, tol: &Tolerances<T>) -> Result<PencilSolution<T>> {
    let TpUpdateRequest { prior, new_node, new_weight_v, new_weight_w, new_pole_xi, new_pole_psi } = req;
    if prior.kind != SolutionKind::Biorthogonal || !matches!(prior.pencil, Pencil::Tridiagonal(_)) {
        return Err(OrfError::InvalidInput("tridiagonal update needs a biorthogonal solution".into()));
    }
    check_new_node(&prior.measure, new_node, &[new_weight_v, new_weight_w], &[&new_pole_xi, &new_pole_psi])?;
    let mut work = TpWork::embed(prior, new_node, new_weight_v, new_weight_w, tol.breakdown)?;
    work.biorth_weights()?;
    work.chase_tridiagonal()?;
    work.introduce_poles(&new_pole_xi, &new_pole_psi)?;
    work.rebalance();
    Ok(work.into_solution())
}

/// The one-node solution `V = [v₁/s]`, `W = [w₁/conj(s)]`, `T = [z₁]`,
/// `S = [1]` with `s = √(conj(w₁)·v₁)`.
pub(crate) fn tp_seed<T: Real>(measure: &DiscreteMeasure<T>) -> Result<PencilSolution<T>> {
    let first = measure.prefix(1);
    let w1 = first.weights_w.as_ref().ok_or_else(|| OrfError::InvalidInput("bilinear form requires weights_w".into()))?[0];
    let v1 = first.weights_v[0];
    let s = (w1.conj() * v1).sqrt();
    Ok(PencilSolution {
        kind: SolutionKind::Biorthogonal,
        basis_v: ComplexMatrix::from_diag(&[v1 / s]),
        basis_w: Some(ComplexMatrix::from_diag(&[w1 / s.conj()])),
        pencil: Pencil::Tridiagonal(TridiagonalPencil {
            t: ComplexMatrix::from_diag(&[first.nodes[0]]),
            s: ComplexMatrix::identity(1),
        }),
        dual_pencil: None,
        measure: first,
        poles_xi: Vec::new(),
        poles_psi: Some(Vec::new()),
    })
}

/// Solves the tridiagonal pencil problem by `m − 1` updates of the trivial
/// one-node solution. The dual pencil of the result is filled in.
pub fn tpiep_solve<T: Real>(
    measure: &DiscreteMeasure<T>,
    poles_xi: &[ExtendedComplexPole<T>],
    poles_psi: &[ExtendedComplexPole<T>],
) -> Result<PencilSolution<T>> {
    tpiep_solve_with(measure, poles_xi, poles_psi, &Tolerances::default())
}

pub fn tpiep_solve_with<T: Real>(
    measure: &DiscreteMeasure<T>,
    poles_xi: &[ExtendedComplexPole<T>],
    poles_psi: &[ExtendedComplexPole<T>],
    tol: &Tolerances<T>,
) -> Result<PencilSolution<T>> {
    measure.validate()?;
    let m = measure.len();
    crate::rks::check_pole_count(m, poles_xi)?;
    crate::rks::check_pole_count(m, poles_psi)?;
    let ww = measure.weights_w.as_ref().ok_or_else(|| OrfError::InvalidInput("bilinear form requires weights_w".into()))?;
    if !(vec_dot(ww, &measure.weights_v).norm() > tol.breakdown * crate::scalar::vec_norm(ww) * crate::scalar::vec_norm(&measure.weights_v)) {
        return Err(OrfError::Breakdown { step: 0 });
    }
    let mut sol = tp_seed(measure)?;
    for j in 1..m {
        sol = tpiep_update_with(
            TpUpdateRequest {
                prior: sol,
                new_node: measure.nodes[j],
                new_weight_v: measure.weights_v[j],
                new_weight_w: ww[j],
                new_pole_xi: poles_xi[j - 1],
                new_pole_psi: poles_psi[j - 1],
            },
            tol,
        )?;
    }
    if m > 1 {
        sol.dual_pencil = Some(crate::rks::dual_pencil(&sol)?);
    }
    Ok(sol)
}
