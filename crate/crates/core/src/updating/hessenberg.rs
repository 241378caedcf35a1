use crate::error::{OrfError, Result};
use crate::linalg::PlaneRotation;
use crate::matrix::ComplexMatrix;
use crate::measure::DiscreteMeasure;
use crate::pencil::{HessenbergPencil, Pencil, PencilSolution, SolutionKind, Tolerances};
use crate::pole::ExtendedComplexPole;
use crate::scalar::{cone, czero, re, vec_norm, Cx, Real};

use super::{check_new_node, embedding_seed};

/// One node to append to an orthogonal solution.
#[derive(Clone, Debug)]
pub struct HpUpdateRequest<T> {
    pub prior: PencilSolution<T>,
    pub new_node: Cx<T>,
    pub new_weight: Cx<T>,
    pub new_pole: ExtendedComplexPole<T>,
}

/// Working state of a Hessenberg update: `Z·Q·K = Q·H` holds after every
/// stage, while the band structure is only restored at the end.
#[derive(Clone, Debug)]
pub struct HpWork<T> {
    pub q: ComplexMatrix<T>,
    pub h: ComplexMatrix<T>,
    pub k: ComplexMatrix<T>,
    pub measure: DiscreteMeasure<T>,
    pub poles: Vec<ExtendedComplexPole<T>>,
    /// `‖v‖` of the measure before the new node was appended.
    prior_norm: T,
}

impl<T: Real> HpWork<T> {
    /// Embeds the prior solution as `diag(Q, 1)`, `diag(H, ĥ)`, `diag(K, k̂)`
    /// and appends the node to the measure.
    pub fn embed(prior: PencilSolution<T>, z: Cx<T>, weight: Cx<T>) -> Self {
        let (hh, kh) = embedding_seed(z);
        let prior_norm = vec_norm(&prior.measure.weights_v);
        let mut measure = prior.measure;
        measure.push(z, weight, None);
        Self {
            q: prior.basis_v.bordered(cone()),
            h: prior.pencil.b().bordered(hh),
            k: prior.pencil.c().bordered(kh),
            measure,
            poles: prior.poles_xi,
            prior_norm,
        }
    }

    fn last(&self) -> usize {
        self.q.rows() - 1
    }

    fn rotate_rows(&mut self, p: &PlaneRotation<T>) {
        p.apply_left(&mut self.h);
        p.apply_left(&mut self.k);
        p.apply_adjoint_right(&mut self.q);
    }

    fn rotate_cols(&mut self, p: &PlaneRotation<T>) {
        p.apply_right(&mut self.h);
        p.apply_right(&mut self.k);
    }

    /// Rotates rows `(0, last)` so that the first column of the basis becomes
    /// the normalized enlarged weight vector.
    pub fn enforce_orthogonality(&mut self) -> Result<()> {
        let last = self.last();
        let vnew = self.measure.weights_v[last];
        let p = PlaneRotation::eliminating(0, last, re(self.prior_norm), vnew)?;
        self.rotate_rows(&p);
        Ok(())
    }

    /// Pushes the fill in the trailing row out of columns `0..m−1`.
    ///
    /// For each column `c` a rotation of columns `(c, last)` makes the pairs
    /// in rows `(c+1, last)` of `H` and `K` colinear, after which a single
    /// rotation of rows `(c+1, last)` annihilates both trailing entries.
    pub fn chase_hessenberg(&mut self) -> Result<()> {
        let last = self.last();
        for c in 0..last.saturating_sub(1) {
            let (delta, gamma) = (self.h[(c + 1, c)], self.h[(last, c)]);
            let (beta, alpha) = (self.k[(c + 1, c)], self.k[(last, c)]);
            let (eta, eps) = (self.h[(last, last)], self.k[(last, last)]);
            let x = delta * eps - beta * eta;
            let y = beta * gamma - delta * alpha;
            let pdot = match crate::linalg::rotation_to_eliminate(x, y) {
                Ok((a, b)) => PlaneRotation::new(c, last, a.conj(), -b),
                Err(_) => PlaneRotation::identity(c, last),
            };
            self.rotate_cols(&pdot);

            let (hx, hy) = (self.h[(c + 1, c)], self.h[(last, c)]);
            let (kx, ky) = (self.k[(c + 1, c)], self.k[(last, c)]);
            let ratio = |num: Cx<T>, den: Cx<T>| if den.norm() == T::zero() { T::infinity() } else { num.norm() / den.norm() };
            let use_h = ratio(self.h[(last, last)], self.k[(last, last)]) < ratio(hx, ky);
            let (first, second) = if use_h { ((hx, hy), (kx, ky)) } else { ((kx, ky), (hx, hy)) };
            let p = PlaneRotation::eliminating(c + 1, last, first.0, first.1)
                .or_else(|_| PlaneRotation::eliminating(c + 1, last, second.0, second.1))
                .map_err(|_| OrfError::Breakdown { step: c + 1 })?;
            self.rotate_rows(&p);
            self.h[(last, c)] = czero();
            self.k[(last, c)] = czero();
        }
        Ok(())
    }

    /// Rotates columns `(m−1, last)` so that the new subdiagonal pair carries
    /// `pole`.
    pub fn introduce_pole(&mut self, pole: &ExtendedComplexPole<T>) -> Result<()> {
        let last = self.last();
        let c = last - 1;
        let (mu, nu) = (pole.mu(), pole.nu());
        let x = mu * self.h[(last, last)] - nu * self.k[(last, last)];
        let y = -(mu * self.h[(last, c)] - nu * self.k[(last, c)]);
        if let Ok((a, b)) = crate::linalg::rotation_to_eliminate(x, y) {
            self.rotate_cols(&PlaneRotation::new(c, last, a.conj(), -b));
        }
        if self.h[(last, c)] == czero() && self.k[(last, c)] == czero() {
            return Err(OrfError::PoleInstallFailure);
        }
        let scale = self.h[(last, c)].norm() + self.k[(last, c)].norm();
        if scale <= T::unit_roundoff() * (self.h.max_abs() + self.k.max_abs()) {
            return Err(OrfError::PoleInstallFailure);
        }
        self.poles.push(*pole);
        Ok(())
    }

    pub fn into_solution(self) -> PencilSolution<T> {
        PencilSolution {
            kind: SolutionKind::Orthogonal,
            basis_v: self.q,
            basis_w: None,
            pencil: Pencil::Hessenberg(HessenbergPencil { h: self.h, k: self.k }),
            dual_pencil: None,
            measure: self.measure,
            poles_xi: self.poles,
            poles_psi: None,
        }
    }
}

/// Extends an orthogonal solution by one node, weight and pole.
pub fn hpiep_update<T: Real>(req: HpUpdateRequest<T>) -> Result<PencilSolution<T>> {
    hpiep_update_with(req, &Tolerances::default())
}

pub fn hpiep_update_with<T: Real>(req: HpUpdateRequest<T>, _tol: &Tolerances<T>) -> Result<PencilSolution<T>> {
    let HpUpdateRequest { prior, new_node, new_weight, new_pole } = req;
    if prior.kind != SolutionKind::Orthogonal || !matches!(prior.pencil, Pencil::Hessenberg(_)) {
        return Err(OrfError::InvalidInput("Hessenberg update needs an orthogonal solution".into()));
    }
    check_new_node(&prior.measure, new_node, &[new_weight], &[&new_pole])?;
    let mut work = HpWork::embed(prior, new_node, new_weight);
    work.enforce_orthogonality()?;
    work.chase_hessenberg()?;
    work.introduce_pole(&new_pole)?;
    Ok(work.into_solution())
}

/// The one-node solution `Q = [v₁/|v₁|]`, `H = [z₁]`, `K = [1]`.
pub(crate) fn hp_seed<T: Real>(measure: &DiscreteMeasure<T>) -> PencilSolution<T> {
    let first = measure.prefix(1);
    let v = first.weights_v[0];
    PencilSolution {
        kind: SolutionKind::Orthogonal,
        basis_v: ComplexMatrix::from_diag(&[v / v.norm()]),
        basis_w: None,
        pencil: Pencil::Hessenberg(HessenbergPencil {
            h: ComplexMatrix::from_diag(&[first.nodes[0]]),
            k: ComplexMatrix::identity(1),
        }),
        dual_pencil: None,
        measure: first,
        poles_xi: Vec::new(),
        poles_psi: None,
    }
}

/// Solves the Hessenberg pencil problem by `m − 1` updates of the trivial
/// one-node solution.
pub fn hpiep_solve<T: Real>(measure: &DiscreteMeasure<T>, poles: &[ExtendedComplexPole<T>]) -> Result<PencilSolution<T>> {
    hpiep_solve_with(measure, poles, &Tolerances::default())
}

pub fn hpiep_solve_with<T: Real>(
    measure: &DiscreteMeasure<T>,
    poles: &[ExtendedComplexPole<T>],
    tol: &Tolerances<T>,
) -> Result<PencilSolution<T>> {
    measure.validate()?;
    crate::rks::check_pole_count(measure.len(), poles)?;
    let mut sol = hp_seed(measure);
    for j in 1..measure.len() {
        sol = hpiep_update_with(
            HpUpdateRequest {
                prior: sol,
                new_node: measure.nodes[j],
                new_weight: measure.weights_v[j],
                new_pole: poles[j - 1],
            },
            tol,
        )?;
    }
    Ok(sol)
}
