use crate::error::{OrfError, Result};
use crate::matrix::ComplexMatrix;
use crate::measure::DiscreteMeasure;
use crate::pole::ExtendedComplexPole;
use crate::scalar::{czero, Cx, Real};

/// Upper Hessenberg pair `(H, K)` with `Z·Q·K = Q·H`.
#[derive(Clone, Debug, PartialEq)]
pub struct HessenbergPencil<T> {
    pub h: ComplexMatrix<T>,
    pub k: ComplexMatrix<T>,
}

/// Tridiagonal pair `(T, S)` with `Z·V·S = V·T`.
#[derive(Clone, Debug, PartialEq)]
pub struct TridiagonalPencil<T> {
    pub t: ComplexMatrix<T>,
    pub s: ComplexMatrix<T>,
}

/// Either pencil shape.
#[derive(Clone, Debug, PartialEq)]
pub enum Pencil<T> {
    Hessenberg(HessenbergPencil<T>),
    Tridiagonal(TridiagonalPencil<T>),
}

impl<T: Real> Pencil<T> {
    /// The member multiplying `V` on the right-hand side (`H` or `T`).
    pub fn b(&self) -> &ComplexMatrix<T> {
        match self {
            Pencil::Hessenberg(p) => &p.h,
            Pencil::Tridiagonal(p) => &p.t,
        }
    }

    /// The member multiplying `Z·V` (`K` or `S`).
    pub fn c(&self) -> &ComplexMatrix<T> {
        match self {
            Pencil::Hessenberg(p) => &p.k,
            Pencil::Tridiagonal(p) => &p.s,
        }
    }

    pub fn size(&self) -> usize {
        self.b().rows()
    }

    /// Returns a copy with both members multiplied by `alpha`.
    pub fn scaled(&self, alpha: Cx<T>) -> Self {
        match self {
            Pencil::Hessenberg(p) => Pencil::Hessenberg(HessenbergPencil { h: p.h.scaled(alpha), k: p.k.scaled(alpha) }),
            Pencil::Tridiagonal(p) => Pencil::Tridiagonal(TridiagonalPencil { t: p.t.scaled(alpha), s: p.s.scaled(alpha) }),
        }
    }

    /// Whether every entry outside the required band is exactly zero.
    pub fn has_exact_band(&self) -> bool {
        let lower_only = matches!(self, Pencil::Hessenberg(_));
        [self.b(), self.c()].iter().all(|m| {
            let n = m.rows();
            (0..n).all(|i| {
                (0..n).all(|j| {
                    let inside = if lower_only { i <= j + 1 } else { i <= j + 1 && j <= i + 1 };
                    inside || m[(i, j)] == czero()
                })
            })
        })
    }

    /// Whether no subdiagonal pair `(b_{i+1,i}, c_{i+1,i})` vanishes.
    pub fn is_proper(&self) -> bool {
        let (b, c) = (self.b(), self.c());
        (0..self.size().saturating_sub(1)).all(|i| b[(i + 1, i)] != czero() || c[(i + 1, i)] != czero())
    }
}

/// Whether the solution is for an inner product or a bilinear form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolutionKind {
    Orthogonal,
    Biorthogonal,
}

/// Bases bundled with the pencil that encodes their recurrence.
#[derive(Clone, Debug, PartialEq)]
pub struct PencilSolution<T> {
    pub kind: SolutionKind,
    /// `Q` in the orthogonal case, `V` otherwise.
    pub basis_v: ComplexMatrix<T>,
    /// `W`, present for biorthogonal solutions.
    pub basis_w: Option<ComplexMatrix<T>>,
    pub pencil: Pencil<T>,
    /// `(T̃, S̃)` with `Zᴴ·W·S̃ = W·T̃`, encoding the dual sequence. Solvers
    /// fill it for finished solutions; intermediate updates leave it empty.
    pub dual_pencil: Option<TridiagonalPencil<T>>,
    pub measure: DiscreteMeasure<T>,
    pub poles_xi: Vec<ExtendedComplexPole<T>>,
    pub poles_psi: Option<Vec<ExtendedComplexPole<T>>>,
}

impl<T: Real> PencilSolution<T> {
    pub fn size(&self) -> usize {
        self.basis_v.rows()
    }

    pub fn b(&self) -> &ComplexMatrix<T> {
        self.pencil.b()
    }

    pub fn c(&self) -> &ComplexMatrix<T> {
        self.pencil.c()
    }

    /// `W`, which equals `Q` for orthogonal solutions.
    pub fn basis_w_or_v(&self) -> &ComplexMatrix<T> {
        self.basis_w.as_ref().unwrap_or(&self.basis_v)
    }

    /// `Z·M` for the diagonal node matrix `Z`.
    pub fn z_times(&self, m: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        m.scale_rows(&self.measure.nodes)
    }

    /// Cross-product test of every prescribed ratio with relative tolerance `tol`.
    pub fn poles_match(&self, tol: T) -> bool {
        let (b, c) = (self.b(), self.c());
        let n = self.size();
        let sub = (0..n.saturating_sub(1)).all(|i| self.poles_xi[i].matches_fraction(b[(i + 1, i)], c[(i + 1, i)], tol));
        let sup = match (&self.pencil, &self.poles_psi) {
            (Pencil::Tridiagonal(_), Some(psi)) => {
                (1..n.saturating_sub(1)).all(|i| psi[i - 1].matches_fraction(b[(i, i + 1)], c[(i, i + 1)], tol))
            }
            _ => true,
        };
        sub && sup
    }

    /// Checks shape consistency of all members.
    pub fn check_shapes(&self) -> Result<()> {
        let m = self.measure.len();
        let mut mats = vec![&self.basis_v, self.b(), self.c()];
        if let Some(w) = &self.basis_w {
            mats.push(w);
        }
        if mats.iter().any(|a| a.rows() != m || a.cols() != m) {
            return Err(OrfError::ShapeError { expected: format!("{m}x{m} members"), found: "mismatched member".into() });
        }
        if self.poles_xi.len() + 1 != m {
            return Err(OrfError::ShapeError { expected: format!("{} poles", m - 1), found: format!("{}", self.poles_xi.len()) });
        }
        Ok(())
    }
}

/// Numerical thresholds shared by the solvers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances<T> {
    /// Relative size below which a pivot quantity counts as a breakdown.
    pub breakdown: T,
    /// Relative tolerance of the cross-product pole test.
    pub pole: T,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        let eps = T::unit_roundoff();
        Self {
            breakdown: crate::linalg::default_pivot_tolerance(),
            pole: T::lit(1e-12).max(eps * T::lit(1e3)),
        }
    }
}
