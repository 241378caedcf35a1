//! Rational Krylov constructions: rational Arnoldi for the Hessenberg pencil
//! problem, rational Lanczos for the tridiagonal one, and the moment-matrix
//! route used as an independent oracle.

use crate::error::{pair, OrfError, Result};
use crate::linalg::{cholesky, lr_factorize, svd_jacobi};
use crate::matrix::ComplexMatrix;
use crate::measure::DiscreteMeasure;
use crate::pencil::{HessenbergPencil, Pencil, PencilSolution, SolutionKind, Tolerances, TridiagonalPencil};
use crate::pole::ExtendedComplexPole;
use crate::scalar::{cone, czero, re, vec_dot, vec_norm, Cx, Real};

/// Which Krylov space a basis spans.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `(Z, v, Ξ)`.
    Primal,
    /// `(Zᴴ, w, Ψ)`.
    Dual,
}

/// Shift parameters `(ρ, η)` of the expansion `(ρZ − η)(μZ − ν)⁻¹`.
///
/// Finite poles use pure shift-invert; the infinite pole uses `Z` itself.
pub(crate) fn shift_pair<T: Real>(pole: &ExtendedComplexPole<T>) -> (Cx<T>, Cx<T>) {
    if pole.is_infinite() {
        (-pole.nu(), czero())
    } else {
        (czero(), -cone::<T>())
    }
}

/// Applies `(ρZ − η)(μZ − ν)⁻¹` to `x`. With `conjugate` the factor is
/// conjugated, which is the dual expansion by `Zᴴ` with pole `ψ̄`: column `j`
/// of `W` then holds `conj(s_j(z))·w` for a function `s_j` with poles `ψ`.
pub(crate) fn expand<T: Real>(nodes: &[Cx<T>], pole: &ExtendedComplexPole<T>, x: &[Cx<T>], conjugate: bool) -> Vec<Cx<T>> {
    let (rho, eta) = shift_pair(pole);
    let (nu, mu) = (pole.nu(), pole.mu());
    nodes
        .iter()
        .zip(x)
        .map(|(&z, &xi)| {
            let f = (rho * z - eta) / (mu * z - nu);
            (if conjugate { f.conj() } else { f }) * xi
        })
        .collect()
}

/// Fails when any pole coincides with a node.
pub(crate) fn check_poles<T: Real>(nodes: &[Cx<T>], poles: &[ExtendedComplexPole<T>]) -> Result<()> {
    let tol = T::unit_roundoff() * T::lit(16.0);
    for p in poles {
        for &z in nodes {
            if p.coincides_with(z, tol) {
                return Err(OrfError::PoleCollidesWithNode { pole: pair(p.value().unwrap_or(z)), node: pair(z) });
            }
        }
    }
    Ok(())
}

pub(crate) fn check_pole_count<T: Real>(m: usize, poles: &[ExtendedComplexPole<T>]) -> Result<()> {
    if poles.len() + 1 != m {
        return Err(OrfError::ShapeError { expected: format!("{} poles", m - 1), found: format!("{}", poles.len()) });
    }
    Ok(())
}

fn columns_to_matrix<T: Real>(cols: &[Vec<Cx<T>>]) -> ComplexMatrix<T> {
    ComplexMatrix::from_columns(cols).expect("equal column lengths")
}

/// Two passes of classical Gram–Schmidt of `x` against `basis`.
/// Returns the accumulated coefficients.
fn cgs2<T: Real>(basis: &[Vec<Cx<T>>], x: &mut [Cx<T>]) -> Vec<Cx<T>> {
    let mut h = vec![czero(); basis.len()];
    for _ in 0..2 {
        let c: Vec<Cx<T>> = basis.iter().map(|q| vec_dot(q, x)).collect();
        for (q, &cj) in basis.iter().zip(&c) {
            for (xi, qi) in x.iter_mut().zip(q) {
                *xi = *xi - cj * qi;
            }
        }
        for (hj, cj) in h.iter_mut().zip(c) {
            *hj = *hj + cj;
        }
    }
    h
}

/// Rational Arnoldi with default tolerances.
pub fn rational_arnoldi<T: Real>(measure: &DiscreteMeasure<T>, poles: &[ExtendedComplexPole<T>]) -> Result<PencilSolution<T>> {
    rational_arnoldi_with(measure, poles, &Tolerances::default())
}

/// Orthonormal basis `Q` of the rational Krylov space `K(Z, v; Ξ)` together
/// with the Hessenberg pencil `(H, K)` satisfying `Z·Q·K = Q·H`.
pub fn rational_arnoldi_with<T: Real>(
    measure: &DiscreteMeasure<T>,
    poles: &[ExtendedComplexPole<T>],
    tol: &Tolerances<T>,
) -> Result<PencilSolution<T>> {
    measure.validate()?;
    let m = measure.len();
    check_pole_count(m, poles)?;
    check_poles(&measure.nodes, poles)?;
    let v = &measure.weights_v;
    let nv = vec_norm(v);
    let mut q: Vec<Vec<Cx<T>>> = Vec::with_capacity(m);
    q.push(v.iter().map(|x| x / nv).collect());
    let mut h = ComplexMatrix::zeros(m, m);
    let mut k = ComplexMatrix::zeros(m, m);
    for (j, pole) in poles.iter().enumerate() {
        let mut cand = expand(&measure.nodes, pole, &q[j], false);
        let cnorm = vec_norm(&cand);
        let mut coef = cgs2(&q, &mut cand);
        let beta = vec_norm(&cand);
        if !(beta > tol.breakdown * cnorm) {
            return Err(OrfError::Breakdown { step: j + 1 });
        }
        coef.push(re(beta));
        q.push(cand.iter().map(|x| x / beta).collect());
        let (rho, eta) = shift_pair(pole);
        for (i, &c) in coef.iter().enumerate() {
            k[(i, j)] = pole.mu() * c;
            h[(i, j)] = pole.nu() * c;
        }
        k[(j, j)] = k[(j, j)] - rho;
        h[(j, j)] = h[(j, j)] - eta;
    }
    let last = m - 1;
    let zq: Vec<Cx<T>> = measure.nodes.iter().zip(&q[last]).map(|(z, x)| z * x).collect();
    for i in 0..m {
        h[(i, last)] = vec_dot(&q[i], &zq);
    }
    k[(last, last)] = cone();
    let sol = PencilSolution {
        kind: SolutionKind::Orthogonal,
        basis_v: columns_to_matrix(&q),
        basis_w: None,
        pencil: Pencil::Hessenberg(HessenbergPencil { h, k }),
        dual_pencil: None,
        measure: measure.clone(),
        poles_xi: poles.to_vec(),
        poles_psi: None,
    };
    debug_assert!(sol.pencil.is_proper());
    Ok(sol)
}

/// Rational Lanczos with default tolerances.
pub fn rational_lanczos<T: Real>(
    measure: &DiscreteMeasure<T>,
    poles_xi: &[ExtendedComplexPole<T>],
    poles_psi: &[ExtendedComplexPole<T>],
) -> Result<PencilSolution<T>> {
    rational_lanczos_with(measure, poles_xi, poles_psi, &Tolerances::default())
}

/// Biorthonormal bases `V`, `W` of `K(Z, v; Ξ)` and `K(Zᴴ, w; Ψ)` with the
/// tridiagonal pencil `(T, S)`, `Z·V·S = V·T`, and its dual `(T̃, S̃)`.
///
/// Each new pair of vectors is biorthogonalized against all previous ones
/// (two classical passes on each side) and split symmetrically by the
/// principal square root of `⟨ṽ, w̃⟩`. A vanishing `⟨ṽ, w̃⟩` is a serious
/// breakdown and is reported, not cured.
pub fn rational_lanczos_with<T: Real>(
    measure: &DiscreteMeasure<T>,
    poles_xi: &[ExtendedComplexPole<T>],
    poles_psi: &[ExtendedComplexPole<T>],
    tol: &Tolerances<T>,
) -> Result<PencilSolution<T>> {
    measure.validate()?;
    let w0 = measure
        .weights_w
        .as_ref()
        .ok_or_else(|| OrfError::InvalidInput("bilinear form requires weights_w".into()))?;
    let m = measure.len();
    check_pole_count(m, poles_xi)?;
    check_pole_count(m, poles_psi)?;
    check_poles(&measure.nodes, poles_xi)?;
    check_poles(&measure.nodes, poles_psi)?;
    let v0 = &measure.weights_v;
    let d0 = vec_dot(w0, v0);
    if !(d0.norm() > tol.breakdown * vec_norm(v0) * vec_norm(w0)) {
        return Err(OrfError::Breakdown { step: 0 });
    }
    let s0 = d0.sqrt();
    let mut vs: Vec<Vec<Cx<T>>> = vec![v0.iter().map(|x| x / s0).collect()];
    let mut ws: Vec<Vec<Cx<T>>> = vec![w0.iter().map(|x| x / s0.conj()).collect()];
    for j in 0..m - 1 {
        let mut vt = expand(&measure.nodes, &poles_xi[j], &vs[j], false);
        let mut wt = expand(&measure.nodes, &poles_psi[j], &ws[j], true);
        let (nv0, nw0) = (vec_norm(&vt), vec_norm(&wt));
        for _ in 0..2 {
            let cv: Vec<Cx<T>> = ws.iter().map(|w| vec_dot(w, &vt)).collect();
            let cw: Vec<Cx<T>> = vs.iter().map(|v| vec_dot(v, &wt)).collect();
            for ((v, w), (a, b)) in vs.iter().zip(&ws).zip(cv.iter().zip(&cw)) {
                for (x, y) in vt.iter_mut().zip(v) {
                    *x = *x - a * y;
                }
                for (x, y) in wt.iter_mut().zip(w) {
                    *x = *x - b * y;
                }
            }
        }
        let (nv, nw) = (vec_norm(&vt), vec_norm(&wt));
        if !(nv > tol.breakdown * nv0) || !(nw > tol.breakdown * nw0) {
            return Err(OrfError::Breakdown { step: j + 1 });
        }
        let delta = vec_dot(&wt, &vt);
        if !(delta.norm() > tol.breakdown * nv * nw) {
            return Err(OrfError::Breakdown { step: j + 1 });
        }
        let s = delta.sqrt();
        vs.push(vt.iter().map(|x| x / s).collect());
        ws.push(wt.iter().map(|x| x / s.conj()).collect());
    }
    let v = columns_to_matrix(&vs);
    let w = columns_to_matrix(&ws);
    let g = w.adjoint_matmul(&v.scale_rows(&measure.nodes))?;
    let pencil = extract_tridiagonal(&g, poles_xi)?;
    let dual = extract_tridiagonal(&g.adjoint(), &conjugated(poles_psi))?;
    Ok(PencilSolution {
        kind: SolutionKind::Biorthogonal,
        basis_v: v,
        basis_w: Some(w),
        pencil: Pencil::Tridiagonal(pencil),
        dual_pencil: Some(dual),
        measure: measure.clone(),
        poles_xi: poles_xi.to_vec(),
        poles_psi: Some(poles_psi.to_vec()),
    })
}

/// Tridiagonal pencil `(T, S)` with `G·S = T`, where `G = Wᴴ·Z·V` is the
/// projected node matrix of a pair of biorthonormal nested bases.
///
/// Column `k` of `S` is the null vector of the rows of `G` outside the band
/// `{k−1, k, k+1}` together with the pole condition on entry `(k+1, k)`; `T`
/// is then `G·S` restricted to the band, so entries outside the band are exact
/// zeros. The second column has a two-dimensional family of solutions and is
/// fixed by requiring `s_{0,1} = 0`. Columns are scaled to unit norm.
pub fn extract_tridiagonal<T: Real>(g: &ComplexMatrix<T>, sub_poles: &[ExtendedComplexPole<T>]) -> Result<TridiagonalPencil<T>> {
    let m = g.rows();
    let mut t = ComplexMatrix::zeros(m, m);
    let mut s = ComplexMatrix::zeros(m, m);
    if m == 1 {
        t[(0, 0)] = g[(0, 0)];
        s[(0, 0)] = cone();
        return Ok(TridiagonalPencil { t, s });
    }
    let scale = {
        let a = g.max_abs();
        if a > T::zero() { a } else { T::one() }
    };
    for k in 0..m {
        let lo = k.saturating_sub(1);
        let hi = (k + 1).min(m - 1);
        let nb = hi - lo + 1;
        let mut rows: Vec<Vec<Cx<T>>> = Vec::new();
        for j in (0..lo).chain(hi + 1..m) {
            rows.push((lo..=hi).map(|i| g[(j, i)]).collect());
        }
        if k + 1 < m {
            let p = &sub_poles[k];
            let mut r: Vec<Cx<T>> = (lo..=hi).map(|i| p.mu() * g[(k + 1, i)]).collect();
            r[k + 1 - lo] = r[k + 1 - lo] - p.nu();
            rows.push(r);
        }
        if k == 1 {
            let mut r = vec![czero(); nb];
            r[0] = re(scale);
            rows.push(r);
        }
        while rows.len() < nb {
            rows.push(vec![czero(); nb]);
        }
        let a = ComplexMatrix::from_rows(&rows)?;
        let svd = svd_jacobi(&a);
        let null: Vec<Cx<T>> = (0..nb).map(|i| svd.v[(i, nb - 1)]).collect();
        let tb: Vec<Cx<T>> = (lo..=hi).map(|j| (lo..=hi).zip(&null).fold(czero(), |acc, (i, x)| acc + g[(j, i)] * x)).collect();
        let mut all = null.clone();
        all.extend_from_slice(&tb);
        let norm = vec_norm(&all);
        if norm == T::zero() || !norm.is_finite() {
            return Err(OrfError::Breakdown { step: k });
        }
        let big = all.iter().fold(czero(), |b: Cx<T>, x| if x.norm() > b.norm() { *x } else { b });
        let f = big.conj() / (big.norm() * norm);
        for (idx, i) in (lo..=hi).enumerate() {
            s[(i, k)] = null[idx] * f;
            t[(i, k)] = tb[idx] * f;
        }
    }
    Ok(TridiagonalPencil { t, s })
}

/// Dual pencil `(T̃, S̃)` with `Zᴴ·W·S̃ = W·T̃`, extracted from the bases of a
/// biorthogonal solution.
pub fn dual_pencil<T: Real>(sol: &PencilSolution<T>) -> Result<TridiagonalPencil<T>> {
    let w = sol
        .basis_w
        .as_ref()
        .ok_or_else(|| OrfError::InvalidInput("dual pencil requires a biorthogonal solution".into()))?;
    let psi = sol
        .poles_psi
        .as_ref()
        .ok_or_else(|| OrfError::InvalidInput("dual pencil requires poles_psi".into()))?;
    let gh = sol.basis_v.adjoint_matmul(&w.scale_rows(&sol.measure.nodes.iter().map(|z| z.conj()).collect::<Vec<_>>()))?;
    extract_tridiagonal(&gh, &conjugated(psi))
}

/// Poles of the dual pencil: the `Zᴴ`-side Krylov space carries `ψ̄`.
fn conjugated<T: Real>(poles: &[ExtendedComplexPole<T>]) -> Vec<ExtendedComplexPole<T>> {
    poles.iter().map(|p| p.conj()).collect()
}

/// Krylov basis whose column `j` is `t_j(Z)·v` for `t_0 = 1` and
/// `t_j = t_{j−1}·(ρz − η)/(μz − ν)` with the `j`-th pole, each column scaled
/// to unit norm. The dual side starts from `w` and conjugates each factor, so
/// its columns are `conj(s_j(Z))·w` with `s_j` carrying the poles `Ψ`.
pub fn krylov_basis<T: Real>(measure: &DiscreteMeasure<T>, poles: &[ExtendedComplexPole<T>], side: Side) -> Result<ComplexMatrix<T>> {
    measure.validate()?;
    let m = measure.len();
    check_pole_count(m, poles)?;
    let (start, conj) = match side {
        Side::Primal => (&measure.weights_v, false),
        Side::Dual => (
            measure
                .weights_w
                .as_ref()
                .ok_or_else(|| OrfError::InvalidInput("dual Krylov basis requires weights_w".into()))?,
            true,
        ),
    };
    check_poles(&measure.nodes, poles)?;
    let n0 = vec_norm(start);
    let mut cols = vec![start.iter().map(|x| x / n0).collect::<Vec<_>>()];
    for (j, p) in poles.iter().enumerate() {
        let c = expand(&measure.nodes, p, &cols[j], conj);
        let n = vec_norm(&c);
        if n == T::zero() {
            return Err(OrfError::Breakdown { step: j + 1 });
        }
        cols.push(c.iter().map(|x| x / n).collect());
    }
    Ok(columns_to_matrix(&cols))
}

/// `Kwᴴ·Kv`.
pub fn moment_matrix<T: Real>(kv: &ComplexMatrix<T>, kw: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    kw.adjoint_matmul(kv)
}

/// Biorthonormal bases from the moment matrix `M = Kwᴴ·Kv = L·R`:
/// `V = Kv·R⁻¹`, `W = Kw·L⁻ᴴ`. When `Kv` and `Kw` are the same matrix the
/// Hermitian route `M = L·Lᴴ` is taken and `V = W`.
pub fn biorth_from_moment<T: Real>(kv: &ComplexMatrix<T>, kw: &ComplexMatrix<T>) -> Result<(ComplexMatrix<T>, ComplexMatrix<T>)> {
    let mm = moment_matrix(kv, kw)?;
    if kv == kw {
        let l = cholesky(&mm)?;
        let v = kv.matmul(&crate::linalg::upper_inverse(&l.adjoint()))?;
        return Ok((v.clone(), v));
    }
    let (l, r) = lr_factorize(&mm)?;
    let v = kv.matmul(&crate::linalg::upper_inverse(&r))?;
    let w = kw.matmul(&crate::linalg::upper_inverse(&l.adjoint()))?;
    Ok((v, w))
}
