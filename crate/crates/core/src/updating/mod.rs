//! Extending a solution by one node at a time.
//!
//! The Hessenberg case keeps the basis unitary and restores the pencil
//! structure with plane rotations on the pair `(i, m)`. The tridiagonal case
//! keeps the bases biorthonormal and uses unit triangular eliminators on the
//! same index pairs. Full solves start from the trivial one-node solution.

mod hessenberg;
mod tridiagonal;

pub use hessenberg::{hpiep_solve, hpiep_solve_with, hpiep_update, hpiep_update_with, HpUpdateRequest, HpWork};
pub use tridiagonal::{tpiep_solve, tpiep_solve_with, tpiep_update, tpiep_update_with, TpUpdateRequest, TpWork};

use crate::error::{pair, OrfError, Result};
use crate::measure::{is_duplicate, DiscreteMeasure};
use crate::pole::ExtendedComplexPole;
use crate::scalar::{cone, Cx, Real};

/// Trailing diagonal seeds `(b̂, ĉ)` with `z·ĉ = b̂`, both of modest size.
pub(crate) fn embedding_seed<T: Real>(z: Cx<T>) -> (Cx<T>, Cx<T>) {
    if z.norm() <= T::one() {
        (z, cone())
    } else {
        (cone(), cone::<T>() / z)
    }
}

/// Shared checks of an update request.
pub(crate) fn check_new_node<T: Real>(
    measure: &DiscreteMeasure<T>,
    z: Cx<T>,
    weights: &[Cx<T>],
    poles: &[&ExtendedComplexPole<T>],
) -> Result<()> {
    let m = measure.len();
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(OrfError::InvalidInput("new node is not finite".into()));
    }
    if weights.iter().any(|w| w.norm() == T::zero() || !w.norm().is_finite()) {
        return Err(OrfError::InvalidWeight(m));
    }
    if measure.nodes.iter().any(|&y| is_duplicate(y, z)) {
        return Err(OrfError::DuplicateNode(m));
    }
    let tol = T::unit_roundoff() * T::lit(16.0);
    for p in poles {
        for &y in measure.nodes.iter().chain(std::iter::once(&z)) {
            if p.coincides_with(y, tol) {
                return Err(OrfError::PoleCollidesWithNode { pole: pair(p.value().unwrap_or(y)), node: pair(y) });
            }
        }
    }
    Ok(())
}

/// Parameter `a` making `(t0 + a·t1, s0 + a·s1)` proportional to `(tr, sr)`.
///
/// Returns `None` when the denominator vanishes relative to its terms.
pub(crate) fn colinear_param<T: Real>(t0: Cx<T>, s0: Cx<T>, t1: Cx<T>, s1: Cx<T>, tr: Cx<T>, sr: Cx<T>, tol: T) -> Option<Cx<T>> {
    let num = t0 * sr - s0 * tr;
    let (p, q) = (t1 * sr, s1 * tr);
    let den = p - q;
    if num.norm() == T::zero() {
        return Some(Cx::new(T::zero(), T::zero()));
    }
    if den.norm() == T::zero() || den.norm() <= tol * (p.norm() + q.norm()) {
        return None;
    }
    Some(-num / den)
}
