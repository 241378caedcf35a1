//! Dense kernels: rotations, eliminators, factorizations and singular values.

mod eliminator;
mod factor;
mod rotation;
mod svd;

pub use eliminator::{Eliminator, EliminatorKind};
pub use factor::{
    cholesky, default_pivot_tolerance, lr_factorize, lr_factorize_with, solve_lower, solve_row_system,
    solve_row_system_with, solve_upper, solve_upper_adjoint, upper_inverse,
};
pub use rotation::{rotation_to_eliminate, PlaneRotation};
pub use svd::{
    bidiagonal_singular_values, cond2, norm2, singular_values, svd_jacobi, Svd,
};
