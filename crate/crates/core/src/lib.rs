//! Recurrence coefficients of orthogonal and biorthogonal rational functions
//! with prescribed poles.
//!
//! Given nodes `z_i` and weights of a discrete inner product (or bilinear
//! form) plus a list of poles, the crate computes bases `Q` (or `V`, `W`) and
//! a Hessenberg (or tridiagonal) pencil `(B, C)` with `Z·V·C = V·B`. The
//! pencil encodes the recurrence of the rational functions. Two strategies
//! are offered: rational Krylov iterations ([`rks`]) and updating procedures
//! that add one node at a time ([`updating`]). [`orf_eval`] and [`metrics`]
//! evaluate the encoded functions and score a solution.
//!
//! Every routine is generic over the real scalar type (`f32`, `f64`, or the
//! double-double [`DoubleDouble`] for reference runs); the aliases at the
//! crate root fix `f64`.

#[cfg(feature = "twofloat")]
pub mod dd;
pub mod error;
pub mod linalg;
pub mod matrix;
pub mod measure;
pub mod metrics;
pub mod orf_eval;
pub mod pencil;
pub mod pole;
pub mod rks;
mod scalar;
pub mod updating;

#[cfg(feature = "twofloat")]
pub use dd::DoubleDouble;
pub use error::{OrfError, Result};
pub use matrix::ComplexMatrix;
pub use measure::DiscreteMeasure;
pub use metrics::{metric_report, MetricOptions, MetricReport};
pub use pencil::{HessenbergPencil, Pencil, PencilSolution, SolutionKind, Tolerances, TridiagonalPencil};
pub use pole::ExtendedComplexPole;
pub use scalar::{fractions_match, vec_dot, vec_norm, Cx, Real};

/// Double-precision complex scalar.
pub type C64 = num_complex::Complex<f64>;
/// Double-precision dense matrix.
pub type Matrix = ComplexMatrix<f64>;
/// Double-precision pole.
pub type Pole = ExtendedComplexPole<f64>;
/// Double-precision measure.
pub type Measure = DiscreteMeasure<f64>;
/// Double-precision solution.
pub type Solution = PencilSolution<f64>;
/// Double-precision metric report.
pub type Report = MetricReport<f64>;
