//! Problem and solution files.
//!
//! Both are TOML documents. Complex entries are strings in the `re+imi` form
//! of [`crate::complex_text`], poles may also be `"inf"`, and matrices are
//! arrays of rows. A problem looks like
//!
//! ```toml
//! nodes = ["1e0+0e0i", "-1e0+0e0i", "0e0+1e0i"]
//! weights_v = ["1+0i", "1+0i", "1+0i"]
//! # present for a bilinear form, which selects the tridiagonal problem
//! weights_w = ["1+0i", "1+0i", "1+0i"]
//! poles_xi = ["1.5+0i", "inf"]
//! poles_psi = ["1.5+0i", "inf"]
//! ```
//!
//! A solution repeats the problem fields and adds `kind`, `basis_v`,
//! `basis_w` (bilinear only), the pencil members `b` and `c`, and for a
//! bilinear form the dual pencil `dual_b`, `dual_c`.

use crate::complex_text::{format_complex, format_pole, parse_complex, parse_pole};
use crate::error::{HarnessError, Result};
use ratiep_core::{
    ComplexMatrix, HessenbergPencil, Matrix, Measure, Pencil, Pole, Solution, SolutionKind, TridiagonalPencil, C64,
};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// An inverse eigenvalue problem as read from disk.
#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    pub measure: Measure,
    pub poles_xi: Vec<Pole>,
    pub poles_psi: Option<Vec<Pole>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ProblemFile {
    nodes: Vec<String>,
    weights_v: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights_w: Option<Vec<String>>,
    poles_xi: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    poles_psi: Option<Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SolutionFile {
    kind: String,
    #[serde(flatten)]
    problem: ProblemFile,
    basis_v: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    basis_w: Option<Vec<Vec<String>>>,
    b: Vec<Vec<String>>,
    c: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dual_b: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dual_c: Option<Vec<Vec<String>>>,
}

fn complexes(v: &[String]) -> Result<Vec<C64>> {
    v.iter().map(|s| parse_complex(s)).collect()
}

fn poles(v: &[String]) -> Result<Vec<Pole>> {
    v.iter().map(|s| parse_pole(s)).collect()
}

fn strings(v: &[C64]) -> Vec<String> {
    v.iter().map(|z| format_complex(*z)).collect()
}

fn pole_strings(v: &[Pole]) -> Vec<String> {
    v.iter().map(format_pole).collect()
}

fn matrix_rows(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| strings(m.row(i))).collect()
}

fn matrix(rows: &[Vec<String>], what: &str) -> Result<Matrix> {
    let parsed = rows.iter().map(|r| complexes(r)).collect::<Result<Vec<_>>>()?;
    let n = parsed.len();
    if parsed.iter().any(|r| r.len() != n) {
        return Err(HarnessError::parse(what, "matrix must be square"));
    }
    Ok(ComplexMatrix::from_rows(&parsed)?)
}

impl ProblemFile {
    fn from_problem(p: &Problem) -> Self {
        Self {
            nodes: strings(&p.measure.nodes),
            weights_v: strings(&p.measure.weights_v),
            weights_w: p.measure.weights_w.as_deref().map(strings),
            poles_xi: pole_strings(&p.poles_xi),
            poles_psi: p.poles_psi.as_deref().map(pole_strings),
        }
    }

    fn into_problem(self) -> Result<Problem> {
        let nodes = complexes(&self.nodes)?;
        let v = complexes(&self.weights_v)?;
        let measure = match &self.weights_w {
            Some(w) => Measure::bilinear(nodes, v, complexes(w)?)?,
            None => Measure::inner_product(nodes, v)?,
        };
        let poles_psi = self.poles_psi.as_deref().map(poles).transpose()?;
        if measure.is_bilinear() != poles_psi.is_some() {
            return Err(HarnessError::Config("weights_w and poles_psi must be given together".into()));
        }
        Ok(Problem { measure, poles_xi: poles(&self.poles_xi)?, poles_psi })
    }
}

impl Problem {
    pub fn to_toml(&self) -> String {
        toml::to_string(&ProblemFile::from_problem(self)).expect("problem serializes")
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str::<ProblemFile>(text).map_err(|e| HarnessError::parse("problem file", e))?.into_problem()
    }
}

/// Serializes a solution with its measure and poles.
pub fn solution_to_toml(sol: &Solution) -> String {
    let problem = Problem { measure: sol.measure.clone(), poles_xi: sol.poles_xi.clone(), poles_psi: sol.poles_psi.clone() };
    let file = SolutionFile {
        kind: match sol.kind {
            SolutionKind::Orthogonal => "orthogonal",
            SolutionKind::Biorthogonal => "biorthogonal",
        }
        .to_string(),
        problem: ProblemFile::from_problem(&problem),
        basis_v: matrix_rows(&sol.basis_v),
        basis_w: sol.basis_w.as_ref().map(matrix_rows),
        b: matrix_rows(sol.b()),
        c: matrix_rows(sol.c()),
        dual_b: sol.dual_pencil.as_ref().map(|d| matrix_rows(&d.t)),
        dual_c: sol.dual_pencil.as_ref().map(|d| matrix_rows(&d.s)),
    };
    toml::to_string(&file).expect("solution serializes")
}

/// Parses a solution written by [`solution_to_toml`].
pub fn solution_from_toml(text: &str) -> Result<Solution> {
    let f: SolutionFile = toml::from_str(text).map_err(|e| HarnessError::parse("solution file", e))?;
    let problem = f.problem.into_problem()?;
    let (b, c) = (matrix(&f.b, "b")?, matrix(&f.c, "c")?);
    let kind = match f.kind.as_str() {
        "orthogonal" => SolutionKind::Orthogonal,
        "biorthogonal" => SolutionKind::Biorthogonal,
        other => return Err(HarnessError::parse("solution kind", format!("unknown kind `{other}`"))),
    };
    let pencil = match kind {
        SolutionKind::Orthogonal => Pencil::Hessenberg(HessenbergPencil { h: b, k: c }),
        SolutionKind::Biorthogonal => Pencil::Tridiagonal(TridiagonalPencil { t: b, s: c }),
    };
    let dual_pencil = match (&f.dual_b, &f.dual_c) {
        (Some(t), Some(s)) => Some(TridiagonalPencil { t: matrix(t, "dual_b")?, s: matrix(s, "dual_c")? }),
        (None, None) => None,
        _ => return Err(HarnessError::parse("solution file", "dual_b and dual_c must be given together")),
    };
    let sol = Solution {
        kind,
        basis_v: matrix(&f.basis_v, "basis_v")?,
        basis_w: f.basis_w.as_deref().map(|w| matrix(w, "basis_w")).transpose()?,
        pencil,
        dual_pencil,
        measure: problem.measure,
        poles_xi: problem.poles_xi,
        poles_psi: problem.poles_psi,
    };
    sol.check_shapes()?;
    Ok(sol)
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| HarnessError::io(path, e))
}
