//! Krylov bases against the moment-matrix factorizations, and the updating
//! solvers against the Krylov ones.
//!
//! Factoring a moment matrix squares the condition number of the Krylov
//! basis, which reaches `1e8` on these instances, so the moment route runs
//! in double-double arithmetic. Both routes then use the same input data and
//! the comparison measures the error of the `f64` solvers.

mod common;

use common::*;
use ratiep_core::rks::{biorth_from_moment, krylov_basis, rational_arnoldi, rational_lanczos, Side};
use ratiep_core::updating::{hpiep_solve, tpiep_solve};
use ratiep_core::{Measure, OrfError};
use rand::Rng;

#[test]
fn arnoldi_matches_cholesky_of_moments() {
    let mut r = rng(1);
    for _ in 0..50 {
        let m = r.gen_range(2..=10);
        let measure = Measure::inner_product(annulus_nodes(&mut r, m, 0.5, 1.5), random_weights(&mut r, m)).unwrap();
        let xi = circle(m - 1, 3.0);
        let q = rational_arnoldi(&measure, &xi).unwrap().basis_v;
        let (q0, _) = moment_oracle(&measure, &xi, None).unwrap();
        let d = unimodular_distance(&q, &q0);
        assert!(d <= 1e-8, "distance {d:e}");
    }
}

#[test]
fn lanczos_matches_lr_of_moments() {
    let mut r = rng(2);
    let mut checked = 0;
    for _ in 0..50 {
        let m = r.gen_range(2..=10);
        let measure = Measure::bilinear(
            annulus_nodes(&mut r, m, 0.5, 1.5),
            random_weights(&mut r, m),
            random_weights(&mut r, m),
        )
        .unwrap();
        let (xi, psi) = (circle(m - 1, 3.0), conj_all(&circle(m - 1, 3.0)));
        let Ok(sol) = rational_lanczos(&measure, &xi, &psi) else { continue };
        let (v0, w0) = moment_oracle(&measure, &xi, Some(&psi)).unwrap();
        let d = diagonal_pair_distance(&sol.basis_v, sol.basis_w.as_ref().unwrap(), &v0, &w0);
        assert!(d <= 1e-6, "distance {d:e}");
        checked += 1;
    }
    assert!(checked >= 40);
}

#[test]
fn hessenberg_update_matches_arnoldi() {
    let mut r = rng(3);
    for _ in 0..30 {
        let m = r.gen_range(1..=12);
        let measure = Measure::inner_product(annulus_nodes(&mut r, m, 0.5, 1.5), random_weights(&mut r, m)).unwrap();
        let xi = circle(m.saturating_sub(1), 3.0);
        let a = rational_arnoldi(&measure, &xi).unwrap();
        let u = hpiep_solve(&measure, &xi).unwrap();
        assert!(unimodular_distance(&u.basis_v, &a.basis_v) <= 1e-8);
    }
}

#[test]
fn tridiagonal_update_matches_lanczos() {
    let mut r = rng(4);
    for _ in 0..30 {
        let m = r.gen_range(1..=8);
        let measure = Measure::bilinear(
            annulus_nodes(&mut r, m, 0.5, 1.5),
            random_weights(&mut r, m),
            random_weights(&mut r, m),
        )
        .unwrap();
        let (xi, psi) = (circle(m.saturating_sub(1), 3.0), conj_all(&circle(m.saturating_sub(1), 3.0)));
        let (Ok(l), Ok(u)) = (rational_lanczos(&measure, &xi, &psi), tpiep_solve(&measure, &xi, &psi)) else { continue };
        let d = diagonal_pair_distance(&u.basis_v, u.basis_w.as_ref().unwrap(), &l.basis_v, l.basis_w.as_ref().unwrap());
        assert!(d <= 1e-6, "distance {d:e}");
    }
}

#[test]
fn hermitian_case_gives_equal_bases() {
    let nodes: Vec<_> = (0..9).map(|k| ratiep_core::C64::new(-0.9 + 0.2 * k as f64, 0.0)).collect();
    let measure = Measure::unit_weights(nodes, true).unwrap();
    let xi = circle(8, 3.0);
    let sol = rational_lanczos(&measure, &xi, &conj_all(&xi)).unwrap();
    let w = sol.basis_w.as_ref().unwrap();
    assert!(sol.basis_v.sub(w).unwrap().max_abs() <= 1e-12);
}

#[test]
fn double_precision_moment_route_on_a_well_conditioned_instance() {
    let measure = unit_measure(unit_circle(6));
    let xi = circle(5, 3.0);
    let k = krylov_basis(&measure, &xi, Side::Primal).unwrap();
    let (q0, w0) = biorth_from_moment(&k, &k).unwrap();
    assert_eq!(q0, w0);
    let q = rational_arnoldi(&measure, &xi).unwrap().basis_v;
    assert!(unimodular_distance(&q, &q0) <= 1e-10);
}

#[test]
fn moment_route_reports_singular_moments() {
    let measure = Measure::bilinear(
        unit_circle(2),
        vec![ratiep_core::C64::new(1.0, 0.0); 2],
        vec![ratiep_core::C64::new(1.0, 0.0), ratiep_core::C64::new(-1.0, 0.0)],
    )
    .unwrap();
    let kv = krylov_basis(&measure, &circle(1, 3.0), Side::Primal).unwrap();
    let kw = krylov_basis(&measure, &circle(1, 3.0), Side::Dual).unwrap();
    assert!(matches!(biorth_from_moment(&kv, &kw), Err(OrfError::StronglySingular(_))));
}
