#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ratiep_core::{Matrix, Measure, Pole, C64};
use std::f64::consts::PI;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `m` points uniform in angle and radius on the annulus `r0 ≤ |z| ≤ r1`.
pub fn annulus_nodes(rng: &mut impl Rng, m: usize, r0: f64, r1: f64) -> Vec<C64> {
    (0..m).map(|_| C64::from_polar(rng.gen_range(r0..r1), rng.gen_range(0.0..2.0 * PI))).collect()
}

pub fn random_weights(rng: &mut impl Rng, m: usize) -> Vec<C64> {
    (0..m).map(|_| C64::new(rng.gen_range(0.5..1.5), rng.gen_range(-0.5..0.5))).collect()
}

pub fn circle(n: usize, radius: f64) -> Vec<Pole> {
    (0..n).map(|k| Pole::finite(C64::from_polar(radius, 2.0 * PI * k as f64 / n as f64))).collect()
}

pub fn conj_all(p: &[Pole]) -> Vec<Pole> {
    p.iter().map(Pole::conj).collect()
}

pub fn unit_circle(m: usize) -> Vec<C64> {
    (0..m).map(|k| C64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64)).collect()
}

pub fn unit_measure(nodes: Vec<C64>) -> Measure {
    Measure::unit_weights(nodes, false).unwrap()
}

/// Largest entrywise deviation of `a` from `b·D` over unimodular diagonal
/// `D`, with `D` fitted column by column.
pub fn unimodular_distance(a: &Matrix, b: &Matrix) -> f64 {
    let mut worst: f64 = 0.0;
    for j in 0..a.cols() {
        let (x, y) = (a.column(j), b.column(j));
        let ip: C64 = y.iter().zip(&x).map(|(p, q)| p.conj() * q).sum();
        let d = if ip.norm() > 0.0 { ip / ip.norm() } else { C64::new(1.0, 0.0) };
        for (p, q) in y.iter().zip(&x) {
            worst = worst.max((q - p * d).norm());
        }
    }
    worst
}

/// Largest entrywise deviation of `(v, w)` from `(v₀·D, w₀·D⁻ᴴ)`, with the
/// nonsingular diagonal `D` fitted from `w₀ᴴ·v`.
pub fn diagonal_pair_distance(v: &Matrix, w: &Matrix, v0: &Matrix, w0: &Matrix) -> f64 {
    let mut worst: f64 = 0.0;
    for j in 0..v.cols() {
        let (x, y, x0, y0) = (v.column(j), w.column(j), v0.column(j), w0.column(j));
        let d: C64 = y0.iter().zip(&x).map(|(p, q)| p.conj() * q).sum();
        let dinv = (C64::new(1.0, 0.0) / d).conj();
        for i in 0..x.len() {
            worst = worst.max((x[i] - x0[i] * d).norm()).max((y[i] - y0[i] * dinv).norm());
        }
    }
    worst
}

/// The moment-matrix bases `(V, W)` computed in double-double arithmetic and
/// rounded to `f64`. Without `psi` the Cholesky route gives `V = W`.
pub fn moment_oracle(measure: &Measure, xi: &[Pole], psi: Option<&[Pole]>) -> ratiep_core::Result<(Matrix, Matrix)> {
    use ratiep_core::rks::{biorth_from_moment, krylov_basis, Side};
    use ratiep_core::DoubleDouble;
    let md = measure.cast::<DoubleDouble>();
    let cast = |p: &[Pole]| p.iter().map(|x| x.cast::<DoubleDouble>()).collect::<Vec<_>>();
    let kv = krylov_basis(&md, &cast(xi), Side::Primal)?;
    let kw = match psi {
        Some(psi) => krylov_basis(&md, &cast(psi), Side::Dual)?,
        None => kv.clone(),
    };
    let (v, w) = biorth_from_moment(&kv, &kw)?;
    Ok((v.cast(), w.cast()))
}
