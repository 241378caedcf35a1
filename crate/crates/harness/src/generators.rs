//! Deterministic node and pole sets for the experiments.
//!
//! Node lists come in insertion order, so every prefix is itself a well
//! spread set. The updating solvers consume nodes in exactly this order.

use ratiep_core::{OrfError, Pole, C64};
use std::f64::consts::PI;

/// Van der Corput radical inverse of `k` in base 2, a value in `[0, 1)`.
fn radical_inverse(mut k: usize) -> f64 {
    let mut x = 0.0;
    let mut f = 0.5;
    while k > 0 {
        if k & 1 == 1 {
            x += f;
        }
        f *= 0.5;
        k >>= 1;
    }
    x
}

/// Angles of the unit-circle nodes in insertion order.
///
/// Each new angle bisects a largest gap among the angles placed so far.
/// Equal gaps are visited in bit-reversed order, which keeps every prefix
/// spread evenly around the circle instead of filling one arc first.
pub fn unit_circle_angles(m: usize) -> Vec<f64> {
    (0..m).map(|k| 2.0 * PI * radical_inverse(k)).collect()
}

/// `m` distinct points on the unit circle in insertion order.
pub fn unit_circle_nodes(m: usize) -> Vec<C64> {
    unit_circle_angles(m).into_iter().map(|t| C64::from_polar(1.0, t)).collect()
}

/// Unit-circle nodes where node `m_p` (1-based) sits at angular distance
/// `theta` from node `m_p − 1`. Later nodes continue the unperturbed
/// sequence, so for `m ≥ m_p` the set is `m − 1` bisection nodes plus the
/// close neighbour. Below `m_p` the plain circle nodes are returned, which
/// lets one sweep cover sizes on both sides of the perturbation.
///
/// A `theta` that lands the node on an existing one is a
/// [`OrfError::DuplicateNode`].
pub fn perturbed_nodes(m: usize, m_p: usize, theta: f64) -> Result<Vec<C64>, OrfError> {
    if m_p < 2 {
        return Err(OrfError::InvalidInput("the perturbed node needs a predecessor".into()));
    }
    if m < m_p {
        return Ok(unit_circle_nodes(m));
    }
    let base = unit_circle_angles(m - 1);
    let mut angles = base[..m_p - 1].to_vec();
    angles.push(base[m_p - 2] + theta);
    angles.extend_from_slice(&base[m_p - 1..]);
    let nodes: Vec<C64> = angles.into_iter().map(|t| C64::from_polar(1.0, t)).collect();
    let p = nodes[m_p - 1];
    let scale = 4.0 * f64::EPSILON;
    if nodes.iter().enumerate().any(|(i, z)| i != m_p - 1 && (z - p).norm() <= scale) {
        return Err(OrfError::DuplicateNode(m_p - 1));
    }
    Ok(nodes)
}

/// Index order over `0..m` that starts with both ends and then fills the
/// interior along the dyadic points `1/2, 1/4, 3/4, 1/8, …`, skipping
/// indices that are already taken.
fn spread_index_order(m: usize) -> Vec<usize> {
    if m == 0 {
        return Vec::new();
    }
    let mut taken = vec![false; m];
    let mut order = Vec::with_capacity(m);
    let mut push = |i: usize, order: &mut Vec<usize>| {
        if !taken[i] {
            taken[i] = true;
            order.push(i);
        }
    };
    push(0, &mut order);
    push(m - 1, &mut order);
    let mut k = 1;
    while order.len() < m {
        let t = radical_inverse(k);
        push((t * (m - 1) as f64).round() as usize, &mut order);
        k += 1;
    }
    order
}

/// The classical Chebyshev points `cos((2k − 1)π/(2m))`, `k = 1..m`, in an
/// insertion order that bisects the index range.
pub fn chebyshev_nodes(m: usize) -> Vec<C64> {
    spread_index_order(m)
        .into_iter()
        .map(|i| C64::new(((2 * i + 1) as f64 * PI / (2 * m) as f64).cos(), 0.0))
        .collect()
}

/// Height of the thin ellipse used by the ellipse experiment.
pub const ELLIPSE_HEIGHT: f64 = 0.01;

/// Unit-circle nodes compressed vertically onto `x² + (y/height)² = 1`.
pub fn ellipse_nodes(m: usize, height: f64) -> Vec<C64> {
    unit_circle_angles(m).into_iter().map(|t| C64::new(t.cos(), height * t.sin())).collect()
}

/// `n` equidistant finite poles `radius·e^{i(2πk/n + phase)}`.
pub fn circle_poles(n: usize, radius: f64, phase_offset: f64) -> Vec<Pole> {
    (0..n)
        .map(|k| Pole::finite(C64::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + phase_offset)))
        .collect()
}
