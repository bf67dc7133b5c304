//! Closed forms on the one-dimensional lattice and on trees.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{combinatorial_distance, Graph, NodePair};

/// `dist_C(0, n)` on the undirected lattice: `√⌊n²/2⌋` for even `n`,
/// `√(⌊n²/2⌋ + 1)` for odd `n`, and 0 for `n = 0`.
pub fn lattice_closed_form(n: usize) -> f64 {
    let half_sq = (n * n / 2) as f64;
    if n.is_multiple_of(2) {
        half_sq.sqrt()
    } else {
        (half_sq + 1.0).sqrt()
    }
}

/// The odd-`n` value before simplification:
/// `((k + 1)·A + k) / √(1 + A²)` with `k = ⌊n/2⌋`, `A = 1 + 1/k`.
/// Defined for odd `n ≥ 3`.
pub fn lattice_odd_expression(n: usize) -> Option<f64> {
    if n < 3 || n.is_multiple_of(2) {
        return None;
    }
    let k = (n / 2) as f64;
    let a = 1.0 + 1.0 / k;
    Some(((k + 1.0) * a + k) / (1.0 + a * a).sqrt())
}

/// Step sizes `hᵢ = f(i) - f(i - 1)` of a monotone function on `0..=n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatticeStep {
    pub h: Vec<f64>,
}

impl LatticeStep {
    pub fn total(&self) -> f64 {
        self.h.iter().sum()
    }

    /// `hᵢ ≥ 0`, `h₁² ≤ 1`, `h_n² ≤ 1` and `hᵢ² + hᵢ₊₁² ≤ 1`, up to `tol`.
    pub fn is_admissible(&self, tol: f64) -> bool {
        let h = &self.h;
        h.iter().all(|&x| x >= -tol)
            && h.first().is_none_or(|x| x * x <= 1.0 + tol)
            && h.last().is_none_or(|x| x * x <= 1.0 + tol)
            && h.windows(2).all(|w| w[0] * w[0] + w[1] * w[1] <= 1.0 + tol)
    }

    /// Node values `f(0) = 0, f(k) = h₁ + ... + h_k`.
    pub fn to_function(&self) -> Vec<f64> {
        let mut f = Vec::with_capacity(self.h.len() + 1);
        let mut acc = 0.0;
        f.push(acc);
        for &x in &self.h {
            acc += x;
            f.push(acc);
        }
        f
    }
}

/// Optimal steps: every consecutive pair saturates `hᵢ² + hᵢ₊₁² = 1`,
/// alternating `h₁ᵐᵃˣ` and `√(1 - (h₁ᵐᵃˣ)²)`.
pub fn lattice_profile(n: usize) -> LatticeStep {
    let (first, second) = match n {
        0 => return LatticeStep { h: Vec::new() },
        1 => (1.0, 0.0),
        _ if n.is_multiple_of(2) => (0.5f64.sqrt(), 0.5f64.sqrt()),
        _ => {
            let a = 1.0 + 1.0 / (n / 2) as f64;
            let norm = (1.0 + a * a).sqrt();
            (a / norm, 1.0 / norm)
        }
    };
    LatticeStep {
        h: (0..n).map(|i| if i % 2 == 0 { first } else { second }).collect(),
    }
}

/// On a tree the optimal function along the unique path extends by constants
/// off the path, so the distance is the lattice value at the path length.
pub fn tree_distance_closed_form(g: &Graph, pair: NodePair) -> Result<f64> {
    if !g.is_tree() {
        return Err(Error::WrongFamily("graph is not a tree".into()));
    }
    Ok(lattice_closed_form(combinatorial_distance(g, pair)?))
}
