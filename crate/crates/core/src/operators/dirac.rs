//! The Dirac operator on `H = H0 ⊕ H1` and the module structure of the
//! function algebra acting on it.

use num_complex::Complex64;

use super::{coboundary_map, NodeVector};
use crate::error::Result;
use crate::graph::Graph;
use crate::linear_map::{LinearMap, Space};

use super::vectors::check_len;

/// `D = [[0, d*], [d, 0]]` on `H0 ⊕ H1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiracOperator {
    node_count: usize,
    edge_count: usize,
    d_block: LinearMap,
    d_star_block: LinearMap,
    assembled: LinearMap,
}

impl DiracOperator {
    pub fn d_block(&self) -> &LinearMap {
        &self.d_block
    }

    pub fn d_star_block(&self) -> &LinearMap {
        &self.d_star_block
    }

    pub fn assembled(&self) -> &LinearMap {
        &self.assembled
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// `D²`, block diagonal with `d*d = -2Δ` on `H0` and `dd*` on `H1`.
    pub fn squared(&self) -> LinearMap {
        self.assembled
            .compose(&self.assembled)
            .expect("D is square on H")
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.assembled.apply(x)
    }
}

pub fn dirac_operator(g: &Graph) -> DiracOperator {
    let d_block = coboundary_map(g);
    let d_star_block = d_block.adjoint();
    let n = g.node_count();
    let m = g.directed_edge_count();
    let assembled = LinearMap::block2x2(n, m, [[None, Some(&d_star_block)], [Some(&d_block), None]])
        .expect("block shapes come from the graph");
    DiracOperator {
        node_count: n,
        edge_count: m,
        d_block,
        d_star_block,
        assembled,
    }
}

/// Grading `χ = diag(+1 on H0, -1 on H1)`.
pub fn chirality_map(g: &Graph) -> LinearMap {
    let mut diag = vec![1.0; g.node_count()];
    diag.extend(std::iter::repeat_n(-1.0, g.directed_edge_count()));
    LinearMap::diagonal(&diag, Space::H)
}

/// Entrywise complex conjugation.
pub trait Conjugate: Copy {
    fn conj(self) -> Self;
}

impl Conjugate for f64 {
    fn conj(self) -> Self {
        self
    }
}

impl Conjugate for Complex64 {
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
}

/// The involution `J`. On real vectors it is the identity.
pub fn conjugation_j<T: Conjugate>(x: &[T]) -> Vec<T> {
    x.iter().map(|v| v.conj()).collect()
}

/// Left action of `f` on `H`: `fᵢ` on node `i` and on every edge `(i, k)`.
pub fn function_representation(g: &Graph, f: &NodeVector) -> Result<LinearMap> {
    check_len(g.node_count(), f.len())?;
    let fv = f.values();
    let mut diag = fv.to_vec();
    diag.extend(g.directed_edges().map(|(i, _)| fv[i]));
    Ok(LinearMap::diagonal(&diag, Space::H))
}

/// Right action of `f` on `H1`: `d_ik · f = f_k d_ik`.
pub fn right_action_map(g: &Graph, f: &NodeVector) -> Result<LinearMap> {
    check_len(g.node_count(), f.len())?;
    let fv = f.values();
    let diag: Vec<f64> = g.directed_edges().map(|(_, k)| fv[k]).collect();
    Ok(LinearMap::diagonal(&diag, Space::H1))
}

/// `[D, f] = D·f - f·D`; its off-diagonal blocks are `[d, f]` and `[d*, f]`.
pub fn commutator_df(g: &Graph, f: &NodeVector) -> Result<LinearMap> {
    let dirac = dirac_operator(g);
    let rep = function_representation(g, f)?;
    let df = dirac.assembled.compose(&rep)?;
    let fd = rep.compose(&dirac.assembled)?;
    df.sub(&fd)
}
