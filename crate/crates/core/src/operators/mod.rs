//! Discrete differential calculus on a graph.
//!
//! * `d : H0 -> H1`, `(df)(i, k) = f_k - f_i` (coboundary).
//! * `δ₁, δ₂ : H1 -> H0` send `d_ik` to its terminal node `n_k` and initial
//!   node `n_i`; the boundary `δ` is `δ₁`.
//! * `d₁, d₂ : H0 -> H1` with `d₁ nᵢ = Σ_k d_ki`, `d₂ nᵢ = Σ_k d_ik`, so that
//!   `d = d₁ - d₂`, `δ₁ = d₁*`, `δ₂ = d₂*` and `d* = δ₁ - δ₂`.
//! * `A`, `V`, `Δ = A - V`, and the bond incidence matrix `B` with
//!   `B Bᵗ = V - A`.
//!
//! The edge basis `d_ik` is orthonormal, so the oriented bonds
//! `b_ik = d_ik - d_ki` have squared norm 2 and `d* = 2δ` on antisymmetric
//! edge vectors.

mod dirac;
mod identities;
mod vectors;

pub use dirac::{
    chirality_map, commutator_df, conjugation_j, dirac_operator, function_representation,
    right_action_map, Conjugate, DiracOperator,
};
pub use identities::{check_identities, IdentityCheck};
pub use vectors::{EdgeVector, NodeVector};

use crate::error::Result;
use crate::graph::Graph;
use crate::linear_map::{LinearMap, Space};
use vectors::check_len;

/// `df`, flagged antisymmetric.
pub fn apply_d(g: &Graph, f: &NodeVector) -> Result<EdgeVector> {
    check_len(g.node_count(), f.len())?;
    let fv = f.values();
    let values = g.directed_edges().map(|(i, k)| fv[k] - fv[i]).collect();
    Ok(EdgeVector::from_raw(values, true))
}

/// `δ₁ e`: each `e(i, k)` is added into node `k`.
pub fn apply_delta1(g: &Graph, e: &EdgeVector) -> Result<NodeVector> {
    check_len(g.directed_edge_count(), e.len())?;
    let mut out = vec![0.0; g.node_count()];
    for ((_, k), v) in g.directed_edges().zip(e.values()) {
        out[k] += v;
    }
    Ok(NodeVector::from_raw(out))
}

/// `δ₂ e`: each `e(i, k)` is added into node `i`.
pub fn apply_delta2(g: &Graph, e: &EdgeVector) -> Result<NodeVector> {
    check_len(g.directed_edge_count(), e.len())?;
    let mut out = vec![0.0; g.node_count()];
    for ((i, _), v) in g.directed_edges().zip(e.values()) {
        out[i] += v;
    }
    Ok(NodeVector::from_raw(out))
}

/// The boundary map `δ = δ₁`.
pub fn apply_boundary(g: &Graph, e: &EdgeVector) -> Result<NodeVector> {
    apply_delta1(g, e)
}

/// `d* e = δ₁ e - δ₂ e`.
pub fn apply_adjoint_d(g: &Graph, e: &EdgeVector) -> Result<NodeVector> {
    let a = apply_delta1(g, e)?;
    let b = apply_delta2(g, e)?;
    Ok(NodeVector::from_raw(
        a.values().iter().zip(b.values()).map(|(x, y)| x - y).collect(),
    ))
}

/// `(d₁ f)(i, k) = f_k`.
pub fn apply_d1(g: &Graph, f: &NodeVector) -> Result<EdgeVector> {
    check_len(g.node_count(), f.len())?;
    let fv = f.values();
    Ok(EdgeVector::from_raw(
        g.directed_edges().map(|(_, k)| fv[k]).collect(),
        false,
    ))
}

/// `(d₂ f)(i, k) = f_i`.
pub fn apply_d2(g: &Graph, f: &NodeVector) -> Result<EdgeVector> {
    check_len(g.node_count(), f.len())?;
    let fv = f.values();
    Ok(EdgeVector::from_raw(
        g.directed_edges().map(|(i, _)| fv[i]).collect(),
        false,
    ))
}

fn edge_node_map(g: &Graph, pick: impl Fn(usize, usize) -> Vec<(usize, f64)>) -> LinearMap {
    let triplets: Vec<_> = g
        .directed_edges()
        .enumerate()
        .flat_map(|(e, (i, k))| pick(i, k).into_iter().map(move |(node, v)| (e, node, v)))
        .collect();
    LinearMap::from_triplets(
        g.directed_edge_count(),
        g.node_count(),
        Space::H0,
        Space::H1,
        triplets,
    )
    .expect("indices come from the graph")
}

/// Matrix of `d` (`m x n`).
pub fn coboundary_map(g: &Graph) -> LinearMap {
    edge_node_map(g, |i, k| vec![(k, 1.0), (i, -1.0)])
}

/// Matrix of `d₁`.
pub fn d1_map(g: &Graph) -> LinearMap {
    edge_node_map(g, |_, k| vec![(k, 1.0)])
}

/// Matrix of `d₂`.
pub fn d2_map(g: &Graph) -> LinearMap {
    edge_node_map(g, |i, _| vec![(i, 1.0)])
}

/// Matrix of `δ₁`, the transpose of `d₁`.
pub fn delta1_map(g: &Graph) -> LinearMap {
    d1_map(g).adjoint()
}

/// Matrix of `δ₂`, the transpose of `d₂`.
pub fn delta2_map(g: &Graph) -> LinearMap {
    d2_map(g).adjoint()
}

pub fn adjacency_map(g: &Graph) -> LinearMap {
    LinearMap::from_triplets(
        g.node_count(),
        g.node_count(),
        Space::H0,
        Space::H0,
        g.directed_edges().map(|(i, k)| (i, k, 1.0)),
    )
    .expect("indices come from the graph")
}

pub fn degree_map(g: &Graph) -> LinearMap {
    let degrees: Vec<f64> = g.degrees().into_iter().map(|v| v as f64).collect();
    LinearMap::diagonal(&degrees, Space::H0)
}

/// `Δ = A - V`; `-Δ` is positive semidefinite.
pub fn laplacian_map(g: &Graph) -> LinearMap {
    adjacency_map(g)
        .sub(&degree_map(g))
        .expect("same shape")
}

/// Choice of initial point for each undirected bond of the incidence matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Orientation {
    /// Bond `{i, k}` with `i < k` points from `i` to `k`.
    TowardLarger,
    TowardSmaller,
    /// One flag per bond in [`Graph::bonds`] order, `true` meaning toward
    /// the larger index.
    Custom(Vec<bool>),
}

/// Incidence matrix `B` (`n x bonds`): column `j` has `-1` at the initial
/// and `+1` at the terminal node of bond `j`.
pub fn incidence_map(g: &Graph, orientation: &Orientation) -> Result<LinearMap> {
    if let Orientation::Custom(flags) = orientation {
        check_len(g.bond_count(), flags.len())?;
    }
    let triplets: Vec<_> = g
        .bonds()
        .enumerate()
        .flat_map(|(j, (i, k))| {
            let toward_larger = match orientation {
                Orientation::TowardLarger => true,
                Orientation::TowardSmaller => false,
                Orientation::Custom(flags) => flags[j],
            };
            let (from, to) = if toward_larger { (i, k) } else { (k, i) };
            [(from, j, -1.0), (to, j, 1.0)]
        })
        .collect();
    LinearMap::from_triplets(g.node_count(), g.bond_count(), Space::Bonds, Space::H0, triplets)
}
