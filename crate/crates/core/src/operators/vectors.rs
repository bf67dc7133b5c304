use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A function on the nodes, one real value per node index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeVector {
    values: Vec<f64>,
}

impl NodeVector {
    pub fn new(g: &Graph, values: Vec<f64>) -> Result<Self> {
        check_len(g.node_count(), values.len())?;
        check_finite(&values)?;
        Ok(NodeVector { values })
    }

    pub fn zeros(g: &Graph) -> Self {
        NodeVector {
            values: vec![0.0; g.node_count()],
        }
    }

    pub fn constant(g: &Graph, c: f64) -> Self {
        NodeVector {
            values: vec![c; g.node_count()],
        }
    }

    /// Indicator `nᵢ` of node `i`.
    pub fn basis(g: &Graph, i: usize) -> Self {
        let mut values = vec![0.0; g.node_count()];
        values[i] = 1.0;
        NodeVector { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub(crate) fn from_raw(values: Vec<f64>) -> Self {
        NodeVector { values }
    }
}

/// A function on the directed edges, indexed by the graph's edge order.
///
/// `antisymmetric` records that the vector is known to lie in the subspace
/// `value(i, k) = -value(k, i)`; [`EdgeVector::is_antisymmetric`] tests the
/// property directly.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeVector {
    values: Vec<f64>,
    antisymmetric: bool,
}

impl EdgeVector {
    pub fn new(g: &Graph, values: Vec<f64>) -> Result<Self> {
        check_len(g.directed_edge_count(), values.len())?;
        check_finite(&values)?;
        Ok(EdgeVector {
            values,
            antisymmetric: false,
        })
    }

    /// Builds a vector and flags it antisymmetric after checking the property.
    pub fn new_antisymmetric(g: &Graph, values: Vec<f64>, tol: f64) -> Result<Self> {
        let mut e = Self::new(g, values)?;
        if !e.is_antisymmetric(g, tol) {
            return Err(Error::InvalidArgument("edge values are not antisymmetric".into()));
        }
        e.antisymmetric = true;
        Ok(e)
    }

    pub fn zeros(g: &Graph) -> Self {
        EdgeVector {
            values: vec![0.0; g.directed_edge_count()],
            antisymmetric: true,
        }
    }

    /// Basis vector `d_ik`.
    pub fn basis(g: &Graph, i: usize, k: usize) -> Result<Self> {
        let e = g
            .edge_index(i, k)
            .ok_or_else(|| Error::InvalidArgument(format!("no bond between {i} and {k}")))?;
        let mut values = vec![0.0; g.directed_edge_count()];
        values[e] = 1.0;
        Ok(EdgeVector {
            values,
            antisymmetric: false,
        })
    }

    /// Oriented bond `b_ik = d_ik - d_ki`; note `(b_ik | b_ik) = 2`.
    pub fn oriented_bond(g: &Graph, i: usize, k: usize) -> Result<Self> {
        let mut b = Self::basis(g, i, k)?;
        let back = g.edge_index(k, i).expect("adjacency is symmetric");
        b.values[back] = -1.0;
        b.antisymmetric = true;
        Ok(b)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn antisymmetric_flag(&self) -> bool {
        self.antisymmetric
    }

    pub fn is_antisymmetric(&self, g: &Graph, tol: f64) -> bool {
        self.values.len() == g.directed_edge_count()
            && (0..self.values.len())
                .all(|e| (self.values[e] + self.values[g.reverse_edge(e)]).abs() <= tol)
    }

    /// Value on the directed edge `(i, k)`.
    pub fn at(&self, g: &Graph, i: usize, k: usize) -> Option<f64> {
        g.edge_index(i, k).map(|e| self.values[e])
    }

    /// Componentwise sum; the flag survives only if both summands carry it.
    pub fn add(&self, other: &EdgeVector) -> Result<Self> {
        check_len(self.values.len(), other.values.len())?;
        Ok(EdgeVector {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
            antisymmetric: self.antisymmetric && other.antisymmetric,
        })
    }

    pub fn norm_squared(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    pub(crate) fn from_raw(values: Vec<f64>, antisymmetric: bool) -> Self {
        EdgeVector {
            values,
            antisymmetric,
        }
    }
}

pub(crate) fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::LengthMismatch { expected, actual });
    }
    Ok(())
}

fn check_finite(values: &[f64]) -> Result<()> {
    if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite value at index {pos}")));
    }
    Ok(())
}
