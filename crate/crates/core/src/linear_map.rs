//! Sparse matrix representation for operators between the node space `H0`,
//! the directed-edge space `H1` and their sum `H = H0 ⊕ H1`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};

/// Which space a map acts on or lands in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Space {
    /// Functions on nodes.
    H0,
    /// Functions on directed edges.
    H1,
    /// `H0 ⊕ H1`, node block first.
    H,
    /// Functions on undirected bonds (columns of the incidence matrix).
    Bonds,
}

/// Sparse real matrix stored as row-major sorted `(row, col, value)`
/// triplets with no duplicate positions and no stored zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    rows: usize,
    cols: usize,
    domain: Space,
    codomain: Space,
    entries: Vec<(usize, usize, f64)>,
}

impl LinearMap {
    /// Builds a map from triplets. Repeated positions are summed and exact
    /// zeros dropped.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        domain: Space,
        codomain: Space,
        triplets: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let mut acc: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::InvalidArgument(format!(
                    "entry ({r}, {c}) outside {rows}x{cols} matrix"
                )));
            }
            if !v.is_finite() {
                return Err(Error::InvalidArgument(format!("non-finite entry at ({r}, {c})")));
            }
            *acc.entry((r, c)).or_insert(0.0) += v;
        }
        Ok(Self::from_map(rows, cols, domain, codomain, acc))
    }

    fn from_map(
        rows: usize,
        cols: usize,
        domain: Space,
        codomain: Space,
        acc: BTreeMap<(usize, usize), f64>,
    ) -> Self {
        let entries = acc
            .into_iter()
            .filter(|&(_, v)| v != 0.0)
            .map(|((r, c), v)| (r, c, v))
            .collect();
        LinearMap {
            rows,
            cols,
            domain,
            codomain,
            entries,
        }
    }

    pub fn zeros(rows: usize, cols: usize, domain: Space, codomain: Space) -> Self {
        LinearMap {
            rows,
            cols,
            domain,
            codomain,
            entries: Vec::new(),
        }
    }

    pub fn identity(n: usize, space: Space) -> Self {
        Self::diagonal(&vec![1.0; n], space)
    }

    pub fn diagonal(values: &[f64], space: Space) -> Self {
        let n = values.len();
        LinearMap {
            rows: n,
            cols: n,
            domain: space,
            codomain: space,
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != 0.0)
                .map(|(i, &v)| (i, i, v))
                .collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn domain(&self) -> Space {
        self.domain
    }

    pub fn codomain(&self) -> Space {
        self.codomain
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn triplets(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.entries
            .binary_search_by(|&(er, ec, _)| (er, ec).cmp(&(r, c)))
            .map(|pos| self.entries[pos].2)
            .unwrap_or(0.0)
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                actual: x.len(),
            });
        }
        let mut y = vec![0.0; self.rows];
        for &(r, c, v) in &self.entries {
            y[r] += v * x[c];
        }
        Ok(y)
    }

    /// `Mᵀ x` without forming the transpose.
    pub fn apply_transpose(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.rows {
            return Err(Error::LengthMismatch {
                expected: self.rows,
                actual: x.len(),
            });
        }
        let mut y = vec![0.0; self.cols];
        for &(r, c, v) in &self.entries {
            y[c] += v * x[r];
        }
        Ok(y)
    }

    /// Structural adjoint: transposed triplets, swapped space tags.
    pub fn adjoint(&self) -> Self {
        let mut entries: Vec<_> = self.entries.iter().map(|&(r, c, v)| (c, r, v)).collect();
        entries.sort_unstable_by_key(|a| (a.0, a.1));
        LinearMap {
            rows: self.cols,
            cols: self.rows,
            domain: self.codomain,
            codomain: self.domain,
            entries,
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> Result<Self> {
        if self.cols != other.rows || self.domain != other.codomain {
            return Err(Error::InvalidArgument(format!(
                "cannot compose {}x{} ({:?} -> {:?}) after {}x{} ({:?} -> {:?})",
                self.rows,
                self.cols,
                self.domain,
                self.codomain,
                other.rows,
                other.cols,
                other.domain,
                other.codomain
            )));
        }
        let other_rows = other.row_lists();
        let mut acc: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for &(r, k, v) in &self.entries {
            for &(c, w) in &other_rows[k] {
                *acc.entry((r, c)).or_insert(0.0) += v * w;
            }
        }
        Ok(Self::from_map(self.rows, other.cols, other.domain, self.codomain, acc))
    }

    fn row_lists(&self) -> Vec<Vec<(usize, f64)>> {
        let mut rows = vec![Vec::new(); self.rows];
        for &(r, c, v) in &self.entries {
            rows[r].push((c, v));
        }
        rows
    }

    /// `self + scale · other`.
    pub fn add_scaled(&self, other: &LinearMap, scale: f64) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut acc: BTreeMap<(usize, usize), f64> =
            self.entries.iter().map(|&(r, c, v)| ((r, c), v)).collect();
        for &(r, c, v) in &other.entries {
            *acc.entry((r, c)).or_insert(0.0) += scale * v;
        }
        Ok(Self::from_map(self.rows, self.cols, self.domain, self.codomain, acc))
    }

    pub fn sub(&self, other: &LinearMap) -> Result<Self> {
        self.add_scaled(other, -1.0)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let acc = self
            .entries
            .iter()
            .map(|&(r, c, v)| ((r, c), v * factor))
            .collect();
        Self::from_map(self.rows, self.cols, self.domain, self.codomain, acc)
    }

    fn check_same_shape(&self, other: &LinearMap) -> Result<()> {
        if (self.rows, self.cols, self.domain, self.codomain)
            != (other.rows, other.cols, other.domain, other.codomain)
        {
            return Err(Error::InvalidArgument("maps have different shapes".into()));
        }
        Ok(())
    }

    /// Largest entrywise absolute difference between two maps of equal shape.
    pub fn max_abs_diff(&self, other: &LinearMap) -> Result<f64> {
        Ok(self
            .sub(other)?
            .entries
            .iter()
            .map(|e| e.2.abs())
            .fold(0.0, f64::max))
    }

    /// Entries as integers, or `None` if any entry is not integral.
    pub fn integer_entries(&self) -> Option<BTreeMap<(usize, usize), i64>> {
        self.entries
            .iter()
            .map(|&(r, c, v)| {
                (v.fract() == 0.0 && v.abs() < (1u64 << 53) as f64).then_some(((r, c), v as i64))
            })
            .collect()
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.rows == self.cols
            && self
                .entries
                .iter()
                .all(|&(r, c, v)| (v - self.get(c, r)).abs() <= tol)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.rows, self.cols);
        for &(r, c, v) in &self.entries {
            m[(r, c)] = v;
        }
        m
    }

    /// Coordinate-format text: a `#` header with the shape, then one
    /// `row col value` line per stored entry, 0-based.
    pub fn to_coordinate_text(&self) -> String {
        let mut out = format!("# {} {} {}\n", self.rows, self.cols, self.entries.len());
        for &(r, c, v) in &self.entries {
            let _ = writeln!(out, "{r} {c} {v}");
        }
        out
    }

    /// Places `blocks` (row-major 2x2, `None` for zero) into one map on `H`.
    /// Block shapes are taken from the diagonal sizes `(n0, n1)`.
    pub fn block2x2(n0: usize, n1: usize, blocks: [[Option<&LinearMap>; 2]; 2]) -> Result<Self> {
        let sizes = [n0, n1];
        let offsets = [0, n0];
        let mut triplets = Vec::new();
        for (bi, row) in blocks.iter().enumerate() {
            for (bj, block) in row.iter().enumerate() {
                if let Some(b) = block {
                    if b.rows != sizes[bi] || b.cols != sizes[bj] {
                        return Err(Error::InvalidArgument(format!(
                            "block ({bi}, {bj}) is {}x{}, expected {}x{}",
                            b.rows, b.cols, sizes[bi], sizes[bj]
                        )));
                    }
                    triplets.extend(
                        b.entries
                            .iter()
                            .map(|&(r, c, v)| (r + offsets[bi], c + offsets[bj], v)),
                    );
                }
            }
        }
        Self::from_triplets(n0 + n1, n0 + n1, Space::H, Space::H, triplets)
    }

    /// The `(bi, bj)` block of a map on `H` split as `(n0, n1)`.
    pub fn block(&self, n0: usize, bi: usize, bj: usize) -> Result<Self> {
        if self.rows != self.cols || n0 > self.rows || bi > 1 || bj > 1 {
            return Err(Error::InvalidArgument("invalid block request".into()));
        }
        let n1 = self.rows - n0;
        let (r0, rn) = if bi == 0 { (0, n0) } else { (n0, n1) };
        let (c0, cn) = if bj == 0 { (0, n0) } else { (n0, n1) };
        let tag = |b| if b == 0 { Space::H0 } else { Space::H1 };
        Self::from_triplets(
            rn,
            cn,
            tag(bj),
            tag(bi),
            self.entries
                .iter()
                .filter(|&&(r, c, _)| r >= r0 && r < r0 + rn && c >= c0 && c < c0 + cn)
                .map(|&(r, c, v)| (r - r0, c - c0, v)),
        )
    }
}
