//! Operator norms, the average-degree / maximal-degree bracket for `‖A‖`,
//! truncation sequences of infinite graph families and cycle-space counts.

use nalgebra::{DMatrix, SymmetricEigen, SVD};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{build_binary_tree, build_cycle, build_path, Graph};
use crate::linear_map::LinearMap;
use crate::operators::{adjacency_map, coboundary_map};

/// Matrices with at most this many rows are handled by a dense eigensolver.
pub const DENSE_CUTOFF: usize = 64;

/// Default relative residual tolerance for the power iteration.
pub const DEFAULT_NORM_TOL: f64 = 1e-12;

const MAX_POWER_ITERATIONS: usize = 200_000;

/// Upper limit on nodes for truncation sweeps.
pub const TRUNCATION_NODE_CAP: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NormMethod {
    Dense,
    PowerIteration,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    pub method: NormMethod,
}

/// Largest `|λ|` of a symmetric map.
///
/// Small matrices go through a full symmetric eigendecomposition. Larger ones
/// use power iteration on `M²` from a fixed start vector, stopping once the
/// eigen-residual `‖M²x - ρx‖` drops below `tol · ρ`; if the iteration cap is
/// reached the last estimate is returned with `converged = false`.
pub fn spectral_norm(m: &LinearMap, tol: f64) -> Result<NormEstimate> {
    if !m.is_symmetric(0.0) {
        return Err(Error::NotSymmetric);
    }
    if m.rows() <= DENSE_CUTOFF {
        let eig = SymmetricEigen::new(m.to_dense());
        let value = eig.eigenvalues.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        return Ok(NormEstimate {
            value,
            iterations: 0,
            converged: true,
            method: NormMethod::Dense,
        });
    }
    gram_power_iteration(m, tol)
}

/// `‖M‖ = sqrt(λ_max(MᵀM))` for an arbitrary (possibly rectangular or
/// antisymmetric) map, with the same dense/iterative split as
/// [`spectral_norm`].
pub fn operator_norm(m: &LinearMap, tol: f64) -> Result<NormEstimate> {
    if m.rows().max(m.cols()) <= DENSE_CUTOFF {
        let value = if m.rows() == 0 || m.cols() == 0 {
            0.0
        } else {
            m.to_dense().singular_values().max()
        };
        return Ok(NormEstimate {
            value,
            iterations: 0,
            converged: true,
            method: NormMethod::Dense,
        });
    }
    gram_power_iteration(m, tol)
}

fn start_vector(len: usize) -> Vec<f64> {
    // all-ones plus a fixed perturbation so no eigenvector is missed by symmetry
    let mut x: Vec<f64> = (0..len)
        .map(|i| 1.0 + 0.25 * ((i as f64 + 1.0) * 0.754_877_666).sin())
        .collect();
    normalize(&mut x);
    x
}

fn normalize(x: &mut [f64]) -> f64 {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
    norm
}

fn gram_power_iteration(m: &LinearMap, tol: f64) -> Result<NormEstimate> {
    gram_power_iteration_capped(m, tol, MAX_POWER_ITERATIONS)
}

fn gram_power_iteration_capped(m: &LinearMap, tol: f64, cap: usize) -> Result<NormEstimate> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let mut x = start_vector(m.cols());
    let mut rho = 0.0;
    for it in 1..=cap {
        let mut y = m.apply_transpose(&m.apply(&x)?)?;
        rho = x.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>();
        if rho <= 0.0 {
            // start vector in the kernel of a nonzero map cannot happen for the
            // perturbed start unless M = 0
            return Ok(NormEstimate {
                value: 0.0,
                iterations: it,
                converged: m.nnz() == 0,
                method: NormMethod::PowerIteration,
            });
        }
        let residual = y
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - rho * b).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual <= tol * rho {
            return Ok(NormEstimate {
                value: rho.sqrt(),
                iterations: it,
                converged: true,
                method: NormMethod::PowerIteration,
            });
        }
        normalize(&mut y);
        x = y;
    }
    Ok(NormEstimate {
        value: rho.sqrt(),
        iterations: cap,
        converged: false,
        method: NormMethod::PowerIteration,
    })
}

/// All eigenvalues of a symmetric map, ascending (dense).
pub fn symmetric_eigenvalues(m: &LinearMap) -> Result<Vec<f64>> {
    if !m.is_symmetric(0.0) {
        return Err(Error::NotSymmetric);
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(m.to_dense())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Numerical rank: singular values above `rel_tol · σ_max`.
pub fn matrix_rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = SVD::new(m.clone(), false, false).singular_values;
    let max = sv.max();
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * max).count()
}

/// `lower ≤ ‖A‖ ≤ upper` together with the computed norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormBounds {
    /// Best prefix Rayleigh quotient `2·bonds(G_j) / j` over the node labelling.
    pub lower: f64,
    /// Maximal node degree.
    pub upper: f64,
    pub estimate: f64,
    pub converged: bool,
}

impl NormBounds {
    pub fn is_consistent(&self, slack: f64) -> bool {
        self.lower <= self.estimate + slack && self.estimate <= self.upper + slack
    }
}

/// Prefix averages `2·bonds(G_j)/j` for the subgraphs `G_j` induced by the
/// first `j` labels, `j = 1..=n`.
pub fn prefix_average_degrees(g: &Graph) -> Vec<f64> {
    let mut inner_degree_sum = 0usize;
    (0..g.node_count())
        .map(|j| {
            let back = g.neighbors(j).iter().filter(|&&k| k < j).count();
            inner_degree_sum += 2 * back;
            inner_degree_sum as f64 / (j + 1) as f64
        })
        .collect()
}

pub fn adjacency_norm_bounds(g: &Graph) -> Result<NormBounds> {
    let lower = prefix_average_degrees(g).into_iter().fold(0.0, f64::max);
    let upper = g.max_degree() as f64;
    let est = spectral_norm(&adjacency_map(g), DEFAULT_NORM_TOL)?;
    Ok(NormBounds {
        lower,
        upper,
        estimate: est.value,
        converged: est.converged,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TruncationFamily {
    /// Full binary tree with levels `0..=depth`.
    BinaryTree,
    /// Path with `depth + 1` nodes.
    Path,
    /// Cycle with `depth` nodes.
    Cycle,
}

impl TruncationFamily {
    pub fn node_count(self, depth: usize) -> Option<usize> {
        match self {
            TruncationFamily::BinaryTree => {
                (depth < usize::BITS as usize - 1).then(|| (1usize << (depth + 1)) - 1)
            }
            TruncationFamily::Path => depth.checked_add(1),
            TruncationFamily::Cycle => Some(depth),
        }
    }

    pub fn build(self, depth: usize) -> Result<Graph> {
        match self {
            TruncationFamily::BinaryTree => build_binary_tree(depth),
            TruncationFamily::Path => build_path(depth + 1),
            TruncationFamily::Cycle => build_cycle(depth),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncationReport {
    pub family: TruncationFamily,
    pub depths: Vec<usize>,
    pub sizes: Vec<usize>,
    pub norms: Vec<f64>,
    pub converged: bool,
    /// Norms nondecreasing up to `MONOTONE_SLACK`.
    pub monotone: bool,
}

pub const MONOTONE_SLACK: f64 = 1e-10;

impl TruncationReport {
    /// `depth,nodes,norm` with a header row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("depth,nodes,norm\n");
        for ((d, n), v) in self.depths.iter().zip(&self.sizes).zip(&self.norms) {
            out.push_str(&format!("{d},{n},{v:.15}\n"));
        }
        out
    }
}

/// `‖A_n‖` along a family of growing truncations.
pub fn truncation_norm_sequence(
    family: TruncationFamily,
    depths: &[usize],
) -> Result<TruncationReport> {
    if depths.is_empty() {
        return Err(Error::InvalidArgument("no depths given".into()));
    }
    if depths.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("depths must be strictly increasing".into()));
    }
    let mut sizes = Vec::with_capacity(depths.len());
    for &d in depths {
        match family.node_count(d) {
            Some(n) if n <= TRUNCATION_NODE_CAP => sizes.push(n),
            _ => {
                return Err(Error::TooManyNodes {
                    nodes: family.node_count(d).unwrap_or(usize::MAX),
                    limit: TRUNCATION_NODE_CAP,
                })
            }
        }
    }
    let norm_at = |d: usize| -> Result<NormEstimate> {
        spectral_norm(&adjacency_map(&family.build(d)?), DEFAULT_NORM_TOL)
    };
    #[cfg(feature = "parallel")]
    let estimates: Vec<NormEstimate> = {
        use rayon::prelude::*;
        depths.par_iter().map(|&d| norm_at(d)).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let estimates: Vec<NormEstimate> = depths.iter().map(|&d| norm_at(d)).collect::<Result<_>>()?;

    let norms: Vec<f64> = estimates.iter().map(|e| e.value).collect();
    let monotone = norms.windows(2).all(|w| w[1] >= w[0] - MONOTONE_SLACK);
    Ok(TruncationReport {
        family,
        depths: depths.to_vec(),
        sizes,
        norms,
        converged: estimates.iter().all(|e| e.converged),
        monotone,
    })
}

/// Average degree of the binary tree truncated after `levels` levels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrefixAverage {
    pub levels: usize,
    /// `(3·Σ_{k=0}^N 2^k - 2·2^N - 1) / Σ_{k=1}^N 2^k`: the truncated degree
    /// sum divided by the node count without the root.
    pub displayed: f64,
    /// Truncated degree sum over the actual node count `2^{N+1} - 1`.
    pub truncated: f64,
}

/// Both averages tend to 2 as `levels` grows.
pub fn prefix_average_degree_limit(levels: usize) -> Result<PrefixAverage> {
    if levels < 1 {
        return Err(Error::InvalidArgument("levels must be at least 1".into()));
    }
    if levels > 60 {
        return Err(Error::InvalidSize(format!("{levels} levels overflow")));
    }
    let pow = |k: usize| (1u64 << k) as f64;
    let geometric_from = |start: usize| (start..=levels).map(pow).sum::<f64>();
    let degree_sum = 3.0 * geometric_from(0) - 2.0 * pow(levels) - 1.0;
    Ok(PrefixAverage {
        levels,
        displayed: degree_sum / geometric_from(1),
        truncated: degree_sum / geometric_from(0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CycleSpaceDims {
    /// Numerical rank of `d*` (SVD, relative tolerance 1e-9).
    pub rank_dstar: usize,
    /// `Σvᵢ - rank_dstar`.
    pub kernel_dim: usize,
    /// Components from graph traversal.
    pub components: usize,
    /// `rank_dstar == n - components`.
    pub consistent: bool,
}

pub const RANK_TOL: f64 = 1e-9;

pub fn cycle_space_dims(g: &Graph) -> CycleSpaceDims {
    let dstar = coboundary_map(g).adjoint().to_dense();
    let rank = matrix_rank(&dstar, RANK_TOL);
    let components = g.component_count();
    CycleSpaceDims {
        rank_dstar: rank,
        kernel_dim: g.directed_edge_count() - rank,
        components,
        consistent: rank + components == g.node_count(),
    }
}
