//! The Connes distance on a graph.
//!
//! For the Dirac operator `D = [[0, d*], [d, 0]]` the commutator norm has the
//! closed form
//!
//! ```text
//! ‖[D, f]‖ = max_i ( Σ_{k~i} (f_k - f_i)² )^{1/2}
//! ```
//!
//! so `dist_C(a, b) = sup { |f_b - f_a| : ‖[D, f]‖ ≤ 1 }` is a convex program
//! with one quadratic constraint per node. It is solved with a log-barrier
//! method and every answer carries its KKT certificate. Closed forms for
//! paths and trees and a grid-search oracle sit alongside for checking.

mod barrier;
mod brute;
mod closed_form;
mod compare;
mod nnls;

pub use brute::{brute_force_distance, BRUTE_FORCE_NODE_LIMIT};
pub use closed_form::{
    lattice_closed_form, lattice_odd_expression, lattice_profile, tree_distance_closed_form,
    LatticeStep,
};
pub use compare::{comparison_suite, ComparisonReport, SubgraphComparison, SubgraphRelation};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodePair};
use crate::operators::NodeVector;

/// Per-node values `aᵢ = Σ_{k~i} (f_k - f_i)²`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ConstraintProfile {
    values: Vec<f64>,
}

impl ConstraintProfile {
    pub fn new(g: &Graph, f: &NodeVector) -> Result<Self> {
        if f.len() != g.node_count() {
            return Err(Error::LengthMismatch {
                expected: g.node_count(),
                actual: f.len(),
            });
        }
        Ok(ConstraintProfile {
            values: barrier::constraint_values(g, f.values()),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `max_i sqrt(aᵢ)`, which is `‖[D, f]‖`.
    pub fn sup_root(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max).sqrt()
    }
}

/// `‖[D, f]‖` from the node-wise formula.
pub fn commutator_norm(g: &Graph, f: &NodeVector) -> Result<f64> {
    Ok(ConstraintProfile::new(g, f)?.sup_root())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    /// KKT residual and feasibility tolerance for certification.
    pub tol: f64,
    pub initial_mu: f64,
    /// Barrier parameter shrink factor per stage.
    pub mu_factor: f64,
    /// Smallest barrier parameter; the effective floor is
    /// `min(min_mu, tol / 100)`.
    pub min_mu: f64,
}

pub const DEFAULT_TOL: f64 = 1e-7;

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: DEFAULT_TOL,
            initial_mu: 1.0,
            mu_factor: 0.1,
            min_mu: 1e-9,
        }
    }
}

impl SolverOptions {
    pub fn with_tol(tol: f64) -> Self {
        SolverOptions {
            tol,
            ..Self::default()
        }
    }

    pub(crate) fn final_mu(&self) -> f64 {
        self.min_mu.min(self.tol / 100.0)
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0)
            || !(self.initial_mu > 0.0)
            || !(self.mu_factor > 0.0 && self.mu_factor < 1.0)
            || !(self.min_mu > 0.0)
        {
            return Err(Error::InvalidArgument(format!("invalid solver options {self:?}")));
        }
        Ok(())
    }
}

/// Outcome of one distance solve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConnesResult {
    /// `f_b - f_a` at the returned feasible point (a lower bound).
    pub distance: f64,
    /// Lagrangian dual value for the barrier multipliers (an upper bound).
    pub upper_bound: f64,
    pub certified: bool,
    /// `max(stationarity, complementarity, infeasibility)`.
    pub kkt_residual: f64,
    pub stationarity: f64,
    pub complementarity: f64,
    /// Newton steps over all barrier stages.
    pub iterations: usize,
    /// Optimizer, gauged so that `f_a = 0`.
    pub f: Vec<f64>,
    /// Constraint values `aᵢ` at `f`.
    pub slacks: Vec<f64>,
    pub multipliers: Vec<f64>,
}

impl ConnesResult {
    fn trivial(g: &Graph) -> Self {
        let n = g.node_count();
        ConnesResult {
            distance: 0.0,
            upper_bound: 0.0,
            certified: true,
            kkt_residual: 0.0,
            stationarity: 0.0,
            complementarity: 0.0,
            iterations: 0,
            f: vec![0.0; n],
            slacks: vec![0.0; n],
            multipliers: vec![0.0; n],
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("result is always serializable")
    }
}

fn check_solvable(g: &Graph) -> Result<()> {
    if !g.is_connected() {
        return Err(Error::Disconnected {
            components: g.component_count(),
        });
    }
    Ok(())
}

/// `dist_C(pair.a, pair.b)` from the Slater point `f ≡ 0`.
pub fn connes_distance(g: &Graph, pair: NodePair, tol: f64) -> Result<ConnesResult> {
    connes_distance_with(g, pair, &SolverOptions::with_tol(tol))
}

pub fn connes_distance_with(
    g: &Graph,
    pair: NodePair,
    options: &SolverOptions,
) -> Result<ConnesResult> {
    options.validate()?;
    check_solvable(g)?;
    if pair.a == pair.b {
        return Ok(ConnesResult::trivial(g));
    }
    barrier::solve(g, pair, options, vec![0.0; g.node_count()])
}

/// Same as [`connes_distance_with`] but starting the barrier method from
/// `start`, which must satisfy every constraint strictly. The start is shifted
/// so that `f_a = 0`.
pub fn connes_distance_from(
    g: &Graph,
    pair: NodePair,
    options: &SolverOptions,
    start: &NodeVector,
) -> Result<ConnesResult> {
    options.validate()?;
    check_solvable(g)?;
    if start.len() != g.node_count() {
        return Err(Error::LengthMismatch {
            expected: g.node_count(),
            actual: start.len(),
        });
    }
    if pair.a == pair.b {
        return Ok(ConnesResult::trivial(g));
    }
    let shift = start.values()[pair.a];
    let gauged: Vec<f64> = start.values().iter().map(|v| v - shift).collect();
    barrier::solve(g, pair, options, gauged)
}

/// A random function scaled so that every `aᵢ ≤ 1/4`.
pub fn random_feasible_start(g: &Graph, seed: u64) -> NodeVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<f64> = (0..g.node_count()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let sup = barrier::constraint_values(g, &raw)
        .into_iter()
        .fold(0.0, f64::max);
    let scale = if sup > 0.0 { 0.5 / sup.sqrt() } else { 1.0 };
    NodeVector::new(g, raw.into_iter().map(|v| v * scale).collect())
        .expect("length matches the graph")
}

/// All-pairs distances.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceMatrix {
    pub n: usize,
    pub values: Vec<Vec<f64>>,
    pub certified: Vec<Vec<bool>>,
}

impl DistanceMatrix {
    pub fn all_certified(&self) -> bool {
        self.certified.iter().flatten().all(|&c| c)
    }

    /// Long format `from,to,distance,certified`, one row per ordered pair.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("from,to,distance,certified\n");
        for a in 0..self.n {
            for b in 0..self.n {
                out.push_str(&format!(
                    "{a},{b},{:.12},{}\n",
                    self.values[a][b], self.certified[a][b]
                ));
            }
        }
        out
    }
}

/// Solves every unordered pair once (`f ↦ -f` maps maximizers of one
/// orientation onto the other) and mirrors the result. A pair whose solve
/// fails or is not certified is flagged in `certified`.
pub fn distance_matrix(g: &Graph, tol: f64) -> Result<DistanceMatrix> {
    let options = SolverOptions::with_tol(tol);
    options.validate()?;
    check_solvable(g)?;
    let n = g.node_count();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    let solve = |&(a, b): &(usize, usize)| {
        let pair = NodePair { a, b };
        connes_distance_with(g, pair, &options)
            .map(|r| (r.distance, r.certified))
            .unwrap_or((f64::NAN, false))
    };
    #[cfg(feature = "parallel")]
    let solved: Vec<(f64, bool)> = {
        use rayon::prelude::*;
        pairs.par_iter().map(solve).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let solved: Vec<(f64, bool)> = pairs.iter().map(solve).collect();

    let mut values = vec![vec![0.0; n]; n];
    let mut certified = vec![vec![true; n]; n];
    for (&(a, b), &(d, ok)) in pairs.iter().zip(&solved) {
        values[a][b] = d;
        values[b][a] = d;
        certified[a][b] = ok;
        certified[b][a] = ok;
    }
    Ok(DistanceMatrix {
        n,
        values,
        certified,
    })
}

/// Confirms that dividing `f` by `c = ‖[D, f]‖` yields commutator norm 1
/// and divides every difference `f_k - f_i` by `c`.
pub fn scale_normalization_check(g: &Graph, f: &NodeVector) -> Result<bool> {
    let c = commutator_norm(g, f)?;
    if c == 0.0 {
        return Err(Error::Degenerate("f is constant, ‖[D, f]‖ = 0".into()));
    }
    let scaled = NodeVector::new(g, f.values().iter().map(|v| v / c).collect())?;
    let norm_ok = (commutator_norm(g, &scaled)? - 1.0).abs() <= 1e-12;
    let fv = f.values();
    let sv = scaled.values();
    let objective_ok = (0..fv.len()).all(|i| {
        (0..fv.len()).all(|k| {
            let expected = (fv[k] - fv[i]) / c;
            ((sv[k] - sv[i]) - expected).abs() <= 1e-12 * (1.0 + expected.abs())
        })
    });
    Ok(norm_ok && objective_ok)
}
