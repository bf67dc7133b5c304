//! Log-barrier interior-point method for
//!
//! ```text
//! maximize  f_b - f_a
//! subject   aᵢ(f) = Σ_{k~i} (f_k - f_i)² ≤ 1   for every node i
//! ```
//!
//! with the gauge `f_a = 0`. Each constraint is a convex quadratic, so
//! `-log(1 - aᵢ)` is self-concordant and damped Newton steps on
//! `t·(-f_b) - Σ log(1 - aᵢ)` converge from any strictly feasible point
//! (`f ≡ 0` always is one). After the last barrier stage the multipliers are
//! re-fitted by nonnegative least squares on the nearly active constraints and
//! the KKT conditions are checked explicitly.

use nalgebra::{DMatrix, DVector};

use super::nnls::nnls;
use super::{ConnesResult, SolverOptions};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodePair};

const MAX_NEWTON_PER_STAGE: usize = 200;
/// A stage stops once `λ² ≤ NEWTON_DECREMENT_SQ_TOL · t`, which bounds the
/// objective gap of the stage by about `λ²/t`. Scaling with `t` matters:
/// rounding in the gradient grows with `t` and puts a floor under `λ²`.
const NEWTON_DECREMENT_SQ_TOL: f64 = 1e-14;
/// Constraints with slack below this are candidates for nonzero multipliers.
const ACTIVE_SLACK: f64 = 1e-6;
/// Active-set thresholds tried by the polishing step, narrowest first. A
/// constraint that is active with a zero multiplier only approaches the
/// boundary like `√μ` under the barrier, and on degenerate problems it can
/// stay further out than that.
const POLISH_SLACKS: [f64; 4] = [1e-4, 1e-3, 1e-2, 5e-2];
const POLISH_ITERATIONS: usize = 30;
const POLISH_PASSES: usize = 8;
/// KKT residual at which a polished point is taken without further passes.
const POLISH_ACCEPT: f64 = 1e-11;

pub(crate) fn constraint_values(g: &Graph, f: &[f64]) -> Vec<f64> {
    (0..g.node_count())
        .map(|i| {
            g.neighbors(i)
                .iter()
                .map(|&k| (f[k] - f[i]).powi(2))
                .sum()
        })
        .collect()
}

/// `∇aᵢ(f)` as a sparse list over `{i} ∪ N(i)`.
fn constraint_gradient(g: &Graph, f: &[f64], i: usize) -> Vec<(usize, f64)> {
    let mut grad = Vec::with_capacity(g.degree(i) + 1);
    let mut at_i = 0.0;
    for &k in g.neighbors(i) {
        let diff = 2.0 * (f[k] - f[i]);
        grad.push((k, diff));
        at_i -= diff;
    }
    grad.push((i, at_i));
    grad
}

struct Problem<'a> {
    g: &'a Graph,
    pair: NodePair,
    /// free coordinate -> node
    free: Vec<usize>,
    /// node -> free coordinate
    slot: Vec<Option<usize>>,
}

impl<'a> Problem<'a> {
    fn new(g: &'a Graph, pair: NodePair) -> Self {
        let free: Vec<usize> = (0..g.node_count()).filter(|&v| v != pair.a).collect();
        let mut slot = vec![None; g.node_count()];
        for (pos, &v) in free.iter().enumerate() {
            slot[v] = Some(pos);
        }
        Problem { g, pair, free, slot }
    }

    /// Gradient and Hessian of `t·(-f_b) - Σ log sᵢ` in free coordinates.
    fn newton_system(&self, f: &[f64], slacks: &[f64], t: f64) -> (DVector<f64>, DMatrix<f64>) {
        let dim = self.free.len();
        let mut grad = DVector::zeros(dim);
        let mut hess = DMatrix::zeros(dim, dim);
        if let Some(b) = self.slot[self.pair.b] {
            grad[b] -= t;
        }
        for i in 0..self.g.node_count() {
            let s = slacks[i];
            let gi: Vec<(usize, f64)> = constraint_gradient(self.g, f, i)
                .into_iter()
                .filter_map(|(v, x)| self.slot[v].map(|p| (p, x)))
                .collect();
            for &(p, x) in &gi {
                grad[p] += x / s;
                for &(q, y) in &gi {
                    hess[(p, q)] += x * y / (s * s);
                }
            }
            // Hessian of aᵢ: 2 Σ_k (e_k - e_i)(e_k - e_i)ᵀ
            let w = 2.0 / s;
            let pi = self.slot[i];
            for &k in self.g.neighbors(i) {
                let pk = self.slot[k];
                if let Some(pk) = pk {
                    hess[(pk, pk)] += w;
                }
                if let Some(pi) = pi {
                    hess[(pi, pi)] += w;
                }
                if let (Some(pi), Some(pk)) = (pi, pk) {
                    hess[(pi, pk)] -= w;
                    hess[(pk, pi)] -= w;
                }
            }
        }
        (grad, hess)
    }
}

fn min_slack(slacks: &[f64]) -> f64 {
    slacks.iter().copied().fold(f64::INFINITY, f64::min)
}

fn slacks_of(g: &Graph, f: &[f64]) -> Vec<f64> {
    constraint_values(g, f).into_iter().map(|a| 1.0 - a).collect()
}

/// Runs the barrier method from the strictly feasible `start` (already gauged).
pub(crate) fn solve(
    g: &Graph,
    pair: NodePair,
    options: &SolverOptions,
    start: Vec<f64>,
) -> Result<ConnesResult> {
    let problem = Problem::new(g, pair);
    let mut f = start;
    let mut slacks = slacks_of(g, &f);
    if min_slack(&slacks) <= 0.0 {
        return Err(Error::InvalidArgument("start point is not strictly feasible".into()));
    }
    let mut iterations = 0;
    let mut mu = options.initial_mu;
    let final_mu = options.final_mu();
    loop {
        let t = 1.0 / mu;
        for _ in 0..MAX_NEWTON_PER_STAGE {
            let (grad, hess) = problem.newton_system(&f, &slacks, t);
            let Some(chol) = hess.cholesky() else {
                return Err(Error::Numerical("barrier Hessian is not positive definite".into()));
            };
            let step = -chol.solve(&grad);
            let decrement_sq = -grad.dot(&step);
            if decrement_sq.max(0.0) <= NEWTON_DECREMENT_SQ_TOL * t.max(1.0) {
                break;
            }
            iterations += 1;
            let decrement = decrement_sq.sqrt();
            // damped Newton: full steps only inside the quadratic region
            let mut alpha = if decrement > 0.25 { 1.0 / (1.0 + decrement) } else { 1.0 };
            let mut trial = f.clone();
            let mut trial_slacks;
            loop {
                for (p, &v) in problem.free.iter().enumerate() {
                    trial[v] = f[v] + alpha * step[p];
                }
                trial_slacks = slacks_of(g, &trial);
                if min_slack(&trial_slacks) > 0.0 {
                    break;
                }
                alpha *= 0.5;
                if alpha < 1e-20 {
                    return Err(Error::Numerical("line search left the feasible set".into()));
                }
            }
            if trial == f {
                // the step is below floating-point resolution
                break;
            }
            f = trial;
            slacks = trial_slacks;
        }
        if mu <= final_mu {
            break;
        }
        mu = (mu * options.mu_factor).max(final_mu);
    }

    let barrier_multipliers: Vec<f64> = slacks.iter().map(|s| mu / s).collect();
    let (mut multipliers, mut kkt) = certify(g, pair, &f, &slacks, barrier_multipliers.clone());
    for threshold in POLISH_SLACKS {
        if kkt.residual <= options.tol * 1e-3 {
            break;
        }
        let Some(polished) = polish(&problem, &f, &slacks, &barrier_multipliers, threshold) else {
            continue;
        };
        let polished_slacks = slacks_of(g, &polished);
        let (m, k) = certify(g, pair, &polished, &polished_slacks, vec![0.0; g.node_count()]);
        let objective_drop = f[pair.b] - polished[pair.b];
        if k.residual < kkt.residual && objective_drop <= options.tol {
            f = polished;
            slacks = polished_slacks;
            multipliers = m;
            kkt = k;
        }
    }
    let values = constraint_values(g, &f);
    let max_constraint = values.iter().copied().fold(0.0, f64::max);
    let certified = kkt.residual <= options.tol && max_constraint <= 1.0 + options.tol;
    Ok(ConnesResult {
        distance: f[pair.b] - f[pair.a],
        upper_bound: best_dual_bound(g, pair, &barrier_multipliers, &multipliers),
        certified,
        kkt_residual: kkt.residual,
        stationarity: kkt.stationarity,
        complementarity: kkt.complementarity,
        iterations,
        f,
        slacks: values,
        multipliers,
    })
}

/// Newton's method on the KKT equations of the active set
///
/// ```text
/// c - Σ λᵢ ∇aᵢ(f) = 0,   aᵢ(f) = 1
/// ```
///
/// started from the barrier point. The linear systems are solved in the
/// least-squares sense because the active gradients may be dependent (on the
/// square all four constraints are active with three free coordinates).
/// Constraints the Newton point violates are added; if the point still fails
/// the KKT check, constraints with a negative multiplier are dropped. Either
/// way the solve is repeated. Returns the feasible point with the smallest
/// KKT residual, or `None` if no pass ends at a feasible point.
fn polish(
    problem: &Problem,
    f: &[f64],
    slacks: &[f64],
    barrier: &[f64],
    threshold: f64,
) -> Option<Vec<f64>> {
    let g = problem.g;
    let mut active: Vec<usize> = (0..g.node_count())
        .filter(|&i| slacks[i] <= threshold)
        .collect();
    // best feasible point seen so far, by KKT residual
    let mut best: Option<(f64, Vec<f64>)> = None;
    for _ in 0..POLISH_PASSES {
        if active.is_empty() {
            break;
        }
        let (x, lambda) = kkt_newton(problem, f, &active, barrier)?;
        // constraints left out of the active set that the Newton point breaks
        let values = constraint_values(g, &x);
        let violated: Vec<usize> = (0..g.node_count())
            .filter(|&i| values[i] > 1.0 + 1e-12 && !active.contains(&i))
            .collect();
        if !violated.is_empty() {
            active.extend(violated);
            active.sort_unstable();
            continue;
        }
        // Newton's multipliers are only determined up to the null space of
        // the active gradients, so judge the point by the NNLS refit first.
        let x_slacks: Vec<f64> = values.iter().map(|a| 1.0 - a).collect();
        let (_, kkt) = certify(g, problem.pair, &x, &x_slacks, vec![0.0; g.node_count()]);
        if kkt.residual <= POLISH_ACCEPT {
            return Some(x);
        }
        if best.as_ref().is_none_or(|(r, _)| kkt.residual < *r) {
            best = Some((kkt.residual, x.clone()));
        }
        let negative: Vec<usize> = active
            .iter()
            .zip(&lambda)
            .filter(|(_, &l)| l < -1e-9)
            .map(|(&i, _)| i)
            .collect();
        if negative.is_empty() {
            break;
        }
        active.retain(|i| !negative.contains(i));
    }
    best.map(|(_, x)| x)
}

fn kkt_newton(
    problem: &Problem,
    start: &[f64],
    active: &[usize],
    barrier: &[f64],
) -> Option<(Vec<f64>, Vec<f64>)> {
    let g = problem.g;
    let nf = problem.free.len();
    let m = active.len();
    let mut f = start.to_vec();
    let mut lambda: Vec<f64> = active.iter().map(|&i| barrier[i]).collect();
    for _ in 0..POLISH_ITERATIONS {
        let mut jac = DMatrix::zeros(nf + m, nf + m);
        let mut rhs = DVector::zeros(nf + m);
        if let Some(b) = problem.slot[problem.pair.b] {
            rhs[b] += 1.0;
        }
        for (col, &i) in active.iter().enumerate() {
            let l = lambda[col];
            for (v, x) in constraint_gradient(g, &f, i) {
                if let Some(p) = problem.slot[v] {
                    rhs[p] -= l * x;
                    jac[(p, nf + col)] = -x;
                    jac[(nf + col, p)] = x;
                }
            }
            let a: f64 = g.neighbors(i).iter().map(|&k| (f[k] - f[i]).powi(2)).sum();
            rhs[nf + col] = a - 1.0;
            // -λ · Hessian of aᵢ
            let w = 2.0 * l;
            let pi = problem.slot[i];
            for &k in g.neighbors(i) {
                let pk = problem.slot[k];
                if let Some(pk) = pk {
                    jac[(pk, pk)] -= w;
                }
                if let Some(pi) = pi {
                    jac[(pi, pi)] -= w;
                }
                if let (Some(pi), Some(pk)) = (pi, pk) {
                    jac[(pi, pk)] += w;
                    jac[(pk, pi)] += w;
                }
            }
        }
        let residual = rhs.amax();
        if residual <= 1e-14 {
            return Some((f, lambda));
        }
        // rhs holds F(z); solve J Δ = -F
        let svd = jac.svd(true, true);
        let cutoff = 1e-12 * svd.singular_values.max();
        let delta = svd.solve(&(-rhs), cutoff).ok()?;
        for (p, &v) in problem.free.iter().enumerate() {
            f[v] += delta[p];
        }
        for (col, l) in lambda.iter_mut().enumerate() {
            *l += delta[nf + col];
        }
        if !f.iter().all(|v| v.is_finite()) {
            return None;
        }
    }
    // accept a stalled iteration if it is still accurate to working precision
    Some((f, lambda))
}

struct Kkt {
    residual: f64,
    stationarity: f64,
    complementarity: f64,
}

fn stationarity(g: &Graph, pair: NodePair, f: &[f64], lambda: &[f64]) -> f64 {
    let mut r = vec![0.0; g.node_count()];
    r[pair.b] += 1.0;
    r[pair.a] -= 1.0;
    for (i, &l) in lambda.iter().enumerate() {
        if l != 0.0 {
            for (v, x) in constraint_gradient(g, f, i) {
                r[v] -= l * x;
            }
        }
    }
    r.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn kkt_of(g: &Graph, pair: NodePair, f: &[f64], slacks: &[f64], lambda: &[f64]) -> Kkt {
    let stationarity = stationarity(g, pair, f, lambda);
    let complementarity = lambda
        .iter()
        .zip(slacks)
        .map(|(l, s)| (l * s).abs())
        .fold(0.0, f64::max);
    let infeasibility = (-min_slack(slacks)).max(0.0);
    Kkt {
        residual: stationarity.max(complementarity).max(infeasibility),
        stationarity,
        complementarity,
    }
}

/// Picks the better of the barrier multipliers and an NNLS re-fit on the
/// nearly active constraints.
fn certify(
    g: &Graph,
    pair: NodePair,
    f: &[f64],
    slacks: &[f64],
    barrier: Vec<f64>,
) -> (Vec<f64>, Kkt) {
    let barrier_kkt = kkt_of(g, pair, f, slacks, &barrier);
    let active: Vec<usize> = (0..g.node_count())
        .filter(|&i| slacks[i] <= ACTIVE_SLACK)
        .collect();
    if active.is_empty() {
        return (barrier, barrier_kkt);
    }
    let n = g.node_count();
    let mut a = DMatrix::zeros(n, active.len());
    for (col, &i) in active.iter().enumerate() {
        for (v, x) in constraint_gradient(g, f, i) {
            a[(v, col)] = x;
        }
    }
    let mut c = DVector::zeros(n);
    c[pair.b] += 1.0;
    c[pair.a] -= 1.0;
    let fit = nnls(&a, &c);
    let mut refit = vec![0.0; n];
    for (col, &i) in active.iter().enumerate() {
        refit[i] = fit[col];
    }
    let refit_kkt = kkt_of(g, pair, f, slacks, &refit);
    if refit_kkt.residual < barrier_kkt.residual {
        (refit, refit_kkt)
    } else {
        (barrier, barrier_kkt)
    }
}

/// Any `λ ≥ 0` gives a valid bound, so take the better of the barrier
/// multipliers and the certified ones. The latter may vanish on whole regions
/// of the graph, which makes `M` singular; a tiny positive floor keeps it
/// invertible and moves the bound by about `n·floor`.
fn best_dual_bound(g: &Graph, pair: NodePair, barrier: &[f64], certified: &[f64]) -> f64 {
    let top = certified.iter().copied().fold(0.0, f64::max);
    let floor = 1e-12 * (1.0 + top);
    let lifted: Vec<f64> = certified.iter().map(|l| l.max(0.0) + floor).collect();
    dual_bound(g, pair, barrier).min(dual_bound(g, pair, &lifted))
}

/// Lagrangian dual value `Σλᵢ + ¼ cᵀ M⁺ c` with `M = Σ λᵢ Qᵢ`, where
/// `aᵢ(f) = fᵀQᵢf`. For strictly positive multipliers on a connected graph
/// `M` is a weighted Laplacian with kernel the constants, so the value is a
/// finite upper bound on the distance.
fn dual_bound(g: &Graph, pair: NodePair, lambda: &[f64]) -> f64 {
    let n = g.node_count();
    // weighted Laplacian with bond weight λ_i + λ_k
    let mut m = DMatrix::zeros(n, n);
    for (i, k) in g.bonds() {
        let w = lambda[i] + lambda[k];
        m[(i, i)] += w;
        m[(k, k)] += w;
        m[(i, k)] -= w;
        m[(k, i)] -= w;
    }
    // ground node a to remove the constant kernel
    let keep: Vec<usize> = (0..n).filter(|&v| v != pair.a).collect();
    let reduced = m.select_rows(&keep).select_columns(&keep);
    let mut c = DVector::zeros(keep.len());
    let Some(pos) = keep.iter().position(|&v| v == pair.b) else {
        return 0.0;
    };
    c[pos] = 1.0;
    match reduced.cholesky() {
        Some(chol) => lambda.iter().sum::<f64>() + 0.25 * c.dot(&chol.solve(&c)),
        None => f64::INFINITY,
    }
}
