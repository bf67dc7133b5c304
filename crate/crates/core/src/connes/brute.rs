//! Grid-search oracle for the distance program on very small graphs.
//!
//! Works directly on the constraint `aᵢ ≤ 1` without any convexity or
//! derivative information: with `f_a = 0`, every other coordinate `f_v` is
//! enumerated on a grid over `[-d(a, v), d(a, v)]` (a feasible function has
//! jumps of at most 1), infeasible partial assignments are pruned as soon as
//! a node and all its neighbours are fixed, and the best feasible point seeds
//! a finer grid in the next round.

use crate::error::{Error, Result};
use crate::graph::{Graph, NodePair};

pub const BRUTE_FORCE_NODE_LIMIT: usize = 6;

/// Odd, so each window's center lies on its grid.
const POINTS_PER_AXIS: usize = 41;
/// Next window half-width in units of the previous step; with 41 points this
/// shrinks the step by a factor of 10 per round.
const WINDOW_STEPS: f64 = 2.0;
const MIN_REFINEMENTS: usize = 3;
const TIE_TOL: f64 = 1e-12;

struct Search<'a> {
    g: &'a Graph,
    target: usize,
    order: Vec<usize>,
    /// constraints fully determined once `order[depth]` is assigned
    checks: Vec<Vec<usize>>,
    center: Vec<f64>,
    step: Vec<f64>,
    f: Vec<f64>,
    best: f64,
    /// smallest `1 - aᵢ` at `best_f`, used to break ties
    best_slack: f64,
    best_f: Vec<f64>,
}

impl Search<'_> {
    fn constraint(&self, i: usize) -> f64 {
        self.g
            .neighbors(i)
            .iter()
            .map(|&k| (self.f[k] - self.f[i]).powi(2))
            .sum()
    }

    fn feasible_at(&self, i: usize) -> bool {
        self.constraint(i) <= 1.0
    }

    fn descend(&mut self, depth: usize) {
        if depth == self.order.len() {
            // Many grid points share the best value; keeping the most interior
            // one stops the next, narrower window from being centred on a
            // corner it cannot leave.
            let value = self.f[self.target];
            if value < self.best - TIE_TOL {
                return;
            }
            let slack = (0..self.g.node_count())
                .map(|i| 1.0 - self.constraint(i))
                .fold(f64::INFINITY, f64::min);
            if value > self.best + TIE_TOL || slack > self.best_slack {
                self.best = value;
                self.best_slack = slack;
                self.best_f.clone_from(&self.f);
            }
            return;
        }
        let v = self.order[depth];
        let half = (POINTS_PER_AXIS / 2) as f64;
        for j in 0..POINTS_PER_AXIS {
            self.f[v] = self.center[v] + (j as f64 - half) * self.step[v];
            if self.checks[depth].iter().all(|&i| self.feasible_at(i)) {
                self.descend(depth + 1);
            }
        }
    }
}

/// Best feasible `f_b - f_a` found by refined grid search.
///
/// The final grid step is at most `resolution / 10`; the error is then of
/// order `resolution` for the graphs this is meant for.
pub fn brute_force_distance(g: &Graph, pair: NodePair, resolution: f64) -> Result<f64> {
    let n = g.node_count();
    if n > BRUTE_FORCE_NODE_LIMIT {
        return Err(Error::TooManyNodes {
            nodes: n,
            limit: BRUTE_FORCE_NODE_LIMIT,
        });
    }
    if !(resolution > 0.0) {
        return Err(Error::InvalidArgument("resolution must be positive".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected {
            components: g.component_count(),
        });
    }
    if pair.a == pair.b {
        return Ok(0.0);
    }
    let hops = g.bfs_distances(pair.a);
    let order: Vec<usize> = (0..n).filter(|&v| v != pair.a).collect();
    let mut position = vec![None; n];
    for (d, &v) in order.iter().enumerate() {
        position[v] = Some(d);
    }
    let mut checks = vec![Vec::new(); order.len()];
    for i in 0..n {
        let last = std::iter::once(i)
            .chain(g.neighbors(i).iter().copied())
            .filter_map(|v| position[v])
            .max()
            .expect("connected graph with two or more nodes");
        checks[last].push(i);
    }
    let half = (POINTS_PER_AXIS / 2) as f64;
    let mut step: Vec<f64> = (0..n)
        .map(|v| hops[v].map_or(0.0, |h| h as f64) / half)
        .collect();
    let mut search = Search {
        g,
        target: pair.b,
        order,
        checks,
        center: vec![0.0; n],
        step: step.clone(),
        f: vec![0.0; n],
        best: f64::NEG_INFINITY,
        best_slack: f64::NEG_INFINITY,
        best_f: vec![0.0; n],
    };
    let mut rounds = 0;
    loop {
        search.descend(0);
        let max_step = step.iter().copied().fold(0.0, f64::max);
        if rounds >= MIN_REFINEMENTS && max_step <= resolution / 10.0 {
            break;
        }
        rounds += 1;
        for s in step.iter_mut() {
            *s *= WINDOW_STEPS / half;
        }
        search.center.clone_from(&search.best_f);
        search.step.clone_from(&step);
    }
    Ok(search.best)
}
