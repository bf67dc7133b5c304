use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{connes_distance_with, lattice_closed_form, SolverOptions};
use crate::error::{Error, Result};
use crate::graph::{combinatorial_distance, induced_subgraph, Graph, NodePair};

/// Agreement threshold used to call two distances equal.
pub const EQUALITY_TOL: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SubgraphRelation {
    /// Distance in the subgraph is smaller than in the full graph.
    Smaller,
    Equal,
    Larger,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubgraphComparison {
    /// Nodes of the induced subgraph, in the full graph's labelling.
    pub nodes: Vec<usize>,
    pub distance: f64,
    pub relation: SubgraphRelation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub from: usize,
    pub to: usize,
    pub distance: f64,
    pub certified: bool,
    pub combinatorial: usize,
    /// `dist_C ≤ d` (with `EQUALITY_TOL` slack).
    pub below_combinatorial: bool,
    pub min_path: Vec<usize>,
    /// Solver value on the subgraph spanned by `min_path`.
    pub min_path_distance: f64,
    /// Lattice closed form at the path length.
    pub min_path_closed_form: f64,
    /// `dist_C(G) ≤ dist_C(min. path)` (with `EQUALITY_TOL` slack).
    pub below_min_path: bool,
    pub equals_min_path: bool,
    pub is_tree: bool,
    pub subgraphs: Vec<SubgraphComparison>,
}

fn relation(sub: f64, full: f64) -> SubgraphRelation {
    if (sub - full).abs() <= EQUALITY_TOL {
        SubgraphRelation::Equal
    } else if sub < full {
        SubgraphRelation::Smaller
    } else {
        SubgraphRelation::Larger
    }
}

/// Grows a connected node set from `seed_nodes` by random frontier nodes.
fn random_connected_superset(g: &Graph, seed_nodes: &[usize], rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut inside = vec![false; g.node_count()];
    let mut nodes = seed_nodes.to_vec();
    for &v in seed_nodes {
        inside[v] = true;
    }
    let extra = rng.gen_range(0..=g.node_count() - nodes.len());
    for _ in 0..extra {
        let frontier: Vec<usize> = nodes
            .iter()
            .flat_map(|&v| g.neighbors(v).iter().copied())
            .filter(|&w| !inside[w])
            .collect();
        let Some(&next) = frontier.choose(rng) else { break };
        inside[next] = true;
        nodes.push(next);
    }
    nodes.sort_unstable();
    nodes
}

/// Compares `dist_C(pair)` on `g` with the combinatorial distance, with the
/// distance on a minimal path, and with `samples` random connected induced
/// subgraphs containing that path. Subgraph relations are recorded, not
/// asserted.
pub fn comparison_suite(
    g: &Graph,
    pair: NodePair,
    options: &SolverOptions,
    samples: usize,
    seed: u64,
) -> Result<ComparisonReport> {
    if pair.a == pair.b {
        return Err(Error::InvalidArgument("comparison needs two distinct nodes".into()));
    }
    let full = connes_distance_with(g, pair, options)?;
    let combinatorial = combinatorial_distance(g, pair)?;
    let path = g.shortest_path(pair)?;
    let (path_graph, map) = induced_subgraph(g, &path)?;
    let local = |v: usize| map.binary_search(&v).expect("node is in the subgraph");
    let path_pair = NodePair {
        a: local(pair.a),
        b: local(pair.b),
    };
    let path_result = connes_distance_with(&path_graph, path_pair, options)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut subgraphs = Vec::with_capacity(samples);
    for _ in 0..samples {
        let nodes = random_connected_superset(g, &path, &mut rng);
        let (sub, map) = induced_subgraph(g, &nodes)?;
        let local = |v: usize| map.binary_search(&v).expect("node is in the subgraph");
        let sub_pair = NodePair {
            a: local(pair.a),
            b: local(pair.b),
        };
        let d = connes_distance_with(&sub, sub_pair, options)?.distance;
        subgraphs.push(SubgraphComparison {
            nodes,
            distance: d,
            relation: relation(d, full.distance),
        });
    }

    Ok(ComparisonReport {
        from: pair.a,
        to: pair.b,
        distance: full.distance,
        certified: full.certified && path_result.certified,
        combinatorial,
        below_combinatorial: full.distance <= combinatorial as f64 + EQUALITY_TOL,
        min_path: path,
        min_path_distance: path_result.distance,
        min_path_closed_form: lattice_closed_form(combinatorial),
        below_min_path: full.distance <= path_result.distance + EQUALITY_TOL,
        equals_min_path: (full.distance - path_result.distance).abs() <= EQUALITY_TOL,
        is_tree: g.is_tree(),
        subgraphs,
    })
}
