//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export takes plain numbers and strings and returns a JSON string, so
//! the page needs no generated TypeScript types. The `*_json` functions hold
//! the logic and are ordinary Rust, which keeps them testable natively.

use graph_dirac::connes::{connes_distance, distance_matrix, DEFAULT_TOL};
use graph_dirac::graph::{self, Graph, NodePair};
use graph_dirac::spectral::{truncation_norm_sequence, TruncationFamily};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest graph the page may request; keeps the dense solver responsive.
pub const MAX_NODES: usize = 40;
/// Largest truncation depth; the binary tree at depth 14 has 32767 nodes.
pub const MAX_DEPTH: usize = 14;

#[derive(Serialize)]
struct GraphView {
    nodes: usize,
    bonds: Vec<(usize, usize)>,
}

impl GraphView {
    fn of(g: &Graph) -> Self {
        GraphView {
            nodes: g.node_count(),
            bonds: g.bonds().collect(),
        }
    }
}

#[derive(Serialize)]
struct DistanceView {
    graph: GraphView,
    from: usize,
    to: usize,
    distance: f64,
    upper_bound: f64,
    combinatorial: usize,
    certified: bool,
    kkt_residual: f64,
    /// the optimal function, gauged to 0 at `from`
    f: Vec<f64>,
    /// `aᵢ = Σ_{k~i} (f_k - f_i)²`; nodes at 1 are the active constraints
    constraint: Vec<f64>,
}

#[derive(Serialize)]
struct MatrixView {
    graph: GraphView,
    values: Vec<Vec<f64>>,
    all_certified: bool,
}

#[derive(Serialize)]
struct TruncationView {
    family: TruncationFamily,
    depths: Vec<usize>,
    nodes: Vec<usize>,
    norms: Vec<f64>,
    monotone: bool,
}

/// `size` is the node count, except for `tree` where it is the depth and
/// `star` where it is the number of leaves.
fn build(family: &str, size: usize, seed: u64) -> Result<Graph, String> {
    let g = match family {
        "path" => graph::build_path(size),
        "cycle" => graph::build_cycle(size),
        "tree" => graph::build_binary_tree(size),
        "star" => graph::build_star(size),
        "complete" => graph::build_complete(size),
        "random" => graph::build_random(size, 0.3, seed),
        other => return Err(format!("unknown family '{other}'")),
    }
    .map_err(|e| e.to_string())?;
    if g.node_count() > MAX_NODES {
        return Err(format!("{} nodes; the demo is limited to {MAX_NODES}", g.node_count()));
    }
    Ok(g)
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

pub fn connes_profile_json(
    family: &str,
    size: usize,
    seed: u64,
    from: usize,
    to: usize,
) -> Result<String, String> {
    let g = build(family, size, seed)?;
    let pair = NodePair::new(&g, from, to).map_err(|e| e.to_string())?;
    let r = connes_distance(&g, pair, DEFAULT_TOL).map_err(|e| e.to_string())?;
    let combinatorial = graph::combinatorial_distance(&g, pair).map_err(|e| e.to_string())?;
    to_json(&DistanceView {
        graph: GraphView::of(&g),
        from,
        to,
        distance: r.distance,
        upper_bound: r.upper_bound,
        combinatorial,
        certified: r.certified,
        kkt_residual: r.kkt_residual,
        f: r.f,
        constraint: r.slacks,
    })
}

pub fn distance_matrix_json(family: &str, size: usize, seed: u64) -> Result<String, String> {
    let g = build(family, size, seed)?;
    let m = distance_matrix(&g, DEFAULT_TOL).map_err(|e| e.to_string())?;
    to_json(&MatrixView {
        graph: GraphView::of(&g),
        all_certified: m.all_certified(),
        values: m.values,
    })
}

pub fn truncation_json(family: &str, max_depth: usize) -> Result<String, String> {
    let (family, first) = match family {
        "tree" => (TruncationFamily::BinaryTree, 1),
        "path" => (TruncationFamily::Path, 1),
        "cycle" => (TruncationFamily::Cycle, 3),
        other => return Err(format!("unknown family '{other}'")),
    };
    if max_depth < first || max_depth > MAX_DEPTH {
        return Err(format!("depth must lie in {first}..={MAX_DEPTH}"));
    }
    let depths: Vec<usize> = (first..=max_depth).collect();
    let r = truncation_norm_sequence(family, &depths).map_err(|e| e.to_string())?;
    to_json(&TruncationView {
        family,
        depths: r.depths,
        nodes: r.sizes,
        norms: r.norms,
        monotone: r.monotone,
    })
}

#[wasm_bindgen]
pub fn connes_profile(
    family: &str,
    size: usize,
    seed: u32,
    from: usize,
    to: usize,
) -> Result<String, JsValue> {
    connes_profile_json(family, size, seed.into(), from, to).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn connes_matrix(family: &str, size: usize, seed: u32) -> Result<String, JsValue> {
    distance_matrix_json(family, size, seed.into()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn truncation_norms(family: &str, max_depth: usize) -> Result<String, JsValue> {
    truncation_json(family, max_depth).map_err(|e| JsValue::from_str(&e))
}
