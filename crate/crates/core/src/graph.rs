//! Finite simple undirected graphs with a canonical node and directed-edge
//! labelling.
//!
//! Nodes are `0..n`. Every undirected bond `{i, k}` contributes the two
//! directed edges `(i, k)` and `(k, i)`. Directed edges are numbered node by
//! node in ascending order of the initial node, and within one node in
//! ascending order of the terminal node, so that the index of `(i, k)` is
//! `offset[i] + position of k in adjacency[i]`. All operator matrices in this
//! crate use that layout.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Largest binary-tree depth accepted by [`build_binary_tree`].
pub const MAX_TREE_DEPTH: usize = 24;

/// Retry cap for [`build_random`].
pub const RANDOM_RETRY_CAP: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    offsets: Vec<usize>,
    components: usize,
}

impl Graph {
    /// Builds a connected graph from undirected bonds.
    ///
    /// Self-loops, out-of-range indices and repeated bonds (in either
    /// orientation) are rejected, as is a disconnected result.
    pub fn from_edges(node_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let g = Self::from_edges_allow_disconnected(node_count, edges)?;
        if !g.is_connected() {
            return Err(Error::Disconnected {
                components: g.components,
            });
        }
        Ok(g)
    }

    /// Same validation as [`Graph::from_edges`] but keeps disconnected graphs.
    /// Only the cycle-space dimension counts are meaningful on such graphs.
    pub fn from_edges_allow_disconnected(
        node_count: usize,
        edges: &[(usize, usize)],
    ) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::InvalidSize("a graph needs at least one node".into()));
        }
        let mut adjacency = vec![Vec::new(); node_count];
        for &(i, k) in edges {
            if i >= node_count || k >= node_count {
                return Err(Error::InvalidGraph(format!(
                    "bond ({i}, {k}) out of range for {node_count} nodes"
                )));
            }
            if i == k {
                return Err(Error::InvalidGraph(format!("self-loop at node {i}")));
            }
            adjacency[i].push(k);
            adjacency[k].push(i);
        }
        for (i, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate bond between {i} and {}",
                    w[0]
                )));
            }
        }
        Ok(Self::from_sorted_adjacency(adjacency))
    }

    fn from_sorted_adjacency(adjacency: Vec<Vec<usize>>) -> Self {
        let mut offsets = Vec::with_capacity(adjacency.len() + 1);
        let mut acc = 0;
        offsets.push(0);
        for list in &adjacency {
            acc += list.len();
            offsets.push(acc);
        }
        let components = count_components(&adjacency);
        Graph {
            adjacency,
            offsets,
            components,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    /// Number of directed edges, `m = Σ vᵢ`.
    pub fn directed_edge_count(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    /// Number of undirected bonds, `m / 2`.
    pub fn bond_count(&self) -> usize {
        self.directed_edge_count() / 2
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_bond(&self, i: usize, k: usize) -> bool {
        i < self.node_count() && self.adjacency[i].binary_search(&k).is_ok()
    }

    pub fn component_count(&self) -> usize {
        self.components
    }

    pub fn is_connected(&self) -> bool {
        self.components == 1
    }

    /// Connected and acyclic.
    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.bond_count() + 1 == self.node_count()
    }

    /// Index of the directed edge `(i, k)`, if `i ~ k`.
    pub fn edge_index(&self, i: usize, k: usize) -> Option<usize> {
        if i >= self.node_count() {
            return None;
        }
        self.adjacency[i]
            .binary_search(&k)
            .ok()
            .map(|pos| self.offsets[i] + pos)
    }

    /// Directed edge `(initial, terminal)` with index `e`.
    pub fn edge(&self, e: usize) -> (usize, usize) {
        // first node whose range contains e
        let i = self.offsets.partition_point(|&o| o <= e) - 1;
        (i, self.adjacency[i][e - self.offsets[i]])
    }

    /// Index of the reversed edge `(k, i)`.
    pub fn reverse_edge(&self, e: usize) -> usize {
        let (i, k) = self.edge(e);
        self.edge_index(k, i).expect("adjacency is symmetric")
    }

    /// All directed edges `(i, k)` in index order.
    pub fn directed_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, list)| list.iter().map(move |&k| (i, k)))
    }

    /// Undirected bonds `(i, k)` with `i < k`, ordered by `i` then `k`.
    pub fn bonds(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.directed_edges().filter(|&(i, k)| i < k)
    }

    /// Re-checks every structural invariant. Builders and parsers only ever
    /// produce graphs that pass; this exists for tests and for callers that
    /// want an explicit assertion.
    pub fn validate(&self) -> Result<()> {
        let n = self.node_count();
        for (i, list) in self.adjacency.iter().enumerate() {
            for (pos, &k) in list.iter().enumerate() {
                if k >= n {
                    return Err(Error::InvalidGraph(format!("neighbor {k} out of range")));
                }
                if k == i {
                    return Err(Error::InvalidGraph(format!("self-loop at node {i}")));
                }
                if pos > 0 && list[pos - 1] >= k {
                    return Err(Error::InvalidGraph(format!(
                        "adjacency of node {i} not strictly sorted"
                    )));
                }
                if self.adjacency[k].binary_search(&i).is_err() {
                    return Err(Error::InvalidGraph(format!("bond ({i}, {k}) not symmetric")));
                }
            }
        }
        let degree_sum: usize = self.adjacency.iter().map(Vec::len).sum();
        if degree_sum != self.directed_edge_count() || !degree_sum.is_multiple_of(2) {
            return Err(Error::InvalidGraph("edge count mismatch".into()));
        }
        if count_components(&self.adjacency) != self.components {
            return Err(Error::InvalidGraph("stale component count".into()));
        }
        Ok(())
    }

    /// Breadth-first distances from `source`; `None` for unreachable nodes.
    pub fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.node_count()];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in &self.adjacency[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// One shortest path from `pair.a` to `pair.b`, endpoints included.
    pub fn shortest_path(&self, pair: NodePair) -> Result<Vec<usize>> {
        let (a, b) = (pair.a, pair.b);
        let mut parent = vec![usize::MAX; self.node_count()];
        let mut queue = VecDeque::new();
        parent[a] = a;
        queue.push_back(a);
        while let Some(u) = queue.pop_front() {
            if u == b {
                break;
            }
            for &w in &self.adjacency[u] {
                if parent[w] == usize::MAX {
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        if parent[b] == usize::MAX {
            return Err(Error::NoPath { from: a, to: b });
        }
        let mut path = vec![b];
        let mut cur = b;
        while cur != a {
            cur = parent[cur];
            path.push(cur);
        }
        path.reverse();
        Ok(path)
    }
}

fn count_components(adjacency: &[Vec<usize>]) -> usize {
    let n = adjacency.len();
    let mut seen = vec![false; n];
    let mut components = 0;
    let mut stack = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        components += 1;
        seen[start] = true;
        stack.push(start);
        while let Some(u) = stack.pop() {
            for &w in &adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    components
}

/// An ordered pair of node indices, validated against a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NodePair {
    pub a: usize,
    pub b: usize,
}

impl NodePair {
    pub fn new(g: &Graph, a: usize, b: usize) -> Result<Self> {
        let n = g.node_count();
        if a >= n || b >= n {
            return Err(Error::InvalidArgument(format!(
                "node pair ({a}, {b}) out of range for {n} nodes"
            )));
        }
        Ok(NodePair { a, b })
    }

    pub fn reversed(self) -> Self {
        NodePair {
            a: self.b,
            b: self.a,
        }
    }
}

/// Path `0 - 1 - ... - (n-1)`.
pub fn build_path(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidSize(format!("path needs n >= 2, got {n}")));
    }
    let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
    Graph::from_edges(n, &edges)
}

/// Cycle `0 - 1 - ... - (n-1) - 0`.
pub fn build_cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidSize(format!("cycle needs n >= 3, got {n}")));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges)
}

/// Full rooted binary tree with levels `0..=depth`, labelled level by level
/// (node `j` has children `2j + 1` and `2j + 2`).
pub fn build_binary_tree(depth: usize) -> Result<Graph> {
    if depth > MAX_TREE_DEPTH {
        return Err(Error::InvalidSize(format!(
            "binary tree depth {depth} exceeds {MAX_TREE_DEPTH}"
        )));
    }
    let n = (1usize << (depth + 1)) - 1;
    let edges: Vec<_> = (1..n).map(|c| ((c - 1) / 2, c)).collect();
    Graph::from_edges(n, &edges)
}

/// Complete graph `K_n`.
pub fn build_complete(n: usize) -> Result<Graph> {
    if n < 1 {
        return Err(Error::InvalidSize("complete graph needs n >= 1".into()));
    }
    let edges: Vec<_> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |k| (i, k)))
        .collect();
    Graph::from_edges(n, &edges)
}

/// Star `K_{1,leaves}` with center 0.
pub fn build_star(leaves: usize) -> Result<Graph> {
    if leaves < 1 {
        return Err(Error::InvalidSize("star needs at least one leaf".into()));
    }
    let edges: Vec<_> = (1..=leaves).map(|k| (0, k)).collect();
    Graph::from_edges(leaves + 1, &edges)
}

/// Erdős–Rényi draw `G(n, p)` conditioned on connectedness.
///
/// Attempt `t` uses ChaCha stream `t` of the generator seeded with `seed`,
/// so the output depends only on `(n, p, seed)`.
pub fn build_random(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n < 1 {
        return Err(Error::InvalidSize("random graph needs n >= 1".into()));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidArgument(format!("edge probability {p} not in (0, 1]")));
    }
    for attempt in 0..RANDOM_RETRY_CAP {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(attempt as u64);
        let mut edges = Vec::new();
        for i in 0..n {
            for k in i + 1..n {
                if rng.gen::<f64>() < p {
                    edges.push((i, k));
                }
            }
        }
        let g = Graph::from_edges_allow_disconnected(n, &edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::GenerationFailed {
        attempts: RANDOM_RETRY_CAP,
    })
}

/// Length of a shortest edge sequence between the two nodes.
pub fn combinatorial_distance(g: &Graph, pair: NodePair) -> Result<usize> {
    g.bfs_distances(pair.a)[pair.b].ok_or(Error::NoPath {
        from: pair.a,
        to: pair.b,
    })
}

/// Subgraph spanned by `nodes` with every bond of `g` between them.
///
/// Returns the subgraph together with the map from new to old node indices
/// (ascending). The result may be disconnected.
pub fn induced_subgraph(g: &Graph, nodes: &[usize]) -> Result<(Graph, Vec<usize>)> {
    if nodes.is_empty() {
        return Err(Error::InvalidArgument("empty node set".into()));
    }
    let mut keep: Vec<usize> = nodes.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if let Some(&bad) = keep.iter().find(|&&v| v >= g.node_count()) {
        return Err(Error::InvalidArgument(format!("node {bad} out of range")));
    }
    let mut new_index = vec![usize::MAX; g.node_count()];
    for (new, &old) in keep.iter().enumerate() {
        new_index[old] = new;
    }
    let edges: Vec<_> = g
        .bonds()
        .filter(|&(i, k)| new_index[i] != usize::MAX && new_index[k] != usize::MAX)
        .map(|(i, k)| (new_index[i], new_index[k]))
        .collect();
    let sub = Graph::from_edges_allow_disconnected(keep.len(), &edges)?;
    Ok((sub, keep))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_basics() {
        let g = build_path(2).unwrap();
        assert_eq!(g.bond_count(), 1);
        assert_eq!(g.degrees(), vec![1, 1]);
        let g = build_path(5).unwrap();
        assert_eq!(g.bond_count(), 4);
        assert_eq!(g.directed_edge_count(), 8);
        assert_eq!(g.degrees(), vec![1, 2, 2, 2, 1]);
        let g = build_path(4).unwrap();
        assert_eq!(combinatorial_distance(&g, NodePair::new(&g, 0, 3).unwrap()).unwrap(), 3);
        assert!(matches!(build_path(1), Err(Error::InvalidSize(_))));
    }

    #[test]
    fn cycle_basics() {
        let g = build_cycle(4).unwrap();
        assert!(g.degrees().iter().all(|&v| v == 2));
        assert!(g.has_bond(3, 0));
        assert_eq!(combinatorial_distance(&g, NodePair::new(&g, 0, 2).unwrap()).unwrap(), 2);
        assert_eq!(build_cycle(3).unwrap().bond_count(), 3);
        assert!(build_cycle(2).is_err());
    }

    #[test]
    fn binary_tree_degrees() {
        let g = build_binary_tree(0).unwrap();
        assert_eq!((g.node_count(), g.bond_count()), (1, 0));
        let g = build_binary_tree(2).unwrap();
        assert_eq!((g.node_count(), g.bond_count()), (7, 6));
        let g = build_binary_tree(3).unwrap();
        assert_eq!(g.degree(0), 2);
        assert!((1..7).all(|i| g.degree(i) == 3));
        assert_eq!((7..15).filter(|&i| g.degree(i) == 1).count(), 8);
        assert!(g.is_tree());
        assert!(build_binary_tree(MAX_TREE_DEPTH + 1).is_err());
    }

    #[test]
    fn random_graphs() {
        let g = build_random(5, 1.0, 99).unwrap();
        assert_eq!(g, build_complete(5).unwrap());
        let a = build_random(10, 0.4, 7).unwrap();
        let b = build_random(10, 0.4, 7).unwrap();
        assert_eq!(a, b);
        let g = build_random(6, 0.5, 1).unwrap();
        g.validate().unwrap();
        assert!(g.is_connected());
        assert!(build_random(5, 0.0, 1).is_err());
        assert!(build_random(5, 1.5, 1).is_err());
        assert!(matches!(
            build_random(40, 1e-6, 3),
            Err(Error::GenerationFailed { .. })
        ));
    }

    #[test]
    fn edge_indexing_is_node_major() {
        let g = build_cycle(4).unwrap();
        let edges: Vec<_> = g.directed_edges().collect();
        assert_eq!(
            edges,
            vec![(0, 1), (0, 3), (1, 0), (1, 2), (2, 1), (2, 3), (3, 0), (3, 2)]
        );
        for (e, &(i, k)) in edges.iter().enumerate() {
            assert_eq!(g.edge(e), (i, k));
            assert_eq!(g.edge_index(i, k), Some(e));
            assert_eq!(g.edge(g.reverse_edge(e)), (k, i));
        }
        assert_eq!(g.edge_index(0, 2), None);
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(matches!(
            Graph::from_edges(2, &[(0, 0)]),
            Err(Error::InvalidGraph(_))
        ));
        assert!(Graph::from_edges(2, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(2, &[(0, 2)]).is_err());
        assert!(matches!(
            Graph::from_edges(4, &[(0, 1), (2, 3)]),
            Err(Error::Disconnected { components: 2 })
        ));
        let g = Graph::from_edges_allow_disconnected(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.component_count(), 2);
        let p = NodePair::new(&g, 0, 3).unwrap();
        assert!(matches!(combinatorial_distance(&g, p), Err(Error::NoPath { .. })));
        assert!(g.shortest_path(p).is_err());
    }

    #[test]
    fn distance_to_self_is_zero() {
        let g = build_random(8, 0.3, 5).unwrap();
        for a in 0..8 {
            assert_eq!(combinatorial_distance(&g, NodePair::new(&g, a, a).unwrap()).unwrap(), 0);
        }
    }

    #[test]
    fn induced_subgraphs() {
        let c4 = build_cycle(4).unwrap();
        let (sub, map) = induced_subgraph(&c4, &[0, 1, 2]).unwrap();
        assert_eq!(map, vec![0, 1, 2]);
        assert_eq!(sub, build_path(3).unwrap());

        let (sub, map) = induced_subgraph(&c4, &[3, 2, 1, 0]).unwrap();
        assert_eq!(map, vec![0, 1, 2, 3]);
        assert_eq!(sub, c4);

        let tree = build_binary_tree(2).unwrap();
        let (sub, _) = induced_subgraph(&tree, &[0, 1, 2]).unwrap();
        assert_eq!(sub.bond_count(), 2);
        assert_eq!(sub.degrees(), vec![2, 1, 1]);

        let (sub, _) = induced_subgraph(&c4, &[0, 2]).unwrap();
        assert!(!sub.is_connected());
        assert!(induced_subgraph(&c4, &[]).is_err());
    }

    #[test]
    fn shortest_path_endpoints() {
        let g = build_cycle(6).unwrap();
        let path = g.shortest_path(NodePair::new(&g, 0, 3).unwrap()).unwrap();
        assert_eq!(path.len(), 4);
        assert_eq!((path[0], path[3]), (0, 3));
        assert!(path.windows(2).all(|w| g.has_bond(w[0], w[1])));
    }
}
