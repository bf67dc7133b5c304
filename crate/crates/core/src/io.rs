//! Graph file formats.
//!
//! Edge list: one `i j` pair per line, whitespace separated, 0-based, `#`
//! starts a comment line. A comment of the form `# nodes N` fixes the node
//! count (otherwise it is one more than the largest index seen), which is how
//! isolated nodes survive a round trip.
//!
//! JSON: `{"nodes": n, "edges": [[i, j], ...]}`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Serialize, Deserialize)]
struct GraphJson {
    nodes: usize,
    edges: Vec<[usize; 2]>,
}

/// Parses either format (JSON if the first non-blank byte is `{`) and
/// requires a connected result.
pub fn parse_graph(bytes: &[u8]) -> Result<Graph> {
    let g = parse_graph_allow_disconnected(bytes)?;
    if !g.is_connected() {
        return Err(Error::Disconnected {
            components: g.component_count(),
        });
    }
    Ok(g)
}

pub fn parse_graph_allow_disconnected(bytes: &[u8]) -> Result<Graph> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse {
        line: 0,
        message: format!("not UTF-8: {e}"),
    })?;
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_edge_list(text)
    }
}

fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut declared_nodes = None;
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    let mut max_index = None::<usize>;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            let mut words = comment.split_whitespace();
            if words.next() == Some("nodes") {
                let n = words
                    .next()
                    .and_then(|w| w.parse::<usize>().ok())
                    .ok_or_else(|| parse_err(line, "malformed '# nodes' directive"))?;
                declared_nodes = Some(n);
            }
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(parse_err(line, "expected two node indices"));
        }
        let parse_index = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| parse_err(line, &format!("'{s}' is not a node index")))
        };
        let (i, k) = (parse_index(fields[0])?, parse_index(fields[1])?);
        push_edge(&mut edges, &mut seen, i, k, line)?;
        max_index = Some(max_index.map_or(i.max(k), |m: usize| m.max(i).max(k)));
    }
    let n = match (declared_nodes, max_index) {
        (Some(n), Some(m)) if m >= n => {
            return Err(parse_err(0, &format!("index {m} exceeds declared {n} nodes")))
        }
        (Some(n), _) => n,
        (None, Some(m)) => m + 1,
        (None, None) => return Err(parse_err(0, "no edges and no node count")),
    };
    Graph::from_edges_allow_disconnected(n, &edges)
}

fn parse_json(text: &str) -> Result<Graph> {
    let doc: GraphJson = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    let mut edges = Vec::with_capacity(doc.edges.len());
    let mut seen = HashSet::new();
    for (pos, &[i, k]) in doc.edges.iter().enumerate() {
        if i >= doc.nodes || k >= doc.nodes {
            return Err(Error::Parse {
                line: 0,
                message: format!("edge #{pos} ({i}, {k}) out of range for {} nodes", doc.nodes),
            });
        }
        push_edge(&mut edges, &mut seen, i, k, 0)
            .map_err(|e| match e {
                Error::Parse { message, .. } => Error::Parse {
                    line: 0,
                    message: format!("edge #{pos}: {message}"),
                },
                other => other,
            })?;
    }
    Graph::from_edges_allow_disconnected(doc.nodes, &edges)
}

fn push_edge(
    edges: &mut Vec<(usize, usize)>,
    seen: &mut HashSet<(usize, usize)>,
    i: usize,
    k: usize,
    line: usize,
) -> Result<()> {
    if i == k {
        return Err(parse_err(line, &format!("self-loop at node {i}")));
    }
    if !seen.insert((i.min(k), i.max(k))) {
        return Err(parse_err(line, &format!("duplicate bond {i} {k}")));
    }
    edges.push((i, k));
    Ok(())
}

fn parse_err(line: usize, message: &str) -> Error {
    Error::Parse {
        line,
        message: message.to_string(),
    }
}

/// Canonical edge list: node-count directive, then bonds `i < k` in order.
pub fn serialize_edge_list(g: &Graph) -> String {
    let mut out = format!("# nodes {}\n", g.node_count());
    for (i, k) in g.bonds() {
        out.push_str(&format!("{i} {k}\n"));
    }
    out
}

pub fn serialize_json(g: &Graph) -> String {
    let doc = GraphJson {
        nodes: g.node_count(),
        edges: g.bonds().map(|(i, k)| [i, k]).collect(),
    };
    serde_json::to_string(&doc).expect("graph JSON is always serializable")
}
