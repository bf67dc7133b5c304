#![allow(dead_code)]

use graph_dirac::graph::{
    build_binary_tree, build_complete, build_cycle, build_path, build_random, build_star, Graph,
};

pub fn triangle() -> Graph {
    build_cycle(3).unwrap()
}

pub fn square() -> Graph {
    build_cycle(4).unwrap()
}

/// K4 with the bond 2-3 removed.
pub fn k4_minus_edge() -> Graph {
    Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap()
}

/// A triangle with a pendant path, so that cycles and tree parts mix.
pub fn kite() -> Graph {
    Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5)]).unwrap()
}

/// Connected graphs with at most five nodes.
pub fn small_fixtures() -> Vec<(&'static str, Graph)> {
    vec![
        ("path2", build_path(2).unwrap()),
        ("path3", build_path(3).unwrap()),
        ("path4", build_path(4).unwrap()),
        ("path5", build_path(5).unwrap()),
        ("triangle", triangle()),
        ("square", square()),
        ("cycle5", build_cycle(5).unwrap()),
        ("star3", build_star(3).unwrap()),
        ("star4", build_star(4).unwrap()),
        ("k4", build_complete(4).unwrap()),
        ("k4-minus-edge", k4_minus_edge()),
    ]
}

/// Connected graphs with at most ten nodes.
pub fn fixtures() -> Vec<(String, Graph)> {
    let mut out: Vec<(String, Graph)> = small_fixtures()
        .into_iter()
        .map(|(name, g)| (name.to_string(), g))
        .collect();
    out.push(("path8".into(), build_path(8).unwrap()));
    out.push(("cycle6".into(), build_cycle(6).unwrap()));
    out.push(("cycle9".into(), build_cycle(9).unwrap()));
    out.push(("tree2".into(), build_binary_tree(2).unwrap()));
    out.push(("k6".into(), build_complete(6).unwrap()));
    out.push(("kite".into(), kite()));
    for (n, p, seed) in [(7, 0.4, 1), (8, 0.3, 2), (9, 0.35, 3), (10, 0.25, 4), (10, 0.5, 5)] {
        out.push((format!("random{n}-{seed}"), build_random(n, p, seed).unwrap()));
    }
    out
}

/// Disconnected graphs for the dimension counts.
pub fn disconnected_fixtures() -> Vec<(&'static str, Graph)> {
    vec![
        (
            "two-triangles",
            Graph::from_edges_allow_disconnected(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
                .unwrap(),
        ),
        (
            "path-and-isolated",
            Graph::from_edges_allow_disconnected(5, &[(0, 1), (1, 2)]).unwrap(),
        ),
        (
            "square-and-bond",
            Graph::from_edges_allow_disconnected(6, &[(0, 1), (1, 2), (2, 3), (3, 0), (4, 5)])
                .unwrap(),
        ),
    ]
}
