//! Discrete differential calculus on finite simple undirected graphs: the
//! coboundary `d`, boundary maps, graph Laplacian, Dirac operator on
//! `H0 ⊕ H1`, spectral-norm bounds, and the Connes distance computed as a
//! certified convex program.
//!
//! ```
//! use graph_dirac::graph::{build_cycle, NodePair};
//! use graph_dirac::connes::connes_distance;
//!
//! let square = build_cycle(4).unwrap();
//! let pair = NodePair::new(&square, 0, 2).unwrap();
//! let result = connes_distance(&square, pair, 1e-7).unwrap();
//! assert!(result.certified);
//! assert!((result.distance - 2f64.sqrt()).abs() < 1e-6);
//! ```

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod connes;
pub mod error;
pub mod graph;
pub mod io;
pub mod linear_map;
pub mod operators;
pub mod spectral;

pub use error::{Error, Result};
