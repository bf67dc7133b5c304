use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use graph_dirac::connes::{self, SolverOptions};
use graph_dirac::graph::{self, Graph, NodePair};
use graph_dirac::io;
use graph_dirac::operators::check_identities;
use graph_dirac::spectral::{adjacency_norm_bounds, truncation_norm_sequence, TruncationFamily};
use serde_json::json;

#[derive(Parser)]
#[command(name = "graph-dirac", version, about = "Dirac operators and Connes distances on graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph and write it as an edge list (or JSON for `.json` paths)
    Gen {
        #[arg(long, value_enum)]
        family: GenFamily,
        /// Node count (path, cycle, random)
        #[arg(long)]
        n: Option<usize>,
        /// Depth (tree)
        #[arg(long)]
        depth: Option<usize>,
        /// Bond probability (random)
        #[arg(long, default_value_t = 0.3)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the adjacency norm and its bounds as JSON
    Spectral {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Check the operator identities, one PASS/FAIL line each
    Check {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Connes distance between two nodes, as JSON
    Connes {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[arg(long, default_value_t = connes::DEFAULT_TOL)]
        tol: f64,
    },
    /// All-pairs Connes distances as CSV
    ConnesMatrix {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = connes::DEFAULT_TOL)]
        tol: f64,
    },
    /// Adjacency norms of growing truncations as CSV
    Truncation {
        #[arg(long, value_enum)]
        family: TruncFamily,
        #[arg(long)]
        max_depth: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenFamily {
    Path,
    Cycle,
    Tree,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum TruncFamily {
    Tree,
    Path,
    Cycle,
}

impl From<TruncFamily> for TruncationFamily {
    fn from(f: TruncFamily) -> Self {
        match f {
            TruncFamily::Tree => TruncationFamily::BinaryTree,
            TruncFamily::Path => TruncationFamily::Path,
            TruncFamily::Cycle => TruncationFamily::Cycle,
        }
    }
}

fn read_graph(path: &Path, require_connected: bool) -> Result<Graph> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let parsed = if require_connected {
        io::parse_graph(&bytes)
    } else {
        io::parse_graph_allow_disconnected(&bytes)
    };
    parsed.with_context(|| format!("parsing {}", path.display()))
}

/// Writes to stdout; a closed pipe (`... | head`) is not an error.
fn say(text: &str) -> Result<()> {
    match std::io::stdout().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

/// Writes `text` to `out` if given, otherwise to stdout.
fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => say(text),
    }
}

fn print_json(value: &serde_json::Value) -> Result<()> {
    say(&(serde_json::to_string_pretty(value)? + "\n"))
}

fn require(value: Option<usize>, flag: &str, family: &str) -> Result<usize> {
    value.with_context(|| format!("--{flag} is required for --family {family}"))
}

/// Runs one command; `Ok(false)` means it ran but something was not
/// certified or did not pass.
fn run(command: Command) -> Result<bool> {
    match command {
        Command::Gen {
            family,
            n,
            depth,
            p,
            seed,
            out,
        } => {
            let g = match family {
                GenFamily::Path => graph::build_path(require(n, "n", "path")?)?,
                GenFamily::Cycle => graph::build_cycle(require(n, "n", "cycle")?)?,
                GenFamily::Tree => graph::build_binary_tree(require(depth, "depth", "tree")?)?,
                GenFamily::Random => graph::build_random(require(n, "n", "random")?, p, seed)?,
            };
            let json_out = out
                .as_deref()
                .and_then(Path::extension)
                .is_some_and(|ext| ext.eq_ignore_ascii_case("json"));
            let text = if json_out {
                io::serialize_json(&g) + "\n"
            } else {
                io::serialize_edge_list(&g)
            };
            emit(&text, out.as_deref())?;
            eprintln!("{} nodes, {} bonds", g.node_count(), g.bond_count());
            Ok(true)
        }
        Command::Spectral { graph } => {
            let g = read_graph(&graph, false)?;
            let bounds = adjacency_norm_bounds(&g)?;
            print_json(&serde_json::to_value(bounds)?)?;
            let ok = bounds.converged && bounds.is_consistent(1e-8);
            if !ok {
                eprintln!("norm estimate did not converge or violates its bounds");
            }
            Ok(ok)
        }
        Command::Check { graph } => {
            let g = read_graph(&graph, false)?;
            let mut all = true;
            for check in check_identities(&g) {
                say(&format!("{}: {}\n", check.name, if check.passed { "PASS" } else { "FAIL" }))?;
                if !check.passed {
                    eprintln!("{}: {}", check.name, check.detail);
                    all = false;
                }
            }
            Ok(all)
        }
        Command::Connes {
            graph,
            from,
            to,
            tol,
        } => {
            let g = read_graph(&graph, true)?;
            let pair = NodePair::new(&g, from, to)?;
            let result = connes::connes_distance_with(&g, pair, &SolverOptions::with_tol(tol))?;
            print_json(&serde_json::to_value(&result)?)?;
            if !result.certified {
                eprintln!("KKT residual {:e} exceeds tolerance {tol:e}", result.kkt_residual);
            }
            Ok(result.certified)
        }
        Command::ConnesMatrix { graph, out, tol } => {
            let g = read_graph(&graph, true)?;
            let matrix = connes::distance_matrix(&g, tol)?;
            emit(&matrix.to_csv(), out.as_deref())?;
            let certified = matrix.all_certified();
            if out.is_some() {
                print_json(&json!({ "nodes": matrix.n, "all_certified": certified }))?;
            }
            if !certified {
                eprintln!("some pairs were not certified");
            }
            Ok(certified)
        }
        Command::Truncation {
            family,
            max_depth,
            out,
        } => {
            let family = TruncationFamily::from(family);
            // a cycle needs three nodes
            let first = if family == TruncationFamily::Cycle { 3 } else { 1 };
            if max_depth < first {
                bail!("--max-depth must be at least {first} for this family");
            }
            let depths: Vec<usize> = (first..=max_depth).collect();
            let report = truncation_norm_sequence(family, &depths)?;
            emit(&report.to_csv(), out.as_deref())?;
            if out.is_some() {
                print_json(&json!({
                    "family": report.family,
                    "depths": report.depths.len(),
                    "converged": report.converged,
                    "monotone": report.monotone,
                }))?;
            }
            if !report.converged {
                eprintln!("some norm estimates did not converge");
            }
            Ok(report.converged)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn argument_definitions_are_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn kebab_case_verbs_parse() {
        let cli = Cli::try_parse_from(["graph-dirac", "connes-matrix", "--graph", "g.txt"]).unwrap();
        assert!(matches!(cli.command, Command::ConnesMatrix { .. }));
        let cli = Cli::try_parse_from(["graph-dirac", "truncation", "--family", "tree", "--max-depth", "4"])
            .unwrap();
        assert!(matches!(cli.command, Command::Truncation { max_depth: 4, .. }));
        assert!(Cli::try_parse_from(["graph-dirac", "gen", "--family", "hypercube"]).is_err());
    }
}
