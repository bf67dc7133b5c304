//! Exact operator identities, evaluated in integer arithmetic.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{
    adjacency_map, chirality_map, coboundary_map, d1_map, d2_map, degree_map, delta1_map,
    delta2_map, dirac_operator, incidence_map, laplacian_map, Orientation,
};
use crate::graph::Graph;
use crate::linear_map::LinearMap;

type IntMatrix = BTreeMap<(usize, usize), i64>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn ints(m: &LinearMap) -> IntMatrix {
    m.integer_entries()
        .expect("graph operators have integer entries")
}

fn int_product(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let mut b_rows: BTreeMap<usize, Vec<(usize, i64)>> = BTreeMap::new();
    for (&(r, c), &v) in b {
        b_rows.entry(r).or_default().push((c, v));
    }
    let mut out = IntMatrix::new();
    for (&(r, k), &v) in a {
        if let Some(row) = b_rows.get(&k) {
            for &(c, w) in row {
                *out.entry((r, c)).or_insert(0) += v * w;
            }
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

fn int_transpose(a: &IntMatrix) -> IntMatrix {
    a.iter().map(|(&(r, c), &v)| ((c, r), v)).collect()
}

fn int_combine(a: &IntMatrix, b: &IntMatrix, scale_b: i64) -> IntMatrix {
    let mut out = a.clone();
    for (&pos, &v) in b {
        *out.entry(pos).or_insert(0) += scale_b * v;
    }
    out.retain(|_, v| *v != 0);
    out
}

fn int_scale(a: &IntMatrix, s: i64) -> IntMatrix {
    a.iter().map(|(&pos, &v)| (pos, s * v)).filter(|(_, v)| *v != 0).collect()
}

fn compare(name: &str, lhs: &IntMatrix, rhs: &IntMatrix) -> IdentityCheck {
    let diff = int_combine(lhs, rhs, -1);
    let passed = diff.is_empty();
    let detail = match diff.iter().next() {
        None => "exact".to_string(),
        Some((&(r, c), &v)) => format!("{} differing entries, first at ({r}, {c}) by {v}", diff.len()),
    };
    IdentityCheck {
        name: name.to_string(),
        passed,
        detail,
    }
}

/// Runs every structural identity of the discrete calculus on `g`.
pub fn check_identities(g: &Graph) -> Vec<IdentityCheck> {
    let d = ints(&coboundary_map(g));
    let d1 = ints(&d1_map(g));
    let d2 = ints(&d2_map(g));
    let a = ints(&adjacency_map(g));
    let v = ints(&degree_map(g));
    let lap = ints(&laplacian_map(g));
    let d_star = int_transpose(&d);

    let mut checks = vec![
        compare("d*d = -2Δ", &int_product(&d_star, &d), &int_scale(&lap, -2)),
        compare("d₁*d₁ = V", &int_product(&int_transpose(&d1), &d1), &v),
        compare("d₂*d₂ = V", &int_product(&int_transpose(&d2), &d2), &v),
        compare("d₁*d₂ = A", &int_product(&int_transpose(&d1), &d2), &a),
        compare("d = d₁ - d₂", &d, &int_combine(&d1, &d2, -1)),
        compare(
            "d* = δ₁ - δ₂",
            &d_star,
            &int_combine(&ints(&delta1_map(g)), &ints(&delta2_map(g)), -1),
        ),
        compare("Δ = A - V", &lap, &int_combine(&a, &v, -1)),
    ];
    for (label, orientation) in [
        ("B·Bᵗ = V - A", Orientation::TowardLarger),
        ("B·Bᵗ = V - A (flipped)", Orientation::TowardSmaller),
    ] {
        let b = ints(&incidence_map(g, &orientation).expect("orientation covers all bonds"));
        checks.push(compare(
            label,
            &int_product(&b, &int_transpose(&b)),
            &int_combine(&v, &a, -1),
        ));
    }

    let dirac = dirac_operator(g);
    let dm = ints(dirac.assembled());
    let chi = ints(&chirality_map(g));
    checks.push(compare("D symmetric", &dm, &int_transpose(&dm)));
    checks.push(compare(
        "χD + Dχ = 0",
        &int_combine(&int_product(&chi, &dm), &int_product(&dm, &chi), 1),
        &IntMatrix::new(),
    ));
    let n = g.node_count();
    let d_sq = int_product(&dm, &dm);
    let upper: IntMatrix = d_sq
        .iter()
        .filter(|(&(r, c), _)| r < n && c < n)
        .map(|(&p, &x)| (p, x))
        .collect();
    let cross: IntMatrix = d_sq
        .iter()
        .filter(|(&(r, c), _)| (r < n) != (c < n))
        .map(|(&p, &x)| (p, x))
        .collect();
    checks.push(compare("D² upper block = -2Δ", &upper, &int_scale(&lap, -2)));
    checks.push(compare("D² off-diagonal blocks = 0", &cross, &IntMatrix::new()));
    checks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_binary_tree, build_cycle, build_random};

    #[test]
    fn all_pass_on_standard_graphs() {
        for g in [
            build_cycle(5).unwrap(),
            build_binary_tree(3).unwrap(),
            build_random(14, 0.3, 21).unwrap(),
        ] {
            for c in check_identities(&g) {
                assert!(c.passed, "{}: {}", c.name, c.detail);
            }
        }
    }

    #[test]
    fn mismatch_is_reported() {
        let mut a = IntMatrix::new();
        a.insert((0, 1), 2);
        let c = compare("x", &a, &IntMatrix::new());
        assert!(!c.passed);
        assert!(c.detail.contains("(0, 1)"));
    }
}
