//! Lawson–Hanson nonnegative least squares, used to recover KKT multipliers.

use nalgebra::{DMatrix, DVector};

/// Minimizes `‖A x - b‖` over `x ≥ 0`.
pub(crate) fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let p = a.ncols();
    let mut x = DVector::zeros(p);
    let mut passive = vec![false; p];
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0)
        * b.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    let eps = 1e-14 * scale;
    for _outer in 0..3 * p + 10 {
        let w = a.transpose() * (b - a * &x);
        let candidate = (0..p)
            .filter(|&j| !passive[j])
            .max_by(|&i, &j| w[i].total_cmp(&w[j]));
        let Some(j) = candidate else { break };
        if w[j] <= eps {
            break;
        }
        passive[j] = true;
        for _inner in 0..3 * p + 10 {
            let s = solve_passive(a, b, &passive);
            if (0..p).filter(|&k| passive[k]).all(|k| s[k] > 0.0) {
                x = s;
                break;
            }
            let alpha = (0..p)
                .filter(|&k| passive[k] && s[k] <= 0.0)
                .map(|k| x[k] / (x[k] - s[k]))
                .fold(f64::INFINITY, f64::min);
            x += (s - &x) * alpha;
            for k in 0..p {
                if passive[k] && x[k] <= 1e-300 {
                    passive[k] = false;
                    x[k] = 0.0;
                }
            }
        }
    }
    x
}

fn solve_passive(a: &DMatrix<f64>, b: &DVector<f64>, passive: &[bool]) -> DVector<f64> {
    let cols: Vec<usize> = (0..passive.len()).filter(|&k| passive[k]).collect();
    let mut out = DVector::zeros(passive.len());
    if cols.is_empty() {
        return out;
    }
    let sub = a.select_columns(&cols);
    let svd = sub.svd(true, true);
    let sol = svd
        .solve(b, 1e-13)
        .unwrap_or_else(|_| DVector::zeros(cols.len()));
    for (pos, &k) in cols.iter().enumerate() {
        out[k] = sol[pos];
    }
    out
}
